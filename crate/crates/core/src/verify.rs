//! Batteries of exact checks shared by the command runner and the tests.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certify::{certify_cylinder, digit_box};
use crate::crosscheck::{brute_force_defect, transport_error};
use crate::error::{Error, Result};
use crate::flows::{cocycle_and_rn, digit_weight, FlowPoint, FlowTime, Orbits, QuotientString};
use crate::numerics::{ratio, rpow, LogLinearForm, MultiplicativeRelations, Rational};
use crate::odometer::{
    adic_coding_check, block_projection, odometer_step, odometer_step_inverse, tower,
    AdicPrefix, BlockCoordinate, OdometerSpec,
};
use crate::product_spaces::{binomial, Block, Epsilon0, SequenceSpec};
use crate::residue::{
    class_sums, defect_bound, defect_from_graded, residue_split, ClassPair,
    GradedCoefficients, SparsePoly,
};

/// Outcome of one battery.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    /// Instances outside the domain of the check (for example a flow leaving
    /// the finite window); not counted as failures.
    pub skipped: u64,
    pub failures: Vec<String>,
}

impl CheckSummary {
    pub fn new(name: &str) -> Self {
        CheckSummary {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 20 {
                self.failures.push(detail());
            }
        }
    }
}

fn all_ls(max_range: usize, max_l: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for len in 1..=max_range {
        let tops = vec![max_l - 1; len];
        out.extend(digit_box(&tops).map(|v| v.iter().map(|x| x + 1).collect()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub ls: Vec<u32>,
    pub tuples: u64,
    pub failures: u64,
}

/// Residue-split identities and `D = A_same - A_mixed` against the expanded
/// conjugate-pair product, for every `lᵢ ≤ max_l` and range length
/// `≤ max_range`.
pub fn identity_grid(max_range: usize, max_l: u32) -> Result<(CheckSummary, Vec<IdentityRow>)> {
    let mut summary = CheckSummary::new("identities");
    let mut rows = Vec::new();
    for ls in all_ls(max_range, max_l) {
        let blocks: Vec<Block> = ls.iter().map(|l| Block::new(*l, Rational::one())).collect();
        let poly = SparsePoly::conjugate_pair_product(&blocks);
        let scale = Rational::from_integer(BigInt::from(4).pow(ls.iter().sum::<u32>()));
        let doubled: Vec<u32> = ls.iter().map(|l| 2 * l).collect();
        let mut row = IdentityRow {
            ls: ls.clone(),
            tuples: 0,
            failures: 0,
        };
        for p in digit_box(&doubled) {
            let table = class_sums(&ls, &p)?;
            let r = (p.iter().sum::<u32>() % 3) as u8;
            let (lhs, rhs) = residue_split(&table, r);
            let vandermonde: BigInt = ls.iter().zip(&p).map(|(l, q)| binomial(2 * l, *q)).product();
            let s = (2 * r) % 3;
            let d = table.get(s, s) - table.get((s + 1) % 3, (s + 2) % 3);
            let expanded = poly.coefficient(&p) * &scale;
            let ok = lhs == rhs
                && rhs == vandermonde
                && table.total() == vandermonde
                && table.is_symmetric()
                && Rational::from_integer(d) == expanded;
            row.tuples += 1;
            if !ok {
                row.failures += 1;
            }
            summary.record(ok, || format!("ls={ls:?} p={p:?}"));
        }
        rows.push(row);
    }
    Ok((summary, rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectCheckRow {
    pub ls: Vec<u32>,
    pub lambdas: Vec<String>,
    pub pair: String,
    pub value: Rational,
    pub bound: Rational,
    pub agrees: bool,
}

/// Graded-convolution defects against enumeration, and the product bound.
pub fn defect_grid(
    max_range: usize,
    max_l: u32,
    lambdas: &[Rational],
) -> Result<(CheckSummary, Vec<DefectCheckRow>)> {
    let mut summary = CheckSummary::new("defects");
    let mut rows = Vec::new();
    for ls in all_ls(max_range, max_l) {
        for shift in 0..lambdas.len() {
            let blocks: Vec<Block> = ls
                .iter()
                .enumerate()
                .map(|(i, l)| Block::new(*l, lambdas[(i + shift) % lambdas.len()].clone()))
                .collect();
            let graded = GradedCoefficients::for_range(&blocks);
            let bound = defect_bound(&blocks);
            for pair in ClassPair::ALL {
                let value = defect_from_graded(&graded, pair);
                let slow = brute_force_defect(&blocks, pair)?;
                let agrees = value == slow;
                let ok = agrees && value <= bound;
                summary.record(ok, || format!("ls={ls:?} shift={shift} {pair}"));
                rows.push(DefectCheckRow {
                    ls: ls.clone(),
                    lambdas: blocks.iter().map(|b| b.lambda.to_string()).collect(),
                    pair: pair.to_string(),
                    value,
                    bound: bound.clone(),
                    agrees,
                });
            }
        }
    }
    Ok((summary, rows))
}

/// Closed-form certificate errors against direct transport, for every
/// cylinder of depth `n ≤ max_n` and `1 ≤ m - n ≤ max_span`.
pub fn certificate_grid(
    spec: &SequenceSpec,
    max_n: usize,
    max_span: usize,
) -> Result<CheckSummary> {
    let mut summary = CheckSummary::new("certificates");
    for n in 0..=max_n {
        let tops: Vec<u32> = spec.range(0, n)?.iter().map(|b| 2 * b.l).collect();
        for span in 1..=max_span {
            let m = n + span;
            if m > spec.len() {
                continue;
            }
            for a in digit_box(&tops) {
                let cert = certify_cylinder(spec, &a, m)?;
                let direct = transport_error(spec, &a, m)?;
                summary.record(cert.error == direct && cert.pass, || {
                    format!("a={a:?} m={m}: {} vs {}", cert.error, direct)
                });
            }
        }
    }
    Ok(summary)
}

/// A random lacunary spec `λᵢ = (1/2)^{eᵢ}` with declared relations and
/// exponents large enough that distinct strings never tie.
pub fn random_lacunary_spec(rng: &mut impl Rng, depth: usize) -> Result<SequenceSpec> {
    let half = ratio(1, 2);
    let mut blocks = vec![Block::new(1, half.clone())];
    let mut relations = MultiplicativeRelations::none();
    let mut spread = 2u32;
    let mut l = 1;
    for i in 2..=depth {
        l = (l + rng.gen_range(0..=1)).min(2);
        let e = spread + 1 + rng.gen_range(0..3);
        spread += 2 * l * e;
        blocks.push(Block::new(l, rpow(&half, e as i64)));
        relations.declare(i as u32, half.clone(), e)?;
    }
    SequenceSpec::new(blocks, Epsilon0::log2(), relations)
}

fn exp_of(spec: &SequenceSpec, form: &LogLinearForm) -> Result<Rational> {
    let atoms = spec.relations().rewrite(form)?;
    Ok(atoms.iter().fold(Rational::one(), |acc, (base, c)| {
        let e: i64 = c.try_into().expect("small exponent");
        acc * rpow(base, e)
    }))
}

fn binomial_ratio(spec: &SequenceSpec, z: &QuotientString, w: &QuotientString) -> Rational {
    z.digits()
        .iter()
        .zip(w.digits())
        .enumerate()
        .fold(Rational::one(), |acc, (k, (a, b))| {
            let l2 = 2 * spec.block(k + 1).l;
            acc * Rational::new(binomial(l2, *b), binomial(l2, *a))
        })
}

fn random_form(spec: &SequenceSpec, rng: &mut impl Rng) -> LogLinearForm {
    let coeffs: Vec<i64> = (0..spec.len()).map(|_| rng.gen_range(-3..=3)).collect();
    spec.weighted_logs(0, &coeffs)
}

fn same_point(orbits: &Orbits, p: &FlowPoint, q: &FlowPoint) -> Result<bool> {
    Ok(p.base == q.base
        && p.time.delta_part == q.time.delta_part
        && orbits.comparator().compare(&p.time.log_part, &q.time.log_part)? == Ordering::Equal)
}

/// Cocycle additivity, RN chain rule, RN/cocycle compatibility, the
/// roundtrip `F_{-s}∘F_s = id` with RN product 1 and `F_{s'}∘F_s = F_{s+s'}`
/// on `instances` random specs of depth at most 4.
pub fn flow_law_trials(instances: u64, seed: u64, max_precision: u32) -> Result<CheckSummary> {
    let mut summary = CheckSummary::new("flow-laws");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..instances {
        let depth = rng.gen_range(2..=4);
        let spec = random_lacunary_spec(&mut rng, depth)?;
        let orbits = Orbits::new(&spec, max_precision);
        let digits: Vec<u32> = spec.blocks().iter().map(|b| rng.gen_range(0..=2 * b.l)).collect();
        let z = QuotientString::new(&spec, digits)?;
        let class = orbits.class(depth, z.residue())?;
        let pick = |rng: &mut ChaCha8Rng| class.members()[rng.gen_range(0..class.members().len())].clone();
        let (z1, z2) = (pick(&mut rng), pick(&mut rng));
        let tag = |what: &str| format!("trial {trial}: {what}");

        let (c01, r01) = cocycle_and_rn(&spec, &z, &z1)?;
        let (c12, r12) = cocycle_and_rn(&spec, &z1, &z2)?;
        let (c02, r02) = cocycle_and_rn(&spec, &z, &z2)?;
        let sum = &c01 + &c12;
        summary.record(orbits.comparator().compare(&sum, &c02)? == Ordering::Equal, || tag("cocycle additivity"));
        summary.record(&r01 * &r12 == r02, || tag("RN chain rule"));
        summary.record(
            r01 == binomial_ratio(&spec, &z, &z1) * exp_of(&spec, &c01)?,
            || tag("RN/cocycle compatibility"),
        );
        summary.record(
            orbits.comparator().compare(&c01, &(&digit_weight(&spec, &z) - &digit_weight(&spec, &z1)))?
                == Ordering::Equal,
            || tag("cocycle as weight difference"),
        );

        let q = Rational::new(rng.gen_range(0..7).into(), 7.into());
        let p = FlowPoint {
            base: z.clone(),
            time: FlowTime {
                log_part: LogLinearForm::zero(),
                delta_part: q.clone(),
            },
        };
        // exact jump to z1
        let (image, rn) = orbits.flow_apply(&p, &c01)?;
        summary.record(image.base == z1 && image.time.log_part.is_zero() && rn == r01, || {
            tag("jump to chosen string")
        });
        let (back, rn_back) = orbits.flow_apply(&image, &-c01.clone())?;
        summary.record(same_point(&orbits, &back, &p)? && &rn * &rn_back == Rational::one(), || {
            tag("roundtrip after jump")
        });

        // random partial times
        let s = random_form(&spec, &mut rng);
        let s2 = random_form(&spec, &mut rng);
        let first = orbits.flow_apply(&p, &s);
        let (mid, rn_s) = match first {
            Ok(v) => v,
            Err(Error::Boundary { .. }) => {
                summary.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let (back, rn_back) = orbits.flow_apply(&mid, &-s.clone())?;
        summary.record(same_point(&orbits, &back, &p)? && &rn_s * &rn_back == Rational::one(), || {
            tag("roundtrip after partial step")
        });
        match (orbits.flow_apply(&mid, &s2), orbits.flow_apply(&p, &(&s + &s2))) {
            (Ok((twice, rn_2)), Ok((once, rn_once))) => {
                summary.record(same_point(&orbits, &twice, &once)? && &rn_s * &rn_2 == rn_once, || {
                    tag("one-parameter law")
                });
            }
            (Err(Error::Boundary { .. }), Err(Error::Boundary { .. })) => summary.skipped += 1,
            (a, b) => summary.record(false, || tag(&format!("window mismatch {a:?} / {b:?}"))),
        }
    }
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerRow {
    pub k: u32,
    pub n: u32,
    pub index: usize,
    pub cell: String,
    pub measure: Rational,
}

/// Tower cyclicity, refinement, measure preservation on short cylinders and
/// the adic coding, for each `k`.
pub fn odometer_checks(
    ks: &[u32],
    tower_levels: u32,
    cylinder_len: usize,
    coding_levels: u32,
) -> Result<(CheckSummary, Vec<TowerRow>)> {
    let mut summary = CheckSummary::new("odometer");
    let mut rows = Vec::new();
    for &k in ks {
        let spec = OdometerSpec::new(2, k)?;
        let mut previous: Option<Vec<AdicPrefix>> = None;
        for n in 0..=tower_levels {
            let t = tower(&spec, n)?;
            let period = spec.tower_size(n);
            let mut distinct = t.cells.clone();
            distinct.sort();
            distinct.dedup();
            let closes = odometer_step(&spec, t.cells.last().expect("nonempty"))? == t.cells[0];
            summary.record(
                BigInt::from(t.period()) == period && distinct.len() == t.period() && closes,
                || format!("k={k} n={n}: tower period {}", t.period()),
            );
            if let Some(prev) = &previous {
                for (i, cell) in prev.iter().enumerate() {
                    let parts: Vec<&AdicPrefix> =
                        (0..=k as usize).map(|j| &t.cells[i + j * prev.len()]).collect();
                    let ok = parts.iter().all(|c| &c.truncated(n as usize) == cell);
                    summary.record(ok, || format!("k={k} n={n}: refinement at {i}"));
                }
            }
            for (i, cell) in t.cells.iter().enumerate() {
                rows.push(TowerRow {
                    k,
                    n,
                    index: i,
                    cell: cell.to_string(),
                    measure: cell.measure(&spec),
                });
            }
            previous = Some(t.cells);
        }
        for len in 1..=cylinder_len {
            let tops: Vec<u32> = (0..len).map(|i| if i == 0 { k - 1 } else { k }).collect();
            for d in digit_box(&tops) {
                let c = AdicPrefix::new(&spec, d)?;
                let image = odometer_step(&spec, &c)?;
                let ok = image.measure(&spec) == c.measure(&spec)
                    && image.len() == c.len()
                    && odometer_step_inverse(&spec, &image)? == c;
                summary.record(ok, || format!("k={k}: measure on {c}"));
            }
        }
        summary.record(adic_coding_check(&spec, coding_levels)?, || {
            format!("k={k}: adic coding up to {coding_levels}")
        });
    }
    Ok((summary, rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRow {
    pub lambda: u32,
    pub k: u32,
    pub n: u32,
    pub block: u32,
    pub size: BigInt,
    pub mass: Rational,
}

/// Block masses and `ν∘π⁻¹ = μ` from symbolic block sizes.
pub fn projection_checks(
    lambdas: &[u32],
    ks: &[u32],
    levels: u32,
) -> Result<(CheckSummary, Vec<BlockRow>)> {
    let mut summary = CheckSummary::new("projection");
    let mut rows = Vec::new();
    for &lambda in lambdas {
        for &k in ks {
            let spec = OdometerSpec::new(lambda, k)?;
            for n in 0..=levels {
                let mut total = Rational::zero();
                for j in 0..spec.block_count(n) {
                    let size = spec.block_size(n, j)?;
                    let last = BlockCoordinate::new(&spec, n, j, &size - 1)?;
                    let (digit, mass) = block_projection(&spec, &last)?;
                    summary.record(digit == j && mass == spec.digit_mass(n), || {
                        format!("lambda={lambda} k={k} n={n} block {j}")
                    });
                    total += &mass;
                    rows.push(BlockRow {
                        lambda,
                        k,
                        n,
                        block: j,
                        size,
                        mass,
                    });
                }
                summary.record(total.is_one(), || format!("lambda={lambda} k={k} n={n}: total"));
            }
        }
    }
    Ok((summary, rows))
}
