//! Explicit approximate-transitivity certificates on the quotient flow.
//!
//! For a depth-`n` cylinder `C(a)` with digit-sum residue `r(a)` the moves
//! range over `k̄ ∈ I_s` (`r(a) + s ≡ 0 mod 3`) on blocks `n+1..=m`. The move
//! with flow time `T = s(a) + s(k̄)` carries `C(0ₙ, j̄) × [0,δ)` onto
//! `C(a, j̄ + k̄) × [0,δ)`; weighting by
//! `3·Π_{i≤n} C(2lᵢ,aᵢ)λᵢ^{aᵢ} · Π_{i>n} C(lᵢ,kᵢ)λᵢ^{kᵢ}` gives the
//! approximant `Σ_p̄ 3A_{s,·}(p̄)/Π C(2lᵢ,pᵢ) · χ_{C(a,p̄)}`, whose L1
//! distance to `χ_{C(a)}` is `ν̂(C(a))` times the three defect sums for the
//! pairs `{s,0}, {s,1}, {s,2}`.
//!
//! All L1 norms are in units of the fibre length `δ`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flows::{cocycle_and_rn, QuotientString};
use crate::lp;
use crate::numerics::{rpow, LogLinearForm, Rational};
use crate::product_spaces::{binomial, digits_measure, SequenceSpec};
use crate::residue::{defect_bound, defect_from_graded, ClassPair, GradedCoefficients};

/// Guard on explicitly listed terms (cylinders or moves).
pub const TERM_GUARD: u64 = 1 << 20;

/// Nonnegative combination of cylinder indicators times `[0,δ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepFunction {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indicator(digits: Vec<u32>) -> Self {
        let mut f = Self::zero();
        f.add_term(digits, Rational::one());
        f
    }

    /// Adds `coeff·χ_{C(digits)}`. Callers keep cylinders disjoint; equal
    /// cylinders are merged.
    pub fn add_term(&mut self, digits: Vec<u32>, coeff: Rational) {
        assert!(!coeff.is_negative(), "step functions are nonnegative");
        if coeff.is_zero() {
            return;
        }
        *self.terms.entry(digits).or_default() += coeff;
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (d, v) in &self.terms {
            out.add_term(d.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, v) in &other.terms {
            out.add_term(d.clone(), v.clone());
        }
        out
    }

    /// `‖g‖₁ = Σ coeff·ν̂(C)`, in δ-units.
    pub fn l1_norm(&self, spec: &SequenceSpec) -> Rational {
        self.terms
            .iter()
            .map(|(d, c)| c * digits_measure(spec, d))
            .sum()
    }

    /// Values on the depth-`depth` cells, as a map cell → value.
    pub fn refine(&self, spec: &SequenceSpec, depth: usize) -> Result<BTreeMap<Vec<u32>, Rational>> {
        let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (d, c) in &self.terms {
            if d.len() > depth {
                return Err(Error::NotDecomposable { depth });
            }
            let tops: Vec<u32> = (d.len()..depth).map(|i| 2 * spec.block(i + 1).l).collect();
            let count: u128 = tops.iter().map(|t| *t as u128 + 1).product();
            if count > TERM_GUARD as u128 {
                return Err(Error::EnumerationTooLarge {
                    size: count.to_string(),
                    guard: TERM_GUARD,
                });
            }
            for tail in digit_box(&tops) {
                let mut cell = d.clone();
                cell.extend(tail);
                *out.entry(cell).or_default() += c;
            }
        }
        Ok(out)
    }

    /// Exact `‖self - other‖₁` over a common refinement.
    pub fn l1_distance(&self, other: &Self, spec: &SequenceSpec) -> Result<Rational> {
        let depth = self.max_depth().max(other.max_depth());
        let mut cells = self.refine(spec, depth)?;
        for (d, c) in other.refine(spec, depth)? {
            *cells.entry(d).or_default() -= c;
        }
        Ok(cells
            .iter()
            .map(|(d, v)| v.abs() * digits_measure(spec, d))
            .sum())
    }
}

/// All tuples `0 ≤ xᵢ ≤ tops[i]`, first coordinate fastest.
pub(crate) fn digit_box(tops: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let mut next = Some(vec![0u32; tops.len()]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut k = 0;
        while k < tops.len() && succ[k] == tops[k] {
            succ[k] = 0;
            k += 1;
        }
        if k < tops.len() {
            succ[k] += 1;
            next = Some(succ);
        }
        Some(current)
    })
}

fn residue_of(digits: &[u32]) -> u8 {
    (digits.iter().map(|d| *d as u64).sum::<u64>() % 3) as u8
}

fn check_depths(spec: &SequenceSpec, n: usize, m: usize) -> Result<()> {
    if n >= m {
        return Err(Error::Validation {
            field: "m".into(),
            message: format!("need n < m, got n = {n}, m = {m}"),
        });
    }
    spec.range(n, m).map(|_| ())
}

fn range_size(spec: &SequenceSpec, n: usize, m: usize) -> Result<u128> {
    let size: u128 = spec.range(n, m)?.iter().map(|b| b.l as u128 + 1).product();
    if size > TERM_GUARD as u128 {
        return Err(Error::EnumerationTooLarge {
            size: size.to_string(),
            guard: TERM_GUARD,
        });
    }
    Ok(size)
}

/// `Π_{i=n+1}^{m} C(lᵢ,jᵢ)/C(2lᵢ,jᵢ)`.
pub fn f_coefficient(spec: &SequenceSpec, n: usize, j: &[u32]) -> Rational {
    j.iter()
        .enumerate()
        .map(|(k, jk)| {
            let l = spec.block(n + k + 1).l;
            Rational::new(binomial(l, *jk), binomial(2 * l, *jk))
        })
        .fold(Rational::one(), |acc, x| acc * x)
}

/// `f = Σ_{j̄} Π C(lᵢ,jᵢ)/C(2lᵢ,jᵢ) · χ_{C(0ₙ, j̄) × [0,δ)}`, `0 ≤ jᵢ ≤ lᵢ`.
pub fn build_f(spec: &SequenceSpec, n: usize, m: usize) -> Result<StepFunction> {
    if n > m {
        return Err(Error::Validation {
            field: "m".into(),
            message: format!("need n <= m, got n = {n}, m = {m}"),
        });
    }
    range_size(spec, n, m)?;
    let tops: Vec<u32> = spec.range(n, m)?.iter().map(|b| b.l).collect();
    let mut f = StepFunction::zero();
    for j in digit_box(&tops) {
        let coeff = f_coefficient(spec, n, &j);
        let mut digits = vec![0; n];
        digits.extend_from_slice(&j);
        f.add_term(digits, coeff);
    }
    Ok(f)
}

/// One weighted translate `weight · f∘F_{flow_time} · dμF_{flow_time}/dμ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub k: Vec<u32>,
    /// Argument of the flow applied to `f`; the negative of the cocycle
    /// `s(a) + s(k̄)` that carries `C(0ₙ, j̄)` onto `C(a, j̄+k̄)`.
    pub flow_time: LogLinearForm,
    pub weight: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveFamily {
    pub moves: Vec<Move>,
}

impl MoveFamily {
    pub fn total_weight(&self) -> Rational {
        self.moves.iter().map(|m| m.weight.clone()).sum()
    }
}

/// `s ∈ {0,1,2}` with `r(a) + s ≡ 0 (mod 3)`.
pub fn complementary_class(a: &[u32]) -> u8 {
    (3 - residue_of(a)) % 3
}

/// `3·Π_{i≤n} C(2lᵢ,aᵢ)λᵢ^{aᵢ}`.
fn prefix_weight(spec: &SequenceSpec, a: &[u32]) -> Rational {
    a.iter()
        .enumerate()
        .map(|(k, ak)| {
            let b = spec.block(k + 1);
            Rational::from_integer(binomial(2 * b.l, *ak)) * rpow(&b.lambda, *ak as i64)
        })
        .fold(Rational::from_integer(3.into()), |acc, x| acc * x)
}

/// The move family approximating `χ_{C(a) × [0,δ)}` from `f` at depth `m`.
pub fn approx_moves(spec: &SequenceSpec, a: &[u32], m: usize) -> Result<MoveFamily> {
    let n = a.len();
    check_depths(spec, n, m)?;
    spec.check_digits(a)?;
    range_size(spec, n, m)?;
    let s = complementary_class(a);
    let head = prefix_weight(spec, a);
    let a_coeffs: Vec<i64> = a.iter().map(|d| *d as i64).collect();
    let s_a = spec.weighted_logs(0, &a_coeffs);
    let tops: Vec<u32> = spec.range(n, m)?.iter().map(|b| b.l).collect();
    let mut moves = Vec::new();
    for k in digit_box(&tops) {
        if residue_of(&k) != s {
            continue;
        }
        let weight = k
            .iter()
            .enumerate()
            .map(|(t, kt)| {
                let b = spec.block(n + t + 1);
                Rational::from_integer(binomial(b.l, *kt)) * rpow(&b.lambda, *kt as i64)
            })
            .fold(head.clone(), |acc, x| acc * x);
        let k_coeffs: Vec<i64> = k.iter().map(|d| *d as i64).collect();
        let cocycle = &s_a + &spec.weighted_logs(n, &k_coeffs);
        moves.push(Move {
            k,
            flow_time: -cocycle,
            weight,
        });
    }
    Ok(MoveFamily { moves })
}

/// `f∘F_{flow_time}·dμF_{flow_time}/dμ` for a move built on `a`, computed
/// cylinder by cylinder from the cocycle and Radon–Nikodym product.
pub fn transport(
    spec: &SequenceSpec,
    f: &StepFunction,
    a: &[u32],
    mv: &Move,
) -> Result<StepFunction> {
    let n = a.len();
    let mut out = StepFunction::zero();
    for (source, c) in f.terms() {
        let mut target = a.to_vec();
        target.extend(source[n..].iter().zip(&mv.k).map(|(j, k)| j + k));
        let z = QuotientString::new(spec, source.clone())?;
        let z_prime = QuotientString::new(spec, target.clone())?;
        // dμ∘F_{-T}/dμ at the image point is ν̂(z)/ν̂(z')
        let (_, rn) = cocycle_and_rn(spec, &z_prime, &z)?;
        out.add_term(target, c * rn);
    }
    Ok(out)
}

/// Direct step-function approximant `Σ_k weight_k · transport(f, move_k)`.
pub fn approximant(spec: &SequenceSpec, a: &[u32], m: usize) -> Result<StepFunction> {
    let f = build_f(spec, a.len(), m)?;
    let family = approx_moves(spec, a, m)?;
    let mut acc = StepFunction::zero();
    for mv in &family.moves {
        acc = acc.plus(&transport(spec, &f, a, mv)?.scaled(&mv.weight));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderCertificate {
    pub a: Vec<u32>,
    pub n: usize,
    pub m: usize,
    /// `ν̂(C(a))`.
    pub measure: Rational,
    /// The three defect sums whose total is `error / measure`.
    pub defects: Vec<(ClassPair, Rational)>,
    /// Exact L1 error in δ-units.
    pub error: Rational,
    /// `2·Π(1-λᵢ/(1+λᵢ)²)^{lᵢ}`; certified error is at most `bound·measure`.
    pub bound: Rational,
    pub pass: bool,
}

impl CylinderCertificate {
    pub fn relative_error(&self) -> Rational {
        &self.error / &self.measure
    }
}

/// Closed-form certificate for `χ_{C(a) × [0,δ)}`.
pub fn certify_cylinder(spec: &SequenceSpec, a: &[u32], m: usize) -> Result<CylinderCertificate> {
    let n = a.len();
    check_depths(spec, n, m)?;
    spec.check_digits(a)?;
    let blocks = spec.range(n, m)?;
    let graded = GradedCoefficients::for_range(blocks);
    Ok(certificate_from_graded(spec, a, m, &graded, defect_bound(blocks)))
}

fn certificate_from_graded(
    spec: &SequenceSpec,
    a: &[u32],
    m: usize,
    graded: &GradedCoefficients,
    bound: Rational,
) -> CylinderCertificate {
    let s = complementary_class(a);
    let defects: Vec<(ClassPair, Rational)> = ClassPair::with_class(s)
        .into_iter()
        .map(|p| (p, defect_from_graded(graded, p)))
        .collect();
    let measure = digits_measure(spec, a);
    let ratio: Rational = defects.iter().map(|(_, v)| v.clone()).sum();
    let error = &ratio * &measure;
    let pass = error <= &bound * &measure;
    CylinderCertificate {
        a: a.to_vec(),
        n: a.len(),
        m,
        measure,
        defects,
        error,
        bound,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetCertificate {
    /// Depth-`n` decomposition `Σ c_a χ_{C(a)}` with per-cylinder certificates.
    pub pieces: Vec<(Rational, CylinderCertificate)>,
    /// Moves for the whole target (cylinder families scaled by `c_a`).
    pub moves: Vec<(Vec<u32>, MoveFamily)>,
    pub norm: Rational,
    pub error: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub n: usize,
    pub m: usize,
    pub epsilon: Rational,
    pub bound: Rational,
    pub f_terms: usize,
    pub targets: Vec<TargetCertificate>,
}

impl FamilyCertificate {
    pub fn pass(&self) -> bool {
        self.targets.iter().all(|t| t.pass)
    }
}

/// Options for [`certify_family`].
#[derive(Clone, Debug)]
pub struct FamilyOptions {
    pub max_depth: usize,
    /// List every move (can be large); otherwise families are left empty.
    pub list_moves: bool,
}

/// Certifies a finite family of nonnegative step functions: one `f`, one
/// depth `m` chosen from the defect bound, and nonnegative move families
/// with `‖target - approximation‖₁ ≤ ε‖target‖₁` for every target.
pub fn certify_family(
    spec: &SequenceSpec,
    targets: &[StepFunction],
    epsilon: &Rational,
    options: &FamilyOptions,
) -> Result<FamilyCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::Validation {
            field: "epsilon".into(),
            message: "must be positive".into(),
        });
    }
    let n = targets.iter().map(StepFunction::max_depth).max().unwrap_or(0);
    let limit = options.max_depth.min(spec.len());
    let mut graded = GradedCoefficients::one();
    let mut bound = Rational::from_integer(2.into());
    let mut chosen = None;
    for m in n + 1..=spec.len() {
        let b = spec.block(m);
        graded = graded.convolve(&GradedCoefficients::coordinate(b.l, &b.lambda));
        bound *= crate::residue::conjugate_pair_norm(b.l, &b.lambda);
        if &bound <= epsilon {
            chosen = Some(m);
            break;
        }
    }
    let m = match chosen {
        Some(m) if m <= limit => m,
        Some(m) => {
            return Err(Error::DepthExceeded {
                required: m,
                max: options.max_depth,
            })
        }
        None => {
            return Err(Error::DepthExceeded {
                required: spec.len() + 1,
                max: options.max_depth,
            })
        }
    };

    let f_terms = spec.range(n, m)?.iter().map(|b| b.l as usize + 1).product();
    let mut certs = Vec::with_capacity(targets.len());
    for target in targets {
        let cells = target.refine(spec, n)?;
        let mut pieces = Vec::new();
        let mut moves = Vec::new();
        let mut error = Rational::zero();
        for (a, c) in cells.iter().filter(|(_, c)| c.is_positive()) {
            let cert = certificate_from_graded(spec, a, m, &graded, bound.clone());
            error += c * &cert.error;
            if options.list_moves {
                let mut fam = approx_moves(spec, a, m)?;
                for mv in &mut fam.moves {
                    mv.weight *= c;
                }
                moves.push((a.clone(), fam));
            }
            pieces.push((c.clone(), cert));
        }
        let norm = target.l1_norm(spec);
        let pass = error <= epsilon * &norm;
        certs.push(TargetCertificate {
            pieces,
            moves,
            norm,
            error,
            pass,
        });
    }
    Ok(FamilyCertificate {
        n,
        m,
        epsilon: epsilon.clone(),
        bound,
        f_terms,
        targets: certs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizedFit {
    pub weights: Vec<Rational>,
    pub error: Rational,
}

/// Nonnegative weights minimising `‖target - Σ wᵢ·basisᵢ‖₁`, by an exact
/// linear program over the common refinement of all supports.
pub fn optimize_coefficients(
    spec: &SequenceSpec,
    basis: &[StepFunction],
    target: &StepFunction,
) -> Result<OptimizedFit> {
    if basis.is_empty() {
        return Err(Error::InfeasibleModel);
    }
    if target.is_empty() {
        return Ok(OptimizedFit {
            weights: vec![Rational::zero(); basis.len()],
            error: Rational::zero(),
        });
    }
    let depth = basis
        .iter()
        .map(StepFunction::max_depth)
        .chain([target.max_depth()])
        .max()
        .unwrap_or(0);
    let t_cells = target.refine(spec, depth)?;
    let b_cells: Vec<_> = basis
        .iter()
        .map(|g| g.refine(spec, depth))
        .collect::<Result<_>>()?;
    let mut cells: Vec<Vec<u32>> = t_cells.keys().cloned().collect();
    for bc in &b_cells {
        cells.extend(bc.keys().cloned());
    }
    cells.sort();
    cells.dedup();

    // columns: w (nb) | e+ (nc) | e- (nc); rows: Bw + e+ - e- = t
    let (nb, nc) = (basis.len(), cells.len());
    let cols = nb + 2 * nc;
    let mut a = vec![vec![Rational::zero(); cols]; nc];
    let mut b = vec![Rational::zero(); nc];
    let mut c = vec![Rational::zero(); cols];
    for (r, cell) in cells.iter().enumerate() {
        for (i, bc) in b_cells.iter().enumerate() {
            if let Some(v) = bc.get(cell) {
                a[r][i] = v.clone();
            }
        }
        a[r][nb + r] = Rational::one();
        a[r][nb + nc + r] = -Rational::one();
        b[r] = t_cells.get(cell).cloned().unwrap_or_default();
        let mu = digits_measure(spec, cell);
        c[nb + r] = mu.clone();
        c[nb + nc + r] = mu;
    }
    let start: Vec<usize> = (nb..nb + nc).collect();
    let sol = lp::minimize(&a, &b, &c, &start)?;
    Ok(OptimizedFit {
        weights: sol.x[..nb].to_vec(),
        error: sol.objective,
    })
}

/// Unweighted transported basis `{f∘F_{flow_time}·RN}` for the moves of `a`.
pub fn transported_basis(
    spec: &SequenceSpec,
    a: &[u32],
    m: usize,
) -> Result<(Vec<StepFunction>, MoveFamily)> {
    let f = build_f(spec, a.len(), m)?;
    let family = approx_moves(spec, a, m)?;
    let basis = family
        .moves
        .iter()
        .map(|mv| transport(spec, &f, a, mv))
        .collect::<Result<_>>()?;
    Ok((basis, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio, MultiplicativeRelations};
    use crate::product_spaces::{Block, Epsilon0};

    fn toy2() -> SequenceSpec {
        SequenceSpec::new(
            vec![Block::new(1, ratio(1, 2)), Block::new(2, ratio(1, 32))],
            Epsilon0::log2(),
            MultiplicativeRelations::new([(2, ratio(1, 2), 5)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn f_examples() {
        let spec = toy2();
        let f = build_f(&spec, 1, 2).unwrap();
        let expect: BTreeMap<Vec<u32>, Rational> = [
            (vec![0, 0], int(1)),
            (vec![0, 1], ratio(2, 4)),
            (vec![0, 2], ratio(1, 6)),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.terms(), &expect);
        let f = build_f(&spec, 1, 1).unwrap();
        assert_eq!(f, StepFunction::indicator(vec![0]));
        for c in build_f(&spec, 0, 2).unwrap().terms().values() {
            assert!(c.is_positive() && c <= &int(1));
        }
    }

    #[test]
    fn move_examples() {
        let spec = toy2();
        let fam = approx_moves(&spec, &[0], 2).unwrap();
        assert_eq!(fam.moves.len(), 1);
        assert_eq!(fam.moves[0].k, vec![0]);
        assert_eq!(fam.moves[0].weight, int(3));
        assert!(fam.moves[0].flow_time.is_zero());

        let fam = approx_moves(&spec, &[2], 2).unwrap();
        let ks: Vec<_> = fam.moves.iter().map(|m| m.k.clone()).collect();
        assert_eq!(ks, vec![vec![1]]);
        // 3·C(2,2)(1/2)²·C(2,1)(1/32)
        assert_eq!(fam.total_weight(), ratio(3, 4) * ratio(2, 32));

        let fam = approx_moves(&spec, &[], 2).unwrap();
        let ks: Vec<_> = fam.moves.iter().map(|m| m.k.clone()).collect();
        assert_eq!(ks, vec![vec![0, 0], vec![1, 2]]);
    }

    #[test]
    fn closed_form_matches_transport_on_toy2() {
        let spec = toy2();
        for a in [vec![0], vec![1], vec![2]] {
            let cert = certify_cylinder(&spec, &a, 2).unwrap();
            let direct = approximant(&spec, &a, 2)
                .unwrap()
                .l1_distance(&StepFunction::indicator(a.clone()), &spec)
                .unwrap();
            assert_eq!(cert.error, direct, "a = {a:?}");
            assert!(cert.pass);
        }
    }

    #[test]
    fn minimal_range_runs_and_bad_ranges_fail() {
        let spec = SequenceSpec::constant(1, ratio(1, 2), 3).unwrap();
        assert!(certify_cylinder(&spec, &[0], 2).is_ok());
        assert!(certify_cylinder(&spec, &[0], 1).is_err());
        assert!(certify_cylinder(&spec, &[0], 4).is_err());
    }

    #[test]
    fn family_depth_choice() {
        let spec = SequenceSpec::constant(1, ratio(1, 2), 40).unwrap();
        let targets = [StepFunction::indicator(vec![0]), StepFunction::indicator(vec![1])];
        let opts = FamilyOptions {
            max_depth: 40,
            list_moves: false,
        };
        let cert = certify_family(&spec, &targets, &ratio(1, 10), &opts).unwrap();
        assert_eq!(cert.m - cert.n, 12);
        assert!(cert.pass());
        let short = FamilyOptions {
            max_depth: 10,
            list_moves: false,
        };
        assert_eq!(
            certify_family(&spec, &targets, &ratio(1, 10), &short),
            Err(Error::DepthExceeded {
                required: 13,
                max: 10
            })
        );
    }

    #[test]
    fn family_of_one_cylinder_is_the_cylinder_certificate() {
        let spec = SequenceSpec::constant(1, ratio(1, 2), 20).unwrap();
        let opts = FamilyOptions {
            max_depth: 20,
            list_moves: true,
        };
        let cert =
            certify_family(&spec, &[StepFunction::indicator(vec![2])], &ratio(1, 4), &opts).unwrap();
        let single = certify_cylinder(&spec, &[2], cert.m).unwrap();
        assert_eq!(cert.targets[0].error, single.error);
        assert_eq!(cert.targets[0].moves[0].1, approx_moves(&spec, &[2], cert.m).unwrap());
    }

    #[test]
    fn optimizer_trivial_cases() {
        let spec = toy2();
        let target = StepFunction::indicator(vec![1]);
        let fit = optimize_coefficients(&spec, &[target.clone()], &target).unwrap();
        assert_eq!((fit.weights, fit.error), (vec![int(1)], int(0)));
        let fit = optimize_coefficients(&spec, &[target.clone()], &StepFunction::zero()).unwrap();
        assert_eq!(fit.weights, vec![int(0)]);
        assert_eq!(
            optimize_coefficients(&spec, &[], &target),
            Err(Error::InfeasibleModel)
        );
        // f reproduced by itself with the identity move
        let f = build_f(&spec, 1, 2).unwrap();
        let fit = optimize_coefficients(&spec, &[f.clone()], &f).unwrap();
        assert_eq!(fit.error, int(0));
    }

    #[test]
    fn optimizer_never_worse_than_construction() {
        let spec = toy2();
        for a in [vec![0], vec![1], vec![2]] {
            let (basis, _) = transported_basis(&spec, &a, 2).unwrap();
            let target = StepFunction::indicator(a.clone());
            let fit = optimize_coefficients(&spec, &basis, &target).unwrap();
            let cert = certify_cylinder(&spec, &a, 2).unwrap();
            assert!(fit.error <= cert.error);
            assert!(fit.weights.iter().all(|w| !w.is_negative()));
        }
    }
}
