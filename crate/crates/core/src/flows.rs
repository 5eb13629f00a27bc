//! Orbits of the mod-3 relation on depth-`m` quotient strings, the
//! Radon–Nikodym cocycle, the first-return map `T` with its ceiling `ξ`, and
//! the flow built under `ξ`.
//!
//! Strings of one residue class are ordered by the digit weight
//! `u(z) = Σ zᵢ·(-log λᵢ)`. The cocycle is `log δ(z', z) = u(z) - u(z')`, so
//! `T` steps to the next smaller weight and `ξ(z) = u(z) - u(Tz)`.
//!
//! A point `(z, t)` of the flow is placed at height `H = t - u(z)`; the cell
//! of `y` is `[-u(y), -u(Ty))`. Flow times carry an extra multiple of the
//! symbolic fibre length `δ`, which is smaller than every nonzero lattice gap,
//! so comparisons are lexicographic in (log part, δ part).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Comparator, LogLinearForm, Rational, SortKey};
use crate::product_spaces::SequenceSpec;

/// Largest number of depth-`m` strings enumerated to build one class.
pub const CLASS_GUARD: u64 = 2_000_000;

/// A truncated point `(z₁,…,z_m)` of the quotient space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientString {
    digits: Vec<u32>,
}

impl QuotientString {
    pub fn new(spec: &SequenceSpec, digits: Vec<u32>) -> Result<Self> {
        spec.check_digits(&digits)?;
        Ok(QuotientString { digits })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// `Σ zᵢ mod 3`.
    pub fn residue(&self) -> u8 {
        (self.digits.iter().map(|d| *d as u64).sum::<u64>() % 3) as u8
    }

    /// The same string followed by `extra` zero digits.
    pub fn padded(&self, spec: &SequenceSpec, extra: usize) -> Result<Self> {
        let mut digits = self.digits.clone();
        digits.extend(std::iter::repeat_n(0, extra));
        Self::new(spec, digits)
    }
}

/// `u(z) = -Σ zᵢ log λᵢ`.
pub fn digit_weight(spec: &SequenceSpec, z: &QuotientString) -> LogLinearForm {
    let coeffs: Vec<i64> = z.digits.iter().map(|d| -(*d as i64)).collect();
    spec.weighted_logs(0, &coeffs)
}

/// `(log δ(z', z), Πᵢ ν̂ᵢ(z'ᵢ)/ν̂ᵢ(zᵢ))` for two strings of one residue class.
pub fn cocycle_and_rn(
    spec: &SequenceSpec,
    z: &QuotientString,
    z_prime: &QuotientString,
) -> Result<(LogLinearForm, Rational)> {
    if z.depth() != z_prime.depth() {
        return Err(Error::InvalidDigits(format!(
            "depth mismatch {} vs {}",
            z.depth(),
            z_prime.depth()
        )));
    }
    if z.residue() != z_prime.residue() {
        return Err(Error::ResidueMismatch {
            left: z.residue(),
            right: z_prime.residue(),
        });
    }
    let coeffs: Vec<i64> = z
        .digits
        .iter()
        .zip(&z_prime.digits)
        .map(|(a, b)| *b as i64 - *a as i64)
        .collect();
    let form = spec.weighted_logs(0, &coeffs);
    let rn = z
        .digits
        .iter()
        .zip(&z_prime.digits)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(k, (a, b))| spec.nu_hat(k + 1, *b) / spec.nu_hat(k + 1, *a))
        .fold(Rational::one(), |acc, x| acc * x);
    Ok((form, rn))
}

/// All depth-`m` strings of one residue, in increasing digit weight.
#[derive(Clone, Debug)]
pub struct ResidueClass {
    depth: usize,
    residue: u8,
    members: Vec<QuotientString>,
    weights: Vec<LogLinearForm>,
    index: HashMap<QuotientString, usize>,
}

impl ResidueClass {
    pub fn enumerate(
        spec: &SequenceSpec,
        depth: usize,
        residue: u8,
        cmp: &Comparator<'_>,
    ) -> Result<Self> {
        if depth > spec.len() {
            return Err(Error::InvalidDigits(format!(
                "depth {depth} exceeds {} blocks",
                spec.len()
            )));
        }
        let size: u128 = spec.blocks()[..depth]
            .iter()
            .map(|b| 2 * b.l as u128 + 1)
            .product();
        if size > CLASS_GUARD as u128 {
            return Err(Error::EnumerationTooLarge {
                size: size.to_string(),
                guard: CLASS_GUARD,
            });
        }
        let tops: Vec<u32> = spec.blocks()[..depth].iter().map(|b| 2 * b.l).collect();
        let mut strings = Vec::new();
        let mut digits = vec![0u32; depth];
        loop {
            if digits.iter().map(|d| *d as u64).sum::<u64>() % 3 == residue as u64 {
                strings.push(QuotientString {
                    digits: digits.clone(),
                });
            }
            // odometer increment over the digit box
            let mut k = 0;
            while k < depth && digits[k] == tops[k] {
                digits[k] = 0;
                k += 1;
            }
            if k == depth {
                break;
            }
            digits[k] += 1;
        }

        let mut keyed: Vec<(SortKey, QuotientString)> = strings
            .into_iter()
            .map(|z| Ok((cmp.key(&digit_weight(spec, &z))?, z)))
            .collect::<Result<_>>()?;
        let failure = RefCell::new(None);
        keyed.sort_by(|a, b| {
            cmp.cmp_keys(&a.0, &b.0).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        for w in keyed.windows(2) {
            if cmp.cmp_keys(&w[0].0, &w[1].0)? != Ordering::Less {
                return Err(Error::TiedCocycle { depth });
            }
        }
        let members: Vec<QuotientString> = keyed.into_iter().map(|(_, z)| z).collect();
        let weights = members.iter().map(|z| digit_weight(spec, z)).collect();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, z)| (z.clone(), i))
            .collect();
        Ok(ResidueClass {
            depth,
            residue,
            members,
            weights,
            index,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn residue(&self) -> u8 {
        self.residue
    }

    /// Members in increasing digit weight (the first one has no successor).
    pub fn members(&self) -> &[QuotientString] {
        &self.members
    }

    pub fn weight(&self, pos: usize) -> &LogLinearForm {
        &self.weights[pos]
    }

    pub fn position(&self, z: &QuotientString) -> Option<usize> {
        self.index.get(z).copied()
    }

    /// `ξ` at position `pos`, if `T` is defined there at this depth.
    pub fn ceiling(&self, pos: usize) -> Option<LogLinearForm> {
        (pos > 0).then(|| &self.weights[pos] - &self.weights[pos - 1])
    }
}

/// Flow time `log part + q·δ`, with `0 ≤ q < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowTime {
    pub log_part: LogLinearForm,
    pub delta_part: Rational,
}

impl FlowTime {
    pub fn zero() -> Self {
        FlowTime {
            log_part: LogLinearForm::zero(),
            delta_part: Rational::zero(),
        }
    }

    pub fn log(log_part: LogLinearForm) -> Self {
        FlowTime {
            log_part,
            delta_part: Rational::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPoint {
    pub base: QuotientString,
    pub time: FlowTime,
}

impl FlowPoint {
    pub fn at_base(base: QuotientString) -> Self {
        FlowPoint {
            base,
            time: FlowTime::zero(),
        }
    }
}

/// Orbit machinery for one spec, with residue classes cached per depth.
pub struct Orbits<'a> {
    spec: &'a SequenceSpec,
    cmp: Comparator<'a>,
    classes: RefCell<HashMap<(usize, u8), Rc<ResidueClass>>>,
}

impl<'a> Orbits<'a> {
    pub fn new(spec: &'a SequenceSpec, max_precision: u32) -> Self {
        Orbits {
            spec,
            cmp: spec.comparator(max_precision),
            classes: RefCell::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &'a SequenceSpec {
        self.spec
    }

    pub fn comparator(&self) -> &Comparator<'a> {
        &self.cmp
    }

    pub fn class(&self, depth: usize, residue: u8) -> Result<Rc<ResidueClass>> {
        if let Some(c) = self.classes.borrow().get(&(depth, residue)) {
            return Ok(Rc::clone(c));
        }
        let class = Rc::new(ResidueClass::enumerate(self.spec, depth, residue, &self.cmp)?);
        self.classes
            .borrow_mut()
            .insert((depth, residue), Rc::clone(&class));
        Ok(class)
    }

    fn locate(&self, z: &QuotientString) -> Result<(Rc<ResidueClass>, usize)> {
        self.spec.check_digits(z.digits())?;
        let class = self.class(z.depth(), z.residue())?;
        let pos = class.position(z).expect("string belongs to its own class");
        Ok((class, pos))
    }

    /// `(T(z), ξ(z))`: the same-class string with the smallest strictly
    /// positive cocycle `log δ(T(z), z)`, and that cocycle.
    pub fn successor(&self, z: &QuotientString) -> Result<(QuotientString, LogLinearForm)> {
        let (class, pos) = self.locate(z)?;
        let xi = class.ceiling(pos).ok_or(Error::Boundary { depth: z.depth() })?;
        Ok((class.members[pos - 1].clone(), xi))
    }

    /// `(T⁻¹(z), ξ(T⁻¹(z)))`.
    pub fn predecessor(&self, z: &QuotientString) -> Result<(QuotientString, LogLinearForm)> {
        let (class, pos) = self.locate(z)?;
        if pos + 1 >= class.members.len() {
            return Err(Error::Boundary { depth: z.depth() });
        }
        let xi = class.ceiling(pos + 1).expect("pos + 1 > 0");
        Ok((class.members[pos + 1].clone(), xi))
    }

    /// `F_s(p)` and the Radon–Nikodym derivative of `F_s` at `p`.
    pub fn flow_apply(&self, p: &FlowPoint, s: &LogLinearForm) -> Result<(FlowPoint, Rational)> {
        let z = &p.base;
        let (class, pos) = self.locate(z)?;
        let depth = z.depth();
        let t = &p.time;
        if t.delta_part.is_negative() || t.delta_part >= Rational::one() {
            return Err(Error::TimeOutOfRange);
        }
        match self.cmp.sign(&t.log_part)? {
            Ordering::Less => return Err(Error::TimeOutOfRange),
            Ordering::Equal => {}
            Ordering::Greater => {
                let xi = class.ceiling(pos).ok_or(Error::Boundary { depth })?;
                if self.cmp.compare(&t.log_part, &xi)? != Ordering::Less {
                    return Err(Error::TimeOutOfRange);
                }
            }
        }

        let height = &(&t.log_part - &class.weights[pos]) + s;
        // smallest i with H + u(vᵢ) >= 0; the predicate is monotone in i
        let (mut lo, mut hi) = (0usize, class.members.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.cmp.sign(&(&height + &class.weights[mid]))? != Ordering::Less {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if lo == class.members.len() {
            return Err(Error::Boundary { depth });
        }
        let mut new_log = &height + &class.weights[lo];
        if self.cmp.sign(&new_log)?.is_eq() {
            new_log = LogLinearForm::zero();
        } else if lo == 0 {
            // above the class minimum: its ceiling is not visible at this depth
            return Err(Error::Boundary { depth });
        }
        let target = class.members[lo].clone();
        let (_, rn) = cocycle_and_rn(self.spec, z, &target)?;
        Ok((
            FlowPoint {
                base: target,
                time: FlowTime {
                    log_part: new_log,
                    delta_part: t.delta_part.clone(),
                },
            },
            rn,
        ))
    }
}

pub fn successor(
    spec: &SequenceSpec,
    z: &QuotientString,
    max_precision: u32,
) -> Result<(QuotientString, LogLinearForm)> {
    Orbits::new(spec, max_precision).successor(z)
}

pub fn flow_apply(
    spec: &SequenceSpec,
    p: &FlowPoint,
    s: &LogLinearForm,
    max_precision: u32,
) -> Result<(FlowPoint, Rational)> {
    Orbits::new(spec, max_precision).flow_apply(p, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{compare, int, ratio, MultiplicativeRelations};
    use crate::product_spaces::{Block, Epsilon0};

    fn toy2() -> SequenceSpec {
        SequenceSpec::new(
            vec![Block::new(1, ratio(1, 2)), Block::new(2, ratio(1, 32))],
            Epsilon0::log2(),
            MultiplicativeRelations::new([(2, ratio(1, 2), 5)]).unwrap(),
        )
        .unwrap()
    }

    fn log2_times(spec: &SequenceSpec, k: i64) -> LogLinearForm {
        spec.weighted_logs(0, &[-k])
    }

    fn qs(spec: &SequenceSpec, d: &[u32]) -> QuotientString {
        QuotientString::new(spec, d.to_vec()).unwrap()
    }

    fn same(spec: &SequenceSpec, a: &LogLinearForm, b: &LogLinearForm) -> bool {
        compare(a, b, spec.relations(), 256) == Ok(Ordering::Equal)
    }

    #[test]
    fn cocycle_examples() {
        let spec = toy2();
        let z = qs(&spec, &[1, 2]);
        let (form, rn) = cocycle_and_rn(&spec, &z, &z).unwrap();
        assert!(form.is_zero());
        assert_eq!(rn, int(1));

        let (form, rn) = cocycle_and_rn(&spec, &z, &qs(&spec, &[2, 1])).unwrap();
        assert!(same(&spec, &form, &log2_times(&spec, 4)));
        assert_eq!(rn, ratio(16, 3));

        assert_eq!(
            cocycle_and_rn(&spec, &qs(&spec, &[0, 0]), &qs(&spec, &[1, 0])),
            Err(Error::ResidueMismatch { left: 0, right: 1 })
        );
    }

    #[test]
    fn class_zero_order_at_depth_two() {
        let spec = toy2();
        let orbits = Orbits::new(&spec, 256);
        let class = orbits.class(2, 0).unwrap();
        let got: Vec<Vec<u32>> = class.members().iter().map(|z| z.digits().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![2, 1], vec![1, 2], vec![0, 3], vec![2, 4]]);
    }

    #[test]
    fn successor_examples() {
        let spec = toy2();
        let (next, xi) = successor(&spec, &qs(&spec, &[1, 2]), 256).unwrap();
        assert_eq!(next.digits(), &[2, 1]);
        assert!(same(&spec, &xi, &log2_times(&spec, 4)));
        let (next, xi) = successor(&spec, &qs(&spec, &[2, 1]), 256).unwrap();
        assert_eq!(next.digits(), &[0, 0]);
        assert!(same(&spec, &xi, &log2_times(&spec, 7)));
        assert_eq!(
            successor(&spec, &qs(&spec, &[0, 0]), 256),
            Err(Error::Boundary { depth: 2 })
        );
    }

    #[test]
    fn flow_examples() {
        let spec = toy2();
        let orbits = Orbits::new(&spec, 256);
        let p = FlowPoint::at_base(qs(&spec, &[1, 2]));
        let (q, rn) = orbits.flow_apply(&p, &LogLinearForm::zero()).unwrap();
        assert_eq!((q, rn), (p.clone(), int(1)));

        let (s, _) = cocycle_and_rn(&spec, &p.base, &qs(&spec, &[2, 1])).unwrap();
        let (q, rn) = orbits.flow_apply(&p, &s).unwrap();
        assert_eq!(q.base.digits(), &[2, 1]);
        assert!(q.time.log_part.is_zero());
        assert_eq!(rn, ratio(16, 3));
        let (back, rn_back) = orbits.flow_apply(&q, &-&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(rn * rn_back, int(1));

        let p = FlowPoint::at_base(qs(&spec, &[2, 1]));
        let (q, _) = orbits.flow_apply(&p, &log2_times(&spec, 7)).unwrap();
        assert_eq!(q.base.digits(), &[0, 0]);
        assert!(q.time.log_part.is_zero());
    }

    #[test]
    fn flow_partial_steps_keep_time() {
        let spec = toy2();
        let orbits = Orbits::new(&spec, 256);
        // from (0,3) move by 2 log 2: stays in the cell of (0,3) whose ceiling is 4 log 2
        let p = FlowPoint::at_base(qs(&spec, &[0, 3]));
        let (q, rn) = orbits.flow_apply(&p, &log2_times(&spec, 2)).unwrap();
        assert_eq!(q.base.digits(), &[0, 3]);
        assert!(same(&spec, &q.time.log_part, &log2_times(&spec, 2)));
        assert_eq!(rn, int(1));
        // then by 5 log 2 more: 2 to reach (1,2), 3 into its cell
        let (r, _) = orbits.flow_apply(&q, &log2_times(&spec, 5)).unwrap();
        assert_eq!(r.base.digits(), &[1, 2]);
        assert!(same(&spec, &r.time.log_part, &log2_times(&spec, 3)));
        // one more log 2 exhausts the ceiling 4 log 2 of (1,2)
        let (w, _) = orbits.flow_apply(&r, &log2_times(&spec, 1)).unwrap();
        assert_eq!(w.base.digits(), &[2, 1]);
        assert!(w.time.log_part.is_zero());
        // too far past the class minimum
        assert!(matches!(
            orbits.flow_apply(&r, &log2_times(&spec, 20)),
            Err(Error::Boundary { .. })
        ));
        // negative times beyond the top of the class
        assert!(matches!(
            orbits.flow_apply(&p, &log2_times(&spec, -20)),
            Err(Error::Boundary { .. })
        ));
    }

    #[test]
    fn input_time_must_be_below_ceiling() {
        let spec = toy2();
        let orbits = Orbits::new(&spec, 256);
        let p = FlowPoint {
            base: qs(&spec, &[1, 2]),
            time: FlowTime::log(log2_times(&spec, 4)),
        };
        assert_eq!(
            orbits.flow_apply(&p, &LogLinearForm::zero()),
            Err(Error::TimeOutOfRange)
        );
        let p = FlowPoint {
            base: qs(&spec, &[1, 2]),
            time: FlowTime {
                log_part: LogLinearForm::zero(),
                delta_part: int(1),
            },
        };
        assert_eq!(
            orbits.flow_apply(&p, &LogLinearForm::zero()),
            Err(Error::TimeOutOfRange)
        );
    }

    #[test]
    fn ties_are_reported() {
        let spec = SequenceSpec::constant(1, ratio(1, 2), 3).unwrap();
        let orbits = Orbits::new(&spec, 256);
        assert_eq!(
            orbits.class(2, 0).map(|_| ()),
            Err(Error::TiedCocycle { depth: 2 })
        );
    }
}
