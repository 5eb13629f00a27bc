//! The bit-level product space, its binomial quotient, and the block
//! sequences `(lₙ, λₙ)` that parametrise both.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{rpow, Comparator, LogLinearForm, MultiplicativeRelations, Rational};

/// Largest bit string length enumerated by [`quotient_pushforward_check`].
pub const PUSHFORWARD_GUARD_BITS: u32 = 24;

/// Index reserved for the base of `ε₀` in log-linear forms.
pub const EPSILON_INDEX: u32 = 0;

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// One coordinate block: `2l` bits, each equal to 1 with odds `λ : 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub l: u32,
    pub lambda: Rational,
}

impl Block {
    pub fn new(l: u32, lambda: Rational) -> Self {
        Block { l, lambda }
    }
}

/// `ε₀ = scale · log(1/base)`, a positive multiple of a logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon0 {
    pub scale: Rational,
    pub base: Rational,
}

impl Epsilon0 {
    pub fn new(scale: Rational, base: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidSpec("epsilon0 scale must be positive".into()));
        }
        if !base.is_positive() || base >= Rational::one() {
            return Err(Error::InvalidSpec("epsilon0 base must lie in (0,1)".into()));
        }
        Ok(Epsilon0 { scale, base })
    }

    /// `log 2`.
    pub fn log2() -> Self {
        Epsilon0 {
            scale: Rational::one(),
            base: Rational::new(1.into(), 2.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    blocks: Vec<Block>,
    epsilon0: Epsilon0,
    relations: MultiplicativeRelations,
    monotone: bool,
}

impl SequenceSpec {
    /// Checks `l₁ = 1`, `(lₙ)` nondecreasing, `(λₙ)` strictly decreasing in `(0,1)`.
    pub fn new(
        blocks: Vec<Block>,
        epsilon0: Epsilon0,
        relations: MultiplicativeRelations,
    ) -> Result<Self> {
        let spec = Self::relaxed(blocks, epsilon0, relations)?;
        for (i, w) in spec.blocks.windows(2).enumerate() {
            let n = i + 2;
            if w[1].l < w[0].l {
                return Err(Error::InvalidSpec(format!("l_{n} < l_{}", n - 1)));
            }
            if w[1].lambda >= w[0].lambda {
                return Err(Error::InvalidSpec(format!(
                    "lambda not strictly decreasing at n={n}"
                )));
            }
        }
        Ok(SequenceSpec {
            monotone: true,
            ..spec
        })
    }

    /// Only per-block checks (`l₁ = 1`, `lₙ ≥ 1`, `λₙ ∈ (0,1)`). Used for
    /// defect and certificate experiments on non-monotone families such as
    /// the constant sequence.
    pub fn relaxed(
        blocks: Vec<Block>,
        epsilon0: Epsilon0,
        relations: MultiplicativeRelations,
    ) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidSpec("no blocks".into()))?;
        if first.l != 1 {
            return Err(Error::InvalidSpec("l_1 must equal 1".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.l == 0 {
                return Err(Error::InvalidSpec(format!("l_{} must be positive", i + 1)));
            }
            if !b.lambda.is_positive() || b.lambda >= Rational::one() {
                return Err(Error::InvalidSpec(format!(
                    "lambda_{} = {} not in (0,1)",
                    i + 1,
                    b.lambda
                )));
            }
        }
        for (index, _, _) in relations.iter() {
            if index as usize > blocks.len() {
                return Err(Error::InvalidRelation {
                    index,
                    reason: "no such block".into(),
                });
            }
        }
        Ok(SequenceSpec {
            blocks,
            epsilon0,
            relations,
            monotone: false,
        })
    }

    /// `len` copies of `(l, λ)` after a leading `(1, λ)` block.
    pub fn constant(l: u32, lambda: Rational, len: usize) -> Result<Self> {
        let mut blocks = vec![Block::new(1, lambda.clone())];
        blocks.extend((1..len).map(|_| Block::new(l, lambda.clone())));
        Self::relaxed(blocks, Epsilon0::log2(), MultiplicativeRelations::none())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// 1-based block accessor.
    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i - 1]
    }

    /// Blocks `n+1..=m`.
    pub fn range(&self, n: usize, m: usize) -> Result<&[Block]> {
        if n > m || m > self.blocks.len() {
            return Err(Error::Validation {
                field: "m".into(),
                message: format!("range {n}..{m} outside 0..={}", self.blocks.len()),
            });
        }
        Ok(&self.blocks[n..m])
    }

    pub fn epsilon0(&self) -> &Epsilon0 {
        &self.epsilon0
    }

    pub fn relations(&self) -> &MultiplicativeRelations {
        &self.relations
    }

    pub fn comparator(&self, max_precision: u32) -> Comparator<'_> {
        Comparator::new(&self.relations, max_precision)
    }

    /// `log λᵢ` as a form on index `i`.
    pub fn log_lambda(&self, i: usize) -> LogLinearForm {
        LogLinearForm::term(i as u32, 1, &self.block(i).lambda).expect("validated lambda")
    }

    /// `Σ cᵢ·log λᵢ` over 1-based positions `offset+1, offset+2, …`.
    pub fn weighted_logs(&self, offset: usize, coeffs: &[i64]) -> LogLinearForm {
        let mut form = LogLinearForm::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if *c != 0 {
                let i = offset + k + 1;
                form = &form
                    + &LogLinearForm::term(i as u32, *c, &self.block(i).lambda)
                        .expect("validated lambda");
            }
        }
        form
    }

    /// `ν̂ᵢ(d) = C(2lᵢ,d)·λᵢ^d/(1+λᵢ)^{2lᵢ}`.
    pub fn nu_hat(&self, i: usize, digit: u32) -> Rational {
        let b = self.block(i);
        quotient_mass(b, digit)
    }

    pub fn check_digits(&self, digits: &[u32]) -> Result<()> {
        if digits.len() > self.blocks.len() {
            return Err(Error::InvalidDigits(format!(
                "depth {} exceeds the {} available blocks",
                digits.len(),
                self.blocks.len()
            )));
        }
        for (k, d) in digits.iter().enumerate() {
            let top = 2 * self.blocks[k].l;
            if *d > top {
                return Err(Error::InvalidDigits(format!(
                    "digit {d} at position {} exceeds 2l = {top}",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

pub fn quotient_mass(block: &Block, digit: u32) -> Rational {
    let two_l = 2 * block.l;
    if digit > two_l {
        return Rational::zero();
    }
    let one_plus = Rational::one() + &block.lambda;
    Rational::from_integer(binomial(two_l, digit)) * rpow(&block.lambda, digit as i64)
        / rpow(&one_plus, two_l as i64)
}

/// Cylinder `C(a₁,…,aₙ)` of the quotient space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientCylinder {
    digits: Vec<u32>,
}

impl QuotientCylinder {
    pub fn new(spec: &SequenceSpec, digits: Vec<u32>) -> Result<Self> {
        spec.check_digits(&digits)?;
        Ok(QuotientCylinder { digits })
    }

    pub fn whole_space() -> Self {
        QuotientCylinder { digits: Vec::new() }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }
}

/// `ν̂(C(a)) = Πᵢ ν̂ᵢ(aᵢ)`.
pub fn cylinder_measure(spec: &SequenceSpec, c: &QuotientCylinder) -> Rational {
    digits_measure(spec, c.digits())
}

pub(crate) fn digits_measure(spec: &SequenceSpec, digits: &[u32]) -> Rational {
    digits
        .iter()
        .enumerate()
        .map(|(k, d)| spec.nu_hat(k + 1, *d))
        .fold(Rational::one(), |acc, x| acc * x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LacunarityRow {
    pub n: usize,
    pub holds: bool,
    /// `Σ_{i≤n} lᵢλᵢ`.
    pub partial_sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecReport {
    pub rows: Vec<LacunarityRow>,
    pub partial_sum: Rational,
}

/// `-log λₙ + 2Σ_{i<n} lᵢ log λᵢ - ε₀`, scaled by the denominator of
/// `ε₀`'s scale, as an integer form.
pub fn lacunarity_margin(spec: &SequenceSpec, n: usize) -> LogLinearForm {
    let mut coeffs: Vec<i64> = spec.blocks[..n - 1]
        .iter()
        .map(|b| 2 * b.l as i64)
        .collect();
    coeffs.push(-1);
    let lhs = spec.weighted_logs(0, &coeffs);
    let eps = &spec.epsilon0;
    let q = eps.scale.denom().clone();
    let p = eps.scale.numer().clone();
    // q·lhs - p·log(1/base) = q·lhs + p·log(base)
    let eps_term = LogLinearForm::term(EPSILON_INDEX, p, &eps.base).expect("validated base");
    &lhs.scaled(&q) + &eps_term
}

/// Per-`n` lacunarity verdicts and the exact partial sums of `lₙλₙ`.
pub fn validate_spec(spec: &SequenceSpec, prefix: usize, max_precision: u32) -> Result<SpecReport> {
    if prefix > spec.len() {
        return Err(Error::Validation {
            field: "prefix".into(),
            message: format!("prefix {prefix} exceeds {} blocks", spec.len()),
        });
    }
    let cmp = spec.comparator(max_precision);
    let mut sum = Rational::zero();
    let mut rows = Vec::with_capacity(prefix);
    for n in 1..=prefix {
        let b = spec.block(n);
        sum += Rational::from_integer(b.l.into()) * &b.lambda;
        let holds = cmp.sign(&lacunarity_margin(spec, n))? == std::cmp::Ordering::Greater;
        rows.push(LacunarityRow {
            n,
            holds,
            partial_sum: sum.clone(),
        });
    }
    Ok(SpecReport {
        rows,
        partial_sum: sum,
    })
}

/// Masses of the fibres of the digit-sum map on `{0,1}^{2lₙ}`, by enumeration.
pub fn pushforward_masses(spec: &SequenceSpec, n: usize) -> Result<Vec<Rational>> {
    let b = spec.block(n);
    let bits = 2 * b.l;
    if bits > PUSHFORWARD_GUARD_BITS {
        return Err(Error::EnumerationTooLarge {
            size: format!("2^{bits}"),
            guard: 1 << PUSHFORWARD_GUARD_BITS,
        });
    }
    let p0 = Rational::one() / (Rational::one() + &b.lambda);
    let p1 = &b.lambda / (Rational::one() + &b.lambda);
    let mut masses = vec![Rational::zero(); bits as usize + 1];
    for word in 0u64..(1u64 << bits) {
        let mut mass = Rational::one();
        for bit in 0..bits {
            mass *= if word >> bit & 1 == 1 { &p1 } else { &p0 };
        }
        masses[word.count_ones() as usize] += mass;
    }
    Ok(masses)
}

/// Enumerates `{0,1}^{2lₙ}` and checks that the digit-sum pushforward is
/// `ν̂ₙ` and that the fibres are exactly the equal-measure classes.
pub fn quotient_pushforward_check(spec: &SequenceSpec, n: usize) -> Result<bool> {
    let masses = pushforward_masses(spec, n)?;
    let law_ok = masses
        .iter()
        .enumerate()
        .all(|(i, m)| *m == spec.nu_hat(n, i as u32));

    let b = spec.block(n);
    let bits = 2 * b.l;
    let p0 = Rational::one() / (Rational::one() + &b.lambda);
    let p1 = &b.lambda / (Rational::one() + &b.lambda);
    // measure value -> set of digit sums attaining it
    let mut classes: BTreeMap<Rational, std::collections::BTreeSet<u32>> = BTreeMap::new();
    for word in 0u64..(1u64 << bits) {
        let ones = word.count_ones();
        let mass = rpow(&p1, ones as i64) * rpow(&p0, (bits - ones) as i64);
        classes.entry(mass).or_default().insert(ones);
    }
    let classes_ok =
        classes.len() == bits as usize + 1 && classes.values().all(|sums| sums.len() == 1);
    Ok(law_ok && classes_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    pub(crate) fn toy2() -> SequenceSpec {
        SequenceSpec::new(
            vec![Block::new(1, ratio(1, 2)), Block::new(2, ratio(1, 32))],
            Epsilon0::log2(),
            MultiplicativeRelations::new([(2, ratio(1, 2), 5)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn masses_sum_to_one() {
        let spec = toy2();
        for n in 1..=2 {
            let total: Rational = (0..=2 * spec.block(n).l).map(|d| spec.nu_hat(n, d)).sum();
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn cylinder_measure_examples() {
        let spec = toy2();
        assert_eq!(cylinder_measure(&spec, &QuotientCylinder::whole_space()), int(1));
        let c1 = QuotientCylinder::new(&spec, vec![1]).unwrap();
        assert_eq!(cylinder_measure(&spec, &c1), ratio(4, 9));
        let c01 = QuotientCylinder::new(&spec, vec![0, 1]).unwrap();
        assert_eq!(
            cylinder_measure(&spec, &c01),
            ratio(4, 9) * ratio(131072, 1185921)
        );
        assert!(QuotientCylinder::new(&spec, vec![3]).is_err());
    }

    #[test]
    fn pushforward_by_enumeration() {
        let spec = toy2();
        assert_eq!(
            pushforward_masses(&spec, 1).unwrap(),
            vec![ratio(4, 9), ratio(4, 9), ratio(1, 9)]
        );
        assert!(quotient_pushforward_check(&spec, 1).unwrap());
        assert!(quotient_pushforward_check(&spec, 2).unwrap());
    }

    #[test]
    fn pushforward_guard() {
        let spec = SequenceSpec::constant(13, ratio(1, 2), 2).unwrap();
        assert!(matches!(
            quotient_pushforward_check(&spec, 2),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn validation_rules() {
        let eps = Epsilon0::log2;
        let none = MultiplicativeRelations::none;
        let same = vec![Block::new(1, ratio(1, 2)), Block::new(1, ratio(1, 2))];
        assert!(SequenceSpec::new(same.clone(), eps(), none()).is_err());
        assert!(SequenceSpec::relaxed(same, eps(), none()).is_ok());
        let bad_first = vec![Block::new(2, ratio(1, 2))];
        assert!(SequenceSpec::new(bad_first, eps(), none()).is_err());
        let unit = vec![Block::new(1, int(1))];
        assert!(SequenceSpec::relaxed(unit, eps(), none()).is_err());
        let shrinking = vec![Block::new(1, ratio(1, 2)), Block::new(2, ratio(1, 4)), Block::new(1, ratio(1, 8))];
        assert!(SequenceSpec::new(shrinking, eps(), none()).is_err());
    }

    #[test]
    fn toy2_lacunarity_and_partial_sums() {
        let report = validate_spec(&toy2(), 2, 256).unwrap();
        // -log(1/2) > log 2 fails (equality); n = 2: 3 log 2 > log 2.
        assert!(!report.rows[0].holds);
        assert!(report.rows[1].holds);
        assert_eq!(report.partial_sum, ratio(9, 16));
        assert_eq!(report.rows[0].partial_sum, ratio(1, 2));
        assert!(validate_spec(&toy2(), 3, 256).is_err());
    }

    #[test]
    fn fractional_epsilon() {
        let spec = SequenceSpec::new(
            vec![Block::new(1, ratio(1, 2))],
            Epsilon0::new(ratio(1, 2), ratio(1, 2)).unwrap(),
            MultiplicativeRelations::none(),
        )
        .unwrap();
        assert!(validate_spec(&spec, 1, 256).unwrap().rows[0].holds);
    }
}
