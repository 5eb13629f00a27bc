//! Residue-class binomial combinatorics.
//!
//! For a coordinate range with block sizes `lᵢ`, `I_a` is the set of tuples
//! `0 ≤ jᵢ ≤ lᵢ` with `Σ jᵢ ≡ a (mod 3)` and `P_r` the set of tuples
//! `0 ≤ pᵢ ≤ 2lᵢ` with `Σ pᵢ ≡ r`. `A_{a,b}(p̄)` sums `Π C(lᵢ,jᵢ)C(lᵢ,kᵢ)`
//! over `j̄ ∈ I_a`, `k̄ ∈ I_b`, `j̄ + k̄ = p̄`.
//!
//! Multiplying each conjugate pair `(u + εvX)(u + ε̄vX) = u² - uvX + v²X²`
//! (with `u = 1/(1+λ)`, `v = λ/(1+λ)`) before expanding keeps every
//! coefficient rational. The product over the range has coefficient
//! `D(p̄)·Π λᵢ^{pᵢ}/(1+λᵢ)^{2lᵢ}` at `X^p̄`, where `D = A_{same} - A_{mixed}`
//! on each residue. The six defect sums are then `2·Σ_{P_r}|coeff|` for a
//! same-class pair and `Σ_{P_r}|coeff|` for a mixed pair, and since the
//! product factorises per coordinate these are ℤ₃-graded convolutions of
//! per-coordinate triples.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{rpow, Rational};
use crate::product_spaces::{binomial, Block, SequenceSpec};

/// Guard on `Π (lᵢ+1)²` for brute-force class sums.
pub const CLASS_SUM_GUARD: u64 = 10_000_000;

/// Coefficients of `(u² - uvX + v²X²)^l`, lowest degree first.
pub fn conjugate_pair_power(l: u32, lambda: &Rational) -> Vec<Rational> {
    let one_plus = Rational::one() + lambda;
    let u = Rational::one() / &one_plus;
    let v = lambda / &one_plus;
    let factor = [&u * &u, -(&u * &v), &v * &v];
    let mut acc = vec![Rational::one()];
    for _ in 0..l {
        let mut next = vec![Rational::zero(); acc.len() + 2];
        for (i, a) in acc.iter().enumerate() {
            for (j, f) in factor.iter().enumerate() {
                next[i + j] += a * f;
            }
        }
        acc = next;
    }
    acc
}

/// `(1 - λ/(1+λ)²)^l`, the sum of absolute coefficients of
/// [`conjugate_pair_power`].
pub fn conjugate_pair_norm(l: u32, lambda: &Rational) -> Rational {
    let one_plus = Rational::one() + lambda;
    rpow(&(Rational::one() - lambda / (&one_plus * &one_plus)), l as i64)
}

/// `2·Π (1 - λᵢ/(1+λᵢ)²)^{lᵢ}` over a block range.
pub fn defect_bound(blocks: &[Block]) -> Rational {
    blocks
        .iter()
        .fold(Rational::from_integer(2.into()), |acc, b| {
            acc * conjugate_pair_norm(b.l, &b.lambda)
        })
}

/// Per-coordinate (or per-range) ℤ₃-graded sums of the conjugate-pair
/// coefficients: `abs(s) = Σ_{p≡s} |c_p|`, `signed(s) = Σ_{p≡s} c_p`.
///
/// Numerators are kept as integers over one shared denominator, so a
/// convolution is pure integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCoefficients {
    abs: [BigInt; 3],
    signed: [BigInt; 3],
    norm: BigInt,
    den: BigInt,
}

impl GradedCoefficients {
    /// Unit of the graded convolution (the empty range).
    pub fn one() -> Self {
        let unit = [BigInt::one(), BigInt::zero(), BigInt::zero()];
        GradedCoefficients {
            abs: unit.clone(),
            signed: unit,
            norm: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn coordinate(l: u32, lambda: &Rational) -> Self {
        let (p, q) = (lambda.numer(), lambda.denom());
        let factor = [q * q, -(p * q), p * p];
        let mut acc = vec![BigInt::one()];
        for _ in 0..l {
            let mut next = vec![BigInt::zero(); acc.len() + 2];
            for (i, a) in acc.iter().enumerate() {
                for (j, f) in factor.iter().enumerate() {
                    next[i + j] += a * f;
                }
            }
            acc = next;
        }
        let mut out = GradedCoefficients {
            abs: Default::default(),
            signed: Default::default(),
            norm: num_traits::pow(p * p + p * q + q * q, l as usize),
            den: num_traits::pow(p + q, 2 * l as usize),
        };
        for (i, c) in acc.iter().enumerate() {
            out.abs[i % 3] += c.abs();
            out.signed[i % 3] += c;
        }
        out
    }

    pub fn convolve(&self, other: &Self) -> Self {
        fn conv(x: &[BigInt; 3], y: &[BigInt; 3]) -> [BigInt; 3] {
            let mut z: [BigInt; 3] = Default::default();
            for a in 0..3 {
                for b in 0..3 {
                    z[(a + b) % 3] += &x[a] * &y[b];
                }
            }
            z
        }
        GradedCoefficients {
            abs: conv(&self.abs, &other.abs),
            signed: conv(&self.signed, &other.signed),
            norm: &self.norm * &other.norm,
            den: &self.den * &other.den,
        }
    }

    pub fn for_range(blocks: &[Block]) -> Self {
        blocks.iter().fold(Self::one(), |acc, b| {
            acc.convolve(&Self::coordinate(b.l, &b.lambda))
        })
    }

    /// `Σ_{p≡s} |c_p|` for residue `s`.
    pub fn abs(&self, s: u8) -> Rational {
        Rational::new(self.abs[s as usize % 3].clone(), self.den.clone())
    }

    /// `Σ_{p≡s} c_p` for residue `s`.
    pub fn signed(&self, s: u8) -> Rational {
        Rational::new(self.signed[s as usize % 3].clone(), self.den.clone())
    }

    /// `2·Π (1 - λᵢ/(1+λᵢ)²)^{lᵢ}` over the convolved coordinates.
    pub fn bound(&self) -> Rational {
        Rational::new(&self.norm * 2, self.den.clone())
    }

    /// Value of the product polynomial at all `Xᵢ = 1`.
    pub fn value_at_one(&self) -> Rational {
        Rational::new(self.signed.iter().sum(), self.den.clone())
    }
}

/// An unordered pair of residue classes `{a, b}` indexing one defect sum
/// over `P_{a+b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassPair {
    a: u8,
    b: u8,
}

impl ClassPair {
    pub const ALL: [ClassPair; 6] = [
        ClassPair { a: 0, b: 0 },
        ClassPair { a: 1, b: 1 },
        ClassPair { a: 2, b: 2 },
        ClassPair { a: 1, b: 2 },
        ClassPair { a: 0, b: 2 },
        ClassPair { a: 0, b: 1 },
    ];

    pub fn new(a: u8, b: u8) -> Self {
        assert!(a < 3 && b < 3, "residues are 0, 1, 2");
        ClassPair {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn classes(&self) -> (u8, u8) {
        (self.a, self.b)
    }

    /// Residue `r` of the exponent tuples `P_r` this pair lands in.
    pub fn residue(&self) -> u8 {
        (self.a + self.b) % 3
    }

    pub fn is_same_class(&self) -> bool {
        self.a == self.b
    }

    /// `|3A - V| = multiplicity · |D|`.
    pub fn multiplicity(&self) -> u32 {
        if self.is_same_class() {
            2
        } else {
            1
        }
    }

    /// The three pairs `{s, b}` used to approximate a cylinder whose moves
    /// range over `I_s`.
    pub fn with_class(s: u8) -> [ClassPair; 3] {
        [
            ClassPair::new(s, 0),
            ClassPair::new(s, 1),
            ClassPair::new(s, 2),
        ]
    }
}

impl fmt::Display for ClassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}xI{}/P{}", self.a, self.b, self.residue())
    }
}

impl std::str::FromStr for ClassPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let parse = |c: u8| match c {
            b'0'..=b'2' => Some(c - b'0'),
            _ => None,
        };
        let ok = match bytes {
            [a, b] => parse(*a).zip(parse(*b)),
            [b'I', a, b'x', b'I', b, ..] => parse(*a).zip(parse(*b)),
            _ => None,
        };
        ok.map(|(a, b)| ClassPair::new(a, b))
            .ok_or_else(|| Error::Validation {
                field: "variant".into(),
                message: format!("unrecognised class pair `{s}`"),
            })
    }
}

/// Weighted defect for one class pair over a graded triple.
pub fn defect_from_graded(graded: &GradedCoefficients, pair: ClassPair) -> Rational {
    graded.abs(pair.residue()) * Rational::from_integer(pair.multiplicity().into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub pair: ClassPair,
    pub value: Rational,
    pub bound: Rational,
}

/// Exact defect over blocks `n+1..=m` with its bound `2·Π(1-λᵢ/(1+λᵢ)²)^{lᵢ}`.
/// The empty range gives `0` (no coefficients away from the trivial term
/// count as defect) and bound `2`.
pub fn defect(spec: &SequenceSpec, n: usize, m: usize, pair: ClassPair) -> Result<Defect> {
    let blocks = spec.range(n, m)?;
    let bound = defect_bound(blocks);
    if blocks.is_empty() {
        return Ok(Defect {
            pair,
            value: Rational::zero(),
            bound,
        });
    }
    let graded = GradedCoefficients::for_range(blocks);
    Ok(Defect {
        pair,
        value: defect_from_graded(&graded, pair),
        bound,
    })
}

/// Row of a decay table: all six defects over `n+1..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRow {
    pub m: usize,
    pub defects: Vec<Defect>,
}

/// Defects for every `m` in `n+1..=m_max`, sharing one running convolution.
pub fn defect_profile(spec: &SequenceSpec, n: usize, m_max: usize) -> Result<Vec<DefectRow>> {
    spec.range(n, m_max)?;
    let mut graded = GradedCoefficients::one();
    let mut rows = Vec::with_capacity(m_max.saturating_sub(n));
    for m in n + 1..=m_max {
        let b = spec.block(m);
        graded = graded.convolve(&GradedCoefficients::coordinate(b.l, &b.lambda));
        let bound = graded.bound();
        let abs: Vec<Rational> = (0..3).map(|s| graded.abs(s)).collect();
        let defects = ClassPair::ALL
            .iter()
            .map(|pair| Defect {
                pair: *pair,
                value: &abs[pair.residue() as usize]
                    * Rational::from_integer(pair.multiplicity().into()),
                bound: bound.clone(),
            })
            .collect();
        rows.push(DefectRow { m, defects });
    }
    Ok(rows)
}

/// `A_{a,b}(p̄)` for all residue pairs, plus `Π C(2lᵢ,pᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClassTable {
    pub entries: [[BigInt; 3]; 3],
    pub vandermonde: BigInt,
}

impl ResidueClassTable {
    pub fn get(&self, a: u8, b: u8) -> &BigInt {
        &self.entries[a as usize][b as usize]
    }

    pub fn total(&self) -> BigInt {
        self.entries.iter().flatten().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|a| (0..3).all(|b| self.entries[a][b] == self.entries[b][a]))
    }
}

fn check_range(ls: &[u32], p: &[u32]) -> Result<()> {
    if ls.len() != p.len() {
        return Err(Error::InvalidDigits("exponent tuple length mismatch".into()));
    }
    if let Some((i, _)) = ls.iter().zip(p).enumerate().find(|(_, (l, p))| **p > 2 * **l) {
        return Err(Error::InvalidDigits(format!("p[{i}] exceeds 2l")));
    }
    let size: u128 = ls.iter().map(|l| (*l as u128 + 1).pow(2)).product();
    if size > CLASS_SUM_GUARD as u128 {
        return Err(Error::EnumerationTooLarge {
            size: size.to_string(),
            guard: CLASS_SUM_GUARD,
        });
    }
    Ok(())
}

/// Brute-force class sums for one exponent tuple.
pub fn class_sums(ls: &[u32], p: &[u32]) -> Result<ResidueClassTable> {
    check_range(ls, p)?;
    let mut entries: [[BigInt; 3]; 3] = Default::default();
    let mut j = vec![0u32; ls.len()];
    'outer: loop {
        if j.iter().zip(p).zip(ls).all(|((j, p), l)| j <= p && p - j <= *l) {
            let mut weight = BigInt::one();
            let (mut sj, mut sk) = (0u64, 0u64);
            for ((ji, pi), li) in j.iter().zip(p).zip(ls) {
                let ki = pi - ji;
                weight *= binomial(*li, *ji) * binomial(*li, ki);
                sj += *ji as u64;
                sk += ki as u64;
            }
            entries[(sj % 3) as usize][(sk % 3) as usize] += weight;
        }
        for i in 0..j.len() {
            if j[i] < ls[i] {
                j[i] += 1;
                continue 'outer;
            }
            j[i] = 0;
        }
        break;
    }
    let vandermonde = ls
        .iter()
        .zip(p)
        .map(|(l, p)| binomial(2 * l, *p))
        .product();
    Ok(ResidueClassTable {
        entries,
        vandermonde,
    })
}

/// The residue-split identity for `p̄ ∈ P_r`:
/// `A_{s,s} + 2·A_{a,b} = Π C(2lᵢ,pᵢ)` where `2s ≡ r` and `{a,b}` is the
/// remaining pair with `a + b ≡ r`, `a ≠ b`.
pub fn residue_split(table: &ResidueClassTable, r: u8) -> (BigInt, BigInt) {
    let s = (2 * r) % 3; // 2s ≡ r (mod 3) since 2·2 ≡ 1
    let a = (s + 1) % 3;
    let b = (s + 2) % 3;
    debug_assert_eq!((a + b) % 3, r);
    let lhs = table.get(s, s) + BigInt::from(2) * table.get(a, b);
    (lhs, table.vandermonde.clone())
}

pub fn vandermonde_split_check(ls: &[u32], p: &[u32]) -> Result<bool> {
    let table = class_sums(ls, p)?;
    let r = (p.iter().map(|x| *x as u64).sum::<u64>() % 3) as u8;
    let (lhs, rhs) = residue_split(&table, r);
    Ok(lhs == rhs && table.total() == table.vandermonde && table.is_symmetric())
}

/// Sparse polynomial in variables `X_{n+1}, …, X_m` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `Σ_k coeffs[k]·X_var^k`.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        assert_eq!(exponents.len(), self.nvars);
        let slot = self.terms.entry(exponents).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// `‖P‖ = Σ |coefficients|`.
    pub fn norm(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = BTreeMap::<Vec<u32>, Rational>::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_default() += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        SparsePoly {
            nvars: self.nvars,
            terms: out,
        }
    }

    /// `Π_i (u_i² - u_i v_i X_i + v_i² X_i²)^{l_i}` over a block range.
    pub fn conjugate_pair_product(blocks: &[Block]) -> Self {
        let n = blocks.len();
        blocks
            .iter()
            .enumerate()
            .fold(Self::constant(n, Rational::one()), |acc, (i, b)| {
                acc.mul(&Self::univariate(n, i, &conjugate_pair_power(b.l, &b.lambda)))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};
    use proptest::prelude::*;

    /// Expand the conjugate pair over ℤ[ε]/(ε²+ε+1) directly, representing
    /// `x + yε` as `(x, y)`; independent of the real reduction.
    fn conjugate_pair_via_eisenstein(l: u32, lambda: &Rational) -> Vec<Rational> {
        type E = (Rational, Rational);
        fn mul(a: &E, b: &E) -> E {
            // ε² = -1 - ε
            let xx = &a.0 * &b.0;
            let yy = &a.1 * &b.1;
            (&xx - &yy, &a.0 * &b.1 + &a.1 * &b.0 - &yy)
        }
        fn poly_mul(p: &[E], q: &[E]) -> Vec<E> {
            let mut out = vec![(Rational::zero(), Rational::zero()); p.len() + q.len() - 1];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    let c = mul(a, b);
                    out[i + j].0 += c.0;
                    out[i + j].1 += c.1;
                }
            }
            out
        }
        let u = Rational::one() / (Rational::one() + lambda);
        let v = lambda / (Rational::one() + lambda);
        let eps_factor = vec![(u.clone(), Rational::zero()), (Rational::zero(), v.clone())];
        // ε̄ = ε² = -1 - ε
        let bar_factor = vec![(u, Rational::zero()), (-&v, -&v)];
        let mut acc = vec![(Rational::one(), Rational::zero())];
        for _ in 0..l {
            acc = poly_mul(&acc, &eps_factor);
            acc = poly_mul(&acc, &bar_factor);
        }
        acc.into_iter()
            .map(|(x, y)| {
                assert!(y.is_zero(), "conjugate product must be real");
                x
            })
            .collect()
    }

    #[test]
    fn conjugate_pair_examples() {
        let half = ratio(1, 2);
        let c = conjugate_pair_power(1, &half);
        assert_eq!(c, vec![ratio(4, 9), ratio(-2, 9), ratio(1, 9)]);
        let norm: Rational = c.iter().map(|x| x.abs()).sum();
        assert_eq!(norm, ratio(7, 9));
        assert_eq!(conjugate_pair_norm(1, &half), ratio(7, 9));
        // value at X = 1 is (1 - λ + λ²)/(1+λ)², not the norm
        let at_one: Rational = c.iter().sum();
        assert_eq!(at_one, ratio(1, 3));

        let sq = conjugate_pair_power(2, &half);
        let p1 = SparsePoly::univariate(1, 0, &c);
        assert_eq!(SparsePoly::univariate(1, 0, &sq), p1.mul(&p1));
    }

    #[test]
    fn conjugate_pair_matches_complex_expansion() {
        for l in 1..=4 {
            for lam in [ratio(1, 2), ratio(1, 3), ratio(2, 7)] {
                assert_eq!(
                    conjugate_pair_power(l, &lam),
                    conjugate_pair_via_eisenstein(l, &lam)
                );
                let norm: Rational = conjugate_pair_power(l, &lam).iter().map(|x| x.abs()).sum();
                assert_eq!(norm, conjugate_pair_norm(l, &lam));
            }
        }
    }

    #[test]
    fn class_sum_examples() {
        let t = class_sums(&[2], &[2]).unwrap();
        assert_eq!(*t.get(0, 2), BigInt::from(1));
        assert_eq!(*t.get(1, 1), BigInt::from(4));
        assert_eq!(*t.get(2, 0), BigInt::from(1));
        assert_eq!(t.total(), BigInt::from(6));

        let t = class_sums(&[1], &[0]).unwrap();
        assert_eq!(*t.get(0, 0), BigInt::from(1));
        assert_eq!(t.total(), BigInt::from(1));

        let t = class_sums(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(t.total(), BigInt::from(4));
        assert_eq!(t.vandermonde, BigInt::from(4));
        // (j,k) ∈ {(00,11),(01,10),(10,01),(11,00)}
        assert_eq!(*t.get(0, 2), BigInt::from(1));
        assert_eq!(*t.get(2, 0), BigInt::from(1));
        assert_eq!(*t.get(1, 1), BigInt::from(2));
    }

    #[test]
    fn split_identity_examples() {
        let t = class_sums(&[1], &[1]).unwrap();
        assert_eq!(residue_split(&t, 1), (BigInt::from(2), BigInt::from(2)));
        let t = class_sums(&[2], &[2]).unwrap();
        assert_eq!(residue_split(&t, 2), (BigInt::from(6), BigInt::from(6)));
        assert!(vandermonde_split_check(&[1], &[0]).unwrap());
        assert!(vandermonde_split_check(&[3, 2, 1], &[4, 1, 2]).unwrap());
        assert!(class_sums(&[1], &[3]).is_err());
    }

    #[test]
    fn class_sum_guard() {
        assert!(matches!(
            class_sums(&[99, 99, 99, 99], &[0, 0, 0, 0]),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn single_coordinate_defects() {
        let spec = SequenceSpec::constant(1, ratio(1, 2), 2).unwrap();
        let d = defect(&spec, 1, 2, ClassPair::new(0, 0)).unwrap();
        assert_eq!(d.value, ratio(8, 9));
        assert_eq!(d.bound, ratio(14, 9));
        let d = defect(&spec, 1, 2, ClassPair::new(0, 1)).unwrap();
        assert_eq!(d.value, ratio(2, 9));
        let d = defect(&spec, 1, 1, ClassPair::new(0, 0)).unwrap();
        assert_eq!((d.value, d.bound), (int(0), int(2)));
    }

    #[test]
    fn graded_signed_sums_evaluate_at_one() {
        let blocks = [Block::new(1, ratio(1, 2)), Block::new(2, ratio(1, 5))];
        let g = GradedCoefficients::for_range(&blocks);
        let poly = SparsePoly::conjugate_pair_product(&blocks);
        let at_one: Rational = poly.terms().values().sum();
        assert_eq!(g.value_at_one(), at_one);
        assert_eq!((0..3).map(|s| g.abs(s)).sum::<Rational>(), poly.norm());
    }

    #[test]
    fn profile_matches_single_defects() {
        let spec = SequenceSpec::constant(2, ratio(1, 3), 6).unwrap();
        let rows = defect_profile(&spec, 2, 6).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            for d in &row.defects {
                assert_eq!(*d, defect(&spec, 2, row.m, d.pair).unwrap());
            }
        }
    }

    #[test]
    fn class_pair_parsing() {
        assert_eq!("12".parse::<ClassPair>().unwrap(), ClassPair::new(2, 1));
        assert_eq!("I0xI2/P2".parse::<ClassPair>().unwrap(), ClassPair::new(0, 2));
        assert!("33".parse::<ClassPair>().is_err());
        assert_eq!(ClassPair::new(1, 1).to_string(), "I1xI1/P2");
    }

    fn small_poly() -> impl Strategy<Value = SparsePoly> {
        proptest::collection::vec(((0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..6).prop_map(|ts| {
            let mut p = SparsePoly::zero(2);
            for ((a, b), n, d) in ts {
                p.add_term(vec![a, b], ratio(n, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn norm_is_submultiplicative(p in small_poly(), q in small_poly()) {
            prop_assert!(p.mul(&q).norm() <= p.norm() * q.norm());
        }

        #[test]
        fn vandermonde_total(ls in proptest::collection::vec(1u32..4, 1..4), seed in any::<u64>()) {
            let p: Vec<u32> = ls.iter().enumerate()
                .map(|(i, l)| ((seed >> (8 * i)) as u32) % (2 * l + 1))
                .collect();
            let t = class_sums(&ls, &p).unwrap();
            prop_assert_eq!(t.total(), t.vandermonde.clone());
            prop_assert!(t.is_symmetric());
        }

        #[test]
        fn bound_nonincreasing(l in 1u32..4, num in 1i64..9) {
            let lam = ratio(num, 10);
            let spec = SequenceSpec::constant(l, lam, 6).unwrap();
            let rows = defect_profile(&spec, 1, 6).unwrap();
            for w in rows.windows(2) {
                prop_assert!(w[1].defects[0].bound <= w[0].defects[0].bound);
            }
            for row in &rows {
                for d in &row.defects {
                    prop_assert!(d.value <= d.bound);
                }
            }
        }
    }
}
