//! Exact rationals and certified arithmetic on integer combinations of
//! logarithms of rationals.
//!
//! A [`LogLinearForm`] is a finite sum `Σ cᵢ·log λᵢ` with integer `cᵢ` and
//! rational `λᵢ ∈ (0,1)`. Equality of forms is decided syntactically after
//! rewriting through declared [`MultiplicativeRelations`]; the sign of a
//! nonzero difference is decided by outward-rounded interval evaluation of
//! the logarithms.
//!
//! The logarithm kernel uses `ln y = e·ln 2 + 2·atanh((m-1)/(m+1))` with
//! `y = 2^e·m`, `m ∈ [1,2)`, so the atanh argument never exceeds `1/3` and
//! the series tail is bounded by `u^(2K+1)·9/(8(2K+1))`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default cap for certified comparisons, in bits.
pub const DEFAULT_MAX_PRECISION: u32 = 256;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `base^exp` for a possibly negative exponent.
pub fn rpow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Interval {
        let c = Rational::from_integer(c.clone());
        if c.is_negative() {
            Interval {
                lo: &self.hi * &c,
                hi: &self.lo * &c,
            }
        } else {
            Interval {
                lo: &self.lo * &c,
                hi: &self.hi * &c,
            }
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn bit_length(x: &BigInt) -> u64 {
    x.bits()
}

/// Rigorous enclosure of `atanh(u)` for `0 <= u <= 1/3` with width at most
/// about `2^-target`.
fn atanh_enclosure(u: &Rational, target: u32) -> Interval {
    debug_assert!(!u.is_negative() && u <= &ratio(1, 3));
    if u.is_zero() {
        return Interval::point(Rational::zero());
    }
    // 3^-(2K+1) <= 2^-(target+2)
    let terms = (((target as f64 + 2.0) / 3f64.log2() - 1.0) / 2.0).ceil().max(1.0) as u32 + 1;
    let work = target + 4 + 2 * (32 - terms.leading_zeros());
    let scale = pow2(work);
    let u2 = u * u;
    let (n2, d2) = (u2.numer().clone(), u2.denom().clone());

    let scaled = u * Rational::from_integer(scale.clone());
    let mut pw_lo = scaled.floor().to_integer();
    let mut pw_hi = scaled.ceil().to_integer();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    for k in 0..terms {
        let odd = BigInt::from(2 * k + 1);
        sum_lo += pw_lo.div_floor(&odd);
        sum_hi += ceil_div(&pw_hi, &odd);
        pw_lo = (&pw_lo * &n2).div_floor(&d2);
        pw_hi = ceil_div(&(&pw_hi * &n2), &d2);
    }
    // Tail Σ_{k>=K} u^(2k+1)/(2k+1) <= u^(2K+1) / ((2K+1)(1-u²)) and 1/(1-u²) <= 9/8.
    let tail_den = BigInt::from(8 * (2 * terms + 1));
    sum_hi += ceil_div(&(&pw_hi * BigInt::from(9)), &tail_den);

    let s = Rational::from_integer(scale);
    Interval {
        lo: Rational::from_integer(sum_lo) / &s,
        hi: Rational::from_integer(sum_hi) / &s,
    }
}

thread_local! {
    static LN_CACHE: RefCell<HashMap<(Rational, u32), Interval>> = RefCell::new(HashMap::new());
}

/// Enclosure of `ln x` for rational `x > 0` with width at most `2^-precision`.
pub fn ln_enclosure(x: &Rational, precision: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive rational");
    if x.is_one() {
        return Interval::point(Rational::zero());
    }
    if x < &Rational::one() {
        let inv = ln_enclosure(&x.recip(), precision);
        return Interval {
            lo: -inv.hi,
            hi: -inv.lo,
        };
    }
    let key = (x.clone(), precision);
    if let Some(hit) = LN_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let bound = Rational::new(BigInt::one(), pow2(precision));
    let mut extra = 2u32;
    let result = loop {
        let candidate = ln_above_one(x, precision + extra);
        if candidate.width() <= bound {
            break candidate;
        }
        extra += 8;
    };
    LN_CACHE.with(|c| c.borrow_mut().insert(key, result.clone()));
    result
}

fn ln_above_one(y: &Rational, target: u32) -> Interval {
    let e0 = bit_length(y.numer()) as i64 - bit_length(y.denom()) as i64;
    let mut e = e0;
    if y < &rpow(&int(2), e) {
        e -= 1;
    }
    let m = y / rpow(&int(2), e);
    debug_assert!(m >= int(1) && m < int(2));
    let e_bits = 64 - (e.unsigned_abs()).leading_zeros();
    let mut total = Interval::point(Rational::zero());
    if e != 0 {
        let ln2 = atanh_enclosure(&ratio(1, 3), target + e_bits + 2).scale(&BigInt::from(2));
        total = total.add(&ln2.scale(&BigInt::from(e)));
    }
    if !m.is_one() {
        let u = (&m - int(1)) / (&m + int(1));
        total = total.add(&atanh_enclosure(&u, target + 2).scale(&BigInt::from(2)));
    }
    total
}

/// Enclosure of `Σ c·ln(atom)` with width at most `2^-precision`.
fn atoms_enclosure(atoms: &BTreeMap<Rational, BigInt>, precision: u32) -> Interval {
    let weight: BigInt = atoms.values().map(|c| c.abs()).sum();
    let per_atom = precision + bit_length(&weight) as u32 + 1;
    atoms
        .iter()
        .fold(Interval::point(Rational::zero()), |acc, (atom, c)| {
            acc.add(&ln_enclosure(atom, per_atom).scale(c))
        })
}

/// Exact test of `Σ c·ln(atom) = 0`, i.e. `Π atom^c = 1`, when exponents are small.
fn atoms_exactly_zero(atoms: &BTreeMap<Rational, BigInt>) -> Option<bool> {
    let mut prod = Rational::one();
    for (atom, c) in atoms {
        let e = c.to_i64().filter(|e| e.unsigned_abs() <= 1 << 16)?;
        prod *= rpow(atom, e);
    }
    Some(prod.is_one())
}

/// Finite integer combination `Σ cᵢ·log λᵢ`, with `λᵢ ∈ (0,1)` rational.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogLinearForm {
    coeffs: BTreeMap<u32, BigInt>,
    basis: BTreeMap<u32, Rational>,
}

impl LogLinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coeff · log lambda`, stored under `index`.
    pub fn term(index: u32, coeff: impl Into<BigInt>, lambda: &Rational) -> Result<Self> {
        if !lambda.is_positive() || lambda >= &Rational::one() {
            return Err(Error::BasisOutOfRange {
                index,
                value: lambda.to_string(),
            });
        }
        let coeff = coeff.into();
        let mut form = Self::zero();
        if !coeff.is_zero() {
            form.coeffs.insert(index, coeff);
            form.basis.insert(index, lambda.clone());
        }
        Ok(form)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, index: u32) -> BigInt {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, BigInt> {
        &self.coeffs
    }

    pub fn basis_value(&self, index: u32) -> Option<&Rational> {
        self.basis.get(&index)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            let lambda = &other.basis[idx];
            match out.basis.get(idx) {
                Some(v) if v != lambda => return Err(Error::BasisConflict { index: *idx }),
                _ => {}
            }
            let entry = out.coeffs.entry(*idx).or_default();
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(idx);
                out.basis.remove(idx);
            } else {
                out.basis.insert(*idx, lambda.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        LogLinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (*i, c * factor))
                .collect(),
            basis: self.basis.clone(),
        }
    }

    /// Coefficients keyed by basis value, merging indices that share a value.
    fn plain_atoms(&self) -> BTreeMap<Rational, BigInt> {
        let mut atoms: BTreeMap<Rational, BigInt> = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            *atoms.entry(self.basis[idx].clone()).or_default() += c;
        }
        atoms.retain(|_, c| !c.is_zero());
        atoms
    }

    /// Floating-point approximation, for display only.
    pub fn approx(&self) -> f64 {
        atoms_enclosure(&self.plain_atoms(), 60).midpoint_f64()
    }
}

impl Neg for &LogLinearForm {
    type Output = LogLinearForm;
    fn neg(self) -> LogLinearForm {
        LogLinearForm {
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, -c)).collect(),
            basis: self.basis.clone(),
        }
    }
}

impl Neg for LogLinearForm {
    type Output = LogLinearForm;
    fn neg(self) -> LogLinearForm {
        -&self
    }
}

/// Panics if the operands assign different basis values to one index.
impl Add for &LogLinearForm {
    type Output = LogLinearForm;
    fn add(self, rhs: &LogLinearForm) -> LogLinearForm {
        self.checked_add(rhs).expect("conflicting basis values")
    }
}

/// Panics if the operands assign different basis values to one index.
impl Sub for &LogLinearForm {
    type Output = LogLinearForm;
    fn sub(self, rhs: &LogLinearForm) -> LogLinearForm {
        self.checked_sub(rhs).expect("conflicting basis values")
    }
}

impl fmt::Display for LogLinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.coeffs.iter().enumerate() {
            let sep = match (n, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{}*log({})", c.abs(), self.basis[idx])?;
        }
        Ok(())
    }
}

/// Certified enclosure of a form's value: a dyadic interval
/// `[F/2^p, (F+1)/2^p]`, or `[0,0]` for an exactly vanishing form.
///
/// Results at increasing precision are nested, with `F = floor(value·2^p)`.
pub fn eval_interval(form: &LogLinearForm, precision: u32) -> Interval {
    let atoms = form.plain_atoms();
    if atoms.is_empty() || atoms_exactly_zero(&atoms) == Some(true) {
        return Interval::point(Rational::zero());
    }
    let grid = Rational::from_integer(pow2(precision));
    let mut work = precision + 4;
    loop {
        let tight = atoms_enclosure(&atoms, work);
        let lo = (&tight.lo * &grid).floor().to_integer();
        let hi = (&tight.hi * &grid).floor().to_integer();
        if lo == hi {
            return Interval {
                lo: Rational::from_integer(lo.clone()) / &grid,
                hi: Rational::from_integer(lo + 1) / &grid,
            };
        }
        if work > precision + 4096 {
            // only reachable for astronomically large exponents
            return tight;
        }
        work += 16;
    }
}

/// Declarations `λ_index = base^exponent` making rationally dependent bases
/// exactly comparable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicativeRelations {
    decls: BTreeMap<u32, (Rational, u32)>,
}

impl MultiplicativeRelations {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(decls: impl IntoIterator<Item = (u32, Rational, u32)>) -> Result<Self> {
        let mut out = Self::default();
        for (index, base, exponent) in decls {
            out.declare(index, base, exponent)?;
        }
        Ok(out)
    }

    pub fn declare(&mut self, index: u32, base: Rational, exponent: u32) -> Result<()> {
        if !base.is_positive() || base >= Rational::one() {
            return Err(Error::InvalidRelation {
                index,
                reason: format!("base {base} not in (0,1)"),
            });
        }
        if exponent == 0 {
            return Err(Error::InvalidRelation {
                index,
                reason: "exponent must be positive".into(),
            });
        }
        if self.decls.insert(index, (base, exponent)).is_some() {
            return Err(Error::InvalidRelation {
                index,
                reason: "declared twice".into(),
            });
        }
        Ok(())
    }

    pub fn get(&self, index: u32) -> Option<&(Rational, u32)> {
        self.decls.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational, u32)> {
        self.decls.iter().map(|(i, (b, e))| (*i, b, *e))
    }

    /// Rewrites a form over canonical atoms (declared bases, or the basis
    /// value itself when undeclared). Zero coefficients are dropped.
    pub fn rewrite(&self, form: &LogLinearForm) -> Result<BTreeMap<Rational, BigInt>> {
        let mut atoms: BTreeMap<Rational, BigInt> = BTreeMap::new();
        for (idx, c) in &form.coeffs {
            let lambda = &form.basis[idx];
            match self.decls.get(idx) {
                Some((base, e)) => {
                    if &rpow(base, *e as i64) != lambda {
                        return Err(Error::InvalidRelation {
                            index: *idx,
                            reason: format!("{base}^{e} != {lambda}"),
                        });
                    }
                    *atoms.entry(base.clone()).or_default() += c * BigInt::from(*e);
                }
                None => *atoms.entry(lambda.clone()).or_default() += c,
            }
        }
        atoms.retain(|_, c| !c.is_zero());
        Ok(atoms)
    }
}

/// Certified comparison of `a` and `b`.
///
/// `Equal` only when the rewritten coefficient vectors coincide; otherwise
/// the sign is certified by interval refinement up to `max_precision` bits.
pub fn compare(
    a: &LogLinearForm,
    b: &LogLinearForm,
    relations: &MultiplicativeRelations,
    max_precision: u32,
) -> Result<Ordering> {
    Comparator::new(relations, max_precision).compare(a, b)
}

/// A form prepared for repeated comparisons: rewritten atoms plus a cached
/// coarse enclosure.
#[derive(Clone, Debug)]
pub struct SortKey {
    atoms: BTreeMap<Rational, BigInt>,
    coarse: Interval,
}

/// Comparison context bundling the relations and the precision cap.
#[derive(Clone, Copy, Debug)]
pub struct Comparator<'a> {
    relations: &'a MultiplicativeRelations,
    max_precision: u32,
}

impl<'a> Comparator<'a> {
    pub fn new(relations: &'a MultiplicativeRelations, max_precision: u32) -> Self {
        Comparator {
            relations,
            max_precision: max_precision.max(1),
        }
    }

    pub fn relations(&self) -> &'a MultiplicativeRelations {
        self.relations
    }

    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }

    fn sign_of_atoms(&self, atoms: &BTreeMap<Rational, BigInt>) -> Result<Ordering> {
        if atoms.is_empty() {
            return Ok(Ordering::Equal);
        }
        let mut p = 32.min(self.max_precision);
        loop {
            let enc = atoms_enclosure(atoms, p);
            if enc.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if enc.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if p >= self.max_precision {
                return Err(Error::Undecided { precision: p });
            }
            p = (2 * p).min(self.max_precision);
        }
    }

    /// Sign of a form relative to zero.
    pub fn sign(&self, form: &LogLinearForm) -> Result<Ordering> {
        self.sign_of_atoms(&self.relations.rewrite(form)?)
    }

    pub fn compare(&self, a: &LogLinearForm, b: &LogLinearForm) -> Result<Ordering> {
        self.sign(&a.checked_sub(b)?)
    }

    pub fn key(&self, form: &LogLinearForm) -> Result<SortKey> {
        let atoms = self.relations.rewrite(form)?;
        let coarse = atoms_enclosure(&atoms, 48);
        Ok(SortKey { atoms, coarse })
    }

    pub fn cmp_keys(&self, a: &SortKey, b: &SortKey) -> Result<Ordering> {
        if a.coarse.hi < b.coarse.lo {
            return Ok(Ordering::Less);
        }
        if a.coarse.lo > b.coarse.hi {
            return Ok(Ordering::Greater);
        }
        let mut diff = a.atoms.clone();
        for (atom, c) in &b.atoms {
            *diff.entry(atom.clone()).or_default() -= c;
        }
        diff.retain(|_, c| !c.is_zero());
        self.sign_of_atoms(&diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Rational {
        ratio(1, 2)
    }

    /// Independent oracle: ln 2 = Σ_{k>=1} 1/(k·2^k), tail after K terms < 2^-K.
    fn ln2_oracle(terms: u32) -> Interval {
        let mut s = Rational::zero();
        for k in 1..=terms {
            s += Rational::new(BigInt::one(), BigInt::from(k) * pow2(k));
        }
        Interval {
            hi: &s + Rational::new(BigInt::one(), pow2(terms)),
            lo: s,
        }
    }

    #[test]
    fn zero_form_interval() {
        let iv = eval_interval(&LogLinearForm::zero(), 10);
        assert!(iv.contains(&Rational::zero()));
        assert!(iv.width() <= ratio(1, 1024));
    }

    #[test]
    fn log_half_matches_independent_series() {
        let form = LogLinearForm::term(1, 1, &half()).unwrap();
        let iv = eval_interval(&form, 20);
        assert!(iv.width() <= ratio(1, 1 << 20));
        let oracle = ln2_oracle(80);
        // -ln 2 lies in both
        assert!(iv.lo <= -&oracle.lo && -&oracle.hi <= iv.hi);
        assert!((iv.midpoint_f64() + std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn seven_log_two_reduction() {
        let form = &LogLinearForm::term(1, 2, &half()).unwrap()
            + &LogLinearForm::term(2, 1, &ratio(1, 32)).unwrap();
        let iv = eval_interval(&form, 40);
        let oracle = ln2_oracle(100).scale(&BigInt::from(-7));
        assert!(iv.lo < oracle.hi && oracle.lo < iv.hi);
        assert!((iv.midpoint_f64() - (-4.852030263919617)).abs() < 1e-9);
        let rel = MultiplicativeRelations::new([(2, half(), 5)]).unwrap();
        let seven = LogLinearForm::term(1, 7, &half()).unwrap();
        assert_eq!(compare(&form, &seven, &rel, 256), Ok(Ordering::Equal));
    }

    #[test]
    fn high_precision_ln2_against_oracle() {
        let iv = ln_enclosure(&int(2), 200);
        let oracle = ln2_oracle(260);
        assert!(iv.lo <= oracle.hi && oracle.lo <= iv.hi);
        assert!(iv.width() <= Rational::new(BigInt::one(), pow2(200)));
    }

    #[test]
    fn ln_of_assorted_rationals_close_to_f64() {
        for (p, q) in [(1, 3), (2, 7), (5, 11), (1, 1000), (999, 1000), (7, 8)] {
            let iv = ln_enclosure(&ratio(p, q), 60);
            let expect = (p as f64 / q as f64).ln();
            assert!((iv.midpoint_f64() - expect).abs() < 1e-12, "{p}/{q}");
            assert!(iv.lo < iv.hi);
        }
    }

    #[test]
    fn compare_examples() {
        let none = MultiplicativeRelations::none();
        let l = LogLinearForm::term(1, 1, &half()).unwrap();
        let a = &l + &l;
        let b = LogLinearForm::term(1, 2, &half()).unwrap();
        assert_eq!(compare(&a, &b, &none, 256), Ok(Ordering::Equal));

        let rel = MultiplicativeRelations::new([(2, half(), 5)]).unwrap();
        let a = LogLinearForm::term(2, 1, &ratio(1, 32)).unwrap();
        let b = LogLinearForm::term(1, 5, &half()).unwrap();
        assert_eq!(compare(&a, &b, &rel, 256), Ok(Ordering::Equal));

        let a = LogLinearForm::term(1, 7, &half()).unwrap();
        let b = LogLinearForm::term(1, 4, &half()).unwrap();
        assert_eq!(compare(&a, &b, &none, 256), Ok(Ordering::Less));
    }

    #[test]
    fn undeclared_dependency_is_undecided() {
        let a = LogLinearForm::term(2, 1, &ratio(1, 32)).unwrap();
        let b = LogLinearForm::term(1, 5, &half()).unwrap();
        let res = compare(&a, &b, &MultiplicativeRelations::none(), 128);
        assert_eq!(res, Err(Error::Undecided { precision: 128 }));
    }

    #[test]
    fn inconsistent_relation_rejected() {
        let rel = MultiplicativeRelations::new([(2, half(), 4)]).unwrap();
        let a = LogLinearForm::term(2, 1, &ratio(1, 32)).unwrap();
        assert!(matches!(
            rel.rewrite(&a),
            Err(Error::InvalidRelation { index: 2, .. })
        ));
        assert!(MultiplicativeRelations::new([(1, half(), 1), (1, half(), 2)]).is_err());
        assert!(MultiplicativeRelations::new([(1, int(2), 1)]).is_err());
    }

    #[test]
    fn basis_must_be_in_unit_interval() {
        assert!(LogLinearForm::term(1, 1, &int(1)).is_err());
        assert!(LogLinearForm::term(1, 1, &int(0)).is_err());
        let a = LogLinearForm::term(1, 1, &half()).unwrap();
        let b = LogLinearForm::term(1, 1, &ratio(1, 3)).unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::BasisConflict { index: 1 }));
    }

    #[test]
    fn numerically_vanishing_form_is_exact_zero_interval() {
        // 2 log(1/2) - log(1/4) = 0 even though the atoms differ
        let f = &LogLinearForm::term(1, 2, &half()).unwrap()
            - &LogLinearForm::term(2, 1, &ratio(1, 4)).unwrap();
        assert_eq!(eval_interval(&f, 30), Interval::point(Rational::zero()));
    }

    #[test]
    fn display_is_readable() {
        let f = &LogLinearForm::term(1, 2, &half()).unwrap()
            - &LogLinearForm::term(2, 1, &ratio(1, 32)).unwrap();
        assert_eq!(f.to_string(), "2*log(1/2) - 1*log(1/32)");
    }
}
