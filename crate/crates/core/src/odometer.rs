//! The product odometer on `Z = {0..k-1} × Π_{n≥1} {0..k}`, its
//! Kakutani–Rokhlin towers, the block model projecting onto it, and a
//! constant-ceiling flow over it.
//!
//! The automorphism `S` finds `N(z) = min{n ≥ 1 : zₙ < k}`, zeroes the
//! coordinates `1..N`, increments `z_N` and sets
//! `z₀ := z₀ + … + z_{N-1} - 1 (mod k)`. Since the skipped digits equal `k`
//! the new first digit is `z₀ - 1 (mod k)`. The all-`k` tail goes to
//! `(z₀ - 1, 0, 0, …)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Rational;

/// Largest tower enumerated explicitly.
pub const TOWER_GUARD: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OdometerSpec {
    pub lambda: u32,
    pub k: u32,
}

impl OdometerSpec {
    pub fn new(lambda: u32, k: u32) -> Result<Self> {
        if lambda < 2 || k < 2 {
            return Err(Error::InvalidSpec(format!(
                "odometer needs lambda >= 2 and k >= 2, got lambda = {lambda}, k = {k}"
            )));
        }
        Ok(Self { lambda, k })
    }

    /// `(k+1)ⁿ` as a checked exponent.
    fn exponent(&self, n: u32) -> Result<u32> {
        (self.k + 1).checked_pow(n).ok_or_else(|| Error::EnumerationTooLarge {
            size: format!("({})^{n}", self.k + 1),
            guard: u32::MAX as u64,
        })
    }

    /// `rₙ = λ^{(k+1)ⁿ}`.
    pub fn r(&self, n: u32) -> Result<BigInt> {
        Ok(BigInt::from(self.lambda).pow(self.exponent(n)?))
    }

    /// Number of blocks of `Xₙ`: `k` at `n = 0`, `k + 1` afterwards.
    pub fn block_count(&self, n: u32) -> u32 {
        if n == 0 {
            self.k
        } else {
            self.k + 1
        }
    }

    /// Size of block `j`: `rₙ^{k-j}` for `n ≥ 1`, and `1` at `n = 0`.
    pub fn block_size(&self, n: u32, j: u32) -> Result<BigInt> {
        self.check_block(n, j)?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        Ok(self.r(n)?.pow(self.k - j))
    }

    /// `νₙ` mass of a single point in block `j`.
    pub fn point_mass(&self, n: u32, j: u32) -> Result<Rational> {
        let size = self.block_size(n, j)?;
        Ok(Rational::new(
            BigInt::one(),
            size * BigInt::from(self.block_count(n)),
        ))
    }

    /// `μₙ({d})`.
    pub fn digit_mass(&self, n: u32) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.block_count(n)))
    }

    /// Number of length-`(n+1)` cylinders, `k(k+1)ⁿ`.
    pub fn tower_size(&self, n: u32) -> BigInt {
        BigInt::from(self.k) * BigInt::from(self.k + 1).pow(n)
    }

    fn check_block(&self, n: u32, j: u32) -> Result<()> {
        if j >= self.block_count(n) {
            return Err(Error::InvalidDigits(format!(
                "block {j} out of range at level {n}"
            )));
        }
        Ok(())
    }
}

/// The cylinder `C(z₀, …, z_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AdicPrefix {
    digits: Vec<u32>,
}

impl AdicPrefix {
    pub fn new(spec: &OdometerSpec, digits: Vec<u32>) -> Result<Self> {
        for (i, d) in digits.iter().enumerate() {
            let top = if i == 0 { spec.k } else { spec.k + 1 };
            if *d >= top {
                return Err(Error::InvalidDigits(format!(
                    "digit {d} at position {i} exceeds {}",
                    top - 1
                )));
            }
        }
        Ok(Self { digits })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            digits: vec![0; len],
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `μ(C) = (1/k)(1/(k+1))^N`; the empty prefix is the whole space.
    pub fn measure(&self, spec: &OdometerSpec) -> Rational {
        if self.digits.is_empty() {
            return Rational::one();
        }
        Rational::new(
            BigInt::one(),
            BigInt::from(spec.k) * BigInt::from(spec.k + 1).pow(self.digits.len() as u32 - 1),
        )
    }

    pub fn truncated(&self, len: usize) -> Self {
        Self {
            digits: self.digits[..len.min(self.digits.len())].to_vec(),
        }
    }
}

impl std::fmt::Display for AdicPrefix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
        write!(f, "C({})", parts.join(","))
    }
}

/// `S` applied to a cylinder; the image of a cylinder is again a cylinder of
/// the same length.
pub fn odometer_step(spec: &OdometerSpec, p: &AdicPrefix) -> Result<AdicPrefix> {
    let (first, rest) = p.digits.split_first().ok_or(Error::PrefixTooShort)?;
    let mut digits = Vec::with_capacity(p.len());
    digits.push((first + spec.k - 1) % spec.k);
    match rest.iter().position(|d| *d < spec.k) {
        Some(pos) => {
            digits.extend(std::iter::repeat(0).take(pos));
            digits.push(rest[pos] + 1);
            digits.extend_from_slice(&rest[pos + 1..]);
        }
        None => digits.extend(std::iter::repeat(0).take(rest.len())),
    }
    Ok(AdicPrefix { digits })
}

/// `S⁻¹` on a cylinder, by inverting the case split.
pub fn odometer_step_inverse(spec: &OdometerSpec, p: &AdicPrefix) -> Result<AdicPrefix> {
    let (first, rest) = p.digits.split_first().ok_or(Error::PrefixTooShort)?;
    let mut digits = Vec::with_capacity(p.len());
    digits.push((first + 1) % spec.k);
    match rest.iter().position(|d| *d > 0) {
        Some(pos) => {
            digits.extend(std::iter::repeat(spec.k).take(pos));
            digits.push(rest[pos] - 1);
            digits.extend_from_slice(&rest[pos + 1..]);
        }
        None => digits.extend(std::iter::repeat(spec.k).take(rest.len())),
    }
    Ok(AdicPrefix { digits })
}

/// `S^count` (negative counts apply `S⁻¹`).
pub fn odometer_power(spec: &OdometerSpec, p: &AdicPrefix, count: &BigInt) -> Result<AdicPrefix> {
    let steps = count
        .abs()
        .to_u64()
        .filter(|s| *s <= TOWER_GUARD)
        .ok_or_else(|| Error::EnumerationTooLarge {
            size: count.to_string(),
            guard: TOWER_GUARD,
        })?;
    let mut q = p.clone();
    for _ in 0..steps {
        q = if count.is_negative() {
            odometer_step_inverse(spec, &q)?
        } else {
            odometer_step(spec, &q)?
        };
    }
    Ok(q)
}

/// The level-`n` tower `A_n^0, A_n^1, …` of length-`(n+1)` cylinders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub n: u32,
    pub cells: Vec<AdicPrefix>,
}

impl TowerLevel {
    pub fn period(&self) -> usize {
        self.cells.len()
    }

    pub fn index_of(&self, p: &AdicPrefix) -> Option<usize> {
        self.cells.iter().position(|c| c == p)
    }
}

fn tower_len(spec: &OdometerSpec, n: u32) -> Result<usize> {
    let size = spec.tower_size(n);
    size.to_u64()
        .filter(|s| *s <= TOWER_GUARD)
        .map(|s| s as usize)
        .ok_or_else(|| Error::EnumerationTooLarge {
            size: size.to_string(),
            guard: TOWER_GUARD,
        })
}

/// Iterates `S` from the all-zeros cylinder until it closes up.
pub fn tower(spec: &OdometerSpec, n: u32) -> Result<TowerLevel> {
    let len = tower_len(spec, n)?;
    let start = AdicPrefix::zeros(n as usize + 1);
    let mut cells = Vec::with_capacity(len);
    let mut current = start.clone();
    loop {
        cells.push(current.clone());
        current = odometer_step(spec, &current)?;
        if current == start || cells.len() > len {
            break;
        }
    }
    Ok(TowerLevel { n, cells })
}

/// Successor of a `(k, k+1, …, k+1)`-adic integer with `n+1` digits, least
/// significant first.
pub fn adic_successor(spec: &OdometerSpec, digits: &[u32]) -> Vec<u32> {
    let mut out = digits.to_vec();
    for (i, d) in out.iter_mut().enumerate() {
        let radix = if i == 0 { spec.k } else { spec.k + 1 };
        if *d + 1 < radix {
            *d += 1;
            return out;
        }
        *d = 0;
    }
    out
}

/// Mixed-radix digits of a tower index.
pub fn adic_digits(spec: &OdometerSpec, n: u32, index: usize) -> Vec<u32> {
    let mut rest = index;
    (0..=n)
        .map(|i| {
            let radix = if i == 0 { spec.k } else { spec.k + 1 } as usize;
            let d = rest % radix;
            rest /= radix;
            d as u32
        })
        .collect()
}

/// True when, at every level up to `n_max`, the tower is a single `S`-cycle
/// through all `k(k+1)ⁿ` cylinders, indexing intertwines `S` with the adic
/// successor, and level `n+1` refines level `n` with
/// `A_n^i = ∪_j A_{n+1}^{i + j·k(k+1)ⁿ}`.
pub fn adic_coding_check(spec: &OdometerSpec, n_max: u32) -> Result<bool> {
    let mut previous: Option<TowerLevel> = None;
    for n in 0..=n_max {
        let level = tower(spec, n)?;
        let len = tower_len(spec, n)?;
        if level.period() != len {
            return Ok(false);
        }
        let index: HashMap<&AdicPrefix, usize> =
            level.cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        if index.len() != len {
            return Ok(false);
        }
        for (i, cell) in level.cells.iter().enumerate() {
            let image = odometer_step(spec, cell)?;
            let Some(&j) = index.get(&image) else {
                return Ok(false);
            };
            if adic_digits(spec, n, j) != adic_successor(spec, &adic_digits(spec, n, i)) {
                return Ok(false);
            }
        }
        if let Some(prev) = &previous {
            let step = prev.period();
            for (i, cell) in level.cells.iter().enumerate() {
                if cell.truncated(n as usize) != prev.cells[i % step] {
                    return Ok(false);
                }
            }
        }
        previous = Some(level);
    }
    Ok(true)
}

/// A point of `Xₙ`: block `j` and an offset inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCoordinate {
    pub n: u32,
    pub block: u32,
    pub offset: BigInt,
}

impl BlockCoordinate {
    pub fn new(spec: &OdometerSpec, n: u32, block: u32, offset: BigInt) -> Result<Self> {
        let size = spec.block_size(n, block)?;
        if offset.is_negative() || offset >= size {
            return Err(Error::InvalidDigits(format!(
                "offset {offset} outside block {block} of size {size}"
            )));
        }
        Ok(Self { n, block, offset })
    }
}

/// `π(x)ₙ` together with `νₙ(Iₙ^j)`, from the symbolic block size.
pub fn block_projection(spec: &OdometerSpec, x: &BlockCoordinate) -> Result<(u32, Rational)> {
    let size = spec.block_size(x.n, x.block)?;
    let mass = Rational::from_integer(size) * spec.point_mass(x.n, x.block)?;
    Ok((x.block, mass))
}

/// `νₙ∘π⁻¹ = μₙ` at level `n`.
pub fn projection_pushforward_check(spec: &OdometerSpec, n: u32) -> Result<bool> {
    let mut total = Rational::zero();
    for j in 0..spec.block_count(n) {
        let x = BlockCoordinate::new(spec, n, j, BigInt::zero())?;
        let (d, mass) = block_projection(spec, &x)?;
        if d != j || mass != spec.digit_mass(n) {
            return Ok(false);
        }
        total += mass;
    }
    Ok(total.is_one())
}

/// Hit counts of `Σ_{i<n}(zᵢ - wᵢ) ≡ 0 (mod k)` for `n = 1..=N`.
pub fn hit_count(spec: &OdometerSpec, z: &[u32], w: &[u32]) -> u64 {
    let k = spec.k as i64;
    let mut sum = 0i64;
    let mut hits = 0;
    for (a, b) in z.iter().zip(w) {
        sum = (sum + *a as i64 - *b as i64).rem_euclid(k);
        if sum == 0 {
            hits += 1;
        }
    }
    hits
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub k: u32,
    pub samples: u64,
    pub horizon: u32,
    pub seed: u64,
    /// `histogram[h]` = number of pairs with `h` hits.
    pub histogram: Vec<u64>,
    /// Pairs hitting at prefix length `n`, for `n = 1..=N`.
    pub per_index_hits: Vec<u64>,
    pub min_hits: u64,
    pub max_hits: u64,
    pub mean_hits: f64,
}

impl RecurrenceReport {
    pub fn frequency_at(&self, n: usize) -> f64 {
        self.per_index_hits[n - 1] as f64 / self.samples as f64
    }
}

fn sample_point(spec: &OdometerSpec, rng: &mut ChaCha8Rng, len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| {
            let top = if i == 0 { spec.k } else { spec.k + 1 };
            rng.gen_range(0..top)
        })
        .collect()
}

/// Monte Carlo over `samples` independent `μ×μ` pairs from a seeded ChaCha8
/// stream.
pub fn recurrence_stats(
    spec: &OdometerSpec,
    samples: u64,
    horizon: u32,
    seed: u64,
) -> Result<RecurrenceReport> {
    if samples == 0 || horizon == 0 {
        return Err(Error::Validation {
            field: "recurrence".into(),
            message: "samples and horizon must be positive".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = horizon as usize;
    let mut histogram = vec![0u64; len + 1];
    let mut per_index_hits = vec![0u64; len];
    let mut total = 0u64;
    let k = spec.k as i64;
    for _ in 0..samples {
        let z = sample_point(spec, &mut rng, len);
        let w = sample_point(spec, &mut rng, len);
        let mut sum = 0i64;
        let mut hits = 0;
        for i in 0..len {
            sum = (sum + z[i] as i64 - w[i] as i64).rem_euclid(k);
            if sum == 0 {
                hits += 1;
                per_index_hits[i] += 1;
            }
        }
        histogram[hits] += 1;
        total += hits as u64;
    }
    let min_hits = histogram.iter().position(|c| *c > 0).unwrap_or(0) as u64;
    let max_hits = histogram.iter().rposition(|c| *c > 0).unwrap_or(0) as u64;
    Ok(RecurrenceReport {
        k: spec.k,
        samples,
        horizon,
        seed,
        histogram,
        per_index_hits,
        min_hits,
        max_hits,
        mean_hits: total as f64 / samples as f64,
    })
}

/// Flow under the constant ceiling `log λ`; `t` and `s` are in units of
/// `log λ`, and the result keeps the fractional part as the new height.
pub fn constant_ceiling_flow(
    spec: &OdometerSpec,
    p: &AdicPrefix,
    t: &Rational,
    s: &Rational,
) -> Result<(AdicPrefix, Rational)> {
    if t.is_negative() || *t >= Rational::one() {
        return Err(Error::TimeOutOfRange);
    }
    let total = t + s;
    let steps = total.floor().to_integer();
    let height = &total - Rational::from_integer(steps.clone());
    let q = odometer_power(spec, p, &steps)?;
    Ok((q, height))
}

/// Tower index of a length-`(n+1)` cylinder, found one adic digit at a time.
pub fn tower_index(spec: &OdometerSpec, p: &AdicPrefix) -> Result<BigInt> {
    if p.is_empty() {
        return Err(Error::PrefixTooShort);
    }
    let k = BigInt::from(spec.k);
    let mut idx = BigInt::zero();
    let mut modulus = BigInt::one();
    for (i, _) in p.digits.iter().enumerate() {
        let radix = if i == 0 { k.clone() } else { k.clone() + 1 };
        // find digit e of the index at position i
        let target = AdicPrefix {
            digits: p.digits[..=i].to_vec(),
        };
        let mut found = None;
        for e in 0..radix.to_u32().unwrap_or(0) {
            let cand = &idx + &modulus * BigInt::from(e);
            let cell = odometer_power(spec, &AdicPrefix::zeros(i + 1), &cand)?;
            if cell == target {
                found = Some(cand);
                break;
            }
        }
        idx = found.ok_or(Error::NotDecomposable { depth: i })?;
        modulus *= radix;
    }
    Ok(idx.mod_floor(&spec.tower_size(p.len() as u32 - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    fn k2() -> OdometerSpec {
        OdometerSpec::new(2, 2).unwrap()
    }

    fn pre(spec: &OdometerSpec, d: &[u32]) -> AdicPrefix {
        AdicPrefix::new(spec, d.to_vec()).unwrap()
    }

    #[test]
    fn step_examples() {
        let s = k2();
        assert_eq!(odometer_step(&s, &pre(&s, &[0, 1, 2, 0])).unwrap(), pre(&s, &[1, 2, 2, 0]));
        assert_eq!(odometer_step(&s, &pre(&s, &[1, 2, 2, 2])).unwrap(), pre(&s, &[0, 0, 0, 0]));
        assert_eq!(odometer_step(&s, &pre(&s, &[0, 2, 1])).unwrap(), pre(&s, &[1, 0, 2]));
        assert_eq!(
            odometer_step(&s, &AdicPrefix::zeros(0)),
            Err(Error::PrefixTooShort)
        );
    }

    #[test]
    fn inverse_undoes_step() {
        for spec in [k2(), OdometerSpec::new(3, 3).unwrap()] {
            for cell in tower(&spec, 3).unwrap().cells {
                let image = odometer_step(&spec, &cell).unwrap();
                assert_eq!(odometer_step_inverse(&spec, &image).unwrap(), cell);
            }
        }
    }

    #[test]
    fn six_cycle() {
        let s = k2();
        let t = tower(&s, 1).unwrap();
        let expect: Vec<_> = [[0, 0], [1, 1], [0, 2], [1, 0], [0, 1], [1, 2]]
            .iter()
            .map(|d| pre(&s, d))
            .collect();
        assert_eq!(t.cells, expect);
        assert_eq!(tower(&s, 0).unwrap().cells, vec![pre(&s, &[0]), pre(&s, &[1])]);
    }

    #[test]
    fn coding_small_levels() {
        assert!(adic_coding_check(&k2(), 1).unwrap());
        assert!(adic_coding_check(&OdometerSpec::new(2, 3).unwrap(), 1).unwrap());
        assert!(adic_coding_check(&k2(), 0).unwrap());
    }

    #[test]
    fn block_masses() {
        let s = k2();
        assert_eq!(s.r(1).unwrap(), BigInt::from(8));
        let sizes: Vec<_> = (0..3).map(|j| s.block_size(1, j).unwrap()).collect();
        assert_eq!(sizes, vec![BigInt::from(64), BigInt::from(8), BigInt::from(1)]);
        for j in 0..3 {
            let x = BlockCoordinate::new(&s, 1, j, BigInt::zero()).unwrap();
            assert_eq!(block_projection(&s, &x).unwrap(), (j, ratio(1, 3)));
        }
        let x = BlockCoordinate::new(&s, 0, 1, BigInt::zero()).unwrap();
        assert_eq!(block_projection(&s, &x).unwrap().1, ratio(1, 2));
        assert!(BlockCoordinate::new(&s, 1, 1, BigInt::from(8)).is_err());
        assert!(BlockCoordinate::new(&s, 0, 2, BigInt::zero()).is_err());
    }

    #[test]
    fn recurrence_trivial_cases() {
        let s = k2();
        assert_eq!(hit_count(&s, &[1, 2, 0, 1], &[1, 2, 0, 1]), 4);
        let r = recurrence_stats(&s, 4000, 1, 7).unwrap();
        assert!((r.frequency_at(1) - 0.5).abs() < 0.05);
        assert_eq!(r, recurrence_stats(&s, 4000, 1, 7).unwrap());
    }

    #[test]
    fn constant_flow_examples() {
        let s = k2();
        let p = pre(&s, &[0, 1, 2, 0]);
        let sp = odometer_step(&s, &p).unwrap();
        assert_eq!(
            constant_ceiling_flow(&s, &p, &ratio(0, 1), &ratio(1, 1)).unwrap(),
            (sp.clone(), ratio(0, 1))
        );
        assert_eq!(
            constant_ceiling_flow(&s, &p, &ratio(3, 4), &ratio(1, 2)).unwrap(),
            (sp.clone(), ratio(1, 4))
        );
        assert_eq!(
            constant_ceiling_flow(&s, &sp, &ratio(0, 1), &ratio(-1, 1)).unwrap(),
            (p.clone(), ratio(0, 1))
        );
        assert_eq!(
            constant_ceiling_flow(&s, &p, &ratio(1, 1), &ratio(0, 1)),
            Err(Error::TimeOutOfRange)
        );
    }

    #[test]
    fn tower_index_matches_enumeration() {
        let s = OdometerSpec::new(2, 3).unwrap();
        let t = tower(&s, 2).unwrap();
        for (i, c) in t.cells.iter().enumerate() {
            assert_eq!(tower_index(&s, c).unwrap(), BigInt::from(i));
        }
    }
}
