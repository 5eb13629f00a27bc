//! Slow reference computations used to cross-check the closed forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certify::{approximant, digit_box, StepFunction, TERM_GUARD};
use crate::error::{Error, Result};
use crate::numerics::{rpow, Rational};
use crate::product_spaces::{binomial, Block, SequenceSpec};
use crate::residue::ClassPair;

fn residue_of(d: &[u32]) -> u8 {
    (d.iter().map(|x| *x as u64).sum::<u64>() % 3) as u8
}

/// `Σ_{p̄ ∈ P_{a+b}} |3A_{a,b}(p̄)/Π C(2lᵢ,pᵢ) - 1| · Π ν̂ᵢ(pᵢ)` by listing
/// every `j̄ ∈ I_a`, `k̄ ∈ I_b`.
pub fn brute_force_defect(blocks: &[Block], pair: ClassPair) -> Result<Rational> {
    let tops: Vec<u32> = blocks.iter().map(|b| b.l).collect();
    let size: u128 = tops.iter().map(|l| (*l as u128 + 1).pow(2)).product();
    if size > TERM_GUARD as u128 {
        return Err(Error::EnumerationTooLarge {
            size: size.to_string(),
            guard: TERM_GUARD,
        });
    }
    let (a, b) = pair.classes();
    let mut sums: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let js: Vec<Vec<u32>> = digit_box(&tops).collect();
    for j in js.iter().filter(|j| residue_of(j) == a) {
        for k in js.iter().filter(|k| residue_of(k) == b) {
            let p: Vec<u32> = j.iter().zip(k).map(|(x, y)| x + y).collect();
            let w: BigInt = blocks
                .iter()
                .zip(j.iter().zip(k))
                .map(|(bl, (x, y))| binomial(bl.l, *x) * binomial(bl.l, *y))
                .product();
            *sums.entry(p).or_default() += w;
        }
    }
    let doubled: Vec<u32> = tops.iter().map(|l| 2 * l).collect();
    let r = pair.residue();
    let mut total = Rational::zero();
    for p in digit_box(&doubled).filter(|p| residue_of(p) == r) {
        let mut v = BigInt::one();
        let mut mass = Rational::one();
        for (bl, pi) in blocks.iter().zip(&p) {
            let c = binomial(2 * bl.l, *pi);
            mass *= Rational::from_integer(c.clone()) * rpow(&bl.lambda, *pi as i64)
                / rpow(&(Rational::one() + &bl.lambda), 2 * bl.l as i64);
            v *= c;
        }
        let a_p = sums.get(&p).cloned().unwrap_or_default();
        let rel = Rational::new(a_p * 3, v) - Rational::one();
        total += rel.abs() * mass;
    }
    Ok(total)
}

/// `‖χ_{C(a)} - Σ weight·(f∘F·RN)‖₁` computed by transporting `f` cylinder
/// by cylinder.
pub fn transport_error(spec: &SequenceSpec, a: &[u32], m: usize) -> Result<Rational> {
    approximant(spec, a, m)?.l1_distance(&StepFunction::indicator(a.to_vec()), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::certify_cylinder;
    use crate::numerics::{ratio, MultiplicativeRelations};
    use crate::product_spaces::Epsilon0;
    use crate::residue::defect;

    fn mixed_spec() -> SequenceSpec {
        SequenceSpec::relaxed(
            vec![
                Block::new(1, ratio(1, 2)),
                Block::new(2, ratio(1, 3)),
                Block::new(2, ratio(2, 7)),
                Block::new(3, ratio(1, 5)),
            ],
            Epsilon0::log2(),
            MultiplicativeRelations::none(),
        )
        .unwrap()
    }

    #[test]
    fn defects_match_enumeration() {
        let spec = mixed_spec();
        for n in 0..3 {
            for m in n + 1..=4 {
                for pair in ClassPair::ALL {
                    let fast = defect(&spec, n, m, pair).unwrap().value;
                    let slow = brute_force_defect(spec.range(n, m).unwrap(), pair).unwrap();
                    assert_eq!(fast, slow, "n={n} m={m} {pair}");
                }
            }
        }
    }

    #[test]
    fn certificates_match_transport() {
        let spec = mixed_spec();
        for (a, m) in [
            (vec![], 3),
            (vec![1], 3),
            (vec![0, 2], 4),
            (vec![2, 3], 4),
            (vec![1, 1, 4], 4),
        ] {
            let cert = certify_cylinder(&spec, &a, m).unwrap();
            assert_eq!(cert.error, transport_error(&spec, &a, m).unwrap(), "a={a:?}");
        }
    }
}
