//! Rational probability distributions, exact comparison of their real
//! entropies, and the residue map sending real entropy to entropy mod p.
//!
//! Real entropy is never evaluated numerically. Writing both distributions
//! over a common denominator t as (rᵢ/t) and (sⱼ/t), their real entropies
//! agree exactly when ∏ rᵢ^rᵢ = ∏ sⱼ^sⱼ (with 0⁰ = 1), which is decided
//! with big integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::ModDist;
use crate::error::{Error, Result};
use crate::modular::{PrimeModulus, Residue};
use crate::report::VerificationReport;

/// Nonnegative rationals in lowest terms summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalDist {
    probs: Vec<BigRational>,
}

impl RationalDist {
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        if let Some(index) = probs.iter().position(|q| q.is_negative()) {
            return Err(Error::NegativeProbability { index });
        }
        let sum: BigRational = probs.iter().cloned().sum();
        if !sum.is_one() {
            return Err(Error::RationalSumNotOne(sum.to_string()));
        }
        Ok(RationalDist { probs })
    }

    /// Convenience constructor from (numerator, denominator) pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let probs = pairs
            .iter()
            .map(|&(n, d)| {
                if d == 0 {
                    Err(Error::Parse(format!("zero denominator in {n}/{d}")))
                } else {
                    Ok(BigRational::new(n.into(), d.into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        RationalDist::new(probs)
    }

    /// (1/n, ..., 1/n).
    pub fn uniform(n: u64) -> Self {
        assert!(n >= 1);
        let q = BigRational::new(BigInt::one(), BigInt::from(n));
        RationalDist {
            probs: vec![q; n as usize],
        }
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.probs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Entrywise image in Z/pZ.
    pub fn reduce_mod(&self, p: PrimeModulus) -> Result<ModDist> {
        let pb = BigInt::from(p.get());
        let mut out = Vec::with_capacity(self.len());
        for (index, q) in self.probs.iter().enumerate() {
            if q.denom().is_multiple_of(&pb) {
                return Err(Error::DenominatorDivisibleByP { index, p: p.get() });
            }
            let num = p.residue_big(q.numer());
            let den = p.residue_big(q.denom());
            out.push(num * den.inv().expect("denominator is a unit"));
        }
        ModDist::from_residues(p, out)
    }

    /// Whether every denominator is prime to p.
    pub fn reducible_mod(&self, p: PrimeModulus) -> bool {
        let pb = BigInt::from(p.get());
        self.probs.iter().all(|q| !q.denom().is_multiple_of(&pb))
    }

    pub fn residue_entropy(&self, p: PrimeModulus) -> Result<Residue> {
        Ok(self.reduce_mod(p)?.entropy())
    }

    /// Product distribution, ordered as a ∘ (b, ..., b).
    pub fn tensor(&self, other: &RationalDist) -> RationalDist {
        let probs = self
            .probs
            .iter()
            .flat_map(|a| other.probs.iter().map(move |b| a * b))
            .collect();
        RationalDist { probs }
    }

    /// Block i is πᵢ·γⁱ.
    pub fn compose(&self, inners: &[RationalDist]) -> Result<RationalDist> {
        if inners.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found: inners.len(),
            });
        }
        let probs = self
            .probs
            .iter()
            .zip(inners)
            .flat_map(|(w, g)| g.probs.iter().map(move |q| w * q))
            .collect();
        Ok(RationalDist { probs })
    }

    pub fn pad_zeros(&self, position: usize, count: usize) -> Result<RationalDist> {
        if position > self.len() {
            return Err(Error::IndexOutOfRange {
                index: position,
                len: self.len(),
            });
        }
        let mut probs = self.probs.clone();
        probs.splice(position..position, std::iter::repeat_n(BigRational::zero(), count));
        Ok(RationalDist { probs })
    }

    pub fn shuffled<R: Rng + ?Sized>(&self, rng: &mut R) -> RationalDist {
        let mut probs = self.probs.clone();
        probs.shuffle(rng);
        RationalDist { probs }
    }

    /// Random distribution with `n` entries of the form wᵢ/Σw, wᵢ ∈ [0, max_weight].
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, max_weight: u32) -> RationalDist {
        assert!(n >= 1 && max_weight >= 1);
        loop {
            let weights: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_weight)).collect();
            let total: u32 = weights.iter().sum();
            if total == 0 {
                continue;
            }
            let probs = weights
                .iter()
                .map(|&w| BigRational::new(w.into(), total.into()))
                .collect();
            return RationalDist { probs };
        }
    }
}

/// ∏ xᵢ^xᵢ with 0⁰ = 1.
fn self_power_product(xs: &[BigInt]) -> BigUint {
    xs.iter().fold(BigUint::one(), |acc, x| {
        let base = x.magnitude();
        let exp = x.to_usize().expect("scaled numerator fits in usize");
        acc * num_traits::pow(base.clone(), exp)
    })
}

fn scaled_numerators(d: &RationalDist, t: &BigInt) -> Vec<BigInt> {
    d.probs.iter().map(|q| q.numer() * (t / q.denom())).collect()
}

/// Decides H_R(a) = H_R(b) over the common denominator `t`, which must be a
/// multiple of every denominator of both inputs.
pub fn real_entropy_equal_over(a: &RationalDist, b: &RationalDist, t: &BigInt) -> bool {
    let lhs = self_power_product(&scaled_numerators(a, t));
    let rhs = self_power_product(&scaled_numerators(b, t));
    lhs == rhs
}

/// Exact decision of H_R(a) = H_R(b).
pub fn real_entropy_equal(a: &RationalDist, b: &RationalDist) -> bool {
    let t = a.common_denominator().lcm(&b.common_denominator());
    real_entropy_equal_over(a, b, &t)
}

pub fn reduce_mod(d: &RationalDist, p: PrimeModulus) -> Result<ModDist> {
    d.reduce_mod(p)
}

pub fn residue_entropy(d: &RationalDist, p: PrimeModulus) -> Result<Residue> {
    d.residue_entropy(p)
}

/// If the real entropies agree, so must the entropies mod p.
pub fn check_residue_well_defined(a: &RationalDist, b: &RationalDist, p: PrimeModulus) -> Result<VerificationReport> {
    let ha = a.residue_entropy(p)?;
    let hb = b.residue_entropy(p)?;
    let mut report = VerificationReport::new(format!("residue well-defined, p={p}"));
    report.detail("residue_a", ha);
    report.detail("residue_b", hb);
    if real_entropy_equal(a, b) {
        report.check(ha == hb, || format!("[{a}] -> {ha} but [{b}] -> {hb}"));
    } else {
        report.vacuous = true;
    }
    Ok(report)
}

/// [H_R(a ⊗ b)] = [H_R(a)] + [H_R(b)].
pub fn residue_additive(a: &RationalDist, b: &RationalDist, p: PrimeModulus) -> Result<VerificationReport> {
    let ha = a.residue_entropy(p)?;
    let hb = b.residue_entropy(p)?;
    let hab = a.tensor(b).residue_entropy(p)?;
    let mut report = VerificationReport::new(format!("residue additive, p={p}"));
    report.detail("residue_product", hab);
    report.check(hab == ha + hb, || format!("[{a}] ⊗ [{b}]: {hab} != {ha} + {hb}"));
    Ok(report)
}

fn random_of_length_up_to<R: Rng + ?Sized>(rng: &mut R, max_len: usize, max_weight: u32) -> RationalDist {
    let n = rng.gen_range(1..=max_len);
    RationalDist::random(rng, n, max_weight)
}

/// A pair of distinct-looking distributions with equal real entropy, built
/// from a known equal pair by permutation, zero-padding, tensoring with a
/// common factor (on either side) and mixing with a common component.
pub fn random_equal_entropy_pair<R: Rng + ?Sized>(rng: &mut R) -> (RationalDist, RationalDist) {
    let (mut a, mut b) = match rng.gen_range(0..3) {
        0 => (
            RationalDist::from_pairs(&[(1, 2), (1, 8), (1, 8), (1, 8), (1, 8)]).expect("valid"),
            RationalDist::uniform(4),
        ),
        1 => {
            let d = random_of_length_up_to(rng, 4, 6);
            (d.clone(), d)
        }
        _ => {
            let x = random_of_length_up_to(rng, 3, 4);
            let y = random_of_length_up_to(rng, 3, 4);
            (x.tensor(&y), y.tensor(&x))
        }
    };
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..4) {
            0 => {
                a = a.shuffled(rng);
                b = b.shuffled(rng);
            }
            1 => {
                let pos = rng.gen_range(0..=a.len());
                a = a.pad_zeros(pos, rng.gen_range(1..=2)).expect("in range");
                let pos = rng.gen_range(0..=b.len());
                b = b.pad_zeros(pos, rng.gen_range(1..=2)).expect("in range");
            }
            2 if a.len() * b.len() <= 40 => {
                let c = random_of_length_up_to(rng, 3, 3);
                if rng.gen_bool(0.5) {
                    a = a.tensor(&c);
                    b = c.tensor(&b);
                } else {
                    a = c.tensor(&a);
                    b = b.tensor(&c);
                }
            }
            _ => {
                let mix = RationalDist::random(rng, 2, 4);
                let other = random_of_length_up_to(rng, 3, 4);
                a = mix.compose(&[a, other.clone()]).expect("arity 2");
                b = mix.compose(&[b, other]).expect("arity 2");
            }
        }
    }
    (a, b)
}

fn parse_rational(token: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {token:?}"));
    let (n, d) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for RationalDist {
    type Err = Error;

    /// Whitespace-separated `num/den` tokens.
    fn from_str(s: &str) -> Result<Self> {
        let probs = s.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>()?;
        RationalDist::new(probs)
    }
}

impl fmt::Display for RationalDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}
