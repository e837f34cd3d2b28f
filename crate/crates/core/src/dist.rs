//! Probability distributions mod p, their operadic composition and entropy.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::modular::{pow_mod, PrimeModulus, Residue};

/// An element of Π_n: a nonempty tuple over Z/pZ summing to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModDist {
    p: PrimeModulus,
    probs: Vec<Residue>,
}

/// A tuple over Z/pZ with no constraint on its sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMeasure {
    p: PrimeModulus,
    weights: Vec<Residue>,
}

fn sum_residues(p: PrimeModulus, xs: &[Residue]) -> Residue {
    xs.iter().fold(p.zero(), |acc, &x| acc + x)
}

/// Σ aᵢ^p mod p² over canonical representatives.
fn sum_of_pth_powers(p: PrimeModulus, xs: &[Residue]) -> u64 {
    let sq = p.squared();
    xs.iter().fold(0, |acc, x| (acc + pow_mod(x.value(), p.get(), sq)) % sq)
}

impl ModDist {
    /// Builds a distribution from arbitrary integer representatives.
    pub fn new(p: PrimeModulus, values: &[i128]) -> Result<Self> {
        Self::from_residues(p, values.iter().map(|&v| p.residue(v)).collect())
    }

    pub fn from_residues(p: PrimeModulus, probs: Vec<Residue>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for r in &probs {
            if r.modulus() != p {
                return Err(Error::ModulusMismatch {
                    left: p.get(),
                    right: r.modulus().get(),
                });
            }
        }
        let sum = sum_residues(p, &probs);
        if sum != p.one() {
            return Err(Error::SumNotOne {
                sum: sum.value(),
                p: p.get(),
            });
        }
        Ok(ModDist { p, probs })
    }

    /// The uniform distribution (1/n, ..., 1/n).
    pub fn uniform(n: u64, p: PrimeModulus) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        let inv = p.residue(n as i128).inv().map_err(|_| Error::DivisibleByP {
            value: n.to_string(),
            p: p.get(),
        })?;
        Ok(ModDist {
            p,
            probs: vec![inv; n as usize],
        })
    }

    /// The one-point distribution (1).
    pub fn point(p: PrimeModulus) -> Self {
        ModDist {
            p,
            probs: vec![p.one()],
        }
    }

    /// Uniformly random element of Π_n.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, p: PrimeModulus, n: usize) -> Self {
        assert!(n >= 1);
        let mut probs: Vec<Residue> = (0..n - 1)
            .map(|_| p.residue(rng.gen_range(0..p.get()) as i128))
            .collect();
        let rest = p.one() - sum_residues(p, &probs);
        probs.push(rest);
        ModDist { p, probs }
    }

    /// Every element of Π_n, in lexicographic order of the first n-1 entries.
    pub fn enumerate(p: PrimeModulus, n: usize) -> impl Iterator<Item = ModDist> {
        assert!(n >= 1);
        let m = p.get();
        let count = m.pow((n - 1) as u32);
        (0..count).map(move |mut code| {
            let mut probs = vec![p.zero(); n];
            for slot in (0..n - 1).rev() {
                probs[slot] = p.residue((code % m) as i128);
                code /= m;
            }
            probs[n - 1] = p.one() - sum_residues(p, &probs[..n - 1]);
            ModDist { p, probs }
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn probs(&self) -> &[Residue] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|r| !r.is_zero()).count()
    }

    /// H(π) = (1 - Σ aᵢ^p)/p mod p.
    pub fn entropy(&self) -> Residue {
        let sq = self.p.squared();
        let s = sum_of_pth_powers(self.p, &self.probs);
        let numerator = (1 + sq - s) % sq;
        self.p.residue((numerator / self.p.get()) as i128)
    }

    /// π ∘ (γ¹, ..., γⁿ): block i is πᵢ·γⁱ, blocks concatenated in order.
    pub fn compose(&self, inners: &[ModDist]) -> Result<ModDist> {
        if inners.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found: inners.len(),
            });
        }
        let mut probs = Vec::with_capacity(inners.iter().map(ModDist::len).sum());
        for (&w, inner) in self.probs.iter().zip(inners) {
            self.check_modulus(inner)?;
            probs.extend(inner.probs.iter().map(|&g| w * g));
        }
        Ok(ModDist { p: self.p, probs })
    }

    /// π ⊗ γ = π ∘ (γ, ..., γ).
    pub fn tensor(&self, other: &ModDist) -> Result<ModDist> {
        self.check_modulus(other)?;
        self.compose(&vec![other.clone(); self.len()])
    }

    /// Inserts `count` zero entries before index `position`.
    pub fn pad_zeros(&self, position: usize, count: usize) -> Result<ModDist> {
        if position > self.len() {
            return Err(Error::IndexOutOfRange {
                index: position,
                len: self.len(),
            });
        }
        let mut probs = self.probs.clone();
        probs.splice(position..position, std::iter::repeat_n(self.p.zero(), count));
        Ok(ModDist { p: self.p, probs })
    }

    /// Reorders entries so that entry i of the result is entry perm[i].
    pub fn permute(&self, perm: &[usize]) -> Result<ModDist> {
        if perm.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.len()];
        let mut probs = Vec::with_capacity(self.len());
        for &i in perm {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            probs.push(self.probs[i]);
        }
        Ok(ModDist { p: self.p, probs })
    }

    pub fn to_measure(&self) -> ModMeasure {
        ModMeasure {
            p: self.p,
            weights: self.probs.clone(),
        }
    }

    fn check_modulus(&self, other: &ModDist) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }
}

/// Entropy evaluated from arbitrary integer representatives of a
/// distribution, with exact big-integer arithmetic throughout.
pub fn entropy_with_representatives(reps: &[BigInt], p: PrimeModulus) -> Result<Residue> {
    let pb = BigInt::from(p.get());
    let sum: BigInt = reps.iter().sum();
    if p.residue_big(&sum) != p.one() {
        return Err(Error::SumNotOne {
            sum: p.residue_big(&sum).value(),
            p: p.get(),
        });
    }
    let powers: BigInt = reps.iter().map(|a| num_traits::pow(a.clone(), p.get() as usize)).sum();
    let (q, r) = (BigInt::one() - powers).div_rem(&pb);
    debug_assert_eq!(r.to_i64(), Some(0));
    Ok(p.residue_big(&q))
}

impl ModMeasure {
    pub fn new(p: PrimeModulus, values: &[i128]) -> Self {
        ModMeasure {
            p,
            weights: values.iter().map(|&v| p.residue(v)).collect(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn weights(&self) -> &[Residue] {
        &self.weights
    }

    pub fn total(&self) -> Residue {
        sum_residues(self.p, &self.weights)
    }

    pub fn scale(&self, lambda: Residue) -> ModMeasure {
        ModMeasure {
            p: self.p,
            weights: self.weights.iter().map(|&w| lambda * w).collect(),
        }
    }

    /// The degree-1 homogeneous extension ((Σaᵢ)^p - Σaᵢ^p)/p mod p.
    pub fn entropy(&self) -> Residue {
        let sq = self.p.squared();
        let total = self.weights.iter().fold(0, |acc, w| (acc + w.value()) % sq);
        let total_pow = pow_mod(total, self.p.get(), sq);
        let powers = sum_of_pth_powers(self.p, &self.weights);
        let numerator = (total_pow + sq - powers) % sq;
        self.p.residue((numerator / self.p.get()) as i128)
    }

    /// Returns the measure as a distribution when it sums to 1.
    pub fn to_dist(&self) -> Result<ModDist> {
        ModDist::from_residues(self.p, self.weights.clone())
    }
}

/// H̄ of a measure; agrees with [`ModDist::entropy`] on distributions.
pub fn entropy_measure(m: &ModMeasure) -> Residue {
    m.entropy()
}

fn write_tuple(f: &mut fmt::Formatter<'_>, p: PrimeModulus, xs: &[Residue]) -> fmt::Result {
    write!(f, "{p}:")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

fn parse_tuple(text: &str) -> Result<(PrimeModulus, Vec<i128>)> {
    let text = text.trim();
    let (p, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected P:v1,...,vn, got {text:?}")))?;
    let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
    let p = PrimeModulus::new(p)?;
    let rest = rest.trim();
    let values = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',')
            .map(|v| {
                v.trim()
                    .parse::<i128>()
                    .map_err(|_| Error::Parse(format!("bad value {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok((p, values))
}

impl fmt::Display for ModDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.p, &self.probs)
    }
}

impl fmt::Display for ModMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.p, &self.weights)
    }
}

impl FromStr for ModDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, values) = parse_tuple(s)?;
        ModDist::new(p, &values)
    }
}

impl FromStr for ModMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, values) = parse_tuple(s)?;
        Ok(ModMeasure::new(p, &values))
    }
}

/// Σ_{r=1}^{p-1} π^r / r, the closed form of H(π, 1-π) for odd p.
pub fn two_point_series(pi: Residue) -> Residue {
    let p = pi.modulus();
    (1..p.get())
        .map(|r| pi.pow(r) * p.residue(r as i128).inv().expect("r < p"))
        .fold(p.zero(), |acc, t| acc + t)
}
