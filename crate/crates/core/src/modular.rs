//! Arithmetic in Z/pZ and Z/p²Z, the Fermat quotient and the p-derivation.
//!
//! Representatives are always canonical: residues live in `[0, p)` and lifted
//! residues in `[0, p²)`. Exponentiation is carried out modulo p², which is
//! all that the Fermat quotient and the p-derivation depend on; the
//! `*_exact` variants evaluate the defining quotients with big integers and
//! serve as a cross-check.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Largest prime accepted by the exhaustive verifiers.
pub const EXHAUSTIVE_PRIME_GUARD: u64 = 97;

/// A prime p, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn squared(self) -> u64 {
        self.0 * self.0
    }

    /// Reduces any integer to its residue class.
    pub fn residue(self, a: i128) -> Residue {
        Residue {
            value: a.rem_euclid(self.0 as i128) as u64,
            p: self,
        }
    }

    pub fn residue_big(self, a: &BigInt) -> Residue {
        let v = a.mod_floor(&BigInt::from(self.0));
        Residue {
            value: v.to_u64().expect("reduced value fits"),
            p: self,
        }
    }

    pub fn zero(self) -> Residue {
        Residue { value: 0, p: self }
    }

    pub fn one(self) -> Residue {
        self.residue(1)
    }

    /// All residues 0, 1, ..., p-1 in order.
    pub fn elements(self) -> impl Iterator<Item = Residue> {
        (0..self.0).map(move |value| Residue { value, p: self })
    }

    fn check_guard(self) -> Result<()> {
        if self.0 > EXHAUSTIVE_PRIME_GUARD {
            return Err(Error::RangeGuard {
                what: format!("p = {}", self.0),
                limit: EXHAUSTIVE_PRIME_GUARD,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division; moduli are below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An element of Z/pZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    p: PrimeModulus,
}

impl Residue {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.p.0),
            p: self.p,
        }
    }

    pub fn inv(self) -> Result<Residue> {
        if self.value == 0 {
            return Err(Error::NotInvertible { value: 0, p: self.p.0 });
        }
        Ok(self.pow(self.p.0 - 2))
    }

    /// Division by a unit; dividing by zero is an error.
    pub fn checked_div(self, rhs: Residue) -> Result<Residue> {
        self.same_modulus(rhs)?;
        Ok(self * rhs.inv()?)
    }

    pub fn same_modulus(self, rhs: Residue) -> Result<()> {
        if self.p != rhs.p {
            return Err(Error::ModulusMismatch {
                left: self.p.0,
                right: rhs.p.0,
            });
        }
        Ok(())
    }

    #[inline]
    fn assert_same(self, rhs: Residue) {
        assert_eq!(self.p, rhs.p, "arithmetic between residues of different moduli");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.assert_same(rhs);
        let m = self.p.0;
        let s = self.value + rhs.value;
        Residue {
            value: if s >= m { s - m } else { s },
            p: self.p,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: if self.value == 0 { 0 } else { self.p.0 - self.value },
            p: self.p,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.assert_same(rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.p.0),
            p: self.p,
        }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

/// An element of Z/p²Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedResidue {
    value: u64,
    p: PrimeModulus,
}

impl LiftedResidue {
    pub fn new(a: i128, p: PrimeModulus) -> Self {
        LiftedResidue {
            value: a.rem_euclid(p.squared() as i128) as u64,
            p,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.p
    }

    pub fn is_unit(self) -> bool {
        !self.value.is_multiple_of(self.p.0)
    }

    /// Image in Z/pZ.
    pub fn reduce(self) -> Residue {
        Residue {
            value: self.value % self.p.0,
            p: self.p,
        }
    }

    pub fn fermat_quotient(self) -> Result<Residue> {
        fq_of_canonical(self.value, self.p)
    }

    pub fn p_derivation(self) -> Residue {
        pderiv_of_canonical(self.value, self.p)
    }
}

impl fmt::Display for LiftedResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn fq_of_canonical(a: u64, p: PrimeModulus) -> Result<Residue> {
    let m = p.get();
    if a.is_multiple_of(m) {
        return Err(Error::DivisibleByP {
            value: a.to_string(),
            p: m,
        });
    }
    let v = pow_mod(a, m - 1, p.squared());
    // v ≡ 1 (mod p)
    Ok(Residue { value: (v - 1) / m, p })
}

fn pderiv_of_canonical(a: u64, p: PrimeModulus) -> Residue {
    let m = p.get();
    let sq = p.squared();
    let ap = pow_mod(a, m, sq);
    let diff = (a + sq - ap) % sq;
    Residue {
        value: (diff / m) % m,
        p,
    }
}

/// The Fermat quotient (a^(p-1) - 1)/p reduced mod p.
pub fn fermat_quotient(a: i128, p: PrimeModulus) -> Result<Residue> {
    LiftedResidue::new(a, p).fermat_quotient()
}

/// Big-integer evaluation of the Fermat quotient from its definition.
pub fn fermat_quotient_exact(a: &BigInt, p: PrimeModulus) -> Result<Residue> {
    let pb = BigInt::from(p.get());
    if a.is_multiple_of(&pb) {
        return Err(Error::DivisibleByP {
            value: a.to_string(),
            p: p.get(),
        });
    }
    let num = num_traits::pow(a.clone(), (p.get() - 1) as usize) - BigInt::one();
    let (q, r) = num.div_rem(&pb);
    debug_assert!(r.is_zero());
    Ok(p.residue_big(&q))
}

/// The p-derivation (a - a^p)/p reduced mod p.
pub fn p_derivation(a: i128, p: PrimeModulus) -> Residue {
    LiftedResidue::new(a, p).p_derivation()
}

pub fn p_derivation_exact(a: &BigInt, p: PrimeModulus) -> Residue {
    let pb = BigInt::from(p.get());
    let num = a - num_traits::pow(a.clone(), p.get() as usize);
    let (q, r) = num.div_rem(&pb);
    debug_assert!(r.is_zero());
    p.residue_big(&q)
}

/// The section r ↦ 1 - rp of the Fermat quotient.
pub fn fq_section(r: Residue) -> LiftedResidue {
    let p = r.modulus();
    LiftedResidue::new(1 - r.value() as i128 * p.get() as i128, p)
}

/// Exhaustively checks multiplicativity, the shift law
/// fq(n + rp) = fq(n) - r/n and p²-periodicity.
pub fn verify_fq_laws(p: PrimeModulus) -> Result<VerificationReport> {
    p.check_guard()?;
    let m = p.get() as i128;
    let sq = m * m;
    let units: Vec<i128> = (1..=sq).filter(|n| n % m != 0).collect();
    let fq = |a: i128| fermat_quotient(a, p).expect("unit");

    let mut mult = VerificationReport::new("fq multiplicative");
    for &a in &units {
        for &b in &units {
            let ok = fq(a * b) == fq(a) + fq(b);
            mult.check(ok, || format!("m={a} n={b}"));
        }
    }

    let mut shift = VerificationReport::new("fq shift by rp");
    for &n in &units {
        let inv_n = p.residue(n).inv().expect("unit");
        for r in 0..m {
            let ok = fq(n + r * m) == fq(n) - p.residue(r) * inv_n;
            shift.check(ok, || format!("n={n} r={r}"));
        }
    }

    let mut period = VerificationReport::new("fq p^2-periodic");
    for &n in &units {
        period.check(fq(n + sq) == fq(n), || format!("n={n}"));
        period.check(fq(n - sq) == fq(n), || format!("n={n} (negative shift)"));
    }

    let mut report = VerificationReport::new(format!("fermat quotient laws, p={p}"));
    for sub in [mult, shift, period] {
        report.detail(sub.name.clone(), if sub.passed() { "pass" } else { "fail" });
        report.absorb(sub);
    }
    let one = fq(1);
    report.check(one.is_zero(), || format!("fq(1) = {one}"));
    Ok(report)
}

/// Exhaustively checks the Leibniz rule, ∂(1) = 0, the relation to the
/// Fermat quotient, p²-periodicity and the section property.
pub fn verify_pderivation_laws(p: PrimeModulus) -> Result<VerificationReport> {
    p.check_guard()?;
    let m = p.get() as i128;
    let sq = m * m;
    let d = |a: i128| p_derivation(a, p);
    let mut report = VerificationReport::new(format!("p-derivation laws, p={p}"));

    for a in 0..sq {
        for b in 0..sq {
            let lhs = d(a * b);
            let rhs = d(a) * p.residue(b) + p.residue(a) * d(b);
            report.check(lhs == rhs, || format!("leibniz a={a} b={b}"));
        }
    }
    for a in 0..sq {
        report.check(d(a + sq) == d(a), || format!("periodic a={a}"));
        if a % m != 0 {
            let via_fq = -(p.residue(a) * fermat_quotient(a, p).expect("unit"));
            report.check(d(a) == via_fq, || format!("∂ = -a·fq at a={a}"));
        } else {
            let expected = p.residue(a / m);
            report.check(d(a) == expected, || format!("∂(a) = a/p at a={a}"));
        }
    }
    report.check(d(1).is_zero(), || "∂(1) != 0".into());
    for r in p.elements() {
        let back = fq_section(r).fermat_quotient().expect("section is a unit");
        report.check(back == r, || format!("section r={r}"));
    }
    Ok(report)
}

/// Smallest generator of the cyclic group (Z/p²Z)^×.
pub fn unit_group_generator(p: PrimeModulus) -> u64 {
    let sq = p.squared();
    let order = p.get() * (p.get() - 1);
    (2..sq)
        .chain(std::iter::once(1))
        .filter(|g| g % p.get() != 0)
        .find(|&g| multiplicative_order(g, sq) == order)
        .expect("(Z/p^2Z)^x is cyclic")
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, m);
        k += 1;
    }
    k
}

/// Enumerates every homomorphism (Z/p²Z)^× → Z/pZ through a discrete-log
/// table and checks that each one is a scalar multiple of the Fermat
/// quotient, and that the Fermat quotient is a surjective homomorphism.
pub fn verify_hom_uniqueness(p: PrimeModulus) -> Result<VerificationReport> {
    p.check_guard()?;
    let m = p.get();
    let sq = p.squared();
    let order = m * (m - 1);
    let gen = unit_group_generator(p);

    // log[x] = k with gen^k = x
    let mut log = vec![u64::MAX; sq as usize];
    let mut x = 1u64;
    for k in 0..order {
        log[x as usize] = k;
        x = mul_mod(x, gen, sq);
    }
    let units: Vec<u64> = (1..sq).filter(|u| u % m != 0).collect();

    let mut report = VerificationReport::new(format!("homomorphisms (Z/p^2Z)^x -> Z/pZ, p={p}"));
    report.detail("generator", gen);
    report.check(units.iter().all(|&u| log[u as usize] != u64::MAX), || {
        format!("{gen} does not generate")
    });

    let fq = |u: u64| fq_of_canonical(u, p).expect("unit");
    for &a in &units {
        for &b in &units {
            let ok = fq(mul_mod(a, b, sq)) == fq(a) + fq(b);
            report.check(ok, || format!("fq not a homomorphism at ({a},{b})"));
        }
    }
    let mut image = vec![false; m as usize];
    for &u in &units {
        image[fq(u).value() as usize] = true;
    }
    report.check(image.iter().all(|&hit| hit), || "fq not surjective".into());

    let fq_gen = fq(gen);
    let mut distinct = std::collections::HashSet::new();
    for c in p.elements() {
        // φ(gen^k) = k·c; well defined because p divides the group order
        let phi = |u: u64| p.residue(log[u as usize] as i128) * c;
        let scalar = c.checked_div(fq_gen)?;
        for &u in &units {
            report.check(phi(u) == scalar * fq(u), || {
                format!("φ(gen)={c} differs from {scalar}·fq at {u}")
            });
        }
        distinct.insert(units.iter().map(|&u| phi(u).value()).collect::<Vec<_>>());
    }
    report.check(distinct.len() as u64 == m, || {
        format!("{} distinct homomorphisms, expected {m}", distinct.len())
    });
    report.detail("homomorphisms", distinct.len());
    Ok(report)
}
