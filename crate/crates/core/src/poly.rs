//! Sparse multivariate polynomials over Z/pZ, the entropy polynomial and
//! exact checks of its identities.
//!
//! Identities are verified by symbolic expansion: affine substitutions such
//! as y := 1 - x are carried out on the polynomial, never by evaluating at
//! points, so every check is an identity of polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::dist::ModDist;
use crate::error::{Error, Result};
use crate::modular::{PrimeModulus, Residue};
use crate::report::VerificationReport;

/// Largest prime for the symbolic identity checks.
pub const IDENTITY_PRIME_GUARD: u64 = 13;
/// Largest total block size Σkᵢ for the grouping and chain-rule checks.
pub const GROUPING_TOTAL_GUARD: usize = 6;
/// Largest table size p^n accepted by [`interpolate`].
pub const INTERPOLATION_GUARD: u64 = 1_000_000;

/// A polynomial in `nvars` variables over Z/pZ.
///
/// Terms are keyed by exponent vector with no zero coefficients stored, so
/// equal polynomials have identical term maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    p: PrimeModulus,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl MultiPoly {
    pub fn zero(p: PrimeModulus, nvars: usize) -> Self {
        MultiPoly {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: PrimeModulus, nvars: usize, c: i128) -> Self {
        Self::monomial(p, vec![0; nvars], c)
    }

    /// The variable with index `i`.
    pub fn var(p: PrimeModulus, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(p, exps, 1)
    }

    pub fn monomial(p: PrimeModulus, exps: Vec<u32>, c: i128) -> Self {
        let nvars = exps.len();
        Self::from_terms(p, nvars, [(exps, c)])
    }

    /// Sums the given terms; repeated exponent vectors are combined.
    pub fn from_terms(p: PrimeModulus, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i128)>) -> Self {
        let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            let c = p.residue(c).value();
            let slot = acc.entry(exps).or_insert(0);
            *slot = (*slot + c) % p.get();
        }
        Self::from_accumulator(p, nvars, acc)
    }

    fn from_accumulator(p: PrimeModulus, nvars: usize, acc: HashMap<Vec<u32>, u64>) -> Self {
        MultiPoly {
            p,
            nvars,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Residue)> + '_ {
        self.terms
            .iter()
            .map(move |(e, &c)| (e.as_slice(), self.p.residue(c as i128)))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Residue {
        self.p.residue(self.terms.get(exps).copied().unwrap_or(0) as i128)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == degree)
    }

    pub fn scale(&self, c: Residue) -> MultiPoly {
        assert_eq!(c.modulus(), self.p);
        let terms = self
            .terms
            .iter()
            .map(|(e, &v)| (e.clone(), (c * self.p.residue(v as i128)).value()))
            .filter(|(_, v)| *v != 0)
            .collect();
        MultiPoly {
            p: self.p,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.p, self.nvars, 1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Residue]) -> Result<Residue> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = self.p.zero();
        for (exps, c) in self.terms() {
            let mut term = c;
            for (x, &e) in point.iter().zip(exps) {
                term *= x.pow(e as u64);
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces variable i by `images[i]`; all images share one variable set.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target_vars = match images.first() {
            Some(f) => f.nvars,
            None => 0,
        };
        for f in images {
            assert_eq!(f.nvars, target_vars, "substituted polynomials must share variables");
            assert_eq!(f.p, self.p, "modulus mismatch in substitution");
        }
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|f| vec![MultiPoly::constant(self.p, target_vars, 1), f.clone()])
            .collect();
        let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
        for (exps, c) in self.terms() {
            let mut term = MultiPoly::constant(self.p, target_vars, c.value() as i128);
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[i];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            for (k, v) in term.terms {
                let slot = acc.entry(k).or_insert(0);
                *slot = (*slot + v) % self.p.get();
            }
        }
        Ok(Self::from_accumulator(self.p, target_vars, acc))
    }

    /// Polynomial induced on (Z/pZ)^n, listed with the first variable most
    /// significant.
    pub fn function_table(&self) -> Vec<Residue> {
        points(self.p, self.nvars)
            .map(|pt| self.eval(&pt).expect("arity"))
            .collect()
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let m = self.p.get();
        let mut terms = self.terms.clone();
        for (e, &c) in &rhs.terms {
            let slot = terms.entry(e.clone()).or_insert(0);
            *slot = (*slot + c) % m;
            if *slot == 0 {
                terms.remove(e);
            }
        }
        MultiPoly {
            p: self.p,
            nvars: self.nvars,
            terms,
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let m = self.p.get();
        MultiPoly {
            p: self.p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), m - c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let m = self.p.get();
        let mut acc: HashMap<Vec<u32>, u64> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + ca * cb % m) % m;
            }
        }
        MultiPoly::from_accumulator(self.p, self.nvars, acc)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

fn variable_name(i: usize, nvars: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for MultiPoly {
    /// `x^2*y + x*y^2 (mod 3)`, terms in descending lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (mod {})", self.p);
        }
        for (k, (exps, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = variable_name(i, self.nvars);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            match (c, factors.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", factors.join("*"))?,
                _ => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.nvars)
    }
}

/// All points of (Z/pZ)^n with the first coordinate most significant.
pub fn points(p: PrimeModulus, n: usize) -> impl Iterator<Item = Vec<Residue>> {
    let m = p.get();
    let count = m.checked_pow(n as u32).expect("point count overflows");
    (0..count).map(move |mut code| {
        let mut pt = vec![p.zero(); n];
        for slot in (0..n).rev() {
            pt[slot] = p.residue((code % m) as i128);
            code /= m;
        }
        pt
    })
}

/// Exponent vectors of length n with entries in [0, bound) summing to `total`.
fn bounded_compositions(n: usize, total: u32, bound: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, total: u32, bound: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slots_left = (n - prefix.len() - 1) as u32;
        for r in 0..bound.min(total + 1) {
            if total - r > slots_left * (bound - 1) {
                continue;
            }
            prefix.push(r);
            go(n, total - r, bound, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, total, bound, &mut Vec::with_capacity(n), &mut out);
    out
}

fn factorials_mod(p: PrimeModulus) -> Vec<Residue> {
    let mut f = vec![p.one()];
    for k in 1..p.get() {
        let next = f[f.len() - 1] * p.residue(k as i128);
        f.push(next);
    }
    f
}

/// C(n, k) mod p for n < p.
pub fn binomial_mod(n: u64, k: u64, p: PrimeModulus) -> Residue {
    assert!(n < p.get(), "binomial_mod needs n < p");
    if k > n {
        return p.zero();
    }
    let f = factorials_mod(p);
    f[n as usize]
        * (f[k as usize] * f[(n - k) as usize])
            .inv()
            .expect("k!, (n-k)! are units")
}

/// h(x₁, ..., xₙ) = -Σ x^r / (r₁!⋯rₙ!) over 0 ≤ rᵢ < p with Σrᵢ = p.
///
/// `n = 0` gives the zero polynomial in no variables.
pub fn entropy_poly(n: usize, p: PrimeModulus) -> MultiPoly {
    let fact = factorials_mod(p);
    let m = p.get() as u32;
    let terms = bounded_compositions(n, m, m).into_iter().map(|r| {
        let denom = r.iter().fold(p.one(), |acc, &ri| acc * fact[ri as usize]);
        let c = -denom.inv().expect("factorials below p are units");
        (r, c.value() as i128)
    });
    MultiPoly::from_terms(p, n, terms)
}

/// £₁(x) = h(x, 1-x) in closed form.
pub fn pounds1(p: PrimeModulus) -> MultiPoly {
    if p.get() == 2 {
        return MultiPoly::from_terms(p, 1, [(vec![1], 1), (vec![2], 1)]);
    }
    let terms = (1..p.get()).map(|r| {
        let c = p.residue(r as i128).inv().expect("r < p");
        (vec![r as u32], c.value() as i128)
    });
    MultiPoly::from_terms(p, 1, terms)
}

/// h(x, 1-x) obtained by symbolic substitution into the entropy polynomial.
pub fn pounds1_by_substitution(p: PrimeModulus) -> MultiPoly {
    let x = MultiPoly::var(p, 1, 0);
    let one_minus_x = &MultiPoly::constant(p, 1, 1) - &x;
    entropy_poly(2, p).substitute(&[x, one_minus_x]).expect("two variables")
}

/// G(u, v) = v^p F(u/v) for univariate F of degree at most p.
pub fn homogenize(f: &MultiPoly) -> Result<MultiPoly> {
    assert_eq!(f.nvars(), 1, "homogenize expects a univariate polynomial");
    let p = f.modulus();
    let m = p.get() as u32;
    let degree = f.total_degree().unwrap_or(0);
    if degree > m {
        return Err(Error::DegreeTooHigh { degree, p: p.get() });
    }
    let terms = f.terms().map(|(e, c)| (vec![e[0], m - e[0]], c.value() as i128));
    Ok(MultiPoly::from_terms(p, 2, terms))
}

/// The unique polynomial with all exponents below p inducing `table`
/// (points ordered as in [`points`]), assembled from the indicator
/// polynomials δ_a(x) = ∏ (1 - (xᵢ - aᵢ)^(p-1)).
pub fn interpolate_table(table: &[Residue], p: PrimeModulus, n: usize) -> Result<MultiPoly> {
    let m = p.get();
    let size = m
        .checked_pow(n as u32)
        .filter(|&s| s <= INTERPOLATION_GUARD)
        .ok_or_else(|| Error::RangeGuard {
            what: format!("table size {m}^{n}"),
            limit: INTERPOLATION_GUARD,
        })?;
    if table.len() as u64 != size {
        return Err(Error::ArityMismatch {
            expected: size as usize,
            found: table.len(),
        });
    }
    // delta[a][k]: coefficient of x^k in 1 - (x - a)^(p-1)
    let delta: Vec<Vec<Residue>> = p
        .elements()
        .map(|a| {
            (0..m)
                .map(|k| {
                    let c = binomial_mod(m - 1, k, p) * (-a).pow(m - 1 - k);
                    if k == 0 {
                        p.one() - c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect();

    let mut values: Vec<Residue> = table.to_vec();
    let mut stride = 1usize;
    for _axis in (0..n).rev() {
        let block = stride * m as usize;
        let mut next = vec![p.zero(); values.len()];
        for base in (0..values.len()).step_by(block) {
            for offset in 0..stride {
                for k in 0..m as usize {
                    let mut acc = p.zero();
                    for a in 0..m as usize {
                        acc += values[base + a * stride + offset] * delta[a][k];
                    }
                    next[base + k * stride + offset] = acc;
                }
            }
        }
        values = next;
        stride = block;
    }

    let terms = values.iter().enumerate().map(|(code, c)| {
        let mut exps = vec![0u32; n];
        let mut code = code as u64;
        for slot in (0..n).rev() {
            exps[slot] = (code % m) as u32;
            code /= m;
        }
        (exps, c.value() as i128)
    });
    Ok(MultiPoly::from_terms(p, n, terms))
}

/// Interpolates the function `f` on (Z/pZ)^n.
pub fn interpolate(f: impl Fn(&[Residue]) -> Residue, p: PrimeModulus, n: usize) -> Result<MultiPoly> {
    let m = p.get();
    if m.checked_pow(n as u32).is_none_or(|s| s > INTERPOLATION_GUARD) {
        return Err(Error::RangeGuard {
            what: format!("table size {m}^{n}"),
            limit: INTERPOLATION_GUARD,
        });
    }
    let table: Vec<Residue> = points(p, n).map(|pt| f(&pt)).collect();
    interpolate_table(&table, p, n)
}

fn check_prime_guard(p: PrimeModulus) -> Result<()> {
    if p.get() > IDENTITY_PRIME_GUARD {
        return Err(Error::RangeGuard {
            what: format!("p = {p}"),
            limit: IDENTITY_PRIME_GUARD,
        });
    }
    Ok(())
}

fn check_block_guard(blocks: &[usize]) -> Result<usize> {
    let total: usize = blocks.iter().sum();
    if total > GROUPING_TOTAL_GUARD {
        return Err(Error::RangeGuard {
            what: format!("block total {total}"),
            limit: GROUPING_TOTAL_GUARD as u64,
        });
    }
    Ok(total)
}

fn expect_zero(report: &mut VerificationReport, label: &str, poly: &MultiPoly) {
    report.check(poly.is_zero(), || {
        let lead = poly
            .terms()
            .next()
            .map(|(e, c)| format!("{c}·{e:?}"))
            .unwrap_or_default();
        format!("{label}: {} nonzero terms, e.g. {lead}", poly.num_terms())
    });
}

fn block_label(blocks: &[usize]) -> String {
    let parts: Vec<String> = blocks.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// h(y₁₁, ..., yₙₖₙ) - h(Σⱼ y₁ⱼ, ..., Σⱼ yₙⱼ) - Σᵢ h(yᵢ₁, ..., yᵢₖᵢ) = 0.
///
/// Blocks of size zero contribute a zero sum and the zero polynomial.
pub fn check_grouping(blocks: &[usize], p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let total = check_block_guard(blocks)?;
    let ys: Vec<MultiPoly> = (0..total).map(|i| MultiPoly::var(p, total, i)).collect();

    let full = entropy_poly(total, p).substitute(&ys)?;
    let mut sums = Vec::with_capacity(blocks.len());
    let mut inner = MultiPoly::zero(p, total);
    let mut start = 0;
    for &k in blocks {
        let block = &ys[start..start + k];
        sums.push(block.iter().fold(MultiPoly::zero(p, total), |acc, y| &acc + y));
        let h_block = if k == 0 {
            MultiPoly::zero(p, total)
        } else {
            entropy_poly(k, p).substitute(block)?
        };
        inner = &inner + &h_block;
        start += k;
    }
    let outer = if blocks.is_empty() {
        MultiPoly::zero(p, total)
    } else {
        entropy_poly(blocks.len(), p).substitute(&sums)?
    };

    let mut report = VerificationReport::new(format!("grouping {}, p={p}", block_label(blocks)));
    expect_zero(&mut report, "grouping", &(&(&full - &outer) - &inner));
    Ok(report)
}

/// h(xᵢyᵢⱼ) - h(xᵢ Σⱼ yᵢⱼ) - Σᵢ xᵢ^p h(yᵢ₁, ..., yᵢₖᵢ) = 0.
pub fn check_poly_chain_rule(blocks: &[usize], p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let total = check_block_guard(blocks)?;
    let n = blocks.len();
    let nvars = n + total;
    let xs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(p, nvars, i)).collect();
    let ys: Vec<MultiPoly> = (n..nvars).map(|i| MultiPoly::var(p, nvars, i)).collect();

    let mut products = Vec::with_capacity(total);
    let mut scaled_sums = Vec::with_capacity(n);
    let mut weighted = MultiPoly::zero(p, nvars);
    let mut start = 0;
    for (i, &k) in blocks.iter().enumerate() {
        let block = &ys[start..start + k];
        products.extend(block.iter().map(|y| &xs[i] * y));
        let sum = block.iter().fold(MultiPoly::zero(p, nvars), |acc, y| &acc + y);
        scaled_sums.push(&xs[i] * &sum);
        if k > 0 {
            let h_block = entropy_poly(k, p).substitute(block)?;
            weighted = &weighted + &(&xs[i].pow(p.get() as u32) * &h_block);
        }
        start += k;
    }
    let lhs = if total == 0 {
        MultiPoly::zero(p, nvars)
    } else {
        entropy_poly(total, p).substitute(&products)?
    };
    let outer = if n == 0 {
        MultiPoly::zero(p, nvars)
    } else {
        entropy_poly(n, p).substitute(&scaled_sums)?
    };

    let mut report = VerificationReport::new(format!("polynomial chain rule {}, p={p}", block_label(blocks)));
    expect_zero(&mut report, "chain rule", &(&(&lhs - &outer) - &weighted));
    Ok(report)
}

/// h(x,y) - h(x,y+z) + h(x+y,z) - h(y,z) = 0.
pub fn check_cocycle(p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let h = entropy_poly(2, p);
    let [x, y, z] = [0, 1, 2].map(|i| MultiPoly::var(p, 3, i));
    let at = |a: &MultiPoly, b: &MultiPoly| h.substitute(&[a.clone(), b.clone()]).expect("two variables");
    let expr = &(&(&at(&x, &y) - &at(&x, &(&y + &z))) + &at(&(&x + &y), &z)) - &at(&y, &z);
    let mut report = VerificationReport::new(format!("cocycle, p={p}"));
    expect_zero(&mut report, "cocycle", &expr);
    Ok(report)
}

/// £₁ closed form equals h(x, 1-x) expanded symbolically; for odd p this
/// includes the vanishing of the x^p coefficient.
pub fn check_pounds1_formula(p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let expanded = pounds1_by_substitution(p);
    let closed = pounds1(p);
    let mut report = VerificationReport::new(format!("£1 closed form, p={p}"));
    expect_zero(&mut report, "h(x,1-x) - £1", &(&expanded - &closed));
    if p.get() != 2 {
        let top = expanded.coefficient(&[p.get() as u32]);
        report.check(top.is_zero(), || format!("x^p coefficient is {top}"));
    }
    report.detail("pounds1", closed);
    Ok(report)
}

/// F(x) + G(y, 1-x) - F(y) - G(x, 1-y) with G the degree-p homogenization.
pub fn fundamental_defect(f: &MultiPoly) -> Result<MultiPoly> {
    let g = homogenize(f)?;
    let p = f.modulus();
    let x = MultiPoly::var(p, 2, 0);
    let y = MultiPoly::var(p, 2, 1);
    let one = MultiPoly::constant(p, 2, 1);
    let f_at = |v: &MultiPoly| f.substitute(std::slice::from_ref(v)).expect("univariate");
    let g_at = |u: &MultiPoly, v: &MultiPoly| g.substitute(&[u.clone(), v.clone()]).expect("two variables");
    let lhs = &f_at(&x) + &g_at(&y, &(&one - &x));
    let rhs = &f_at(&y) + &g_at(&x, &(&one - &y));
    Ok(&lhs - &rhs)
}

/// Whether F(x) + (1-x)^p F(y/(1-x)) = F(y) + (1-y)^p F(x/(1-y)) holds as a
/// polynomial identity. A non-solution yields a failing report, not an error.
pub fn check_fundamental(f: &MultiPoly) -> Result<VerificationReport> {
    if f.nvars() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: f.nvars(),
        });
    }
    let defect = fundamental_defect(f)?;
    let mut report = VerificationReport::new(format!("fundamental equation for {f}"));
    expect_zero(&mut report, "fundamental", &defect);
    Ok(report)
}

/// £₁(1-x) = £₁(x), while x^p is not symmetric.
pub fn check_symmetry_pounds1(p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let x = MultiPoly::var(p, 1, 0);
    let reflect = &MultiPoly::constant(p, 1, 1) - &x;
    let l = pounds1(p);
    let l_reflected = l.substitute(std::slice::from_ref(&reflect))?;
    let mut report = VerificationReport::new(format!("£1 symmetry, p={p}"));
    expect_zero(&mut report, "£1(1-x) - £1(x)", &(&l_reflected - &l));
    let xp = x.pow(p.get() as u32);
    let xp_reflected = xp.substitute(std::slice::from_ref(&reflect))?;
    report.check(xp_reflected != xp, || "x^p unexpectedly symmetric".into());
    Ok(report)
}

/// h(x, y) = (x+y)^p £₁(x/(x+y)), i.e. h(x,y) = G(x, x+y).
pub fn homogenize_check(p: PrimeModulus) -> Result<VerificationReport> {
    check_prime_guard(p)?;
    let g = homogenize(&pounds1(p))?;
    let x = MultiPoly::var(p, 2, 0);
    let y = MultiPoly::var(p, 2, 1);
    let rebuilt = g.substitute(&[x.clone(), &x + &y])?;
    let mut report = VerificationReport::new(format!("homogenization, p={p}"));
    expect_zero(&mut report, "h - G(x,x+y)", &(&entropy_poly(2, p) - &rebuilt));
    Ok(report)
}

/// h agrees with entropy on every point of Π_n.
pub fn check_polynomial_agreement(n: usize, p: PrimeModulus) -> Result<VerificationReport> {
    let h = entropy_poly(n, p);
    let mut report = VerificationReport::new(format!("h = H on Π_{n}, p={p}"));
    for d in ModDist::enumerate(p, n) {
        let value = h.eval(d.probs())?;
        report.check(value == d.entropy(), || {
            format!("{d}: h = {value}, H = {}", d.entropy())
        });
    }
    Ok(report)
}

/// C(p-1, s) ≡ (-1)^s for 0 ≤ s < p.
pub fn check_binomial_signs(p: PrimeModulus) -> VerificationReport {
    let mut report = VerificationReport::new(format!("C(p-1,s) = (-1)^s, p={p}"));
    let minus_one = -p.one();
    for s in 0..p.get() {
        let c = binomial_mod(p.get() - 1, s, p);
        report.check(c == minus_one.pow(s), || format!("s={s}: {c}"));
    }
    report
}

/// Block-size vectors with entries ≥ 1 and total at most `max_total`.
pub fn block_shapes(max_total: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for k in 1..=remaining {
            prefix.push(k);
            go(remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(max_total, &mut Vec::new(), &mut out);
    out
}

/// Runs every identity check for one prime: cocycle, grouping and the
/// polynomial chain rule for all block shapes up to `max_block_total`, the
/// £₁ closed form, its symmetry, homogenization, and the fundamental
/// equation for both £₁ and x^p.
pub fn check_identities(p: PrimeModulus, max_block_total: usize) -> Result<Vec<VerificationReport>> {
    let mut reports = vec![check_cocycle(p)?];

    let mut grouping = VerificationReport::new(format!("grouping up to total {max_block_total}, p={p}"));
    let mut chain = VerificationReport::new(format!("polynomial chain rule up to total {max_block_total}, p={p}"));
    for shape in block_shapes(max_block_total) {
        grouping.absorb(check_grouping(&shape, p)?);
        chain.absorb(check_poly_chain_rule(&shape, p)?);
    }
    reports.push(grouping);
    reports.push(chain);

    reports.push(check_pounds1_formula(p)?);
    reports.push(check_symmetry_pounds1(p)?);
    reports.push(homogenize_check(p)?);
    reports.push(check_fundamental(&pounds1(p))?);
    let xp = MultiPoly::var(p, 1, 0).pow(p.get() as u32);
    reports.push(check_fundamental(&xp)?);
    Ok(reports)
}
