//! The chain rule as a finite linear system over Z/pZ.
//!
//! The unknowns are the values I(π) for every π ∈ Π_1 ∪ ... ∪ Π_N. Each
//! chain-rule instance I(π ∘ γ⃗) - I(π) - Σ πᵢ I(γⁱ) = 0 with composite arity
//! at most N is one row; the coefficients πᵢ are known scalars, so the rows
//! are linear. The kernel always contains entropy; when it is
//! one-dimensional the truncated system already forces I = cH.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dist::ModDist;
use crate::error::{Error, Result};
use crate::modular::{PrimeModulus, Residue};
use crate::report::VerificationReport;

/// Default bound on the number of unknowns.
pub const UNKNOWN_GUARD: u64 = 10_000;

/// A sparse row: (column, nonzero coefficient) sorted by column.
pub type SparseRow = Vec<(usize, u64)>;

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    p: PrimeModulus,
    max_arity: usize,
    unknowns: Vec<ModDist>,
    rows: Vec<SparseRow>,
}

/// Number of unknowns Σ_{n ≤ N} p^(n-1), saturating.
pub fn unknown_count(p: PrimeModulus, max_arity: usize) -> u64 {
    (0..max_arity as u32).fold(0u64, |acc, e| {
        acc.saturating_add(p.get().checked_pow(e).unwrap_or(u64::MAX))
    })
}

/// Block sizes k₁..kₙ with every kᵢ ≥ 1 and Σkᵢ ≤ `max_total`.
fn arities(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let slots_after = n - prefix.len() - 1;
        for k in 1..=remaining.saturating_sub(slots_after) {
            prefix.push(k);
            go(n, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n <= max_total {
        go(n, max_total, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn key(d: &ModDist) -> Vec<u64> {
    d.probs().iter().map(|r| r.value()).collect()
}

/// Odometer step over inner distribution choices; false once exhausted.
fn advance(choice: &mut [usize], ks: &[usize], by_arity: &[Vec<ModDist>]) -> bool {
    for slot in (0..choice.len()).rev() {
        choice[slot] += 1;
        if choice[slot] < by_arity[ks[slot]].len() {
            return true;
        }
        choice[slot] = 0;
    }
    false
}

/// Scales a row so its leading coefficient is 1; zero rows become empty.
fn normalize(row: BTreeMap<usize, u64>, p: PrimeModulus) -> SparseRow {
    let entries: Vec<(usize, u64)> = row.into_iter().filter(|(_, c)| *c != 0).collect();
    let Some(&(_, lead)) = entries.first() else {
        return Vec::new();
    };
    let inv = p.residue(lead as i128).inv().expect("nonzero").value();
    entries.into_iter().map(|(col, c)| (col, c * inv % p.get())).collect()
}

impl ConstraintSystem {
    /// Enumerates every chain-rule instance with n ≤ N, kᵢ ≥ 1 and
    /// Σkᵢ ≤ N, dropping duplicate and trivially satisfied rows.
    pub fn build(p: PrimeModulus, max_arity: usize, override_guard: bool) -> Result<Self> {
        if max_arity == 0 {
            return Err(Error::EmptyDistribution);
        }
        let count = unknown_count(p, max_arity);
        if count > UNKNOWN_GUARD && !override_guard {
            return Err(Error::RangeGuard {
                what: format!("{count} unknowns"),
                limit: UNKNOWN_GUARD,
            });
        }
        let unknowns: Vec<ModDist> = (1..=max_arity).flat_map(|n| ModDist::enumerate(p, n)).collect();
        let index: HashMap<Vec<u64>, usize> = unknowns.iter().enumerate().map(|(i, d)| (key(d), i)).collect();
        let by_arity: Vec<Vec<ModDist>> = (0..=max_arity)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    ModDist::enumerate(p, n).collect()
                }
            })
            .collect();

        let m = p.get();
        let mut seen: HashSet<SparseRow> = HashSet::new();
        for n in 1..=max_arity {
            for ks in arities(n, max_arity) {
                for outer in &by_arity[n] {
                    let mut choice = vec![0usize; n];
                    loop {
                        let inners: Vec<ModDist> =
                            choice.iter().zip(&ks).map(|(&c, &k)| by_arity[k][c].clone()).collect();
                        let composite = outer.compose(&inners)?;
                        let mut row: BTreeMap<usize, u64> = BTreeMap::new();
                        let mut add = |d: &ModDist, c: u64| {
                            let slot = row.entry(index[&key(d)]).or_insert(0);
                            *slot = (*slot + c) % m;
                        };
                        add(&composite, 1);
                        add(outer, m - 1);
                        for (w, g) in outer.probs().iter().zip(&inners) {
                            add(g, (m - w.value()) % m);
                        }
                        let row = normalize(row, p);
                        if !row.is_empty() {
                            seen.insert(row);
                        }

                        if !advance(&mut choice, &ks, &by_arity) {
                            break;
                        }
                    }
                }
            }
        }
        let mut rows: Vec<SparseRow> = seen.into_iter().collect();
        rows.sort();
        Ok(ConstraintSystem {
            p,
            max_arity,
            unknowns,
            rows,
        })
    }

    /// A system with the given unknowns and no rows.
    pub fn empty(p: PrimeModulus, max_arity: usize) -> Self {
        ConstraintSystem {
            p,
            max_arity,
            unknowns: (1..=max_arity).flat_map(|n| ModDist::enumerate(p, n)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn unknowns(&self) -> &[ModDist] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn position(&self, d: &ModDist) -> Option<usize> {
        self.unknowns.iter().position(|u| u == d)
    }

    /// Entropy of every unknown, in unknown order.
    pub fn entropy_vector(&self) -> Vec<Residue> {
        self.unknowns.iter().map(ModDist::entropy).collect()
    }

    pub fn evaluate_row(&self, row: &SparseRow, values: &[Residue]) -> Residue {
        row.iter().fold(self.p.zero(), |acc, &(col, c)| {
            acc + self.p.residue(c as i128) * values[col]
        })
    }

    /// Kernel of the system by sparse Gaussian elimination.
    pub fn solve(&self) -> SolutionSpace {
        solve(self)
    }
}

pub fn build_system(p: PrimeModulus, max_arity: usize) -> Result<ConstraintSystem> {
    ConstraintSystem::build(p, max_arity, false)
}

/// Basis of the kernel, one vector per free column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    pub nvars: usize,
    pub rank: usize,
    /// Columns without a pivot; basis vector i has a 1 at `free_columns[i]`
    /// and 0 at every other free column.
    pub free_columns: Vec<usize>,
    pub basis: Vec<Vec<Residue>>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether `v` is a linear combination of the basis.
    pub fn contains(&self, v: &[Residue]) -> bool {
        if v.len() != self.nvars {
            return false;
        }
        let p = match v.first() {
            Some(r) => r.modulus(),
            None => return true,
        };
        let mut combo = vec![p.zero(); self.nvars];
        for (b, &col) in self.basis.iter().zip(&self.free_columns) {
            let coeff = v[col];
            for (slot, &x) in combo.iter_mut().zip(b) {
                *slot += coeff * x;
            }
        }
        combo == v
    }
}

fn reduce_by(row: &mut BTreeMap<usize, u64>, pivot: &BTreeMap<usize, u64>, col: usize, m: u64) {
    let factor = match row.get(&col) {
        Some(&f) if f != 0 => f,
        _ => return,
    };
    for (&c, &v) in pivot {
        let slot = row.entry(c).or_insert(0);
        *slot = (*slot + m - factor * v % m) % m;
        if *slot == 0 {
            row.remove(&c);
        }
    }
}

pub fn solve(system: &ConstraintSystem) -> SolutionSpace {
    let p = system.p;
    let m = p.get();
    let nvars = system.unknowns.len();
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();

    for row in &system.rows {
        let mut r: BTreeMap<usize, u64> = row.iter().copied().collect();
        while let Some((&lead, &c)) = r.iter().next() {
            if let Some(pivot) = pivots.get(&lead) {
                reduce_by(&mut r, pivot, lead, m);
            } else {
                let inv = p.residue(c as i128).inv().expect("nonzero").value();
                for v in r.values_mut() {
                    *v = *v * inv % m;
                }
                pivots.insert(lead, r);
                break;
            }
        }
    }

    // back-substitution to reduced row echelon form
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &col in &cols {
        let pivot = pivots[&col].clone();
        for (&other, row) in pivots.iter_mut() {
            if other != col {
                reduce_by(row, &pivot, col, m);
            }
        }
    }

    let free_columns: Vec<usize> = (0..nvars).filter(|c| !pivots.contains_key(c)).collect();
    let basis = free_columns
        .iter()
        .map(|&f| {
            let mut v = vec![p.zero(); nvars];
            v[f] = p.one();
            for (&col, row) in &pivots {
                if let Some(&c) = row.get(&f) {
                    v[col] = -p.residue(c as i128);
                }
            }
            v
        })
        .collect();
    SolutionSpace {
        nvars,
        rank: pivots.len(),
        free_columns,
        basis,
    }
}

/// Soundness (entropy satisfies every row and lies in the kernel) is always
/// asserted. A kernel larger than span{H} is reported through the details,
/// since a finite truncation may be under-constrained.
pub fn compare_with_entropy(solution: &SolutionSpace, system: &ConstraintSystem) -> VerificationReport {
    let h = system.entropy_vector();
    let mut report = VerificationReport::new(format!(
        "chain-rule kernel vs entropy, p={}, N={}",
        system.p, system.max_arity
    ));
    for (i, row) in system.rows.iter().enumerate() {
        let value = system.evaluate_row(row, &h);
        report.check(value.is_zero(), || format!("row {i} evaluates to {value} on H"));
    }
    let contains = solution.contains(&h);
    report.check(contains, || "entropy is not in the computed kernel".into());

    let h_nonzero = h.iter().any(|r| !r.is_zero());
    let equals_span = contains && h_nonzero && solution.dimension() == 1;
    report.detail("unknowns", system.unknowns.len());
    report.detail("rows", system.rows.len());
    report.detail("kernel_dim", solution.dimension());
    report.detail("contains_entropy", contains);
    report.detail("kernel_is_span_of_entropy", equals_span);
    if !equals_span {
        let expected = usize::from(h_nonzero);
        report.detail("extra_dimensions", solution.dimension().saturating_sub(expected));
        for (b, &col) in solution.basis.iter().zip(&solution.free_columns) {
            let support: Vec<String> = b
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .take(8)
                .map(|(i, r)| format!("{}->{}", system.unknowns[i], r))
                .collect();
            report.detail(format!("basis[{}]", system.unknowns[col]), support.join(" "));
        }
    }
    report
}
