//! U(N_c) representation theory: signatures, Weyl dimensions, charges,
//! quadratic Casimir, weight systems by Gelfand–Tsetlin enumeration, torus
//! characters, and the L1 Casimir built from the weight system.
//!
//! Irreps of U(N) are labeled by nonincreasing integer tuples
//! `lambda_1 >= ... >= lambda_N` (negative entries allowed). The character on
//! the maximal torus is the ratio of antisymmetrized exponential sums
//! `xi_{lambda+rho} / xi_rho` with `rho = (N-1, ..., 1, 0)`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num::rational::BigRational;
use num::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Angle-collision threshold below which the torus character switches from
/// the ratio formula to the (always finite) weight-table sum.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Default cap on the number of Gelfand–Tsetlin patterns enumerated per
/// signature.
pub const DEFAULT_PATTERN_BUDGET: usize = 2_000_000;

/// A nonincreasing integer tuple labeling a U(N_c) irrep.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepSignature {
    entries: Vec<i64>,
}

impl IrrepSignature {
    /// Builds a signature, rejecting tuples that are empty or increasing.
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("signature must be nonempty".into()));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "signature {entries:?} is not nonincreasing"
            )));
        }
        Ok(Self { entries })
    }

    /// The trivial (all-zero) signature of U(n).
    pub fn trivial(n_c: usize) -> Self {
        Self { entries: vec![0; n_c] }
    }

    /// The defining vector representation (1, 0, ..., 0).
    pub fn fundamental(n_c: usize) -> Self {
        let mut entries = vec![0; n_c];
        entries[0] = 1;
        Self { entries }
    }

    pub fn n_c(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The contragredient signature (entries negated and reversed).
    pub fn dual(&self) -> Self {
        let mut entries: Vec<i64> = self.entries.iter().map(|&x| -x).collect();
        entries.reverse();
        Self { entries }
    }

    /// U(1) charge q = sum of the entries.
    pub fn charge(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Quadratic Casimir `sum_j lambda_j (lambda_j + N + 1 - 2j)` (1-based j).
    pub fn casimir2(&self) -> i64 {
        let n = self.entries.len() as i64;
        self.entries
            .iter()
            .enumerate()
            .map(|(j0, &l)| l * (l + n + 1 - 2 * (j0 as i64 + 1)))
            .sum()
    }

    /// Weyl dimension, the Vandermonde ratio of `lambda + rho` against `rho`.
    pub fn dimension(&self) -> u64 {
        let n = self.entries.len();
        let shifted: Vec<i128> = self
            .entries
            .iter()
            .enumerate()
            .map(|(j, &l)| l as i128 + (n - 1 - j) as i128)
            .collect();
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for k in 0..n {
            for l in k + 1..n {
                num *= shifted[k] - shifted[l];
                den *= (l - k) as i128;
            }
        }
        debug_assert_eq!(num % den, 0);
        (num / den) as u64
    }
}

impl std::fmt::Display for IrrepSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Complete weight system of an irrep: weight tuple -> multiplicity.
#[derive(Debug, Clone)]
pub struct WeightTable {
    signature: IrrepSignature,
    weights: BTreeMap<Vec<i64>, u64>,
}

impl WeightTable {
    pub fn signature(&self) -> &IrrepSignature {
        &self.signature
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, u64)> {
        self.weights.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn multiplicity(&self, weight: &[i64]) -> u64 {
        self.weights.get(weight).copied().unwrap_or(0)
    }

    /// Sum of all multiplicities; equals the Weyl dimension.
    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    /// Character evaluated as the finite sum over the weight system.
    pub fn character(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, m) in self.iter() {
            let phase: f64 = w.iter().zip(theta).map(|(&n, &t)| n as f64 * t).sum();
            acc += Complex64::from_polar(m as f64, phase);
        }
        acc
    }
}

fn weight_cache() -> &'static Mutex<HashMap<IrrepSignature, Arc<WeightTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<IrrepSignature, Arc<WeightTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Weight multiplicities of `lambda` by Gelfand–Tsetlin pattern enumeration.
///
/// The signature is first shifted to nonnegative entries (a determinant-power
/// twist), patterns are enumerated with the interlacing constraints, and the
/// per-coordinate shift is undone on the resulting weights. Results are cached
/// per signature behind a mutex.
pub fn weight_multiplicities(lambda: &IrrepSignature) -> Result<Arc<WeightTable>> {
    weight_multiplicities_with_budget(lambda, DEFAULT_PATTERN_BUDGET)
}

pub fn weight_multiplicities_with_budget(
    lambda: &IrrepSignature,
    budget: usize,
) -> Result<Arc<WeightTable>> {
    if let Some(t) = weight_cache().lock().unwrap().get(lambda) {
        return Ok(Arc::clone(t));
    }
    let n = lambda.n_c();
    let shift = *lambda.entries().last().unwrap();
    let top: Vec<i64> = lambda.entries().iter().map(|&l| l - shift).collect();

    let mut weights: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let mut count = 0usize;
    // Row sums of the pattern from the top (length n) down to length 1.
    let mut row_sums = vec![0i64; n + 1];
    row_sums[n] = top.iter().sum();
    enumerate_gt(&top, n, &mut row_sums, &mut weights, &mut count, budget, shift)?;

    let table = Arc::new(WeightTable { signature: lambda.clone(), weights });
    weight_cache()
        .lock()
        .unwrap()
        .insert(lambda.clone(), Arc::clone(&table));
    Ok(table)
}

fn enumerate_gt(
    row: &[i64],
    n: usize,
    row_sums: &mut Vec<i64>,
    weights: &mut BTreeMap<Vec<i64>, u64>,
    count: &mut usize,
    budget: usize,
    shift: i64,
) -> Result<()> {
    let r = row.len();
    if r == 1 {
        *count += 1;
        if *count > budget {
            return Err(Error::Budget {
                module: "repn",
                message: format!("more than {budget} Gelfand-Tsetlin patterns"),
            });
        }
        // Weight component k is the k-th row-sum difference, shifted back.
        let mut w = Vec::with_capacity(n);
        for k in 1..=n {
            w.push(row_sums[k] - row_sums[k - 1] + shift);
        }
        *weights.entry(w).or_insert(0) += 1;
        return Ok(());
    }
    // Enumerate interlacing rows of length r-1.
    let mut next = vec![0i64; r - 1];
    fn rec(
        j: usize,
        row: &[i64],
        next: &mut Vec<i64>,
        n: usize,
        row_sums: &mut Vec<i64>,
        weights: &mut BTreeMap<Vec<i64>, u64>,
        count: &mut usize,
        budget: usize,
        shift: i64,
    ) -> Result<()> {
        if j == next.len() {
            row_sums[next.len()] = next.iter().sum();
            let snapshot = next.clone();
            return enumerate_gt(&snapshot, n, row_sums, weights, count, budget, shift);
        }
        for v in row[j + 1]..=row[j] {
            next[j] = v;
            rec(j + 1, row, next, n, row_sums, weights, count, budget, shift)?;
        }
        Ok(())
    }
    rec(0, row, &mut next, n, row_sums, weights, count, budget, shift)
}

/// Antisymmetrized exponential sum `det[e^{i mu_k theta_l}]`.
fn xi(mu: &[i64], theta: &[f64]) -> Complex64 {
    let n = mu.len();
    let m = DMatrix::from_fn(n, n, |k, l| Complex64::from_polar(1.0, mu[k] as f64 * theta[l]));
    m.determinant()
}

/// Character of `lambda` on the torus point `e^{i theta}`.
///
/// Uses the ratio of antisymmetric sums away from angle collisions and the
/// weight-table sum within `DEGENERACY_THRESHOLD` of one. At `theta = 0` the
/// dimension is returned exactly.
pub fn character_at_torus(lambda: &IrrepSignature, theta: &[f64]) -> Result<Complex64> {
    let n = lambda.n_c();
    assert_eq!(theta.len(), n, "angle tuple length must match N_c");
    if theta.iter().all(|&t| t == 0.0) {
        return Ok(Complex64::new(lambda.dimension() as f64, 0.0));
    }
    let mut min_sep = f64::INFINITY;
    for k in 0..n {
        for l in k + 1..n {
            let d = (Complex64::from_polar(1.0, theta[k]) - Complex64::from_polar(1.0, theta[l]))
                .norm();
            min_sep = min_sep.min(d);
        }
    }
    if min_sep < DEGENERACY_THRESHOLD {
        let table = weight_multiplicities(lambda)?;
        return Ok(table.character(theta));
    }
    let rho: Vec<i64> = (0..n).map(|j| (n - 1 - j) as i64).collect();
    let shifted: Vec<i64> = lambda
        .entries()
        .iter()
        .zip(&rho)
        .map(|(&l, &r)| l + r)
        .collect();
    Ok(xi(&shifted, theta) / xi(&rho, theta))
}

/// The L1 Casimir: dimension-averaged sum of |weight| over the weight system,
/// as an exact rational.
pub fn casimir1(lambda: &IrrepSignature) -> Result<BigRational> {
    let table = weight_multiplicities(lambda)?;
    let mut num = BigInt::from(0);
    for (w, m) in table.iter() {
        let l1: i64 = w.iter().map(|&x| x.abs()).sum();
        num += BigInt::from(m) * BigInt::from(l1);
    }
    Ok(BigRational::new(num, BigInt::from(lambda.dimension())))
}

/// `casimir1` as a float, for the truncated character sums.
pub fn casimir1_f64(lambda: &IrrepSignature) -> Result<f64> {
    let r = casimir1(lambda)?;
    Ok(rational_to_f64(&r))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// All signatures of U(n) with entries bounded by `max_entry` in absolute
/// value, in lexicographic order.
pub fn enumerate_signatures(n_c: usize, max_entry: i64) -> Vec<IrrepSignature> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n_c);
    fn rec(n_c: usize, max_entry: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<IrrepSignature>) {
        if cur.len() == n_c {
            out.push(IrrepSignature { entries: cur.clone() });
            return;
        }
        for v in (-max_entry..=hi).rev() {
            cur.push(v);
            rec(n_c, max_entry, v, cur, out);
            cur.pop();
        }
    }
    rec(n_c, max_entry, max_entry, &mut cur, &mut out);
    out
}
