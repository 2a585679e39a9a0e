//! Fock-space identities behind the character expansion: the plaquette
//! weight as a truncated trace over symmetric powers, and the singlet
//! (Molien/Hilbert) series counting invariants degree by degree.
//!
//! A unitary `U` acts on the `2 N_b N_c` single-boson modes through
//! `M(U) = (U ox 1_{N_b}) (+) (conj(U) ox 1_{N_b})`; the weight satisfies
//! `|Det(1 - a U)|^{-2 N_b} = sum_n a^n h_n(M(U))` with `h_n` the trace of
//! the n-th symmetric power, recovered from power sums by Newton's
//! identities. Projecting on the invariant sector turns `h_n` into integer
//! dimensions whose generating series is the trivial expansion coefficient.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::periodic_grid;

/// The single-particle action of a unitary on the charged mode space.
#[derive(Debug, Clone)]
pub struct OneParticleMatrix {
    matrix: DMatrix<Complex64>,
    n_b: u32,
}

impl OneParticleMatrix {
    /// Block sum of `n_b` copies of `u` and `n_b` copies of its conjugate.
    pub fn new(u: &DMatrix<Complex64>, n_b: u32) -> Self {
        let n = u.nrows();
        let dim = 2 * n * n_b as usize;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for copy in 0..n_b as usize {
            let off_plus = copy * n;
            let off_minus = (n_b as usize + copy) * n;
            for i in 0..n {
                for j in 0..n {
                    m[(off_plus + i, off_plus + j)] = u[(i, j)];
                    m[(off_minus + i, off_minus + j)] = u[(i, j)].conj();
                }
            }
        }
        Self { matrix: m, n_b }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn n_b(&self) -> u32 {
        self.n_b
    }

    /// `Tr M^k`, real by the conjugate pairing of the spectrum.
    pub fn power_sum(&self, k: u32) -> f64 {
        let mut m = DMatrix::<Complex64>::identity(self.matrix.nrows(), self.matrix.nrows());
        for _ in 0..k {
            m = &m * &self.matrix;
        }
        let tr: Complex64 = m.diagonal().iter().sum();
        tr.re
    }
}

/// Power sums `Tr M(U)^k = 2 N_b Re Tr U^k` for `k = 1..=k_max`, without
/// forming the block matrix.
fn power_sums(u: &DMatrix<Complex64>, n_b: u32, k_max: usize) -> Vec<f64> {
    let mut sums = Vec::with_capacity(k_max);
    let mut p = u.clone();
    for k in 0..k_max {
        if k > 0 {
            p = &p * u;
        }
        let tr: Complex64 = p.diagonal().iter().sum();
        sums.push(2.0 * n_b as f64 * tr.re);
    }
    sums
}

/// Complete homogeneous traces `h_0..h_max` from power sums via Newton's
/// identities: `n h_n = sum_{k=1}^{n} p_k h_{n-k}`.
fn homogeneous_traces(p: &[f64], h_max: usize) -> Vec<f64> {
    let mut h = vec![0.0; h_max + 1];
    h[0] = 1.0;
    for n in 1..=h_max {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += p[k - 1] * h[n - k];
        }
        h[n] = acc / n as f64;
    }
    h
}

/// Truncated trace `sum_{n=0}^{K} a^n h_n(M(U))`; converges to
/// `|Det(1 - a U)|^{-2 N_b}` as the cutoff grows.
pub fn truncated_fock_trace(u: &DMatrix<Complex64>, alpha: f64, n_b: u32, cutoff: usize) -> f64 {
    let p = power_sums(u, n_b, cutoff);
    let h = homogeneous_traces(&p, cutoff);
    let mut acc = 0.0;
    let mut apow = 1.0;
    for hn in h {
        acc += apow * hn;
        apow *= alpha;
    }
    acc
}

/// Both sides of the trace identity and their relative error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetIdentityReport {
    pub trace_value: f64,
    pub determinant_value: f64,
    pub relative_error: f64,
    /// Empirical constant in the tail model `C a^{K+1} (K+1)^{2 N_b N_c}`.
    pub error_model_constant: f64,
}

/// Evaluates the determinant against the truncated trace, with the excluded
/// tail modeled geometrically.
pub fn verify_det_identity(
    u: &DMatrix<Complex64>,
    alpha: f64,
    n_b: u32,
    cutoff: usize,
) -> Result<DetIdentityReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter("need 0 <= alpha < 1".into()));
    }
    let trace_value = truncated_fock_trace(u, alpha, n_b, cutoff);
    let n = u.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let det = (&id - u * Complex64::new(alpha, 0.0)).determinant().norm();
    let determinant_value = det.powi(-2 * n_b as i32);
    let relative_error = (trace_value - determinant_value).abs() / determinant_value;
    let modes = 2 * n_b as i32 * n as i32;
    let model = alpha.powi(cutoff as i32 + 1) * ((cutoff + 1) as f64).powi(modes);
    let error_model_constant = if model > 0.0 { relative_error / model } else { 0.0 };
    // floor the gate at roundoff: the model tail can drop below epsilon
    if relative_error > (1e6 * model).max(1e-12) {
        return Err(Error::Precision {
            module: "fockcheck",
            message: format!(
                "truncated trace missed the determinant by {relative_error:e} at cutoff {cutoff}"
            ),
        });
    }
    Ok(DetIdentityReport {
        trace_value,
        determinant_value,
        relative_error,
        error_model_constant,
    })
}

/// Dimensions of the invariant sector degree by degree: the Weyl-measure
/// integral of `h_n` over the torus, rounded to integers with a residual
/// gate.
pub fn singlet_hilbert_series(
    n_c: usize,
    n_b: u32,
    degree_cutoff: usize,
    grid: usize,
) -> Result<Vec<u64>> {
    if n_c == 0 || n_c > 2 {
        return Err(Error::Budget {
            module: "fockcheck",
            message: format!("Hilbert quadrature limited to N_c <= 2, got {n_c}"),
        });
    }
    if degree_cutoff > 40 {
        return Err(Error::Budget {
            module: "fockcheck",
            message: format!("degree cutoff {degree_cutoff} exceeds 40"),
        });
    }
    if grid <= degree_cutoff + 2 * n_c {
        return Err(Error::InvalidParameter(format!(
            "grid {grid} too small for degree {degree_cutoff}"
        )));
    }
    let angles = periodic_grid(grid);
    let mut sums = vec![0.0f64; degree_cutoff + 1];
    let mut theta = vec![0.0; n_c];
    let total = grid.pow(n_c as u32);
    for flat in 0..total {
        let mut rem = flat;
        for t in theta.iter_mut() {
            *t = angles[rem % grid];
            rem /= grid;
        }
        // power sums of the one-particle matrix on the torus
        let p: Vec<f64> = (1..=degree_cutoff)
            .map(|k| {
                2.0 * n_b as f64
                    * theta.iter().map(|&t| (k as f64 * t).cos()).sum::<f64>()
            })
            .collect();
        let h = homogeneous_traces(&p, degree_cutoff);
        let mut j = 1.0;
        for a in 0..n_c {
            for b in a + 1..n_c {
                j *= (Complex64::from_polar(1.0, theta[a]) - Complex64::from_polar(1.0, theta[b]))
                    .norm_sqr();
            }
        }
        for (s, hn) in sums.iter_mut().zip(&h) {
            *s += hn * j;
        }
    }
    let factorial: f64 = (1..=n_c).map(|k| k as f64).product();
    let mut dims = Vec::with_capacity(degree_cutoff + 1);
    for (n, s) in sums.iter().enumerate() {
        let v = s / total as f64 / factorial;
        let rounded = v.round();
        if (v - rounded).abs() > 1e-6 || rounded < 0.0 {
            return Err(Error::Precision {
                module: "fockcheck",
                message: format!("degree {n} dimension {v} failed the integer rounding gate"),
            });
        }
        dims.push(rounded as u64);
    }
    Ok(dims)
}
