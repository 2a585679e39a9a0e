//! The determinantal plaquette weight and its character expansion.
//!
//! The weight on U(N_c) is
//! `w(U) = |Det(1 - a_f U)|^{2 N_f} / |Det(1 - a_b U)|^{2 N_b}`,
//! a class function that factorizes over the eigenphases. Expansion
//! coefficients `c_lambda = int w(U) chi_lambda(U^-1) dU` (Haar mass 1)
//! reduce, by the Andreief/Heine identity, to an N_c x N_c determinant of
//! 1d Fourier coefficients of the single-angle weight. An independent torus
//! quadrature engine evaluates the same integrals directly; the residues
//! module supplies a third, exact route.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, periodic_grid};
use crate::repn::{self, IrrepSignature};

/// Relative tail threshold for the Fourier coefficient series.
const SERIES_TOL: f64 = 1e-16;
/// Hard cap on series terms before an explicit precision error is raised.
const SERIES_CAP: usize = 1_000_000;

/// Per-plaquette couplings and species content of the induced model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCouplings {
    pub n_c: usize,
    pub n_b: u32,
    pub n_f: u32,
    pub alpha_b: f64,
    pub alpha_f: f64,
}

impl ModelCouplings {
    pub fn new(n_c: usize, n_b: u32, n_f: u32, alpha_b: f64, alpha_f: f64) -> Result<Self> {
        if n_c == 0 {
            return Err(Error::InvalidParameter("N_c must be at least 1".into()));
        }
        if alpha_b.abs() >= 1.0 || !alpha_b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "|alpha_b| must be strictly below 1, got {alpha_b}"
            )));
        }
        if !alpha_f.is_finite() {
            return Err(Error::InvalidParameter("alpha_f must be finite".into()));
        }
        Ok(Self { n_c, n_b, n_f, alpha_b, alpha_f })
    }

    /// Pure boson model with `n_b` flavors at coupling `alpha_b`.
    pub fn boson(n_c: usize, n_b: u32, alpha_b: f64) -> Result<Self> {
        Self::new(n_c, n_b, 0, alpha_b, 0.0)
    }

    /// Pure fermion model with `n_f` flavors at coupling `alpha_f`.
    pub fn fermion(n_c: usize, n_f: u32, alpha_f: f64) -> Result<Self> {
        Self::new(n_c, 0, n_f, 0.0, alpha_f)
    }

    /// The single-angle weight `|1 - a_f z|^{2 N_f} |1 - a_b z|^{-2 N_b}`
    /// at `z = e^{i t}`.
    pub fn weight_1d(&self, theta: f64) -> f64 {
        let z = Complex64::from_polar(1.0, theta);
        let f = (Complex64::new(1.0, 0.0) - self.alpha_f * z).norm_sqr();
        let b = (Complex64::new(1.0, 0.0) - self.alpha_b * z).norm_sqr();
        f.powi(self.n_f as i32) / b.powi(self.n_b as i32)
    }

    /// Full class-function weight at a torus point.
    pub fn weight_torus(&self, theta: &[f64]) -> f64 {
        theta.iter().map(|&t| self.weight_1d(t)).product()
    }
}

/// Engine that produced a coefficient value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Determinant,
    Quadrature,
    ResidueOracle,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Determinant => write!(f, "det"),
            Engine::Quadrature => write!(f, "quad"),
            Engine::ResidueOracle => write!(f, "residue"),
        }
    }
}

/// A character-expansion coefficient together with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharCoefficient {
    pub lambda: Vec<i64>,
    pub alpha_b: f64,
    pub alpha_f: f64,
    pub value: f64,
    pub engine: Engine,
}

/// m-th Fourier coefficient of the single-angle weight.
///
/// The boson part is the absolutely convergent series
/// `sum_k C(N_b-1+k, k) C(N_b-1+k+|m|, k+|m|) a^{2k+|m|}`, truncated at
/// relative tail `1e-16`; the fermion part is a finite Laurent polynomial.
pub fn fourier_coeff(m: i64, couplings: &ModelCouplings) -> Result<f64> {
    let ferm = fermion_laurent(couplings.n_f, couplings.alpha_f);
    let reach = couplings.n_f as i64;
    let mut total = 0.0;
    for j in -reach..=reach {
        let fj = ferm[(j + reach) as usize];
        if fj != 0.0 {
            total += fj * boson_series(m - j, couplings.n_b, couplings.alpha_b)?;
        }
    }
    Ok(total)
}

/// Laurent coefficients of `|1 - a z|^{2 N_f}` on the unit circle, indexed
/// `j = -N_f ..= N_f` (offset by `N_f`).
fn fermion_laurent(n_f: u32, alpha: f64) -> Vec<f64> {
    let n = n_f as usize;
    // (1 - a z)^{N_f} coefficients
    let mut p = vec![0.0; n + 1];
    for (a, pa) in p.iter_mut().enumerate() {
        *pa = binomial(n, a) * (-alpha).powi(a as i32);
    }
    let mut out = vec![0.0; 2 * n + 1];
    for (j, oj) in out.iter_mut().enumerate() {
        let shift = j as i64 - n as i64;
        let mut acc = 0.0;
        for (a, &pa) in p.iter().enumerate() {
            let b = a as i64 - shift;
            if (0..=n as i64).contains(&b) {
                acc += pa * p[b as usize];
            }
        }
        *oj = acc;
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn boson_series(m: i64, n_b: u32, alpha: f64) -> Result<f64> {
    let m = m.unsigned_abs() as usize;
    if n_b == 0 || alpha == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let nb = n_b as f64;
    // t_0 = C(N_b - 1 + m, m) alpha^m, then a two-factor term recurrence.
    let mut term = binomial(n_b as usize - 1 + m, m) * alpha.powi(m as i32);
    let a2 = alpha * alpha;
    let mut acc = term;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        term *= (nb + kf) * (nb + kf + m as f64) / ((kf + 1.0) * (kf + 1.0 + m as f64)) * a2;
        acc += term;
        if term.abs() < SERIES_TOL * acc.abs() {
            return Ok(acc);
        }
    }
    Err(Error::Precision {
        module: "weights",
        message: format!(
            "Fourier series for m={m} did not meet tolerance within {SERIES_CAP} terms"
        ),
    })
}

/// Character-expansion coefficient `c_lambda` by the Heine determinant of 1d
/// Fourier coefficients, `det[f_{(lambda+rho)_k - rho_l}]`.
///
/// Rows are rescaled by their largest entry before the determinant is taken
/// and the factors reapplied, which keeps the matrix O(1) as the coupling
/// approaches the critical point.
pub fn char_coefficient(
    lambda: &IrrepSignature,
    couplings: &ModelCouplings,
) -> Result<CharCoefficient> {
    if lambda.n_c() != couplings.n_c {
        return Err(Error::InvalidParameter(format!(
            "signature {lambda} does not match N_c = {}",
            couplings.n_c
        )));
    }
    let n = couplings.n_c;
    let rho: Vec<i64> = (0..n).map(|j| (n - 1 - j) as i64).collect();
    let mu: Vec<i64> = lambda.entries().iter().zip(&rho).map(|(&l, &r)| l + r).collect();

    let mut rows = vec![vec![0.0; n]; n];
    for (k, row) in rows.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            *entry = fourier_coeff(mu[k] - rho[l], couplings)?;
        }
    }
    let mut scale = 1.0;
    for row in rows.iter_mut() {
        let m = row.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if m > 0.0 {
            scale *= m;
            for v in row.iter_mut() {
                *v /= m;
            }
        }
    }
    let det = DMatrix::from_fn(n, n, |k, l| rows[k][l]).determinant();
    Ok(CharCoefficient {
        lambda: lambda.entries().to_vec(),
        alpha_b: couplings.alpha_b,
        alpha_f: couplings.alpha_f,
        value: det * scale,
        engine: Engine::Determinant,
    })
}

/// Normalization coefficient `c_0`.
pub fn c0(couplings: &ModelCouplings) -> Result<f64> {
    Ok(char_coefficient(&IrrepSignature::trivial(couplings.n_c), couplings)?.value)
}

/// Independent engine: `c_lambda` by tensor-trapezoid quadrature over the
/// maximal torus with the Weyl density.
///
/// The integrand `w(theta) chi_lambda(e^{-i theta}) |xi_rho|^2` is evaluated
/// in the cancellation-free product form `w * xi_{lambda+rho}(e^{-i theta})
/// * xi_rho(e^{i theta})`. The grid is doubled once as an aliasing check.
pub fn char_coefficient_quadrature(
    lambda: &IrrepSignature,
    couplings: &ModelCouplings,
    grid: usize,
) -> Result<f64> {
    if couplings.n_c > 3 {
        return Err(Error::Budget {
            module: "weights",
            message: format!("torus quadrature limited to N_c <= 3, got {}", couplings.n_c),
        });
    }
    if !grid.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("grid {grid} must be a power of two")));
    }
    let coarse = quad_pass(lambda, couplings, grid);
    let fine = quad_pass(lambda, couplings, grid * 2);
    // The doubling difference estimates the coarse error; spectral decay puts
    // the returned fine value orders of magnitude below it. Aliasing is gated
    // against the scale of the integrand, which is set by the normalization
    // coefficient rather than by the (possibly tiny) target coefficient.
    let scale = if lambda.entries().iter().all(|&e| e == 0) {
        fine.abs().max(1.0)
    } else {
        quad_pass(&IrrepSignature::trivial(couplings.n_c), couplings, grid * 2)
            .abs()
            .max(fine.abs())
            .max(1.0)
    };
    let delta = (coarse - fine).abs();
    // err(2M) ~ err(M)^2 / scale for geometrically decaying Fourier tails.
    if delta * delta / scale > 1e-9 * scale {
        return Err(Error::Aliasing { delta });
    }
    Ok(fine)
}

fn quad_pass(lambda: &IrrepSignature, couplings: &ModelCouplings, m: usize) -> f64 {
    let n = couplings.n_c;
    let grid = periodic_grid(m);
    let rho: Vec<i64> = (0..n).map(|j| (n - 1 - j) as i64).collect();
    let mu: Vec<i64> = lambda.entries().iter().zip(&rho).map(|(&l, &r)| l + r).collect();
    let mut theta = vec![0.0; n];
    let mut acc = Complex64::new(0.0, 0.0);
    let total = m.pow(n as u32);
    for flat in 0..total {
        let mut rem = flat;
        for t in theta.iter_mut() {
            *t = grid[rem % m];
            rem /= m;
        }
        let w = couplings.weight_torus(&theta);
        let neg: Vec<f64> = theta.iter().map(|&t| -t).collect();
        let xabar = xi_det(&mu, &neg);
        let xr = xi_det(&rho, &theta);
        acc += xabar * xr * w;
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    (acc / total as f64).re / factorial
}

fn xi_det(mu: &[i64], theta: &[f64]) -> Complex64 {
    let n = mu.len();
    DMatrix::from_fn(n, n, |k, l| Complex64::from_polar(1.0, mu[k] as f64 * theta[l]))
        .determinant()
}

/// One-plaquette expectation of `Tr U`: the ratio of the fundamental to the
/// trivial coefficient (the weight is invariant under `U -> U^{-1}`, so the
/// dual-representation coefficient coincides with the fundamental one).
pub fn wilson_loop_one_plaquette(couplings: &ModelCouplings) -> Result<f64> {
    let fund = char_coefficient(&IrrepSignature::fundamental(couplings.n_c), couplings)?.value;
    let norm = c0(couplings)?;
    Ok(fund / norm)
}

/// Second moments of the Cayley-transformed plaquette distribution and the
/// induced quadratic-form couplings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub n_b: u32,
    pub n_c: usize,
    /// -E Tr X^2
    pub minus_tr_x2: f64,
    /// -E (Tr X)^2
    pub minus_trx_sq: f64,
    pub b1: f64,
    pub b2: f64,
    /// Difference against a finer quadrature, per moment.
    pub quadrature_error: f64,
}

/// Eigenvalue-integral evaluation of the second moments of
/// `Det^{-N_b}(1 - X^2) dX` on anti-Hermitian matrices, and the couplings
/// `B_1, B_2` solving the associated 2x2 linear system.
///
/// The eigenvalue density is `prod_j (1 + y_j^2)^{-N_b} * Vandermonde(y)^2`;
/// the substitution `y = tan(u)` turns every required integrand into a
/// trigonometric polynomial, so Gauss–Legendre nodes in `u` converge at
/// machine precision.
pub fn moments_b1_b2(n_b: u32, n_c: usize, nodes: usize) -> Result<MomentReport> {
    if n_c == 0 || n_c > 3 {
        return Err(Error::Budget {
            module: "weights",
            message: format!("moment quadrature limited to 1 <= N_c <= 3, got {n_c}"),
        });
    }
    if (n_b as usize) < n_c + 1 {
        return Err(Error::InvalidParameter(format!(
            "second moments diverge for N_b <= N_c (Cauchy regime): N_b={n_b}, N_c={n_c}"
        )));
    }
    let (m2_a, t2_a) = moment_pass(n_b, n_c, nodes);
    let (m2_b, t2_b) = moment_pass(n_b, n_c, nodes + 40);
    let err = (m2_a - m2_b).abs().max((t2_a - t2_b).abs());

    // [ -E(TrX)^2 / N_c ; -E Tr X^2 / N_c ] = [[N_c, 1], [1, N_c]] [B1; B2]
    let nc = n_c as f64;
    let rhs1 = t2_b / nc;
    let rhs2 = m2_b / nc;
    let det = nc * nc - 1.0;
    let (b1, b2) = if n_c == 1 {
        // Degenerate system: the two moments coincide and only B1 + B2 is
        // determined; split evenly (only the sum enters U(1) observables).
        (rhs1 / 2.0, rhs1 / 2.0)
    } else {
        ((nc * rhs1 - rhs2) / det, (nc * rhs2 - rhs1) / det)
    };
    Ok(MomentReport {
        n_b,
        n_c,
        minus_tr_x2: m2_b,
        minus_trx_sq: t2_b,
        b1,
        b2,
        quadrature_error: err,
    })
}

fn moment_pass(n_b: u32, n_c: usize, nodes: usize) -> (f64, f64) {
    let (x, w) = gauss_legendre(nodes);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let u: Vec<f64> = x.iter().map(|&t| t * half_pi).collect();
    let mut z = 0.0;
    let mut m2 = 0.0;
    let mut t2 = 0.0;
    let mut idx = vec![0usize; n_c];
    let total = nodes.pow(n_c as u32);
    for flat in 0..total {
        let mut rem = flat;
        let mut wt = 1.0;
        for i in idx.iter_mut() {
            *i = rem % nodes;
            rem /= nodes;
            wt *= w[*i];
        }
        let ys: Vec<f64> = idx.iter().map(|&i| u[i].tan()).collect();
        let cos_pow: f64 = idx.iter().map(|&i| u[i].cos().powi(2 * n_b as i32 - 2)).product();
        let mut vdm = 1.0;
        for a in 0..n_c {
            for b in a + 1..n_c {
                vdm *= (ys[a] - ys[b]).powi(2);
            }
        }
        let base = wt * cos_pow * vdm;
        let sum: f64 = ys.iter().sum();
        let sumsq: f64 = ys.iter().map(|y| y * y).sum();
        z += base;
        m2 += base * sumsq;
        t2 += base * sum * sum;
    }
    (m2 / z, t2 / z)
}

/// Truncated heat-kernel weight `sum_lambda e^{-Cas2(lambda) t} d chi_lambda`
/// at a torus point, with a first-excluded-shell tail estimate.
///
/// For N_c = 1 this is the Villain sum `sum_n e^{-n^2 t} e^{i n theta}`.
pub fn heat_kernel_weight(
    n_c: usize,
    theta: &[f64],
    t: f64,
    cutoff: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter("heat-kernel time must be positive".into()));
    }
    let max_entry = (cutoff.sqrt().ceil() as i64 + n_c as i64).max(1);
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for lam in repn::enumerate_signatures(n_c, max_entry + 1) {
        let cas = lam.casimir2() as f64;
        let d = lam.dimension() as f64;
        if cas <= cutoff && lam.entries().iter().all(|&e| e.abs() <= max_entry) {
            value += repn::character_at_torus(&lam, theta)? * d * (-cas * t).exp();
        } else {
            tail += d * d * (-cas * t).exp();
        }
    }
    if tail > tol {
        return Err(Error::TailBound { bound: tail, tol });
    }
    Ok((value.re, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[i64]) -> IrrepSignature {
        IrrepSignature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_unit_boson_coupling() {
        assert!(ModelCouplings::new(2, 1, 0, 1.0, 0.0).is_err());
        assert!(ModelCouplings::new(0, 1, 0, 0.5, 0.0).is_err());
    }

    #[test]
    fn fourier_single_boson_closed_form() {
        let c = ModelCouplings::boson(1, 1, 0.5).unwrap();
        assert!((fourier_coeff(0, &c).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!((fourier_coeff(2, &c).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((fourier_coeff(-2, &c).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn fourier_two_boson_value() {
        let c = ModelCouplings::boson(1, 2, 0.5).unwrap();
        let a: f64 = 0.5;
        let expect = (1.0 + a * a) / (1.0 - a * a).powi(3);
        assert!((fourier_coeff(0, &c).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn fourier_matches_direct_quadrature() {
        let c = ModelCouplings::new(1, 2, 1, 0.4, -0.7).unwrap();
        let m_grid = 512;
        for m in [-3i64, 0, 1, 4] {
            let mut acc = 0.0;
            for &t in &periodic_grid(m_grid) {
                acc += c.weight_1d(t) * (m as f64 * t).cos();
            }
            acc /= m_grid as f64;
            let f = fourier_coeff(m, &c).unwrap();
            assert!((f - acc).abs() < 1e-11, "m={m}: {f} vs {acc}");
        }
    }

    #[test]
    fn fourier_single_fermion() {
        let c = ModelCouplings::fermion(1, 1, 0.5).unwrap();
        assert!((fourier_coeff(1, &c).unwrap() + 0.5).abs() < 1e-15);
        assert!((fourier_coeff(0, &c).unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(fourier_coeff(2, &c).unwrap(), 0.0);
    }

    #[test]
    fn coefficient_u1_closed_form() {
        let c = ModelCouplings::boson(1, 1, 0.5).unwrap();
        let v = char_coefficient(&sig(&[3]), &c).unwrap().value;
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn missing_representation_vanishes() {
        for alpha in [0.3, 0.6, 0.9] {
            let c = ModelCouplings::boson(2, 1, alpha).unwrap();
            let v = char_coefficient(&sig(&[1, 1]), &c).unwrap().value;
            assert!(v.abs() < 1e-12, "alpha={alpha}: {v}");
        }
    }

    #[test]
    fn trivial_coefficient_two_flavors() {
        let c = ModelCouplings::boson(2, 2, 0.5).unwrap();
        let v = c0(&c).unwrap();
        let expect = (4.0f64 / 3.0).powi(4);
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn quadrature_agrees_with_determinant() {
        for n_b in [1, 2, 3] {
            let c = ModelCouplings::boson(2, n_b, 0.5).unwrap();
            for lam in repn::enumerate_signatures(2, 2) {
                let det = char_coefficient(&lam, &c).unwrap().value;
                let quad = char_coefficient_quadrature(&lam, &c, 32).unwrap();
                assert!(
                    (det - quad).abs() < 1e-10 * det.abs().max(1.0),
                    "N_b={n_b} {lam}: det {det} vs quad {quad}"
                );
            }
        }
    }

    #[test]
    fn quadrature_at_zero_coupling_is_orthonormality() {
        let c = ModelCouplings::boson(2, 2, 0.0).unwrap();
        let zero = char_coefficient_quadrature(&sig(&[0, 0]), &c, 16).unwrap();
        assert!((zero - 1.0).abs() < 1e-12);
        let fund = char_coefficient_quadrature(&sig(&[1, 0]), &c, 16).unwrap();
        assert!(fund.abs() < 1e-12);
    }

    #[test]
    fn linear_law_examples() {
        let w1 = wilson_loop_one_plaquette(&ModelCouplings::boson(2, 1, 0.5).unwrap()).unwrap();
        assert!((w1 - 0.5).abs() < 1e-12);
        let w2 = wilson_loop_one_plaquette(&ModelCouplings::boson(3, 2, 0.4).unwrap()).unwrap();
        assert!((w2 - 0.8).abs() < 1e-11);
        let haar =
            wilson_loop_one_plaquette(&ModelCouplings::new(2, 0, 0, 0.0, 0.0).unwrap()).unwrap();
        assert!(haar.abs() < 1e-14);
    }

    #[test]
    fn fermion_maximum_value() {
        let c = ModelCouplings::new(3, 0, 3, 0.0, -1.0).unwrap();
        let w = wilson_loop_one_plaquette(&c).unwrap();
        assert!((w - 1.5).abs() < 1e-11, "{w}");
    }

    #[test]
    fn fermion_parity_antisymmetry() {
        let plus =
            wilson_loop_one_plaquette(&ModelCouplings::new(2, 0, 2, 0.0, 0.7).unwrap()).unwrap();
        let minus =
            wilson_loop_one_plaquette(&ModelCouplings::new(2, 0, 2, 0.0, -0.7).unwrap()).unwrap();
        assert!((plus + minus).abs() < 1e-12);
    }

    #[test]
    fn moments_nc2_nb3_closed_form() {
        let r = moments_b1_b2(3, 2, 200).unwrap();
        assert!((r.minus_tr_x2 - 10.0 / 3.0).abs() < 1e-10, "{}", r.minus_tr_x2);
        assert!((r.minus_trx_sq - 8.0 / 3.0).abs() < 1e-10);
        assert!((r.b1 - 1.0 / 3.0).abs() < 1e-10);
        assert!((r.b2 - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn moment_ratio_shrinks_toward_gaussian() {
        let r = moments_b1_b2(20, 2, 200).unwrap();
        assert!((r.b1 / r.b2 - 1.0 / 36.0).abs() < 1e-8);
        let r2 = moments_b1_b2(40, 2, 200).unwrap();
        assert!(r2.b1 / r2.b2 < r.b1 / r.b2);
    }

    #[test]
    fn moments_reject_cauchy_regime() {
        assert!(moments_b1_b2(2, 2, 100).is_err());
    }

    #[test]
    fn moments_positivity_bound() {
        for n_b in [3, 4, 6] {
            let r = moments_b1_b2(n_b, 2, 160).unwrap();
            assert!(r.minus_tr_x2 > 0.0 && r.minus_trx_sq > 0.0);
            assert!(r.minus_trx_sq <= 2.0 * r.minus_tr_x2 + 1e-12);
        }
    }

    #[test]
    fn heat_kernel_villain_form() {
        let t = 0.8;
        let theta = 0.6;
        let (v, _) = heat_kernel_weight(1, &[theta], t, 200.0, 1e-10).unwrap();
        let mut direct = 0.0;
        for n in -30i64..=30 {
            direct += (-((n * n) as f64) * t).exp() * ((n as f64) * theta).cos();
        }
        assert!((v - direct).abs() < 1e-12);
    }

    #[test]
    fn heat_kernel_limits() {
        let (v, _) = heat_kernel_weight(2, &[0.3, -0.4], 50.0, 100.0, 1e-8).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "large-t limit, got {v}");
        // Concentration at the identity: value at 0 grows as t decreases.
        let (a, _) = heat_kernel_weight(1, &[0.0], 1.0, 400.0, 1e-9).unwrap();
        let (b, _) = heat_kernel_weight(1, &[0.0], 0.5, 400.0, 1e-9).unwrap();
        let (c, _) = heat_kernel_weight(1, &[0.0], 0.25, 400.0, 1e-9).unwrap();
        assert!(c > b && b > a);
    }

    #[test]
    fn heat_kernel_reports_tail_violation() {
        assert!(matches!(
            heat_kernel_weight(1, &[0.0], 0.05, 4.0, 1e-12),
            Err(Error::TailBound { .. })
        ));
    }
}
