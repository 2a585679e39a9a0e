//! Haar sampling on U(N_c) and Metropolis simulation of the induced (and
//! Wilson) plaquette actions on arbitrary cell complexes.
//!
//! The induced action per plaquette is
//! `2 N_b ln|Det(1 - a_b U(dp))| - 2 N_f ln|Det(1 - a_f U(dp))|`,
//! with `U(dp)` the ordered holonomy along the stored boundary walk.
//! Proposals multiply a link by `exp(i eps M)` with `M` drawn from the
//! Gaussian Hermitian ensemble; the step size is tuned to a 0.4-0.6
//! acceptance rate during thermalization. Errors are corrected by the
//! integrated autocorrelation time.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cellcomplex::{CellComplex, Contour, Step};
use crate::error::{Error, Result};
use crate::weights::ModelCouplings;

/// Gauge field: one unitary matrix per stored link. The reverse-orientation
/// convention `U(-l) = U(l)^{-1}` is applied on read, never stored.
#[derive(Debug, Clone)]
pub struct LinkConfiguration {
    n_c: usize,
    links: Vec<DMatrix<Complex64>>,
}

impl LinkConfiguration {
    /// All links at the identity.
    pub fn cold(num_links: usize, n_c: usize) -> Self {
        Self { n_c, links: vec![DMatrix::identity(n_c, n_c); num_links] }
    }

    /// Haar-random start.
    pub fn hot(num_links: usize, n_c: usize, rng: &mut ChaCha8Rng) -> Self {
        Self { n_c, links: (0..num_links).map(|_| haar_sample(n_c, rng)).collect() }
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn link(&self, index: usize) -> &DMatrix<Complex64> {
        &self.links[index]
    }

    pub fn set_link(&mut self, index: usize, u: DMatrix<Complex64>) {
        self.links[index] = u;
    }

    /// Matrix for a signed traversal of a link.
    pub fn step_matrix(&self, step: Step) -> DMatrix<Complex64> {
        let u = &self.links[step.link];
        if step.sign >= 0 {
            u.clone()
        } else {
            u.adjoint()
        }
    }

    /// Ordered holonomy along a walk: the first step is the rightmost factor.
    pub fn holonomy(&self, walk: &[Step]) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(self.n_c, self.n_c);
        for step in walk {
            m = self.step_matrix(*step) * m;
        }
        m
    }

    /// Worst unitarity defect `max_l ||U^dag U - 1||` over all links.
    pub fn unitarity_defect(&self) -> f64 {
        self.links
            .iter()
            .map(|u| {
                let d = u.adjoint() * u - DMatrix::<Complex64>::identity(self.n_c, self.n_c);
                d.norm()
            })
            .fold(0.0, f64::max)
    }

    /// Gauge transformation `U(l) -> g(end) U(l) g(start)^{-1}`.
    pub fn gauge_transform(&mut self, complex: &CellComplex, g: &[DMatrix<Complex64>]) {
        for (i, u) in self.links.iter_mut().enumerate() {
            let l = complex.links()[i];
            *u = &g[l.to] * u.clone() * g[l.from].adjoint();
        }
    }

    /// Projects every link back onto the unitary group (QR with the phase
    /// convention that fixes the triangular factor's diagonal).
    pub fn reunitarize(&mut self) {
        for u in self.links.iter_mut() {
            *u = unitarize(u);
        }
    }
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// phase fix that makes the triangular factor's diagonal positive.
pub fn haar_sample(n_c: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n_c, n_c, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n_c {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n_c {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn unitarize(u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = u.nrows();
    let qr = u.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix with Gaussian entries (GUE normalization up to a
/// constant; only the proposal shape matters).
fn gaussian_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `exp(i eps M)` for Hermitian `M`, through the spectral decomposition, so
/// the result is unitary to roundoff.
fn unitary_exp(m: &DMatrix<Complex64>, eps: f64) -> DMatrix<Complex64> {
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let phases: Vec<Complex64> =
        se.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, eps * l)).collect();
    let v = &se.eigenvectors;
    let d = DMatrix::from_diagonal(&DVector::from_vec(phases));
    v * d * v.adjoint()
}

/// Which plaquette action drives the chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LatticeAction {
    Induced(ModelCouplings),
    Wilson { n_c: usize, beta: f64 },
}

impl LatticeAction {
    pub fn n_c(&self) -> usize {
        match self {
            LatticeAction::Induced(c) => c.n_c,
            LatticeAction::Wilson { n_c, .. } => *n_c,
        }
    }

    /// Action contribution of a single plaquette holonomy; `None` marks a
    /// singular configuration (non-invertible boson determinant).
    fn plaquette_action(&self, m: &DMatrix<Complex64>) -> Option<f64> {
        match self {
            LatticeAction::Induced(c) => {
                let n = m.nrows();
                let id = DMatrix::<Complex64>::identity(n, n);
                let mut s = 0.0;
                if c.n_b > 0 {
                    let det = (&id - m * Complex64::new(c.alpha_b, 0.0)).determinant().norm();
                    if det < 1e-120 {
                        return None;
                    }
                    s += 2.0 * c.n_b as f64 * det.ln();
                }
                if c.n_f > 0 {
                    let det = (&id - m * Complex64::new(c.alpha_f, 0.0)).determinant().norm();
                    if det < 1e-120 {
                        return None;
                    }
                    s -= 2.0 * c.n_f as f64 * det.ln();
                }
                Some(s)
            }
            LatticeAction::Wilson { n_c, beta } => {
                let tr: Complex64 = m.diagonal().iter().sum();
                Some(-beta / *n_c as f64 * tr.re)
            }
        }
    }
}

/// Chain controls.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McParams {
    /// Measurements to record.
    pub measurements: usize,
    /// Full lattice sweeps between measurements.
    pub sweeps_per_measurement: usize,
    /// Thermalization sweeps (with step-size tuning).
    pub thermalization: usize,
    /// Initial proposal step size.
    pub step_size: f64,
    pub seed: u64,
    /// Independent stream index (parallel chains).
    pub stream: u64,
    /// Keep the raw measurement series in the report.
    pub record_series: bool,
}

impl Default for McParams {
    fn default() -> Self {
        Self {
            measurements: 10_000,
            sweeps_per_measurement: 2,
            thermalization: 500,
            step_size: 0.5,
            seed: 1,
            stream: 0,
            record_series: false,
        }
    }
}

/// Chain output for one observable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McReport {
    pub mean: f64,
    /// Autocorrelation-corrected standard error.
    pub std_error: f64,
    pub tau_int: f64,
    pub acceptance: f64,
    pub measurements: usize,
    pub thermalization: usize,
    pub seed: u64,
    pub stream: u64,
    pub step_size_final: f64,
    /// Moves rejected because the boson determinant was singular.
    pub singular_rejections: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<f64>>,
}

/// Metropolis run measuring the mean plaquette trace `Re Tr U(dp)` averaged
/// over plaquettes.
pub fn mc_run(complex: &CellComplex, action: &LatticeAction, params: &McParams) -> Result<McReport> {
    mc_run_observable(complex, action, params, |cfg, cx| {
        let mut acc = 0.0;
        for p in 0..cx.num_plaquettes() {
            let m = cfg.holonomy(&cx.plaquettes()[p].walk);
            let tr: Complex64 = m.diagonal().iter().sum();
            acc += tr.re;
        }
        acc / cx.num_plaquettes() as f64
    })
}

/// Metropolis estimate of `Re Tr U(C)` along a closed contour.
pub fn wilson_loop_mc(
    complex: &CellComplex,
    contour: &Contour,
    action: &LatticeAction,
    params: &McParams,
) -> Result<McReport> {
    let chain = contour.as_chain();
    let closed = complex.boundary(&chain)?;
    if !closed.is_zero() {
        return Err(Error::InvalidParameter("contour is not closed".into()));
    }
    let steps = contour.steps.clone();
    mc_run_observable(complex, action, params, move |cfg, _| {
        let m = cfg.holonomy(&steps);
        let tr: Complex64 = m.diagonal().iter().sum();
        tr.re
    })
}

fn mc_run_observable<F>(
    complex: &CellComplex,
    action: &LatticeAction,
    params: &McParams,
    observable: F,
) -> Result<McReport>
where
    F: Fn(&LinkConfiguration, &CellComplex) -> f64,
{
    if complex.num_plaquettes() == 0 {
        return Err(Error::InvalidParameter("complex has no plaquettes".into()));
    }
    if let LatticeAction::Induced(c) = action {
        if c.alpha_b.abs() >= 1.0 {
            return Err(Error::InvalidParameter("|alpha_b| must be below 1".into()));
        }
    }
    let n_c = action.n_c();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(params.stream);

    // link -> adjacent plaquettes
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); complex.num_links()];
    for p in 0..complex.num_plaquettes() {
        for s in &complex.plaquettes()[p].walk {
            if !adj[s.link].contains(&p) {
                adj[s.link].push(p);
            }
        }
    }

    let mut cfg = LinkConfiguration::cold(complex.num_links(), n_c);
    let mut eps = params.step_size;
    let mut singular: u64 = 0;
    let mut accepted: u64 = 0;
    let mut proposed: u64 = 0;
    let mut updates: u64 = 0;

    let local_action = |cfg: &LinkConfiguration, plaqs: &[usize]| -> Option<f64> {
        let mut s = 0.0;
        for &p in plaqs {
            let m = cfg.holonomy(&complex.plaquettes()[p].walk);
            s += action.plaquette_action(&m)?;
        }
        Some(s)
    };

    let sweep = |cfg: &mut LinkConfiguration,
                     eps: f64,
                     rng: &mut ChaCha8Rng,
                     singular: &mut u64,
                     updates: &mut u64|
     -> (u64, u64) {
        let mut acc = 0;
        let mut tot = 0;
        for l in 0..complex.num_links() {
            tot += 1;
            let before = local_action(cfg, &adj[l]);
            let h = gaussian_hermitian(n_c, rng);
            let old = cfg.link(l).clone();
            let proposal = unitary_exp(&h, eps) * &old;
            cfg.set_link(l, proposal);
            let after = local_action(cfg, &adj[l]);
            let accept = match (before, after) {
                (Some(b), Some(a)) => {
                    let delta = a - b;
                    delta <= 0.0 || rng.random::<f64>() < (-delta).exp()
                }
                (_, None) => {
                    *singular += 1;
                    false
                }
                (None, Some(_)) => true,
            };
            if accept {
                acc += 1;
            } else {
                cfg.set_link(l, old);
            }
            *updates += 1;
            if *updates % 1000 == 0 {
                cfg.reunitarize();
            }
        }
        (acc, tot)
    };

    // Thermalization with step-size tuning toward 0.4-0.6 acceptance.
    let mut window_acc = 0u64;
    let mut window_tot = 0u64;
    for t in 0..params.thermalization {
        let (a, n) = sweep(&mut cfg, eps, &mut rng, &mut singular, &mut updates);
        window_acc += a;
        window_tot += n;
        if t % 10 == 9 {
            let rate = window_acc as f64 / window_tot as f64;
            if rate > 0.6 {
                eps *= 1.25;
            } else if rate < 0.4 {
                eps /= 1.25;
            }
            window_acc = 0;
            window_tot = 0;
        }
    }

    let mut series = Vec::with_capacity(params.measurements);
    for _ in 0..params.measurements {
        for _ in 0..params.sweeps_per_measurement {
            let (a, n) = sweep(&mut cfg, eps, &mut rng, &mut singular, &mut updates);
            accepted += a;
            proposed += n;
        }
        series.push(observable(&cfg, complex));
    }

    let (mean, std_error, tau_int) = autocorrelation_stats(&series);
    Ok(McReport {
        mean,
        std_error,
        tau_int,
        acceptance: if proposed > 0 { accepted as f64 / proposed as f64 } else { 0.0 },
        measurements: params.measurements,
        thermalization: params.thermalization,
        seed: params.seed,
        stream: params.stream,
        step_size_final: eps,
        singular_rejections: singular,
        series: if params.record_series { Some(series) } else { None },
    })
}

/// Runs independent chains on separate RNG streams (optionally in parallel)
/// and merges them by inverse-variance weighting.
pub fn mc_run_chains(
    complex: &CellComplex,
    action: &LatticeAction,
    params: &McParams,
    chains: usize,
    max_threads: usize,
) -> Result<Vec<McReport>> {
    let mut reports: Vec<Option<McReport>> = vec![None; chains];
    let threads = max_threads.max(1).min(chains.max(1));
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for (i, slot) in reports.iter_mut().enumerate() {
            let p = McParams { stream: params.stream + i as u64, ..params.clone() };
            handles.push(scope.spawn(move || -> Result<()> {
                *slot = Some(mc_run(complex, action, &p)?);
                Ok(())
            }));
            if handles.len() == threads {
                for h in handles.drain(..) {
                    h.join().expect("chain thread panicked")?;
                }
            }
        }
        for h in handles {
            h.join().expect("chain thread panicked")?;
        }
        Ok(())
    })?;
    Ok(reports.into_iter().map(|r| r.expect("chain finished")).collect())
}

/// Mean, autocorrelation-corrected standard error, and integrated
/// autocorrelation time with a 5-tau window cap.
pub fn autocorrelation_stats(series: &[f64]) -> (f64, f64, f64) {
    let n = series.len();
    if n < 2 {
        return (series.first().copied().unwrap_or(0.0), f64::INFINITY, 0.5);
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return (mean, 0.0, 0.5);
    }
    let mut tau = 0.5;
    let mut t = 1usize;
    while t < n / 2 {
        let mut c = 0.0;
        for i in 0..n - t {
            c += (series[i] - mean) * (series[i + t] - mean);
        }
        c /= (n - t) as f64 * var;
        if c <= 0.0 {
            break;
        }
        tau += c;
        // window cap: stop once the window exceeds 5 tau
        if t as f64 >= 5.0 * tau {
            break;
        }
        t += 1;
    }
    let err = (2.0 * tau * var / n as f64).sqrt();
    (mean, err, tau)
}

/// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}
