//! Shared quadrature kernels: Gauss–Legendre rules, periodic trapezoid grids,
//! and a spectrally exact Haar quadrature on U(1) and U(2).

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine precision
/// for the n used here (n <= a few hundred).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Equally spaced angles `2*pi*j/m` for the periodic trapezoid rule.
pub fn periodic_grid(m: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / m as f64;
    (0..m).map(|j| j as f64 * step).collect()
}

/// Averages `f` over U(1)^n with the plain product trapezoid rule
/// (spectrally convergent for smooth periodic integrands). The callback
/// receives the angle tuple; the result already carries the (2*pi)^-n
/// normalization.
pub fn torus_average<F: FnMut(&[f64]) -> Complex64>(n: usize, m: usize, mut f: F) -> Complex64 {
    let grid = periodic_grid(m);
    let mut theta = vec![0.0; n];
    let mut acc = Complex64::new(0.0, 0.0);
    let total = m.pow(n as u32);
    for flat in 0..total {
        let mut rem = flat;
        for t in theta.iter_mut() {
            *t = grid[rem % m];
            rem /= m;
        }
        acc += f(&theta);
    }
    acc / total as f64
}

/// Haar average of `f` over U(1): plain Fourier average of f(e^{i t}).
pub fn haar_average_u1<F: FnMut(Complex64) -> Complex64>(m: usize, mut f: F) -> Complex64 {
    let grid = periodic_grid(m);
    let mut acc = Complex64::new(0.0, 0.0);
    for &t in &grid {
        acc += f(Complex64::from_polar(1.0, t));
    }
    acc / m as f64
}

/// Haar average of `f` over U(2), parameterized as a central phase times an
/// SU(2) factor in Euler angles. Exact (to roundoff) for integrands that are
/// polynomial of bounded degree in the matrix entries, once the per-angle
/// point counts exceed that degree.
pub fn haar_average_u2<F: FnMut(&[[Complex64; 2]; 2]) -> Complex64>(
    m_angle: usize,
    n_beta: usize,
    mut f: F,
) -> Complex64 {
    let (tb, wb) = gauss_legendre(n_beta);
    let grid = periodic_grid(m_angle);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut wsum = 0.0;
    for &phi in &grid {
        let z = Complex64::from_polar(1.0, phi);
        for &alpha in &grid {
            for &gamma in &grid {
                for (k, &t) in tb.iter().enumerate() {
                    // t = cos(beta); half-angle functions of beta.
                    let c = ((1.0 + t) / 2.0).sqrt();
                    let s = ((1.0 - t) / 2.0).sqrt();
                    let ea = Complex64::from_polar(1.0, 0.5 * (alpha + gamma));
                    let eb = Complex64::from_polar(1.0, 0.5 * (alpha - gamma));
                    let u = [
                        [z * ea * c, z * eb * s],
                        [-z * eb.conj() * s, z * ea.conj() * c],
                    ];
                    acc += f(&u) * wb[k];
                    wsum += wb[k];
                }
            }
        }
    }
    acc / wsum
}

/// Eigenphases of a small unitary matrix, used to evaluate class functions.
/// Supports dimensions 1 and 2, which is all the torus-quadrature layers need.
pub fn unitary_eigenphases_2x2(u: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let tr = u[0][0] + u[1][1];
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    // Roots of z^2 - tr z + det.
    let disc = (tr * tr - 4.0 * det).sqrt();
    let z1 = (tr + disc) / 2.0;
    let z2 = (tr - disc) / 2.0;
    [z1.arg(), z2.arg()]
}
