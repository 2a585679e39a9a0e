//! Truncated multivariate power series (jets) over a generic coefficient
//! field, used to extract high-order residues of rational integrands without
//! symbolic expression trees.
//!
//! A jet stores dense Taylor coefficients around a base point, truncated at a
//! fixed order per variable. Arithmetic is exact to the stored order. The
//! coefficient field is either exact rationals or f64.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

// The trait method names intentionally mirror num's `Zero`/`One`; impls below
// disambiguate with qualified paths.

/// Coefficient field for jets.
pub trait JetScalar: Clone + std::fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn powi(&self, p: i64) -> Self {
        if p == 0 {
            return Self::one();
        }
        let base = if p < 0 { Self::one().div(self) } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..p.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

impl JetScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl JetScalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Quotient of piecewise renderings when the parts individually
            // overflow f64.
            let sign = if self.numer().is_negative() { -1.0 } else { 1.0 };
            let n = ToPrimitive::to_f64(&self.numer().abs()).unwrap_or(f64::INFINITY);
            let d = ToPrimitive::to_f64(self.denom()).unwrap_or(f64::INFINITY);
            sign * n / d
        })
    }
}

/// A sparse monomial `coeff * prod_k eps_{var_k}^{exp_k}` used as a
/// multiplication factor.
#[derive(Debug, Clone)]
pub struct SparseTerm<S> {
    pub exps: Vec<(usize, usize)>,
    pub coeff: S,
}

/// Dense truncated Taylor expansion with independent order caps per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet<S> {
    orders: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<S>,
}

impl<S: JetScalar> TaylorJet<S> {
    pub fn zero(orders: &[usize]) -> Self {
        let mut strides = Vec::with_capacity(orders.len());
        let mut size = 1usize;
        for &o in orders {
            strides.push(size);
            size *= o + 1;
        }
        Self { orders: orders.to_vec(), strides, coeffs: vec![S::zero(); size] }
    }

    pub fn constant(orders: &[usize], value: S) -> Self {
        let mut j = Self::zero(orders);
        j.coeffs[0] = value;
        j
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn num_vars(&self) -> usize {
        self.orders.len()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(&i, &s)| i * s).sum()
    }

    pub fn coefficient(&self, idx: &[usize]) -> &S {
        &self.coeffs[self.flat(idx)]
    }

    pub fn set_coefficient(&mut self, idx: &[usize], v: S) {
        let f = self.flat(idx);
        self.coeffs[f] = v;
    }

    /// The coefficient of the top corner `prod eps_j^{order_j}`.
    pub fn top_coefficient(&self) -> &S {
        &self.coeffs[self.coeffs.len() - 1]
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    fn digits(&self, mut flat: usize) -> Vec<usize> {
        self.orders
            .iter()
            .map(|&o| {
                let d = flat % (o + 1);
                flat /= o + 1;
                d
            })
            .collect()
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.orders, other.orders);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.add(b);
        }
    }

    /// Multiply in place by a sparse polynomial in the expansion variables.
    pub fn mul_sparse(&mut self, terms: &[SparseTerm<S>]) {
        let mut out = vec![S::zero(); self.coeffs.len()];
        for (flat, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let digs = self.digits(flat);
            'term: for t in terms {
                if t.coeff.is_zero() {
                    continue;
                }
                let mut target = flat;
                for &(var, exp) in &t.exps {
                    if digs[var] + exp > self.orders[var] {
                        continue 'term;
                    }
                    target += exp * self.strides[var];
                }
                out[target] = out[target].add(&c.mul(&t.coeff));
            }
        }
        self.coeffs = out;
    }

    /// Multiply in place by a univariate series `sum_k f[k] eps_var^k`.
    pub fn mul_univariate(&mut self, var: usize, series: &[S]) {
        let mut out = vec![S::zero(); self.coeffs.len()];
        let stride = self.strides[var];
        let cap = self.orders[var];
        for (flat, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dv = (flat / stride) % (cap + 1);
            for (k, fk) in series.iter().enumerate().take(cap + 1 - dv) {
                if !fk.is_zero() {
                    let t = flat + k * stride;
                    out[t] = out[t].add(&c.mul(fk));
                }
            }
        }
        self.coeffs = out;
    }

    /// Full product with another jet of identical shape (truncated).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.orders, other.orders);
        let mut out = Self::zero(&self.orders);
        for (fa, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let da = self.digits(fa);
            'b: for (fb, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let db = other.digits(fb);
                let mut target = 0usize;
                for v in 0..self.orders.len() {
                    let d = da[v] + db[v];
                    if d > self.orders[v] {
                        continue 'b;
                    }
                    target += d * self.strides[v];
                }
                out.coeffs[target] = out.coeffs[target].add(&a.mul(b));
            }
        }
        out
    }

    /// Division by a jet with nonzero constant term; `None` otherwise.
    pub fn div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.orders, other.orders);
        if other.constant_term().is_zero() {
            return None;
        }
        let inv0 = S::one().div(other.constant_term());
        let mut q = Self::zero(&self.orders);
        // Flat order is compatible with componentwise dominance, so the
        // standard convolution solve works index by index.
        for flat in 0..self.coeffs.len() {
            let digs = self.digits(flat);
            let mut acc = self.coeffs[flat].clone();
            // iterate all j < flat with j <= digs componentwise
            let mut sub = vec![0usize; digs.len()];
            loop {
                let jflat = self.flat(&sub);
                if jflat != flat {
                    let diff = flat - jflat;
                    let b = &other.coeffs[diff];
                    if !q.coeffs[jflat].is_zero() && !b.is_zero() {
                        acc = acc.sub(&q.coeffs[jflat].mul(b));
                    }
                }
                // increment sub within the box [0, digs]
                let mut v = 0;
                loop {
                    if v == digs.len() {
                        break;
                    }
                    if sub[v] < digs[v] {
                        sub[v] += 1;
                        break;
                    }
                    sub[v] = 0;
                    v += 1;
                }
                if v == digs.len() {
                    break;
                }
            }
            q.coeffs[flat] = acc.mul(&inv0);
        }
        Some(q)
    }

    pub fn to_f64_jet(&self) -> TaylorJet<f64> {
        TaylorJet {
            orders: self.orders.clone(),
            strides: self.strides.clone(),
            coeffs: self.coeffs.iter().map(|c| c.to_f64()).collect(),
        }
    }
}

/// Coefficients of the binomial expansion of `(c + eps)^p` up to `order`,
/// for any integer power p (for negative p the base `c` must be nonzero).
pub fn binomial_series<S: JetScalar>(c: &S, p: i64, order: usize) -> Vec<S> {
    if p >= 0 && (p as usize) < order + 1 && c.is_zero() {
        // (0 + eps)^p = eps^p exactly.
        let mut out = vec![S::zero(); order + 1];
        out[p as usize] = S::one();
        return out;
    }
    assert!(!c.is_zero() || p >= 0, "negative power of a zero base");
    let mut out = Vec::with_capacity(order + 1);
    // term_k = C(p, k) c^{p-k}; ratio term_{k+1}/term_k = (p - k) / ((k+1) c)
    let mut term = c.powi(p);
    for k in 0..=order {
        out.push(term.clone());
        if p >= 0 && k as i64 >= p {
            // remaining binomial coefficients vanish
            term = S::zero();
        } else {
            let num = S::from_i64(p - k as i64);
            let den = S::from_i64(k as i64 + 1).mul(c);
            term = term.mul(&num).div(&den);
        }
    }
    out
}
