//! Exact evaluation of torus integrals of the induced plaquette weight by
//! contour contraction and residue calculus.
//!
//! The unnormalized expectation of a monomial `z_1^{n_1} ... z_N^{n_N}`
//! against the single-species weight and the squared Vandermonde is a finite
//! sum of residues: per variable the integrand has poles at `z = 0` and (for
//! bosons) at `z = alpha` inside the unit circle, and at `z = alpha^{-1}`
//! outside. Variables with negative exponents whose integrand decays at
//! least as `z^{-2}` may be evaluated by the reversed contour instead.
//! Residues are read off truncated-jet expansions, so every output is an
//! exact rational whenever the coupling is rational.
//!
//! This module is the oracle for the determinant and quadrature engines in
//! [`crate::weights`]; it deliberately fails loudly outside its budget.

pub mod jet;

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::repn::{self, IrrepSignature};
use crate::weights::ModelCouplings;
use jet::{binomial_series, JetScalar, SparseTerm, TaylorJet};

/// Hard cap on the residue order handled per variable.
pub const MAX_ORDER_PER_VARIABLE: usize = 12;
/// Hard cap on the number of colors.
pub const MAX_COLORS: usize = 4;

/// Single-species weight selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    /// `|1 - alpha z|^{-2 N_b}` per eigenvalue.
    Boson(u32),
    /// `|1 - alpha z|^{+2 N_f}` per eigenvalue.
    Fermion(u32),
    /// Pure Haar weight (also used when the coupling vanishes).
    Haar,
}

/// Contour route for one integration variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Contract to the poles inside the unit circle.
    Inside,
    /// Expand to the poles outside; requires the integrand to decay like
    /// `z^{-2}` or faster so the point at infinity drops out.
    Outside,
}

/// An unnormalized torus integral, stored as `rational * (2 pi)^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusIntegral {
    pub rational: BigRational,
    pub two_pi_power: u32,
}

impl TorusIntegral {
    pub fn to_f64(&self) -> f64 {
        JetScalar::to_f64(&self.rational) * std::f64::consts::TAU.powi(self.two_pi_power as i32)
    }
}

/// Parses "p/q", plain integers, and decimal strings into exact rationals.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse '{s}' as a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if Zero::is_zero(&d) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = i.abs() * &scale + f;
        let signed = if neg { -mag } else { mag };
        return Ok(BigRational::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// The exact contour-integral engine for one plaquette.
#[derive(Debug, Clone)]
pub struct ResidueEngine {
    n_c: usize,
    species: Species,
    alpha: BigRational,
}

impl ResidueEngine {
    pub fn boson(n_c: usize, n_b: u32, alpha: BigRational) -> Result<Self> {
        if alpha.abs() >= <BigRational as One>::one() {
            return Err(Error::InvalidParameter(
                "boson coupling must satisfy |alpha| < 1".into(),
            ));
        }
        let species =
            if n_b == 0 || Zero::is_zero(&alpha) { Species::Haar } else { Species::Boson(n_b) };
        Self::build(n_c, species, alpha)
    }

    pub fn fermion(n_c: usize, n_f: u32, alpha: BigRational) -> Result<Self> {
        let species =
            if n_f == 0 || Zero::is_zero(&alpha) { Species::Haar } else { Species::Fermion(n_f) };
        Self::build(n_c, species, alpha)
    }

    pub fn haar(n_c: usize) -> Result<Self> {
        Self::build(n_c, Species::Haar, <BigRational as Zero>::zero())
    }

    /// Builds from model couplings; mixed boson+fermion weights are not a
    /// residue-engine case (the determinant engine covers them).
    pub fn from_couplings(c: &ModelCouplings) -> Result<Self> {
        let has_b = c.n_b > 0 && c.alpha_b != 0.0;
        let has_f = c.n_f > 0 && c.alpha_f != 0.0;
        match (has_b, has_f) {
            (true, true) => Err(Error::InvalidParameter(
                "mixed boson+fermion weight: use the determinant or quadrature engine".into(),
            )),
            (true, false) => Self::boson(c.n_c, c.n_b, float_to_rational(c.alpha_b)),
            (false, true) => Self::fermion(c.n_c, c.n_f, float_to_rational(c.alpha_f)),
            (false, false) => Self::haar(c.n_c),
        }
    }

    fn build(n_c: usize, species: Species, alpha: BigRational) -> Result<Self> {
        if n_c == 0 || n_c > MAX_COLORS {
            return Err(Error::Budget {
                module: "residues",
                message: format!("residue engine supports 1 <= N_c <= {MAX_COLORS}, got {n_c}"),
            });
        }
        Ok(Self { n_c, species, alpha })
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn species(&self) -> Species {
        self.species
    }

    /// Net power of `z_j` carried by the integrand besides the pole factors.
    fn exponent(&self, n_j: i64) -> i64 {
        match self.species {
            Species::Boson(nb) => n_j + nb as i64 - self.n_c as i64,
            Species::Fermion(nf) => n_j - self.n_c as i64 - nf as i64,
            Species::Haar => n_j - self.n_c as i64,
        }
    }

    /// Degree of the integrand in `z_j` at infinity.
    fn degree_at_infinity(&self, n_j: i64) -> i64 {
        let e = self.exponent(n_j);
        let d = 2 * (self.n_c as i64 - 1);
        match self.species {
            Species::Boson(nb) => e + d - 2 * nb as i64,
            Species::Fermion(nf) => e + d + 2 * nf as i64,
            Species::Haar => e + d,
        }
    }

    /// Whether the reversed contour is admissible for exponent `n_j`.
    pub fn outside_route_valid(&self, n_j: i64) -> bool {
        self.degree_at_infinity(n_j) <= -2
    }

    /// Unnormalized expectation of the monomial `prod z_j^{n_j}`, with the
    /// contour route chosen per variable: reversed for negative exponents
    /// whenever admissible, contracted to zero otherwise.
    pub fn monomial_expectation(&self, n: &[i64]) -> Result<TorusIntegral> {
        let routes = self.default_routes(n);
        self.monomial_expectation_with_routes(n, &routes)
    }

    fn default_routes(&self, n: &[i64]) -> Vec<Route> {
        n.iter()
            .map(|&nj| {
                if nj < 0 && self.outside_route_valid(nj) {
                    Route::Outside
                } else {
                    Route::Inside
                }
            })
            .collect()
    }

    /// Same integral with explicit per-variable routes (the residue-sum
    /// independence property); outside routes are validated against decay.
    pub fn monomial_expectation_with_routes(
        &self,
        n: &[i64],
        routes: &[Route],
    ) -> Result<TorusIntegral> {
        if n.len() != self.n_c || routes.len() != self.n_c {
            return Err(Error::InvalidParameter(format!(
                "monomial exponent tuple must have length N_c = {}",
                self.n_c
            )));
        }
        for (&nj, &r) in n.iter().zip(routes) {
            if r == Route::Outside && !self.outside_route_valid(nj) {
                return Err(Error::InvalidParameter(format!(
                    "outside route invalid for exponent {nj}: integrand does not decay at infinity"
                )));
            }
        }
        let alpha = self.alpha.clone();
        let rational = self.evaluate::<BigRational>(&alpha, n, routes)?;
        Ok(TorusIntegral { rational, two_pi_power: self.n_c as u32 })
    }

    /// Floating-point re-evaluation of the same residue sum (identical pole
    /// bookkeeping, f64 jets). Returns the full value including the 2 pi
    /// powers.
    pub fn monomial_expectation_f64(&self, n: &[i64]) -> Result<f64> {
        let routes = self.default_routes(n);
        let alpha = JetScalar::to_f64(&self.alpha);
        let v = self.evaluate::<f64>(&alpha, n, &routes)?;
        Ok(v * std::f64::consts::TAU.powi(self.n_c as i32))
    }

    /// One-plaquette expectation of `Tr U`: `N_c <z_1> / <1>`, exact.
    pub fn wilson(&self) -> Result<BigRational> {
        if let Species::Boson(k) | Species::Fermion(k) = self.species {
            if k > 6 {
                return Err(Error::Budget {
                    module: "residues",
                    message: format!("wilson loop budget: species count {k} exceeds 6"),
                });
            }
        }
        let mut n = vec![0i64; self.n_c];
        let denom = self.monomial_expectation(&n)?;
        n[0] = 1;
        let numer = self.monomial_expectation(&n)?;
        if Zero::is_zero(&denom.rational) {
            return Err(Error::InvalidParameter("normalization integral vanished".into()));
        }
        Ok(BigRational::from_integer(BigInt::from(self.n_c as i64)) * numer.rational
            / denom.rational)
    }

    /// Character-expansion coefficient `c_lambda` (Haar mass 1) by summing
    /// monomial expectations over the negated weight table of `lambda`.
    pub fn char_coefficient(&self, lambda: &IrrepSignature) -> Result<BigRational> {
        if lambda.n_c() != self.n_c {
            return Err(Error::InvalidParameter(format!(
                "signature {lambda} does not match N_c = {}",
                self.n_c
            )));
        }
        let table = repn::weight_multiplicities(lambda)?;
        let mut acc = <BigRational as Zero>::zero();
        for (w, mult) in table.iter() {
            let negated: Vec<i64> = w.iter().map(|&x| -x).collect();
            let term = self.monomial_expectation(&negated)?;
            acc += term.rational * BigRational::from_integer(BigInt::from(mult));
        }
        let factorial: i64 = (1..=self.n_c as i64).product();
        Ok(acc / BigRational::from_integer(BigInt::from(factorial)))
    }

    /// `c_lambda / c_0`, exact.
    pub fn coefficient_ratio(&self, lambda: &IrrepSignature) -> Result<BigRational> {
        let c = self.char_coefficient(lambda)?;
        let c0 = self.char_coefficient(&IrrepSignature::trivial(self.n_c))?;
        Ok(c / c0)
    }

    fn evaluate<S: JetScalar>(&self, alpha: &S, n: &[i64], routes: &[Route]) -> Result<S> {
        // Pole menu per variable under its route.
        let mut menus: Vec<Vec<(PoleSite, usize)>> = Vec::with_capacity(self.n_c);
        for (&nj, &route) in n.iter().zip(routes) {
            let e = self.exponent(nj);
            let mut menu = Vec::new();
            match route {
                Route::Inside => {
                    if e < 0 {
                        menu.push((PoleSite::Zero, (-e) as usize));
                    }
                    if let Species::Boson(nb) = self.species {
                        menu.push((PoleSite::Alpha, nb as usize));
                    }
                }
                Route::Outside => {
                    if let Species::Boson(nb) = self.species {
                        menu.push((PoleSite::AlphaInv, nb as usize));
                    }
                }
            }
            for &(_, order) in &menu {
                if order - 1 > MAX_ORDER_PER_VARIABLE {
                    return Err(Error::Budget {
                        module: "residues",
                        message: format!(
                            "residue order {order} exceeds the per-variable cap {MAX_ORDER_PER_VARIABLE}"
                        ),
                    });
                }
            }
            menus.push(menu);
        }
        if menus.iter().any(|m| m.is_empty()) {
            // A variable without poles on its route integrates to zero.
            return Ok(S::zero());
        }

        let alpha_inv = if matches!(self.species, Species::Haar) {
            S::zero()
        } else {
            S::one().div(alpha)
        };
        let site_value = |s: PoleSite| -> S {
            match s {
                PoleSite::Zero => S::zero(),
                PoleSite::Alpha => alpha.clone(),
                PoleSite::AlphaInv => alpha_inv.clone(),
            }
        };

        // Iterate over all pole assignments (mixed-radix counter).
        let mut total = S::zero();
        let mut pick = vec![0usize; self.n_c];
        'outer: loop {
            let assignment: Vec<(PoleSite, usize)> =
                pick.iter().zip(&menus).map(|(&i, m)| m[i]).collect();
            total =
                total.add(&self.assignment_contribution(n, routes, &assignment, &site_value)?);

            for v in 0..self.n_c {
                pick[v] += 1;
                if pick[v] < menus[v].len() {
                    continue 'outer;
                }
                pick[v] = 0;
            }
            break;
        }

        // Global prefactor from writing the weight in pole form, and the
        // residual phase of the contour measure (a pure sign).
        let phase_exp = self.n_c * self.n_c + self.n_c * (self.n_c + 1) / 2;
        let sign = if phase_exp % 2 == 0 { S::one() } else { S::one().neg() };
        let prefactor = match self.species {
            Species::Boson(nb) => alpha.neg().powi(-((nb as usize * self.n_c) as i64)),
            Species::Fermion(nf) => alpha.neg().powi((nf as usize * self.n_c) as i64),
            Species::Haar => S::one(),
        };
        Ok(total.mul(&sign).mul(&prefactor))
    }

    fn assignment_contribution<S: JetScalar>(
        &self,
        n: &[i64],
        routes: &[Route],
        assignment: &[(PoleSite, usize)],
        site_value: &impl Fn(PoleSite) -> S,
    ) -> Result<S> {
        let orders: Vec<usize> = assignment.iter().map(|&(_, m)| m - 1).collect();
        let mut g = TaylorJet::constant(&orders, S::one());

        let (pow_alpha, pow_alpha_inv): (i64, i64) = match self.species {
            Species::Boson(nb) => (-(nb as i64), -(nb as i64)),
            Species::Fermion(nf) => (nf as i64, nf as i64),
            Species::Haar => (0, 0),
        };

        for (j, (&nj, &(site, _))) in n.iter().zip(assignment).enumerate() {
            let e = self.exponent(nj);
            let c = site_value(site);
            let order = orders[j];
            // z^e factor, unless it is the assigned pole at zero.
            if site != PoleSite::Zero {
                g.mul_univariate(j, &binomial_series(&c, e, order));
            }
            if pow_alpha != 0 && site != PoleSite::Alpha {
                let base = c.sub(&site_value(PoleSite::Alpha));
                g.mul_univariate(j, &binomial_series(&base, pow_alpha, order));
            }
            if pow_alpha_inv != 0 && site != PoleSite::AlphaInv {
                let base = c.sub(&site_value(PoleSite::AlphaInv));
                g.mul_univariate(j, &binomial_series(&base, pow_alpha_inv, order));
            }
        }

        // Squared Vandermonde couplings.
        for k in 0..self.n_c {
            for l in k + 1..self.n_c {
                let d = site_value(assignment[k].0).sub(&site_value(assignment[l].0));
                let two_d = d.add(&d);
                let terms = vec![
                    SparseTerm { exps: vec![], coeff: d.mul(&d) },
                    SparseTerm { exps: vec![(k, 1)], coeff: two_d.clone() },
                    SparseTerm { exps: vec![(l, 1)], coeff: two_d.neg() },
                    SparseTerm { exps: vec![(k, 2)], coeff: S::one() },
                    SparseTerm { exps: vec![(k, 1), (l, 1)], coeff: S::from_i64(-2) },
                    SparseTerm { exps: vec![(l, 2)], coeff: S::one() },
                ];
                g.mul_sparse(&terms);
            }
        }

        let mut contrib = g.top_coefficient().clone();
        for &r in routes {
            if r == Route::Outside {
                contrib = contrib.neg();
            }
        }
        Ok(contrib)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PoleSite {
    Zero,
    Alpha,
    AlphaInv,
}

/// Exact rational value of a finite f64 (every finite double is a dyadic
/// rational).
pub fn float_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Renders a rational as a plain fraction string.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
