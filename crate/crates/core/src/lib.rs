//! Numerics for induced lattice gauge models with gauge group U(N_c).
//!
//! The plaquette statistical weight is a ratio of determinants,
//! `|Det(1 - a_f U)|^{2 N_f} / |Det(1 - a_b U)|^{2 N_b}`, obtained by
//! integrating out auxiliary bosons and fermions hopping around each
//! plaquette. This crate provides:
//!
//! - [`cellcomplex`]: oriented cell complexes, integer chains, boundary
//!   algebra, spanning trees and closed-2-chain bases;
//! - [`repn`]: U(N_c) signatures, dimensions, Casimirs, weight systems and
//!   torus characters;
//! - [`weights`]: the plaquette weight's character-expansion coefficients via
//!   a Fourier-determinant engine, one-plaquette observables and second
//!   moments;
//! - [`residues`]: an exact contour-integral engine (truncated-jet residue
//!   calculus) serving as the oracle for the determinant engine;
//! - [`twodim`]: disk boundary-value sums, genus-g continuum partition
//!   functions and gluing checks;
//! - [`montecarlo`]: Haar sampling and Metropolis simulation of the induced
//!   actions on arbitrary complexes;
//! - [`abeliandual`]: the U(1) model's dual formulation as certified sums
//!   over closed integer 2-chains;
//! - [`fockcheck`]: the determinant-as-Fock-trace identity and the singlet
//!   Hilbert series.

pub mod abeliandual;
pub mod cellcomplex;
pub mod error;
pub mod fockcheck;
pub mod montecarlo;
pub mod quadrature;
pub mod repn;
pub mod residues;
pub mod twodim;
pub mod weights;

pub use cellcomplex::{CellComplex, Contour, IntegerChain};
pub use error::{Error, Result};
pub use repn::{IrrepSignature, WeightTable};
pub use weights::{CharCoefficient, ModelCouplings, MomentReport};
