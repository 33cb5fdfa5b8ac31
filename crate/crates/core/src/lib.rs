//! Fourier and Gabor frames built from non-uniform sampling sets.
//!
//! Every continuous integral is a Riemann sum on a centered periodic
//! [`UniformGrid`]; the DFT is normalized so that it is a quadrature of the
//! Fourier integral `f̂(γ) = ∫ f(x) e^{-2πi x·γ} dx`. On top of that model the
//! crate provides
//!
//! - separated sampling sets and jittered lattices ([`sampling`]),
//! - frame bounds and reconstruction for exponential systems ([`frames`]),
//! - least-squares balayage of point masses onto a sampling set ([`balayage`]),
//! - the short-time Fourier transform and its frame inequalities ([`stft`]),
//! - non-uniform Gabor systems ([`gabor`]),
//! - a batch experiment driver ([`experiments`]).
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balayage;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod frames;
pub mod gabor;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod sampling;
pub mod stft;

pub use error::{Error, Result};
pub use lattice::{make_grid, Domain, GridSignal, SpectrumSet, UniformGrid};
pub use sampling::SeparatedSet;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
