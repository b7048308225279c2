//! Numerical tools for the joint value distribution of discrete shifts of
//! zeta-functions.
//!
//! The crate evaluates an Euler-product zeta-function `φ(s)` (the Riemann
//! zeta-function or a Dirichlet L-function) together with periodic Hurwitz
//! zeta-functions `ζ(s, α; 𝔅)`, their smoothed approximants and their
//! Haar-random models on the infinite torus, and checks at desk scale how
//! the discrete shifts `s + ikh` distribute:
//!
//! * [`special_functions`]: Hurwitz, periodic and periodic Hurwitz zeta
//!   evaluation by Euler–Maclaurin summation, Dirichlet characters, Euler
//!   products.
//! * [`smoothing`]: exponentially smoothed Dirichlet series `φ_n`, `ζ_n`.
//! * [`random_model`]: Haar points of the torus, random Dirichlet series and
//!   the ergodic shift orbit.
//! * [`torus_analysis`]: character averages along the orbit and an
//!   integer-relation scan for the frequency set.
//! * [`universality_search`]: compact-set grids, admissible targets and the
//!   hit-density scan over `k = 0..=N`.
//! * [`stats`]: lattice vs. random-model sample comparison.
//! * [`cli`]: the `zetalab` command line driver.

pub mod arith;
pub mod cli;
pub mod error;
pub mod random_model;
pub mod shifts;
pub mod smoothing;
pub mod special_functions;
pub mod stats;
pub mod torus_analysis;
pub mod universality_search;

mod numeric;

pub use error::{Error, Result};
pub use num_complex::Complex64;
