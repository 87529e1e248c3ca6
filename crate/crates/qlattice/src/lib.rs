//! Exact and certified-precision computation with Q-lattices.
//!
//! The crate realizes, at user-chosen finite arithmetic level, the
//! commensurability structure of one- and two-dimensional Q-lattices and
//! the quantum-statistical systems built on it: the groupoid convolution
//! *-algebra with its generators and relations, time evolutions, Gibbs
//! and KMS equilibrium states (with the Riemann zeta function as the
//! partition function), the cyclotomic Galois symmetry of the ground
//! states, and the determinant-weighted two-dimensional analogue.
//!
//! Everything is either exact (rationals, residues, cyclotomic numbers)
//! or carries an explicit error radius (series evaluations, matrix
//! functions). See the `book/` directory of the repository for a guided
//! tour.

pub mod bcalg;
pub mod cyclotomic;
pub mod error;
pub mod galois;
pub mod gl2;
pub mod kms;
pub mod linalg;
pub mod numeric;
pub mod qlat1d;
pub mod ratio;
pub mod qmodz;
pub mod residue;
pub mod sample;
pub mod zeta;

pub use error::{Error, Result};
pub use numeric::{BigComplex, ComplexBall, RealBall, DEFAULT_PRECISION};
pub use qmodz::QmodZ;
pub use residue::ResidueEndo;
