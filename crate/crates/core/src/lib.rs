//! Entropy functionals, degrees of freedom and exact inequality checks for
//! integer-valued log-concave distributions.
//!
//! - [`pmf`]: finite-support PMFs in exact or float arithmetic.
//! - [`entropy`]: Rényi entropies, entropy powers, `N_alpha - 1`.
//! - [`families`]: truncated geometric, two-sided geometric, standard corpus.
//! - [`dof`]: degree of freedom and minimal max-of-affine covers of potentials.
//! - [`ineq`]: inequality checks and min-slack search.
//! - [`poly`]: exact polynomial engine and the coefficient identities.

pub mod dof;
pub mod entropy;
pub mod error;
pub mod families;
pub mod ineq;
pub mod io;
pub mod pmf;
pub mod poly;
pub mod report;
pub mod scalar;

pub use dof::{AffinePiece, Potential};
pub use entropy::RenyiOrder;
pub use error::{Error, Result};
pub use families::ExtremalParams;
pub use pmf::{AnyPmf, Pmf};
pub use report::{VerifyReport, DEFAULT_TOL};
pub use scalar::{Mode, Rational, Scalar, Weight};
