//! Influences, noise semigroups and Talagrand-type inequalities for functions
//! on the discrete cube `{-1, 1}^n`, with Gaussian (Hermite) counterparts.

// Range checks are written so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cube;
pub mod error;
pub mod gaussian;
pub mod inequality;
pub mod numeric;
pub mod spectral;
pub mod verify;
pub mod zoo;

pub use cube::{BooleanFunction, CubePoint, InfluenceProfile, RealCubeFunction, MAX_DIM};
pub use error::{Error, Result};
pub use spectral::{FourierSpectrum, SemigroupMethod};
