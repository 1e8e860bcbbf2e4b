//! Invariants of scalar linear differential operators under symplectic
//! changes of coordinates.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyalg`]: exact multivariate polynomials, homogeneous symbols and
//!   linear maps.
//! * [`transvect`]: symplectic and metric transvectants.
//! * [`invar`]: transvectant operators, trace invariants, pairing forms and
//!   orbit dimensions.
//! * [`equiv`]: signature comparison, numerical orbit matching and the
//!   constant-type test.
//! * [`connect`]: connections, quantization, total symbols and the Wagner
//!   connection.
//! * [`models`]: coefficient invariants and model surfaces.
//! * [`json`]: the on-disk formats shared with the command-line tool.

pub mod connect;
pub mod equiv;
pub mod error;
pub mod invar;
pub mod json;
pub mod linalg;
pub mod models;
pub mod polyalg;
pub mod scalar;
pub mod transvect;

pub use error::{Error, ParseError, PolyError};
pub use polyalg::{monomial_basis, HomogeneousPoly, LinearMap, MultiIndex, Poly, SymbolField};
pub use scalar::{Coeff, Field, Rational};
