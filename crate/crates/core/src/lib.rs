//! An exact-arithmetic workbench for Frobenius splittings of affine schemes
//! over prime fields: p^{-e}-linear maps on quotient rings, their extension
//! along presented normalizations, hereditary-surjective-trace checking, and
//! the divisor calculus on curve charts.

pub mod error;
pub mod fp;
pub mod order;
pub mod poly;
pub mod groebner;
pub mod linalg;
pub mod ring;
pub mod frob;
pub mod extension;
pub mod hst;
pub mod divisor;

pub use error::{Error, Result};
pub use fp::Fp;
pub use groebner::{GbConfig, Ideal};
pub use order::MonomialOrder;
pub use poly::{ArithOp, Monomial, MultiPoly, PolyRing};
pub use ring::{PresentedRing, ProductRing, Tuple};
