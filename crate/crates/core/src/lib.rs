#![cfg_attr(not(feature = "std"), no_std)]
//! Arithmetic of invertible polynomial pencils over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`ff`]: finite-field tables, characters and Gauss sums;
//! - [`invertible`]: exponent matrices, weights, atomic decomposition,
//!   transpose mirrors and diagonal symmetry groups;
//! - [`counting`]: point counts on affine and projective hypersurfaces,
//!   the mod-p formula via the age-one set, and the Legendre family;
//! - [`hypergeom`]: truncated series, parameter analysis and finite-field
//!   hypergeometric sums;
//! - [`zeta`]: L-polynomials, zeta numerator assembly and factorisation.
//!
//! Without the default `std` feature the crate is `no_std + alloc`: counting
//! runs sequentially and Gauss sums are summed directly.

extern crate alloc;

pub mod arith;
pub mod counting;
pub mod error;
pub mod ff;
pub mod hypergeom;
pub mod intpoly;
pub mod invertible;
pub mod linalg;
pub mod zeta;

pub use error::{Error, Result};
