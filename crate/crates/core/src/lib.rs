//! Differential and boomerang analysis of Sboxes over GF(2^n).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! search and the command-line tool live in the `sboxlab` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod field;
pub mod quadratic;
pub mod sbox;
pub mod search;
pub mod tables;

pub use error::{Error, Result};
pub use field::{default_reduction_poly, Elem, Field, Subfield};
pub use sbox::{random_affine_permutation, random_permutation, SBox, UnivariatePoly};
pub use tables::{
    bct_boura_canteaut, bct_definition, bct_paircount, boomerang_uniformity, ddt,
    differential_uniformity, CountTable,
};
