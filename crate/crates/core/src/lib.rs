//! Exact-arithmetic engine for limiting modular symbols of higher weight.
//!
//! The crate builds up from exact rational / quadratic-surd arithmetic and
//! continued fractions, through congruence-subgroup coset tables and the
//! alternating-sign shift space coding geodesics, to modular symbols with
//! homogeneous polynomial coefficients and their numerical pairing with cusp
//! forms via period integrals.

pub mod cf;
pub mod cosets;
pub mod cusp;
pub mod error;
pub mod mat2;
pub mod quadirr;

pub use cf::{convergent, convergents, g_matrix, g_matrix_rev, signed_cf_matrix, CfExpansion, SignMode};
pub use cosets::{member, CosetTable, Gen, GroupWitness, SubgroupSpec};
pub use cusp::Cusp;
pub use error::{Error, Result};
pub use mat2::Mat2;
pub use quadirr::{QuadExt, QuadIrr};
