//! Finitely presented modules over `R = P / I`.

mod fp;
mod hom;
mod matrix;

pub use fp::{FPModule, Simplified};
pub use hom::{
    biduality_map, column_span, dual, ext, hom_module, is_reflexive, resolution, subquotient, syzygy_module,
    Biduality, HomModule, IsoVerdict, ModuleMap,
};
pub use matrix::{determinant, for_each_subset, Matrix};
pub use ops::{annihilator_witness_outside, base_change, localize_is_free_rank_one};

mod ops;
