//! Exact arithmetic over `Z_m`, standard-form codes and the self-dual and
//! Type II criteria.

mod arith;
mod code;

pub(crate) use arith::euclidean_weight_raw;
pub use arith::{euclidean_weight, inner_product, rho, star_norm, EuclideanProfile, Modulus, RingMatrix, RingVector};
pub use code::{
    binary_part, brute_force_dual, extremal_bound, is_self_dual_standard, is_type_ii, ExtremalBound, StdFormCode,
};
