//! Self-dual and Type II codes over `Z_m`: ring arithmetic, standard-form
//! codes, four-negacirculant and neighbor constructions, Construction A
//! lattices with exact short-vector enumeration, and binary-part analysis.

#![no_std]

extern crate alloc;

pub mod binary;
pub mod construct;
pub mod error;
pub mod lattice;
pub mod zring;

pub use error::{Error, Result, TransformCondition};
