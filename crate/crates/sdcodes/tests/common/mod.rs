#![allow(dead_code)]

pub mod properties;
