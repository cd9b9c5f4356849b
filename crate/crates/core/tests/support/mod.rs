//! Shared test helpers: fixture loading, an independent requirement
//! evaluator, exhaustive trace enumeration and generators.
#![allow(dead_code)]

pub mod exhaustive;
pub mod fixtures;
pub mod gen;
pub mod reqoracle;
