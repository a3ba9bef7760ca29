//! Exact-arithmetic toolkit for cubic Dirac operators on reductive pairs.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod clifford;
pub mod dirac;
pub mod liestruct;
pub mod linalg;
pub mod repmod;
pub mod rootdata;
