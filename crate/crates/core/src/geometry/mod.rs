//! Exact and floating-point geometry kernels: simplex LPs, double
//! description, and extreme-point filtering.

pub mod dd;
pub mod extreme;
pub mod lp;
pub mod lp_f64;
