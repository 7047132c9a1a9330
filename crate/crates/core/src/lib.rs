#![no_std]
//! Exact and numeric kernels for an explicit lift of level-one Maass cusp
//! forms to cusp forms on `O(1, 8n+1)`, together with the local Hecke theory
//! that identifies its eigenvalues, Satake parameters and standard L-factors.

extern crate alloc;

pub mod arith;
pub mod exactnum;
pub mod lattice;
pub mod coeffs;
pub mod lift;
pub mod hecke;
pub mod lfunction;
pub mod analytic;
