//! Noether point symmetries, gauge functions and first integrals for
//! one-dimensional Lagrangian systems, specialized to the damped harmonic
//! oscillator `m u'' + c u' + k u = 0`.

pub mod symexpr;
pub mod variational;
pub mod cli;
pub mod conservation;
pub mod dho;
pub mod liealgebra;
pub mod noether;
