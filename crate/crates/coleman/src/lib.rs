//! Numerical toolkit for the Coleman correspondence at the free-fermion point.
//!
//! The crate evaluates, by independent routes, the closed-form correlation
//! functions of free Dirac fermions and of the massless Gaussian free field,
//! the beta = 4*pi sine-Gordon two-point functions and Fourier covariance,
//! the Dirac Green's function with a finite-volume mass term on a disk, and
//! the renormalized-potential hierarchy of the sine-Gordon model. Every
//! identity that ties these objects together is exposed as a checkable
//! quantity so that the pieces can be cross-validated against each other.
//!
//! Conventions follow the complex identification `x = (x0, x1) -> x1 + i*x0`
//! with Wirtinger derivatives `d = (1/2)(-i d0 + d1)` and
//! `dbar = (1/2)(i d0 + d1)`.

// golden reference values are written with their full known digits even
// where f64 truncates them
#![allow(clippy::excessive_precision)]
#![allow(clippy::type_complexity)]
#![allow(clippy::needless_range_loop)]

pub mod bosonize;
pub mod combinat;
pub mod diskgreen;
pub mod error;
pub mod fermion;
pub mod gff;
pub mod point;
pub mod quad;
pub mod renorm;
pub mod report;
pub mod sgprop;
pub mod specfun;

pub use error::{Error, Result};
pub use point::ComplexPoint;
pub use report::CheckReport;
