//! Numerical laboratory for the field of a pointlike, instantaneously switched-on
//! scalar source: propagator functions, the generated state, its observables, and
//! quantitative causality verdicts.
//!
//! Everything is computed in natural units (ħ = c = 1) in relative coordinates
//! (T, r) with the source at the spatial origin. The crate is `no_std` + `alloc`;
//! all float transcendentals route through `libm`.

#![cfg_attr(not(test), no_std)]
// Guards of the form `!(x > 0.0)` deliberately reject NaN along with the
// out-of-range values; spelling them through partial_cmp would hide that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod accel;
pub mod bessel;
pub mod error;
pub mod lab;
pub mod localization;
pub mod observables;
pub mod propagator;
pub mod quad;
pub mod source;

pub use error::{Error, Result};
pub use propagator::{FieldParams, LightconeClass, SpacetimeInterval};
pub use quad::{ComplexSample, QuadratureSpec};

/// Complex double-precision scalar used throughout.
pub type Complex64 = num_complex::Complex<f64>;
