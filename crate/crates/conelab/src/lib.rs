//! Command-line companion to `conelab-core`: run configuration, parallel
//! grid scans with CSV output, the causal-classification table, and named
//! decay-law fits.

// Same convention as the core crate: `!(x > 0.0)` guards reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod fit;
pub mod scan;
pub mod table;
