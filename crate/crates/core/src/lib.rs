// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Three-qubit autonomous absorption refrigerator coupled to common thermal
//! reservoirs, in the local-approach Lindblad description.
//!
//! The pipeline is `model` (parameters and rates) → `operators` (jump
//! operators, Liouvillian, reduced 10×10 W) → `dynamics` (steady states and
//! transients) → `thermo` (currents, COP, entropy production) → `sweep`
//! (configs, grids, figure datasets and the verification harness).

// NaN must fail parameter checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod model;
pub mod operators;
pub mod sweep;
pub mod thermo;
pub mod transcribed;

pub use error::{Error, Result};
