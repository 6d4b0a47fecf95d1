//! Outer bounds, lattice-alignment achievable rates and Monte-Carlo
//! validation for the additive state-dependent Gaussian interference
//! channel.
//!
//! ```
//! use asdgic::bounds::{gap_tilde, outer_sum_rate};
//! use asdgic::envelope::PowerGrid;
//! use asdgic::model::{build_params, RawParams};
//!
//! let params = build_params(RawParams::new(1.0, 1.0, 1.0, 1.0, 4.0, 4.0)).unwrap();
//! assert!((outer_sum_rate(&params).value - 0.5 * 5f64.log2()).abs() < 1e-15);
//!
//! let row = gap_tilde(1.0, &PowerGrid::default()).unwrap();
//! assert!((row.gap - 0.661).abs() < 0.01);
//! ```

pub mod bounds;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod lattice;
pub mod model;
pub mod scenario;
pub mod simulate;

pub use error::{Error, Result};
