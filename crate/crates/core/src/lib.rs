//! Minimal projections onto hyperplanes of finite-dimensional spaces normed by
//! `||x|| = (Σ|fᵢ(x)|^{2p})^{1/2p}`.
//!
//! The crate evaluates the constants of the quantitative lower bound for such
//! projections in log space, searches minimal projections numerically, and
//! checks the supporting inequalities either exactly (rational certificates) or
//! by seeded falsification searches.

pub mod bounds;
pub mod error;
pub mod minproj;
pub mod numerics;
pub mod optimize;
pub mod params;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
