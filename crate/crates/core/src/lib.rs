//! Point counts, character-sum congruences and slope zeta functions for the
//! Dwork pencil of Calabi-Yau hypersurfaces and its toric mirror.

pub mod counting;
mod decimal;
pub mod ff;
pub mod padic;
pub mod pipeline;
pub mod slope;
pub mod zeta;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
