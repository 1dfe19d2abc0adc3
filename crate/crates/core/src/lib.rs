//! Transient fields of a two-layer coupled Klein-Gordon waveguide.
//!
//! The crate evaluates the field excited by a point impulse both exactly,
//! through a single modal integral over frequency, and through a family of
//! saddle-point asymptotics (isolated saddles, Airy merges, the exchange
//! pulse near the avoided crossing). A zone classifier decides which of the
//! asymptotic forms applies at each point of the `(t, V = x/t)` plane.

pub mod acceptance;
pub mod asymptotics;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod field;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod saddle;
pub mod waveguide;
pub mod zones;

pub use error::{Error, Result};
pub use model::{WaveguideParams, C64};
pub use waveguide::Waveguide;
