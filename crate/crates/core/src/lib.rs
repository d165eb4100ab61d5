pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod forward;
pub mod lift;
pub mod metrics;
pub mod noise;
pub mod recon;
pub mod scalar;
pub mod sources;
pub mod specfun;
pub mod trace;

pub use error::{Error, Result};
pub mod pipeline;

/// Double-precision instances of the generic types.
pub type Point = geometry::Point2<f64>;
pub type Grid = geometry::CartesianGrid<f64>;
pub type Circle = geometry::CircleGrid<f64>;
pub type Trace = trace::CauchyTrace<f64>;
pub type Source = sources::SourceSpec<f64>;
pub use num_complex::Complex64;
