//! Longley-Rice Irregular Terrain Model (point-to-point mode) implemented
//! over configurable-precision arithmetic, together with terrain handling
//! and a reproducible experiment harness that measures how path-loss
//! predictions move as the significand width changes.
//!
//! Modules:
//!
//! - [`mpnum`]: explicit-precision floating point (real and complex) and
//!   the numeric-environment abstraction the model is generic over.
//! - [`itm`]: the propagation model itself, with branch-decision tracing.
//! - [`terrain`]: raster ingestion (ESRI ASCII, SRTM), great-circle
//!   elevation profiles, and synthetic test terrain.
//! - [`harness`]: random link generation, factorial case construction,
//!   multi-precision sweeps against a native baseline, and error/timing
//!   statistics.

pub mod harness;
pub mod itm;
pub mod mpnum;
pub mod terrain;

pub use itm::{
    Climate, PathGeometry, Polarization, Precision, PredictionResult, PropagationParams,
    TerrainProfile, VariabilityMode,
};
pub use mpnum::{MpEnv, MpFloat, NativeEnv};
pub use terrain::{ElevationGrid, GeoPoint};
