//! Terrain handling: raster elevation grids, point lookup, great-circle
//! elevation profiles, and synthetic grids for tests and experiments.
//!
//! Geometry uses a spherical earth of radius [`EARTH_RADIUS_M`]; over the
//! tens of kilometres this model targets the path-length error against an
//! ellipsoid is far below a metre. All terrain I/O is native double
//! precision; configurable-precision arithmetic starts where profiles
//! enter the propagation model.

mod grid;
mod profile;
mod synth;

pub use grid::{load_grid, ElevationGrid};
pub use profile::{default_profile_spacing, extract_profile, great_circle_distance_m};
pub use synth::{synth_grid, SynthKind, SynthSpec};

use serde::{Deserialize, Serialize};

/// Mean earth radius in metres used for all distance computations.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

#[derive(Debug, thiserror::Error)]
pub enum TerrainError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: bad raster format: {detail}")]
    Format { path: String, detail: String },
    #[error("point ({lat}, {lon}) is outside the grid")]
    OutOfBounds { lat: f64, lon: f64 },
    #[error("no-data cells around point ({lat}, {lon})")]
    Nodata { lat: f64, lon: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A geographic point with an antenna height above ground level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
    pub height_agl: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64, height_agl: f64) -> Result<Self, TerrainError> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(TerrainError::InvalidInput(format!(
                "latitude {lat} outside [-90, 90]"
            )));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(TerrainError::InvalidInput(format!(
                "longitude {lon} outside [-180, 180]"
            )));
        }
        if !(height_agl >= 0.0) {
            return Err(TerrainError::InvalidInput(format!(
                "height above ground {height_agl} must be nonnegative"
            )));
        }
        Ok(Self {
            lat,
            lon,
            height_agl,
        })
    }
}

/// A latitude/longitude box, edges included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BoundingBox {
    pub fn validate(&self) -> Result<(), TerrainError> {
        if !(self.lat_min < self.lat_max) || !(self.lon_min < self.lon_max) {
            return Err(TerrainError::InvalidInput(format!(
                "bounding box not well ordered: {self:?}"
            )));
        }
        if self.lat_min < -90.0 || self.lat_max > 90.0 || self.lon_min < -180.0
            || self.lon_max > 180.0
        {
            return Err(TerrainError::InvalidInput(format!(
                "bounding box out of range: {self:?}"
            )));
        }
        Ok(())
    }
}
