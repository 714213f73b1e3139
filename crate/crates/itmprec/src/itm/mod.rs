//! The Longley-Rice Irregular Terrain Model, point-to-point mode.
//!
//! The model is a careful port of the public reference implementation
//! (the NTIA C++ translation of the original FORTRAN), written once,
//! generically, over the numeric environments in [`crate::mpnum`]. Running
//! it with [`Precision::Native`] reproduces machine-double behaviour;
//! [`Precision::Bits`] evaluates every arithmetic operation at an explicit
//! significand width. Comparisons inside the model are exact comparisons
//! of the working values; nothing is epsilon-fuzzed, so precision-induced
//! branch flips are observable and traced (see [`trace`]).

mod model;
pub mod trace;

pub use trace::{BranchSite, BranchTrace, TraceDivergence, TraceEvent, Tracer};

use serde::{Deserialize, Serialize};

use crate::mpnum::{Env, MpEnv, NativeEnv};

/// Radio climate codes, exactly the reference model's 1-7.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Climate {
    Equatorial = 1,
    ContinentalSubtropical = 2,
    MaritimeSubtropical = 3,
    Desert = 4,
    ContinentalTemperate = 5,
    MaritimeTemperateOverLand = 6,
    MaritimeTemperateOverSea = 7,
}

impl Climate {
    pub fn from_code(code: u8) -> Result<Self, ItmError> {
        use Climate::*;
        Ok(match code {
            1 => Equatorial,
            2 => ContinentalSubtropical,
            3 => MaritimeSubtropical,
            4 => Desert,
            5 => ContinentalTemperate,
            6 => MaritimeTemperateOverLand,
            7 => MaritimeTemperateOverSea,
            _ => return Err(ItmError::InvalidClimate(code)),
        })
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub const ALL: [Climate; 7] = [
        Climate::Equatorial,
        Climate::ContinentalSubtropical,
        Climate::MaritimeSubtropical,
        Climate::Desert,
        Climate::ContinentalTemperate,
        Climate::MaritimeTemperateOverLand,
        Climate::MaritimeTemperateOverSea,
    ];
}

impl TryFrom<u8> for Climate {
    type Error = ItmError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Climate::from_code(v)
    }
}

impl From<Climate> for u8 {
    fn from(c: Climate) -> u8 {
        c.code()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Horizontal,
    Vertical,
}

/// Statistical mode of the variability adjustment. Point-to-point use
/// removes location variability, matching the reference entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariabilityMode {
    SingleMessage,
    Individual,
    Mobile,
    Broadcast,
}

impl VariabilityMode {
    /// The reference `mdvar` encoding: base mode plus 10 for "location
    /// variability eliminated".
    pub(crate) fn mdvar(self) -> i64 {
        let base = match self {
            VariabilityMode::SingleMessage => 0,
            VariabilityMode::Individual => 1,
            VariabilityMode::Mobile => 2,
            VariabilityMode::Broadcast => 3,
        };
        base + 10
    }
}

/// All scalar inputs of a point-to-point prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationParams {
    pub frequency_mhz: f64,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    /// Relative permittivity of the ground.
    pub permittivity: f64,
    /// Ground conductivity in S/m.
    pub conductivity: f64,
    pub climate: Climate,
    /// Surface refractivity in N-units, reduced to sea level.
    pub surface_refractivity: f64,
    pub polarization: Polarization,
    pub reliability: f64,
    pub confidence: f64,
    pub variability: VariabilityMode,
}

impl PropagationParams {
    /// Reference defaults for everything the experiment table leaves
    /// unspecified: 301 N-units, vertical polarization, broadcast mode at
    /// 50%/50%.
    pub fn with_defaults(
        frequency_mhz: f64,
        tx_height_m: f64,
        rx_height_m: f64,
        permittivity: f64,
        conductivity: f64,
        climate: Climate,
    ) -> Self {
        Self {
            frequency_mhz,
            tx_height_m,
            rx_height_m,
            permittivity,
            conductivity,
            climate,
            surface_refractivity: 301.0,
            polarization: Polarization::Vertical,
            reliability: 0.5,
            confidence: 0.5,
            variability: VariabilityMode::Broadcast,
        }
    }

    pub fn validate(&self) -> Result<(), ItmError> {
        fn positive(name: &'static str, v: f64) -> Result<(), ItmError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ItmError::InvalidParameter { name, value: v })
            }
        }
        fn fraction(name: &'static str, v: f64) -> Result<(), ItmError> {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(ItmError::InvalidParameter { name, value: v })
            }
        }
        positive("frequency_mhz", self.frequency_mhz)?;
        positive("permittivity", self.permittivity)?;
        positive("conductivity", self.conductivity)?;
        positive("surface_refractivity", self.surface_refractivity)?;
        fraction("reliability", self.reliability)?;
        fraction("confidence", self.confidence)?;
        for (name, h) in [
            ("tx_height_m", self.tx_height_m),
            ("rx_height_m", self.rx_height_m),
        ] {
            if !(h >= 0.0) || !h.is_finite() {
                return Err(ItmError::InvalidParameter { name, value: h });
            }
        }
        Ok(())
    }
}

/// Equally spaced elevation samples along the path, transmitter first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerrainProfile {
    spacing_m: f64,
    elevations: Vec<f64>,
}

impl TerrainProfile {
    pub fn new(spacing_m: f64, elevations: Vec<f64>) -> Result<Self, ItmError> {
        if !(spacing_m > 0.0) || !spacing_m.is_finite() {
            return Err(ItmError::InvalidParameter {
                name: "spacing_m",
                value: spacing_m,
            });
        }
        if elevations.len() < 2 {
            return Err(ItmError::ProfileTooShort(elevations.len()));
        }
        if let Some(bad) = elevations.iter().find(|e| !e.is_finite()) {
            return Err(ItmError::InvalidParameter {
                name: "elevation",
                value: **bad,
            });
        }
        Ok(Self {
            spacing_m,
            elevations,
        })
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    /// Path distance: spacing times interval count.
    pub fn distance_m(&self) -> f64 {
        self.spacing_m * (self.elevations.len() - 1) as f64
    }
}

/// Arithmetic to run the model with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    /// Native machine doubles (the baseline; written as 0 bits in records).
    Native,
    /// Explicit significand width in bits.
    Bits(u32),
}

impl Precision {
    /// Records-file encoding: 0 for native, otherwise the bit width.
    pub fn code(self) -> u32 {
        match self {
            Precision::Native => 0,
            Precision::Bits(b) => b,
        }
    }

    pub fn from_code(code: u32) -> Self {
        if code == 0 {
            Precision::Native
        } else {
            Precision::Bits(code)
        }
    }

    pub fn validate(self) -> Result<(), ItmError> {
        match self {
            Precision::Native => Ok(()),
            Precision::Bits(b) if (MIN_MODEL_PRECISION..=MAX_MODEL_PRECISION).contains(&b) => {
                Ok(())
            }
            Precision::Bits(b) => Err(ItmError::InvalidPrecision(b)),
        }
    }
}

/// The model needs at least half-precision significands to stay meaningful.
pub const MIN_MODEL_PRECISION: u32 = 11;
/// Generous ceiling; the experiment uses up to 1024.
pub const MAX_MODEL_PRECISION: u32 = 16384;

/// Which regime produced the reference attenuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropMode {
    LineOfSight,
    Diffraction,
    Scatter,
}

impl std::fmt::Display for PropMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PropMode::LineOfSight => "line-of-sight",
            PropMode::Diffraction => "diffraction",
            PropMode::Scatter => "scatter",
        })
    }
}

/// Path geometry derived from the profile, narrowed to doubles for
/// reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathGeometry {
    /// Effective earth curvature, 1/m.
    pub effective_earth_curvature: f64,
    pub horizon_distance_tx_m: f64,
    pub horizon_distance_rx_m: f64,
    pub horizon_elevation_angle_tx_rad: f64,
    pub horizon_elevation_angle_rx_rad: f64,
    /// Terrain irregularity parameter, metres.
    pub delta_h_m: f64,
    pub effective_height_tx_m: f64,
    pub effective_height_rx_m: f64,
    pub line_of_sight: bool,
}

/// One model evaluation.
#[derive(Clone, Debug)]
pub struct PredictionResult {
    pub total_loss_db: f64,
    pub free_space_loss_db: f64,
    pub reference_attenuation_db: f64,
    /// Variability adjustment at the requested reliability/confidence;
    /// `total = free_space + reference_attenuation + variability`.
    pub variability_db: f64,
    pub mode: PropMode,
    /// Parameter-range warning code, 0 (nominal) through 4.
    pub kwx: u8,
    pub distance_m: f64,
    pub geometry: PathGeometry,
    pub trace: BranchTrace,
    pub trace_hash: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ItmError {
    #[error("climate code {0} outside 1..=7")]
    InvalidClimate(u8),
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("terrain profile needs at least 2 points, got {0}")]
    ProfileTooShort(usize),
    #[error("precision {0} bits outside {MIN_MODEL_PRECISION}..={MAX_MODEL_PRECISION}")]
    InvalidPrecision(u32),
    #[error("model produced a non-finite loss")]
    NonFinite,
}

/// Run the full point-to-point prediction.
///
/// `record_trace` selects a full event list (for diagnosis) or hash-only
/// tracing (for bulk sweeps; the returned trace is then empty but the
/// hash is still filled in).
pub fn point_to_point(
    profile: &TerrainProfile,
    params: &PropagationParams,
    precision: Precision,
    record_trace: bool,
) -> Result<PredictionResult, ItmError> {
    params.validate()?;
    precision.validate()?;
    let mut tracer = if record_trace {
        Tracer::recording()
    } else {
        Tracer::hashing()
    };
    let out = match precision {
        Precision::Native => model::point_to_point_in(NativeEnv, profile, params, &mut tracer),
        Precision::Bits(p) => {
            model::point_to_point_in(MpEnv::new(p), profile, params, &mut tracer)
        }
    };
    if !out.total_loss_db.is_finite() {
        return Err(ItmError::NonFinite);
    }
    let trace_hash = tracer.hash();
    Ok(PredictionResult {
        total_loss_db: out.total_loss_db,
        free_space_loss_db: out.free_space_loss_db,
        reference_attenuation_db: out.reference_attenuation_db,
        variability_db: out.variability_db,
        mode: out.mode,
        kwx: out.kwx,
        distance_m: out.distance_m,
        geometry: out.geometry,
        trace: tracer.into_trace(),
        trace_hash,
    })
}

/// Profile preprocessing only: fills the path geometry at the requested
/// precision without running the attenuation stages.
pub fn prepare_path(
    profile: &TerrainProfile,
    params: &PropagationParams,
    precision: Precision,
) -> Result<PathGeometry, ItmError> {
    params.validate()?;
    precision.validate()?;
    let mut tracer = Tracer::hashing();
    let geom = match precision {
        Precision::Native => model::prepare_path_in(NativeEnv, profile, params, &mut tracer),
        Precision::Bits(p) => model::prepare_path_in(MpEnv::new(p), profile, params, &mut tracer),
    };
    Ok(geom)
}

/// Generic single-evaluation entry points, re-exported for tests and the
/// harness; most callers want [`point_to_point`].
pub use model::{point_to_point_in, prepare_path_in, ModelOutcome};

/// Knife-edge diffraction attenuation as a function of the squared Fresnel
/// parameter, evaluated at `precision`.
pub fn aknfe_db(v2: f64, precision: Precision) -> Result<f64, ItmError> {
    precision.validate()?;
    if !(v2 >= 0.0) {
        return Err(ItmError::InvalidParameter {
            name: "v2",
            value: v2,
        });
    }
    let mut t = Tracer::hashing();
    Ok(match precision {
        Precision::Native => model::aknfe_at(NativeEnv, v2, &mut t),
        Precision::Bits(p) => model::aknfe_at(MpEnv::new(p), v2, &mut t),
    })
}

/// Height-gain function over a smooth earth (the `fht` curve family).
pub fn fht_db(x: f64, pk: f64, precision: Precision) -> Result<f64, ItmError> {
    precision.validate()?;
    if !(x > 0.0) {
        return Err(ItmError::InvalidParameter { name: "x", value: x });
    }
    let mut t = Tracer::hashing();
    Ok(match precision {
        Precision::Native => model::fht_at(NativeEnv, x, pk, &mut t),
        Precision::Bits(p) => model::fht_at(MpEnv::new(p), x, pk, &mut t),
    })
}

/// Troposcatter frequency-gain function.
pub fn h0f_db(r: f64, et: f64, precision: Precision) -> Result<f64, ItmError> {
    precision.validate()?;
    let mut t = Tracer::hashing();
    Ok(match precision {
        Precision::Native => model::h0f_at(NativeEnv, r, et, &mut t),
        Precision::Bits(p) => model::h0f_at(MpEnv::new(p), r, et, &mut t),
    })
}

/// Troposcatter distance function.
pub fn ahd_db(td: f64, precision: Precision) -> Result<f64, ItmError> {
    precision.validate()?;
    if !(td > 0.0) {
        return Err(ItmError::InvalidParameter {
            name: "td",
            value: td,
        });
    }
    let mut t = Tracer::hashing();
    Ok(match precision {
        Precision::Native => model::ahd_at(NativeEnv, td, &mut t),
        Precision::Bits(p) => model::ahd_at(MpEnv::new(p), td, &mut t),
    })
}

/// Inverse standard normal complementary function (the Hastings
/// approximation the model uses for its quantiles).
pub fn qerfi(q: f64, precision: Precision) -> Result<f64, ItmError> {
    precision.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(ItmError::InvalidParameter { name: "q", value: q });
    }
    Ok(match precision {
        Precision::Native => model::qerfi_at(NativeEnv, q),
        Precision::Bits(p) => model::qerfi_at(MpEnv::new(p), q),
    })
}

/// Free-space path loss `32.45 + 20 log10(f_MHz) + 20 log10(d_km)`.
pub fn free_space_loss_db(
    frequency_mhz: f64,
    distance_km: f64,
    precision: Precision,
) -> Result<f64, ItmError> {
    precision.validate()?;
    if !(frequency_mhz > 0.0) {
        return Err(ItmError::InvalidParameter {
            name: "frequency_mhz",
            value: frequency_mhz,
        });
    }
    if !(distance_km > 0.0) {
        return Err(ItmError::InvalidParameter {
            name: "distance_km",
            value: distance_km,
        });
    }
    fn eval<E: Env>(env: E, f: f64, d: f64) -> f64 {
        use crate::mpnum::Real;
        let fs = env.lit(32.45)
            + env.lit(20.0) * env.from_f64(f).log10()
            + env.lit(20.0) * env.from_f64(d).log10();
        fs.to_f64()
    }
    Ok(match precision {
        Precision::Native => eval(NativeEnv, frequency_mhz, distance_km),
        Precision::Bits(p) => eval(MpEnv::new(p), frequency_mhz, distance_km),
    })
}
