//! Synthetic terrain for tests and desk-scale experiments.

use super::{BoundingBox, ElevationGrid, TerrainError};
use crate::rng::SplitMix64;

/// What shape to generate.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthKind {
    Flat {
        elevation_m: f64,
    },
    /// Elevation increases linearly with latitude from the southern edge.
    Ramp {
        base_m: f64,
        per_degree_lat: f64,
    },
    /// A single one-sample-wide ridge across the middle row.
    KnifeEdge {
        base_m: f64,
        ridge_m: f64,
    },
    /// Smooth value-noise hills rescaled into `[min_m, max_m]`.
    RandomHills {
        min_m: f64,
        max_m: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SynthSpec {
    #[serde(flatten)]
    pub kind: SynthKind,
    pub bbox: BoundingBox,
    pub cell_size_deg: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Generate a grid covering `bbox` (edges included). Deterministic for a
/// given spec.
pub fn synth_grid(spec: &SynthSpec) -> Result<ElevationGrid, TerrainError> {
    spec.bbox.validate()?;
    let cell = spec.cell_size_deg;
    if !(cell > 0.0) {
        return Err(TerrainError::InvalidInput(format!(
            "cell size {cell} must be positive"
        )));
    }
    let b = &spec.bbox;
    let rows = ((b.lat_max - b.lat_min) / cell).ceil() as usize + 1;
    let cols = ((b.lon_max - b.lon_min) / cell).ceil() as usize + 1;
    let rows = rows.max(2);
    let cols = cols.max(2);
    let origin_lat = b.lat_min + (rows - 1) as f64 * cell;
    let origin_lon = b.lon_min;

    let mut samples = vec![0.0f64; rows * cols];
    match spec.kind {
        SynthKind::Flat { elevation_m } => {
            if !elevation_m.is_finite() {
                return Err(TerrainError::InvalidInput("non-finite elevation".into()));
            }
            samples.fill(elevation_m);
        }
        SynthKind::Ramp {
            base_m,
            per_degree_lat,
        } => {
            for r in 0..rows {
                let lat = origin_lat - r as f64 * cell;
                let v = base_m + per_degree_lat * (lat - b.lat_min);
                for c in 0..cols {
                    samples[r * cols + c] = v;
                }
            }
        }
        SynthKind::KnifeEdge { base_m, ridge_m } => {
            samples.fill(base_m);
            let ridge_row = rows / 2;
            for c in 0..cols {
                samples[ridge_row * cols + c] = ridge_m;
            }
        }
        SynthKind::RandomHills { min_m, max_m } => {
            if !(min_m < max_m) {
                return Err(TerrainError::InvalidInput(format!(
                    "hill range [{min_m}, {max_m}] is empty"
                )));
            }
            fill_value_noise(&mut samples, rows, cols, spec.seed);
            let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            for v in &mut samples {
                *v = if span > 0.0 {
                    (min_m + (*v - lo) / span * (max_m - min_m)).clamp(min_m, max_m)
                } else {
                    0.5 * (min_m + max_m)
                };
            }
        }
    }

    ElevationGrid::new(origin_lat, origin_lon, cell, rows, cols, samples, -32768.0)
}

/// Two octaves of smoothstep-interpolated value noise. Lattice values come
/// from one splitmix64 step keyed on (seed, octave, i, j), so any sample
/// can be generated independently of evaluation order.
fn fill_value_noise(samples: &mut [f64], rows: usize, cols: usize, seed: u64) {
    const OCTAVES: [(u64, f64, f64); 2] = [(1, 1.0, 6.0), (2, 0.35, 23.0)];
    for r in 0..rows {
        for c in 0..cols {
            let u = c as f64 / (cols - 1) as f64;
            let v = r as f64 / (rows - 1) as f64;
            let mut acc = 0.0;
            for (oct, amp, freq) in OCTAVES {
                acc += amp * lattice_interp(seed, oct, u * freq, v * freq);
            }
            samples[r * cols + c] = acc;
        }
    }
}

fn lattice_interp(seed: u64, octave: u64, x: f64, y: f64) -> f64 {
    let xi = x.floor() as i64;
    let yi = y.floor() as i64;
    let fx = smooth(x - xi as f64);
    let fy = smooth(y - yi as f64);
    let v00 = lattice_value(seed, octave, xi, yi);
    let v10 = lattice_value(seed, octave, xi + 1, yi);
    let v01 = lattice_value(seed, octave, xi, yi + 1);
    let v11 = lattice_value(seed, octave, xi + 1, yi + 1);
    let top = v00 + (v10 - v00) * fx;
    let bot = v01 + (v11 - v01) * fx;
    top + (bot - top) * fy
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

fn lattice_value(seed: u64, octave: u64, i: i64, j: i64) -> f64 {
    let key = seed
        ^ octave.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (i as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
        ^ (j as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
    SplitMix64::new(key).next_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbox() -> BoundingBox {
        BoundingBox {
            lat_min: 39.95324,
            lat_max: 40.07186,
            lon_min: -105.31843,
            lon_max: -105.18602,
        }
    }

    #[test]
    fn flat_is_constant() {
        let g = synth_grid(&SynthSpec {
            kind: SynthKind::Flat { elevation_m: 1600.0 },
            bbox: bbox(),
            cell_size_deg: 0.01,
            seed: 0,
        })
        .unwrap();
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                assert_eq!(g.sample(r, c), 1600.0);
            }
        }
    }

    #[test]
    fn knife_edge_peaks_on_midline() {
        let g = synth_grid(&SynthSpec {
            kind: SynthKind::KnifeEdge {
                base_m: 1600.0,
                ridge_m: 1800.0,
            },
            bbox: bbox(),
            cell_size_deg: 0.005,
            seed: 0,
        })
        .unwrap();
        let mut max = f64::NEG_INFINITY;
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                max = max.max(g.sample(r, c));
            }
        }
        assert_eq!(max, 1800.0);
        let mid = g.rows() / 2;
        assert!((0..g.cols()).all(|c| g.sample(mid, c) == 1800.0));
        assert!((0..g.cols()).all(|c| g.sample(mid + 1, c) == 1600.0));
    }

    #[test]
    fn random_hills_bounded_and_deterministic() {
        let spec = SynthSpec {
            kind: SynthKind::RandomHills {
                min_m: 1562.15,
                max_m: 2550.28,
            },
            bbox: bbox(),
            cell_size_deg: 0.002,
            seed: 42,
        };
        let a = synth_grid(&spec).unwrap();
        let b = synth_grid(&spec).unwrap();
        assert_eq!(a, b);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                lo = lo.min(a.sample(r, c));
                hi = hi.max(a.sample(r, c));
            }
        }
        assert!(lo >= 1562.15 && hi <= 2550.28);
        // The rescale pins the extremes to the requested range.
        assert!(lo < 1563.0 && hi > 2549.0);
        // Different seeds give different terrain.
        let c = synth_grid(&SynthSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, c);
    }
}
