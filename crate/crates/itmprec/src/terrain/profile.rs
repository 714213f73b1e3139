//! Great-circle elevation profiles.

use super::{ElevationGrid, GeoPoint, TerrainError, EARTH_RADIUS_M};
use crate::itm::TerrainProfile;

/// Haversine distance on the spherical earth, in metres.
///
/// Written so that swapping the endpoints produces the bit-identical
/// result (all asymmetric terms pass through `abs`), which in turn makes
/// profile extraction exactly reversible.
pub fn great_circle_distance_m(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = (phi2 - phi1).abs();
    let dlam = (b.lon.to_radians() - a.lon.to_radians()).abs();
    let sp = (dphi / 2.0).sin();
    let sl = (dlam / 2.0).sin();
    let h = sp * sp + phi1.cos() * phi2.cos() * (sl * sl);
    EARTH_RADIUS_M * 2.0 * h.sqrt().atan2((1.0 - h).sqrt())
}

/// Default sample spacing: never finer than the raster resolution at the
/// path latitude, and never more than 2000 intervals along the path.
pub fn default_profile_spacing(grid: &ElevationGrid, a: &GeoPoint, b: &GeoPoint) -> f64 {
    let dist = great_circle_distance_m(a, b);
    let mid_lat = 0.5 * (a.lat + b.lat);
    let res_m = grid.cell_size().to_radians() * EARTH_RADIUS_M * mid_lat.to_radians().cos().abs();
    res_m.max(dist / 2000.0)
}

/// Extract equally spaced elevations along the great circle from `a` to
/// `b`. Points are placed at uniform arc-length steps; the recorded
/// spacing is `distance / intervals` so the profile length times spacing
/// reproduces the great-circle distance exactly.
pub fn extract_profile(
    grid: &ElevationGrid,
    a: &GeoPoint,
    b: &GeoPoint,
    spacing_m: f64,
) -> Result<TerrainProfile, TerrainError> {
    if !(spacing_m > 0.0) {
        return Err(TerrainError::InvalidInput(format!(
            "profile spacing {spacing_m} must be positive"
        )));
    }
    let dist = great_circle_distance_m(a, b);
    if !(dist > 0.0) {
        return Err(TerrainError::InvalidInput(
            "profile endpoints coincide".into(),
        ));
    }
    let n = ((dist / spacing_m - 1e-9).ceil().max(1.0)) as usize;

    let (ax, ay, az) = unit_vector(a.lat, a.lon);
    let (bx, by, bz) = unit_vector(b.lat, b.lon);
    let omega = dist / EARTH_RADIUS_M;
    let sin_omega = omega.sin();
    if sin_omega == 0.0 {
        return Err(TerrainError::InvalidInput(
            "profile endpoints coincide or are antipodal".into(),
        ));
    }

    let mut elevations = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (lat, lon) = if i == 0 {
            (a.lat, a.lon)
        } else if i == n {
            (b.lat, b.lon)
        } else {
            // Integer-indexed weights keep i <-> n-i exactly symmetric.
            let wa = (omega * (n - i) as f64 / n as f64).sin() / sin_omega;
            let wb = (omega * i as f64 / n as f64).sin() / sin_omega;
            let x = wa * ax + wb * bx;
            let y = wa * ay + wb * by;
            let z = wa * az + wb * bz;
            (z.atan2(x.hypot(y)).to_degrees(), y.atan2(x).to_degrees())
        };
        elevations.push(grid.elevation_at(lat, lon)?);
    }

    TerrainProfile::new(dist / n as f64, elevations)
        .map_err(|e| TerrainError::InvalidInput(e.to_string()))
}

fn unit_vector(lat_deg: f64, lon_deg: f64) -> (f64, f64, f64) {
    let phi = lat_deg.to_radians();
    let lam = lon_deg.to_radians();
    (phi.cos() * lam.cos(), phi.cos() * lam.sin(), phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::synth::{synth_grid, SynthKind, SynthSpec};
    use crate::terrain::BoundingBox;

    fn test_bbox() -> BoundingBox {
        BoundingBox {
            lat_min: 39.9,
            lat_max: 40.1,
            lon_min: -105.4,
            lon_max: -105.1,
        }
    }

    fn pt(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon, 10.0).unwrap()
    }

    #[test]
    fn flat_grid_gives_flat_profile() {
        let grid = synth_grid(&SynthSpec {
            kind: SynthKind::Flat { elevation_m: 1600.0 },
            bbox: test_bbox(),
            cell_size_deg: 0.01,
            seed: 0,
        })
        .unwrap();
        let p = extract_profile(&grid, &pt(39.95, -105.3), &pt(40.05, -105.2), 200.0).unwrap();
        assert!(p.elevations().iter().all(|e| *e == 1600.0));
        assert!(p.elevations().len() >= 2);
    }

    #[test]
    fn point_count_and_spacing_partition_the_distance() {
        let grid = synth_grid(&SynthSpec {
            kind: SynthKind::Flat { elevation_m: 0.0 },
            bbox: test_bbox(),
            cell_size_deg: 0.01,
            seed: 0,
        })
        .unwrap();
        let a = pt(40.0, -105.3);
        let b = pt(40.0, -105.2);
        let dist = great_circle_distance_m(&a, &b);
        let spacing = dist / 10.0;
        let p = extract_profile(&grid, &a, &b, spacing).unwrap();
        assert_eq!(p.elevations().len(), 11);
        assert!((p.spacing_m() - dist / 10.0).abs() / dist < 1e-12);
        // Profile distance reproduces the great-circle distance.
        let total = p.spacing_m() * (p.elevations().len() - 1) as f64;
        assert!((total - dist).abs() / dist < 1e-6);
    }

    #[test]
    fn reversal_produces_reversed_elevations() {
        let grid = synth_grid(&SynthSpec {
            kind: SynthKind::RandomHills {
                min_m: 1500.0,
                max_m: 2500.0,
            },
            bbox: test_bbox(),
            cell_size_deg: 0.002,
            seed: 99,
        })
        .unwrap();
        let a = pt(39.96, -105.35);
        let b = pt(40.07, -105.15);
        let fwd = extract_profile(&grid, &a, &b, 150.0).unwrap();
        let rev = extract_profile(&grid, &b, &a, 150.0).unwrap();
        let mut r = rev.elevations().to_vec();
        r.reverse();
        assert_eq!(fwd.elevations(), &r[..]);
        assert_eq!(fwd.spacing_m(), rev.spacing_m());
    }

    #[test]
    fn linear_ramp_profile_is_linear() {
        let grid = synth_grid(&SynthSpec {
            kind: SynthKind::Ramp {
                base_m: 1000.0,
                per_degree_lat: 500.0,
            },
            bbox: test_bbox(),
            cell_size_deg: 0.001,
            seed: 0,
        })
        .unwrap();
        // North-south path: elevation should be linear in arc length.
        let a = pt(39.95, -105.25);
        let b = pt(40.05, -105.25);
        let p = extract_profile(&grid, &a, &b, 100.0).unwrap();
        let e = p.elevations();
        let n = e.len() - 1;
        let max_dev = (0..=n)
            .map(|i| {
                let ideal = e[0] + (e[n] - e[0]) * i as f64 / n as f64;
                (e[i] - ideal).abs()
            })
            .fold(0.0, f64::max);
        assert!(max_dev < 0.01, "max deviation {max_dev}");
    }

    #[test]
    fn path_leaving_grid_is_a_bounds_error() {
        let grid = synth_grid(&SynthSpec {
            kind: SynthKind::Flat { elevation_m: 0.0 },
            bbox: test_bbox(),
            cell_size_deg: 0.01,
            seed: 0,
        })
        .unwrap();
        let inside = pt(40.0, -105.3);
        let outside = pt(40.5, -105.2);
        assert!(matches!(
            extract_profile(&grid, &inside, &outside, 100.0),
            Err(TerrainError::OutOfBounds { .. })
        ));
    }
}
