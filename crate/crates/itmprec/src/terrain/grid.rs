//! Elevation rasters: the in-memory grid, ESRI ASCII and SRTM readers,
//! and bilinear point lookup.

use std::fs;
use std::path::Path;

use super::TerrainError;

/// A north-up raster of elevations in metres.
///
/// `origin` is the position of the *north-west sample*; sample `(r, c)`
/// sits at `lat = origin_lat - r * cell_size`,
/// `lon = origin_lon + c * cell_size`. Samples are row-major from the
/// northern edge. Grids are immutable once built and all queries are pure.
#[derive(Clone, Debug, PartialEq)]
pub struct ElevationGrid {
    origin_lat: f64,
    origin_lon: f64,
    cell_size: f64,
    rows: usize,
    cols: usize,
    samples: Vec<f64>,
    nodata: f64,
}

impl ElevationGrid {
    pub fn new(
        origin_lat: f64,
        origin_lon: f64,
        cell_size: f64,
        rows: usize,
        cols: usize,
        samples: Vec<f64>,
        nodata: f64,
    ) -> Result<Self, TerrainError> {
        if cell_size <= 0.0 {
            return Err(TerrainError::InvalidInput(format!(
                "cell size {cell_size} must be positive"
            )));
        }
        if rows < 2 || cols < 2 {
            return Err(TerrainError::InvalidInput(
                "grid needs at least 2 rows and 2 columns".into(),
            ));
        }
        if samples.len() != rows * cols {
            return Err(TerrainError::InvalidInput(format!(
                "expected {} samples, got {}",
                rows * cols,
                samples.len()
            )));
        }
        if samples.iter().any(|v| *v != nodata && !v.is_finite()) {
            return Err(TerrainError::InvalidInput(
                "non-finite elevation sample".into(),
            ));
        }
        Ok(Self {
            origin_lat,
            origin_lon,
            cell_size,
            rows,
            cols,
            samples,
            nodata,
        })
    }

    pub fn origin(&self) -> (f64, f64) {
        (self.origin_lat, self.origin_lon)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nodata(&self) -> f64 {
        self.nodata
    }

    pub fn sample(&self, row: usize, col: usize) -> f64 {
        self.samples[row * self.cols + col]
    }

    /// Latitude span covered by the samples, southern edge first.
    pub fn lat_range(&self) -> (f64, f64) {
        (
            self.origin_lat - (self.rows - 1) as f64 * self.cell_size,
            self.origin_lat,
        )
    }

    pub fn lon_range(&self) -> (f64, f64) {
        (
            self.origin_lon,
            self.origin_lon + (self.cols - 1) as f64 * self.cell_size,
        )
    }

    /// Bilinear interpolation of the four surrounding samples; exactly the
    /// sample value when the query point lies on a grid node.
    pub fn elevation_at(&self, lat: f64, lon: f64) -> Result<f64, TerrainError> {
        let x = (lon - self.origin_lon) / self.cell_size;
        let y = (self.origin_lat - lat) / self.cell_size;
        if !(x >= 0.0) || !(y >= 0.0) || x > (self.cols - 1) as f64 || y > (self.rows - 1) as f64 {
            return Err(TerrainError::OutOfBounds { lat, lon });
        }
        let c0 = (x.floor() as usize).min(self.cols - 2);
        let r0 = (y.floor() as usize).min(self.rows - 2);
        let fx = x - c0 as f64;
        let fy = y - r0 as f64;

        let corners = [
            (r0, c0, (1.0 - fx) * (1.0 - fy)),
            (r0, c0 + 1, fx * (1.0 - fy)),
            (r0 + 1, c0, (1.0 - fx) * fy),
            (r0 + 1, c0 + 1, fx * fy),
        ];
        let mut v = 0.0;
        for (r, c, w) in corners {
            if w == 0.0 {
                continue;
            }
            let s = self.sample(r, c);
            if s == self.nodata {
                return Err(TerrainError::Nodata { lat, lon });
            }
            v += s * w;
        }
        Ok(v)
    }
}

/// Load a raster, dispatching on the file name: `*.hgt` (or an
/// `N40W106`-style stem) is treated as an SRTM tile, anything else as an
/// ESRI ASCII grid.
pub fn load_grid(path: &Path) -> Result<ElevationGrid, TerrainError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    let is_hgt = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.eq_ignore_ascii_case("hgt"))
        .unwrap_or(false);
    if is_hgt || parse_tile_name(stem).is_some() {
        load_srtm(path)
    } else {
        load_esri_ascii(path)
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, TerrainError> {
    fs::read(path).map_err(|source| TerrainError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn format_err(path: &Path, detail: impl Into<String>) -> TerrainError {
    TerrainError::Format {
        path: path.display().to_string(),
        detail: detail.into(),
    }
}

/// ESRI ASCII grid: `ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value`
/// header followed by row-major samples, northern row first.
pub fn load_esri_ascii(path: &Path) -> Result<ElevationGrid, TerrainError> {
    let bytes = read_file(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| format_err(path, format!("not valid UTF-8 text: {e}")))?;

    let mut tokens = text.split_whitespace();
    let mut header: Vec<(String, String)> = Vec::new();
    let mut first_value: Option<String> = None;
    // Header entries are keyword/value pairs; data starts at the first
    // token that is not a known keyword.
    while let Some(tok) = tokens.next() {
        let key = tok.to_ascii_lowercase();
        match key.as_str() {
            "ncols" | "nrows" | "xllcorner" | "yllcorner" | "xllcenter" | "yllcenter"
            | "cellsize" | "nodata_value" => {
                let val = tokens
                    .next()
                    .ok_or_else(|| format_err(path, format!("missing value after {tok:?}")))?;
                header.push((key, val.to_string()));
            }
            _ => {
                first_value = Some(tok.to_string());
                break;
            }
        }
    }

    let get = |k: &str| header.iter().find(|(key, _)| key == k).map(|(_, v)| v);
    let parse_usize = |k: &str| -> Result<usize, TerrainError> {
        let v = get(k).ok_or_else(|| format_err(path, format!("missing header field {k}")))?;
        v.parse()
            .map_err(|_| format_err(path, format!("bad {k} value {v:?}")))
    };
    let parse_f64 = |k: &str| -> Result<f64, TerrainError> {
        let v = get(k).ok_or_else(|| format_err(path, format!("missing header field {k}")))?;
        v.parse()
            .map_err(|_| format_err(path, format!("bad {k} value {v:?}")))
    };

    let cols = parse_usize("ncols")?;
    let rows = parse_usize("nrows")?;
    let cell = parse_f64("cellsize")?;
    if cell <= 0.0 {
        return Err(format_err(path, format!("cellsize {cell} must be positive")));
    }
    let nodata = match get("nodata_value") {
        Some(v) => v
            .parse()
            .map_err(|_| format_err(path, format!("bad NODATA_value {v:?}")))?,
        None => -9999.0,
    };

    // Position of the north-west sample. Corner-registered grids put the
    // lower-left *cell corner* at (xllcorner, yllcorner), so cell centres
    // are offset half a cell inward; centre-registered grids name the
    // lower-left sample directly.
    let (west_lon, south_lat) = match (get("xllcorner"), get("yllcorner")) {
        (Some(_), Some(_)) => (parse_f64("xllcorner")? + cell / 2.0, parse_f64("yllcorner")? + cell / 2.0),
        _ => (parse_f64("xllcenter")?, parse_f64("yllcenter")?),
    };
    let origin_lat = south_lat + (rows - 1) as f64 * cell;
    let origin_lon = west_lon;

    let expected = rows
        .checked_mul(cols)
        .ok_or_else(|| format_err(path, "grid dimensions overflow"))?;
    let mut samples = Vec::with_capacity(expected);
    let mut push = |tok: &str, idx: usize| -> Result<(), TerrainError> {
        let v: f64 = tok
            .parse()
            .map_err(|_| format_err(path, format!("bad sample token {tok:?} at index {idx}")))?;
        samples.push(v);
        Ok(())
    };
    if let Some(tok) = first_value {
        push(&tok, 0)?;
    }
    for tok in tokens {
        if samples.len() == expected {
            return Err(format_err(
                path,
                format!("trailing token {tok:?} after {expected} samples"),
            ));
        }
        push(tok, samples.len())?;
    }
    if samples.len() != expected {
        return Err(format_err(
            path,
            format!("expected {} samples, file ends after {}", expected, samples.len()),
        ));
    }

    ElevationGrid::new(origin_lat, origin_lon, cell, rows, cols, samples, nodata)
}

/// SRTM-style raw tile: a square grid of big-endian 16-bit signed
/// integers, size inferred from the file length, georeference from an
/// `N40W106`-style file name (south-west corner), spanning one degree.
pub fn load_srtm(path: &Path) -> Result<ElevationGrid, TerrainError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    let (sw_lat, sw_lon) = parse_tile_name(stem)
        .ok_or_else(|| format_err(path, format!("file name {stem:?} is not like N40W106")))?;

    let bytes = read_file(path)?;
    if bytes.len() % 2 != 0 {
        return Err(format_err(
            path,
            format!("odd byte count {} for 16-bit samples", bytes.len()),
        ));
    }
    let n_samples = bytes.len() / 2;
    let side = (n_samples as f64).sqrt().round() as usize;
    if side < 2 || side * side != n_samples {
        return Err(format_err(
            path,
            format!("{n_samples} samples do not form a square grid"),
        ));
    }

    const SRTM_VOID: f64 = -32768.0;
    let samples: Vec<f64> = bytes
        .chunks_exact(2)
        .map(|b| i16::from_be_bytes([b[0], b[1]]) as f64)
        .collect();

    let cell = 1.0 / (side - 1) as f64;
    ElevationGrid::new(
        sw_lat as f64 + 1.0,
        sw_lon as f64,
        cell,
        side,
        side,
        samples,
        SRTM_VOID,
    )
}

/// Parse `N40W106` / `s01e072` into the south-west corner (lat, lon).
fn parse_tile_name(stem: &str) -> Option<(i32, i32)> {
    let s = stem.as_bytes();
    if s.len() != 7 {
        return None;
    }
    let lat_sign = match s[0].to_ascii_uppercase() {
        b'N' => 1,
        b'S' => -1,
        _ => return None,
    };
    let lon_sign = match s[3].to_ascii_uppercase() {
        b'E' => 1,
        b'W' => -1,
        _ => return None,
    };
    let lat: i32 = stem[1..3].parse().ok()?;
    let lon: i32 = stem[4..7].parse().ok()?;
    if lat > 90 || lon > 180 {
        return None;
    }
    Some((lat_sign * lat, lon_sign * lon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(name: &str, contents: &[u8]) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("itmprec-grid-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents).unwrap();
        path
    }

    #[test]
    fn esri_constant_grid() {
        let path = write_tmp(
            "const3.asc",
            b"ncols 3\nnrows 3\nxllcorner -105.0\nyllcorner 40.0\ncellsize 0.5\nNODATA_value -9999\n\
              100 100 100\n100 100 100\n100 100 100\n",
        );
        let g = load_grid(&path).unwrap();
        assert_eq!((g.rows(), g.cols()), (3, 3));
        assert!((0..3).all(|r| (0..3).all(|c| g.sample(r, c) == 100.0)));
        // Corner registration: NW sample is half a cell in from the corner.
        assert_eq!(g.origin(), (40.0 + 0.25 + 1.0, -105.0 + 0.25));
    }

    #[test]
    fn esri_truncated_is_rejected() {
        let path = write_tmp(
            "short.asc",
            b"ncols 3\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3 4 5\n",
        );
        match load_grid(&path) {
            Err(TerrainError::Format { detail, .. }) => {
                assert!(detail.contains("ends after 5"), "{detail}");
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn esri_bad_token_is_named() {
        let path = write_tmp(
            "garbled.asc",
            b"ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 oops\n",
        );
        match load_grid(&path) {
            Err(TerrainError::Format { detail, .. }) => {
                assert!(detail.contains("oops") && detail.contains("index 1"), "{detail}");
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn srtm_square_inference() {
        // A miniature 3x3 "tile": cell size is 1/2 degree.
        let mut bytes = Vec::new();
        for v in [10i16, 20, 30, 40, -32768, 60, 70, 80, 90] {
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        let path = write_tmp("N40W106.hgt", &bytes);
        let g = load_grid(&path).unwrap();
        assert_eq!((g.rows(), g.cols()), (3, 3));
        assert_eq!(g.cell_size(), 0.5);
        assert_eq!(g.origin(), (41.0, -106.0));
        assert_eq!(g.sample(0, 0), 10.0);
        assert_eq!(g.sample(1, 1), -32768.0);
    }

    #[test]
    fn srtm_non_square_rejected() {
        let path = write_tmp("N00E000.hgt", &[0u8; 10]);
        assert!(matches!(load_grid(&path), Err(TerrainError::Format { .. })));
    }

    fn simple_grid() -> ElevationGrid {
        // 2x2 grid: north row 0 0, south row 10 10.
        ElevationGrid::new(1.0, 0.0, 1.0, 2, 2, vec![0.0, 0.0, 10.0, 10.0], -9999.0).unwrap()
    }

    #[test]
    fn bilinear_node_and_midpoint() {
        let g = simple_grid();
        assert_eq!(g.elevation_at(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(g.elevation_at(0.0, 1.0).unwrap(), 10.0);
        assert_eq!(g.elevation_at(0.5, 0.5).unwrap(), 5.0);
    }

    #[test]
    fn out_of_bounds_and_nodata() {
        let g = simple_grid();
        assert!(matches!(
            g.elevation_at(1.5, 0.0),
            Err(TerrainError::OutOfBounds { .. })
        ));
        let holed =
            ElevationGrid::new(1.0, 0.0, 1.0, 2, 2, vec![0.0, -9999.0, 10.0, 10.0], -9999.0)
                .unwrap();
        assert!(matches!(
            holed.elevation_at(0.9, 0.9),
            Err(TerrainError::Nodata { .. })
        ));
        // On a node whose value is present, surrounding nodata is irrelevant.
        assert_eq!(holed.elevation_at(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn edge_continuity_between_cells() {
        let g = ElevationGrid::new(
            2.0,
            0.0,
            1.0,
            3,
            3,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
            -9999.0,
        )
        .unwrap();
        // Query a point on the shared edge between two cell columns from
        // both sides of the edge: values must agree with interpolation on
        // the edge itself.
        let on_edge = g.elevation_at(1.5, 1.0).unwrap();
        let left = g.elevation_at(1.5, 1.0 - 1e-12).unwrap();
        let right = g.elevation_at(1.5, 1.0 + 1e-12).unwrap();
        assert!((on_edge - left).abs() < 1e-9);
        assert!((on_edge - right).abs() < 1e-9);
    }
}
