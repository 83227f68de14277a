use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Five-character ZIP Code identifier. Leading zeros are significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZipId(String);

impl ZipId {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.len() != 5 || !s.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(Error::Validation(format!("bad ZIP id {s:?}")));
        }
        Ok(ZipId(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ZipId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Four-digit flood event identifier from the event catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u16);

impl EventId {
    pub fn new(id: u16) -> Result<Self> {
        if !(1000..=9999).contains(&id) {
            return Err(Error::Validation(format!("event id {id} is not 4 digits")));
        }
        Ok(EventId(id))
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.0)
    }
}

impl std::str::FromStr for EventId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id: u16 = s
            .parse()
            .map_err(|_| Error::Validation(format!("bad event id {s:?}")))?;
        EventId::new(id)
    }
}

/// Placement of a regular grid in projected coordinates.
///
/// `origin_x`/`origin_y` are the lower-left corner in meters; row 0 is the
/// bottom row. Cell (row, col) covers
/// `[origin_x + col*s, origin_x + (col+1)*s] x [origin_y + row*s, origin_y + (row+1)*s]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub origin_x: f64,
    pub origin_y: f64,
    pub pixel_size: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub projection: String,
}

impl GridGeometry {
    pub fn new(
        origin_x: f64,
        origin_y: f64,
        pixel_size: f64,
        n_rows: usize,
        n_cols: usize,
        projection: impl Into<String>,
    ) -> Result<Self> {
        if !(pixel_size > 0.0) || n_rows == 0 || n_cols == 0 {
            return Err(Error::Validation(
                "grid needs positive pixel size and non-empty dimensions".into(),
            ));
        }
        Ok(GridGeometry {
            origin_x,
            origin_y,
            pixel_size,
            n_rows,
            n_cols,
            projection: projection.into(),
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_rows * self.n_cols
    }

    /// Rectangle of cell (row, col) as (x0, y0, x1, y1).
    pub fn cell_rect(&self, row: usize, col: usize) -> (f64, f64, f64, f64) {
        let x0 = self.origin_x + col as f64 * self.pixel_size;
        let y0 = self.origin_y + row as f64 * self.pixel_size;
        (x0, y0, x0 + self.pixel_size, y0 + self.pixel_size)
    }

    /// Full extent as (x0, y0, x1, y1).
    pub fn extent(&self) -> (f64, f64, f64, f64) {
        (
            self.origin_x,
            self.origin_y,
            self.origin_x + self.n_cols as f64 * self.pixel_size,
            self.origin_y + self.n_rows as f64 * self.pixel_size,
        )
    }

    /// Cell area in square kilometers.
    pub fn cell_area_km2(&self) -> f64 {
        (self.pixel_size / 1000.0) * (self.pixel_size / 1000.0)
    }

    /// Row/col ranges of cells whose rectangles intersect the given
    /// bounding box, or `None` when the box misses the extent entirely.
    pub fn cells_in_bbox(
        &self,
        (bx0, by0, bx1, by1): (f64, f64, f64, f64),
    ) -> Option<(std::ops::Range<usize>, std::ops::Range<usize>)> {
        let (ex0, ey0, ex1, ey1) = self.extent();
        if bx1 <= ex0 || bx0 >= ex1 || by1 <= ey0 || by0 >= ey1 {
            return None;
        }
        let s = self.pixel_size;
        let c0 = (((bx0 - ex0) / s).floor().max(0.0)) as usize;
        let c1 = ((((bx1 - ex0) / s).ceil()) as usize).min(self.n_cols);
        let r0 = (((by0 - ey0) / s).floor().max(0.0)) as usize;
        let r1 = ((((by1 - ey0) / s).ceil()) as usize).min(self.n_rows);
        Some((r0..r1, c0..c1))
    }

    pub fn check_projection(&self, other: &str) -> Result<()> {
        if self.projection != other {
            return Err(Error::Validation(format!(
                "projection mismatch: grid is {:?}, polygon is {other:?}",
                self.projection
            )));
        }
        Ok(())
    }
}

/// Gridded flood map for one event: a binary flood indicator, per-pixel
/// flood duration in days, and a permanent-surface-water indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct FloodRaster {
    pub geom: GridGeometry,
    pub event_id: EventId,
    pub band_flooded: Vec<u8>,
    pub band_duration: Vec<u16>,
    pub band_perm_water: Vec<u8>,
}

impl FloodRaster {
    pub fn new(
        geom: GridGeometry,
        event_id: EventId,
        band_flooded: Vec<u8>,
        band_duration: Vec<u16>,
        band_perm_water: Vec<u8>,
    ) -> Result<Self> {
        let n = geom.n_cells();
        if band_flooded.len() != n || band_duration.len() != n || band_perm_water.len() != n {
            return Err(Error::Structural(format!(
                "band lengths {}/{}/{} do not match grid size {n}",
                band_flooded.len(),
                band_duration.len(),
                band_perm_water.len()
            )));
        }
        if band_flooded.iter().any(|&v| v > 1) || band_perm_water.iter().any(|&v| v > 1) {
            return Err(Error::Validation("binary bands must be 0/1".into()));
        }
        for (i, (&f, &d)) in band_flooded.iter().zip(&band_duration).enumerate() {
            if f == 0 && d != 0 {
                return Err(Error::Validation(format!(
                    "pixel {i} has duration {d} but is not flooded"
                )));
            }
        }
        Ok(FloodRaster {
            geom,
            event_id,
            band_flooded,
            band_duration,
            band_perm_water,
        })
    }

    #[inline]
    pub fn idx(&self, row: usize, col: usize) -> usize {
        row * self.geom.n_cols + col
    }
}

/// Clears the flood indicator (and zeroes duration) wherever the
/// permanent-water band is set. Idempotent.
pub fn mask_permanent_water(raster: &FloodRaster) -> FloodRaster {
    let mut out = raster.clone();
    for i in 0..out.band_flooded.len() {
        if out.band_perm_water[i] == 1 {
            out.band_flooded[i] = 0;
            out.band_duration[i] = 0;
        }
    }
    out
}
