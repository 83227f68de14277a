//! Exact polygon/rectangle intersection areas via Sutherland–Hodgman
//! clipping. Deterministic, no sampling, so zonal results are reproducible
//! bit for bit across runs.

use crate::error::{Error, Result};
use crate::geodata::polygon::ZipPolygon;

#[derive(Clone, Copy)]
enum HalfPlane {
    XMin(f64),
    XMax(f64),
    YMin(f64),
    YMax(f64),
}

impl HalfPlane {
    #[inline]
    fn inside(&self, (x, y): (f64, f64)) -> bool {
        match *self {
            HalfPlane::XMin(v) => x >= v,
            HalfPlane::XMax(v) => x <= v,
            HalfPlane::YMin(v) => y >= v,
            HalfPlane::YMax(v) => y <= v,
        }
    }

    #[inline]
    fn intersect(&self, (x0, y0): (f64, f64), (x1, y1): (f64, f64)) -> (f64, f64) {
        match *self {
            HalfPlane::XMin(v) | HalfPlane::XMax(v) => {
                let t = (v - x0) / (x1 - x0);
                (v, y0 + t * (y1 - y0))
            }
            HalfPlane::YMin(v) | HalfPlane::YMax(v) => {
                let t = (v - y0) / (y1 - y0);
                (x0 + t * (x1 - x0), v)
            }
        }
    }
}

fn clip_ring(ring: &[(f64, f64)], plane: HalfPlane) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(ring.len() + 4);
    let n = ring.len();
    for i in 0..n {
        let cur = ring[i];
        let prev = ring[(i + n - 1) % n];
        let cur_in = plane.inside(cur);
        let prev_in = plane.inside(prev);
        if cur_in {
            if !prev_in {
                out.push(plane.intersect(prev, cur));
            }
            out.push(cur);
        } else if prev_in {
            out.push(plane.intersect(prev, cur));
        }
    }
    out
}

fn signed_area(ring: &[(f64, f64)]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = ring[i];
        let (x1, y1) = ring[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc / 2.0
}

/// Area of `ring ∩ [x0,x1]×[y0,y1]` in the ring's squared units.
fn ring_rect_area(ring: &[(f64, f64)], rect: (f64, f64, f64, f64)) -> f64 {
    let (x0, y0, x1, y1) = rect;
    let mut poly = ring.to_vec();
    for plane in [
        HalfPlane::XMin(x0),
        HalfPlane::XMax(x1),
        HalfPlane::YMin(y0),
        HalfPlane::YMax(y1),
    ] {
        if poly.len() < 3 {
            return 0.0;
        }
        poly = clip_ring(&poly, plane);
    }
    signed_area(&poly).abs()
}

/// Area of the polygon intersected with an axis-aligned rectangle, in the
/// polygon's squared units (holes subtracted).
pub fn rect_polygon_area(polygon: &ZipPolygon, rect: (f64, f64, f64, f64)) -> f64 {
    let mut area = 0.0;
    for part in &polygon.parts {
        area += ring_rect_area(&part.outer, rect);
        for hole in &part.holes {
            area -= ring_rect_area(hole, rect);
        }
    }
    area.max(0.0)
}

/// Fraction of an axis-aligned square cell covered by the polygon.
///
/// Exact area-of-intersection divided by the cell area: 1 for a cell fully
/// inside, 0 for a disjoint cell.
pub fn coverage_fraction(cell: (f64, f64, f64, f64), polygon: &ZipPolygon) -> Result<f64> {
    if !(polygon.total_area_km2 > 0.0) {
        return Err(Error::Validation(format!(
            "ZIP {}: degenerate polygon with zero area",
            polygon.zip_id
        )));
    }
    let (x0, y0, x1, y1) = cell;
    let cell_area = (x1 - x0) * (y1 - y0);
    if !(cell_area > 0.0) {
        return Err(Error::Validation("degenerate cell rectangle".into()));
    }
    Ok((rect_polygon_area(polygon, cell) / cell_area).clamp(0.0, 1.0))
}
