use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodata::raster::ZipId;

/// One outer ring with zero or more hole rings. Coordinates are projected
/// meters; rings are closed implicitly (last vertex connects to first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonPart {
    pub outer: Vec<(f64, f64)>,
    pub holes: Vec<Vec<(f64, f64)>>,
}

/// ZIP Code polygon for one shapefile vintage year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipPolygon {
    pub zip_id: ZipId,
    pub vintage_year: i32,
    pub parts: Vec<PolygonPart>,
    /// Full polygon area in square kilometers (holes subtracted).
    pub total_area_km2: f64,
    pub projection: String,
}

fn ring_signed_area_m2(ring: &[(f64, f64)]) -> f64 {
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

impl ZipPolygon {
    pub fn new(
        zip_id: ZipId,
        vintage_year: i32,
        parts: Vec<PolygonPart>,
        projection: impl Into<String>,
    ) -> Result<Self> {
        let mut area_m2 = 0.0;
        for part in &parts {
            if part.outer.len() < 3 {
                return Err(Error::Validation(format!(
                    "ZIP {zip_id}: ring with fewer than 3 vertices"
                )));
            }
            area_m2 += ring_signed_area_m2(&part.outer).abs();
            for hole in &part.holes {
                area_m2 -= ring_signed_area_m2(hole).abs();
            }
        }
        if !(area_m2 > 0.0) {
            return Err(Error::Validation(format!(
                "ZIP {zip_id}: polygon has zero area"
            )));
        }
        Ok(ZipPolygon {
            zip_id,
            vintage_year,
            parts,
            total_area_km2: area_m2 / 1.0e6,
            projection: projection.into(),
        })
    }

    /// Axis-aligned bounding box (x0, y0, x1, y1) over all rings.
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut bx0 = f64::INFINITY;
        let mut by0 = f64::INFINITY;
        let mut bx1 = f64::NEG_INFINITY;
        let mut by1 = f64::NEG_INFINITY;
        for part in &self.parts {
            for &(x, y) in &part.outer {
                bx0 = bx0.min(x);
                by0 = by0.min(y);
                bx1 = bx1.max(x);
                by1 = by1.max(y);
            }
        }
        (bx0, by0, bx1, by1)
    }

    /// Even-odd point-in-polygon test over all parts and holes.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let mut inside = false;
        for part in &self.parts {
            if point_in_ring(x, y, &part.outer) {
                inside = !inside;
            }
            for hole in &part.holes {
                if point_in_ring(x, y, hole) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Rectangle polygon helper, mostly for synthetic worlds and tests.
    pub fn rect(
        zip_id: ZipId,
        vintage_year: i32,
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
        projection: impl Into<String>,
    ) -> Result<Self> {
        ZipPolygon::new(
            zip_id,
            vintage_year,
            vec![PolygonPart {
                outer: vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)],
                holes: vec![],
            }],
            projection,
        )
    }
}

fn point_in_ring(x: f64, y: f64, ring: &[(f64, f64)]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = ring[i];
        let (xj, yj) = ring[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Picks the shapefile vintage for an event year: the vintage equal to the
/// year when present, otherwise the closest preceding vintage. If only
/// later vintages exist, the earliest one is used and a warning is logged.
pub fn select_vintage<'a>(polygons: &'a [ZipPolygon], event_year: i32) -> Option<&'a ZipPolygon> {
    let best_preceding = polygons
        .iter()
        .filter(|p| p.vintage_year <= event_year)
        .max_by_key(|p| p.vintage_year);
    if let Some(p) = best_preceding {
        return Some(p);
    }
    let earliest = polygons.iter().min_by_key(|p| p.vintage_year);
    if let Some(p) = earliest {
        log::warn!(
            "ZIP {}: no vintage preceding {event_year}; falling back to {}",
            p.zip_id,
            p.vintage_year
        );
    }
    earliest
}

/// Reads the polygon table: a format line `zippoly v1 proj=<tag>`, a column
/// header, then one `zip_id<TAB>vintage_year<TAB>wkt` row per polygon.
pub fn read_polygon_table(path: impl AsRef<Path>) -> Result<Vec<ZipPolygon>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::parse(&name, 1, "empty file"))?;
    let first = first?;
    let proj = parse_polygon_header(&first).ok_or_else(|| {
        Error::parse(&name, 1, format!("expected `zippoly v1 proj=...`, got {first:?}"))
    })?;

    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if lineno == 2 && line.starts_with("zip_id") {
            continue; // column header
        }
        let mut fields = line.splitn(3, '\t');
        let (zip, vintage, wkt) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::parse(&name, lineno, "expected 3 tab-separated fields")),
        };
        let zip_id = ZipId::new(zip)
            .map_err(|e| Error::parse(&name, lineno, e.to_string()))?;
        let vintage_year: i32 = vintage
            .parse()
            .map_err(|_| Error::parse(&name, lineno, format!("bad vintage year {vintage:?}")))?;
        let parts = parse_wkt_polygon(wkt)
            .map_err(|msg| Error::parse(&name, lineno, msg))?;
        out.push(ZipPolygon::new(zip_id, vintage_year, parts, proj.clone())?);
    }
    Ok(out)
}

fn parse_polygon_header(line: &str) -> Option<String> {
    let mut it = line.split_whitespace();
    if it.next()? != "zippoly" || it.next()? != "v1" {
        return None;
    }
    it.next()?.strip_prefix("proj=").map(str::to_owned)
}

/// Minimal WKT parser for `POLYGON ((...))` and `MULTIPOLYGON (((...)))`.
/// Each inner ring list after the first is treated as a hole.
pub fn parse_wkt_polygon(wkt: &str) -> std::result::Result<Vec<PolygonPart>, String> {
    let s = wkt.trim();
    let (kind, rest) = if let Some(r) = s.strip_prefix("MULTIPOLYGON") {
        ("multi", r)
    } else if let Some(r) = s.strip_prefix("POLYGON") {
        ("single", r)
    } else {
        return Err(format!("unsupported WKT geometry: {s:.>20?}"));
    };
    let body = rest.trim();
    if !body.starts_with('(') || !body.ends_with(')') {
        return Err("unbalanced WKT parentheses".into());
    }
    let inner = &body[1..body.len() - 1];

    let polygons: Vec<&str> = if kind == "multi" {
        split_top_level(inner)?
    } else {
        vec![inner]
    };

    let mut parts = Vec::new();
    for poly in polygons {
        let poly = poly.trim();
        let poly = if kind == "multi" {
            let p = poly
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or("unbalanced polygon parentheses in MULTIPOLYGON")?;
            p
        } else {
            poly
        };
        let rings_src = split_top_level(poly)?;
        let mut rings = Vec::new();
        for ring_src in rings_src {
            let ring_src = ring_src.trim();
            let ring_src = ring_src
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or("ring must be parenthesized")?;
            let mut pts = Vec::new();
            for pair in ring_src.split(',') {
                let mut nums = pair.split_whitespace();
                let x: f64 = nums
                    .next()
                    .ok_or("missing x coordinate")?
                    .parse()
                    .map_err(|_| "bad x coordinate".to_string())?;
                let y: f64 = nums
                    .next()
                    .ok_or("missing y coordinate")?
                    .parse()
                    .map_err(|_| "bad y coordinate".to_string())?;
                pts.push((x, y));
            }
            // Drop an explicit closing vertex.
            if pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            rings.push(pts);
        }
        if rings.is_empty() {
            return Err("polygon with no rings".into());
        }
        let outer = rings.remove(0);
        parts.push(PolygonPart { outer, holes: rings });
    }
    Ok(parts)
}

/// Splits `a),(b),(c` style lists at top-level commas.
fn split_top_level(s: &str) -> std::result::Result<Vec<&str>, String> {
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or("unbalanced parentheses")?,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    out.push(&s[start..]);
    Ok(out)
}

/// Serializes one polygon part list back to WKT.
pub fn to_wkt(parts: &[PolygonPart]) -> String {
    let ring = |r: &[(f64, f64)]| {
        let mut pts: Vec<String> = r.iter().map(|(x, y)| format!("{x} {y}")).collect();
        if let Some(first) = r.first() {
            pts.push(format!("{} {}", first.0, first.1));
        }
        format!("({})", pts.join(", "))
    };
    let part = |p: &PolygonPart| {
        let mut rings = vec![ring(&p.outer)];
        rings.extend(p.holes.iter().map(|h| ring(h)));
        format!("({})", rings.join(", "))
    };
    if parts.len() == 1 {
        let p = &parts[0];
        let mut rings = vec![ring(&p.outer)];
        rings.extend(p.holes.iter().map(|h| ring(h)));
        format!("POLYGON ({})", rings.join(", "))
    } else {
        format!(
            "MULTIPOLYGON ({})",
            parts.iter().map(part).collect::<Vec<_>>().join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_area_is_width_times_height() {
        let p = ZipPolygon::rect(ZipId::new("00001").unwrap(), 2008, 0.0, 0.0, 2000.0, 1000.0, "ea_m")
            .unwrap();
        assert!((p.total_area_km2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wkt_round_trip() {
        let parts = vec![PolygonPart {
            outer: vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)],
            holes: vec![vec![(2.0, 2.0), (4.0, 2.0), (4.0, 4.0), (2.0, 4.0)]],
        }];
        let wkt = to_wkt(&parts);
        let back = parse_wkt_polygon(&wkt).unwrap();
        assert_eq!(parts, back);
    }

    #[test]
    fn multipolygon_parses() {
        let wkt = "MULTIPOLYGON (((0 0, 1 0, 1 1, 0 1, 0 0)), ((5 5, 6 5, 6 6, 5 6, 5 5)))";
        let parts = parse_wkt_polygon(wkt).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].outer.len(), 4);
    }

    #[test]
    fn zero_area_polygon_rejected() {
        let err = ZipPolygon::new(
            ZipId::new("00001").unwrap(),
            2008,
            vec![PolygonPart {
                outer: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)],
                holes: vec![],
            }],
            "ea_m",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn hole_subtracts_from_area() {
        let p = ZipPolygon::new(
            ZipId::new("00001").unwrap(),
            2008,
            vec![PolygonPart {
                outer: vec![(0.0, 0.0), (2000.0, 0.0), (2000.0, 2000.0), (0.0, 2000.0)],
                holes: vec![vec![
                    (500.0, 500.0),
                    (1500.0, 500.0),
                    (1500.0, 1500.0),
                    (500.0, 1500.0),
                ]],
            }],
            "ea_m",
        )
        .unwrap();
        assert!((p.total_area_km2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn vintage_selection_prefers_exact_then_preceding() {
        let zip = ZipId::new("00001").unwrap();
        let mk = |year| ZipPolygon::rect(zip.clone(), year, 0.0, 0.0, 1.0, 1.0, "ea_m").unwrap();
        let polys = vec![mk(2000), mk(2005), mk(2010)];
        assert_eq!(select_vintage(&polys, 2005).unwrap().vintage_year, 2005);
        assert_eq!(select_vintage(&polys, 2008).unwrap().vintage_year, 2005);
        assert_eq!(select_vintage(&polys, 1999).unwrap().vintage_year, 2000);
    }
}
