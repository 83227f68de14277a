//! Delimited-text grid format shared by flood rasters and meteorology.
//!
//! Layout: a single header line
//!
//! ```text
//! grid v1 kind=<flood|meteo> event=<id> origin=<x>,<y> pixel=<m> rows=<r> cols=<c> proj=<tag>
//! ```
//!
//! (the `event=` field is present only for flood rasters), followed by one
//! or more named band sections, each `band <name>` and `rows` lines of
//! `cols` space-separated values, row 0 first (bottom row).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geodata::raster::{EventId, FloodRaster, GridGeometry};

/// A parsed grid file: geometry plus named bands in file order.
#[derive(Debug, Clone)]
pub struct GridFile {
    pub kind: String,
    pub event_id: Option<EventId>,
    pub geom: GridGeometry,
    pub bands: BTreeMap<String, Vec<f64>>,
}

impl GridFile {
    pub fn band(&self, name: &str) -> Result<&Vec<f64>> {
        self.bands
            .get(name)
            .ok_or_else(|| Error::MissingData(format!("grid has no band {name:?}")))
    }

    /// Converts a flood-kind grid file into a validated raster.
    pub fn into_flood_raster(self) -> Result<FloodRaster> {
        if self.kind != "flood" {
            return Err(Error::Validation(format!(
                "expected flood grid, found kind {:?}",
                self.kind
            )));
        }
        let event_id = self
            .event_id
            .ok_or_else(|| Error::Validation("flood grid missing event id".into()))?;
        let to_u8 = |v: &[f64], name: &str| -> Result<Vec<u8>> {
            v.iter()
                .map(|&x| {
                    if x == 0.0 || x == 1.0 {
                        Ok(x as u8)
                    } else {
                        Err(Error::Validation(format!("band {name} must be binary")))
                    }
                })
                .collect()
        };
        let flooded = to_u8(self.band("flooded")?, "flooded")?;
        let perm = to_u8(self.band("perm_water")?, "perm_water")?;
        let duration: Vec<u16> = self
            .band("duration")?
            .iter()
            .map(|&x| {
                if x >= 0.0 && x.fract() == 0.0 && x <= u16::MAX as f64 {
                    Ok(x as u16)
                } else {
                    Err(Error::Validation("band duration must be small non-negative integers".into()))
                }
            })
            .collect::<Result<_>>()?;
        FloodRaster::new(self.geom, event_id, flooded, duration, perm)
    }
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<GridFile> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::parse(&name, 1, "empty grid file"))??;
    let (kind, event_id, geom) = parse_header(&header)
        .map_err(|msg| Error::parse(&name, 1, msg))?;

    let mut bands = BTreeMap::new();
    let mut lineno = 1usize;
    let mut current: Option<(String, Vec<f64>)> = None;
    for line in lines {
        let line = line?;
        lineno += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(bn) = trimmed.strip_prefix("band ") {
            if let Some((n, vals)) = current.take() {
                finish_band(&name, lineno, &geom, &mut bands, n, vals)?;
            }
            current = Some((bn.trim().to_string(), Vec::with_capacity(geom.n_cells())));
            continue;
        }
        let Some((_, vals)) = current.as_mut() else {
            return Err(Error::parse(&name, lineno, "data before any band header"));
        };
        for tok in trimmed.split_ascii_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(&name, lineno, format!("bad number {tok:?}")))?;
            vals.push(v);
        }
    }
    if let Some((n, vals)) = current.take() {
        finish_band(&name, lineno, &geom, &mut bands, n, vals)?;
    }
    if bands.is_empty() {
        return Err(Error::parse(&name, lineno, "grid file has no bands"));
    }
    Ok(GridFile {
        kind,
        event_id,
        geom,
        bands,
    })
}

fn finish_band(
    name: &str,
    lineno: usize,
    geom: &GridGeometry,
    bands: &mut BTreeMap<String, Vec<f64>>,
    band_name: String,
    vals: Vec<f64>,
) -> Result<()> {
    if vals.len() != geom.n_cells() {
        return Err(Error::parse(
            name,
            lineno,
            format!(
                "band {band_name:?} has {} values, expected {}",
                vals.len(),
                geom.n_cells()
            ),
        ));
    }
    if bands.insert(band_name.clone(), vals).is_some() {
        return Err(Error::parse(name, lineno, format!("duplicate band {band_name:?}")));
    }
    Ok(())
}

fn parse_header(line: &str) -> std::result::Result<(String, Option<EventId>, GridGeometry), String> {
    let mut it = line.split_whitespace();
    if it.next() != Some("grid") || it.next() != Some("v1") {
        return Err("expected `grid v1 ...` header".into());
    }
    let mut kind = None;
    let mut event = None;
    let mut origin = None;
    let mut pixel = None;
    let mut rows = None;
    let mut cols = None;
    let mut proj = None;
    for tok in it {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| format!("bad header field {tok:?}"))?;
        match k {
            "kind" => kind = Some(v.to_string()),
            "event" => {
                event = Some(v.parse::<EventId>().map_err(|e| e.to_string())?);
            }
            "origin" => {
                let (x, y) = v
                    .split_once(',')
                    .ok_or_else(|| "origin must be x,y".to_string())?;
                origin = Some((
                    x.parse::<f64>().map_err(|_| "bad origin x".to_string())?,
                    y.parse::<f64>().map_err(|_| "bad origin y".to_string())?,
                ));
            }
            "pixel" => pixel = Some(v.parse::<f64>().map_err(|_| "bad pixel size".to_string())?),
            "rows" => rows = Some(v.parse::<usize>().map_err(|_| "bad rows".to_string())?),
            "cols" => cols = Some(v.parse::<usize>().map_err(|_| "bad cols".to_string())?),
            "proj" => proj = Some(v.to_string()),
            _ => return Err(format!("unknown header field {k:?}")),
        }
    }
    let kind = kind.ok_or("missing kind")?;
    let (ox, oy) = origin.ok_or("missing origin")?;
    let geom = GridGeometry::new(
        ox,
        oy,
        pixel.ok_or("missing pixel size")?,
        rows.ok_or("missing rows")?,
        cols.ok_or("missing cols")?,
        proj.ok_or("missing proj")?,
    )
    .map_err(|e| e.to_string())?;
    Ok((kind, event, geom))
}

/// Writes a grid file; band order is the iteration order of `bands`.
pub fn write_grid<'a>(
    path: impl AsRef<Path>,
    kind: &str,
    event_id: Option<EventId>,
    geom: &GridGeometry,
    bands: impl IntoIterator<Item = (&'a str, &'a [f64])>,
) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write!(w, "grid v1 kind={kind}")?;
    if let Some(e) = event_id {
        write!(w, " event={e}")?;
    }
    writeln!(
        w,
        " origin={},{} pixel={} rows={} cols={} proj={}",
        geom.origin_x, geom.origin_y, geom.pixel_size, geom.n_rows, geom.n_cols, geom.projection
    )?;
    for (name, vals) in bands {
        debug_assert_eq!(vals.len(), geom.n_cells());
        writeln!(w, "band {name}")?;
        for row in vals.chunks(geom.n_cols) {
            let mut first = true;
            for v in row {
                if !first {
                    write!(w, " ")?;
                }
                write!(w, "{v}")?;
                first = false;
            }
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Convenience writer for a flood raster.
pub fn write_flood_raster(path: impl AsRef<Path>, raster: &FloodRaster) -> Result<()> {
    let flooded: Vec<f64> = raster.band_flooded.iter().map(|&v| v as f64).collect();
    let duration: Vec<f64> = raster.band_duration.iter().map(|&v| v as f64).collect();
    let perm: Vec<f64> = raster.band_perm_water.iter().map(|&v| v as f64).collect();
    write_grid(
        path,
        "flood",
        Some(raster.event_id),
        &raster.geom,
        [
            ("flooded", flooded.as_slice()),
            ("duration", duration.as_slice()),
            ("perm_water", perm.as_slice()),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flood_raster_round_trip() {
        let geom = GridGeometry::new(1000.0, 2000.0, 250.0, 3, 4, "ea_m").unwrap();
        let raster = FloodRaster::new(
            geom,
            EventId(1234),
            vec![0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0],
            vec![0, 3, 0, 0, 1, 7, 0, 0, 0, 0, 2, 0],
            vec![1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.grid");
        write_flood_raster(&path, &raster).unwrap();
        let back = read_grid(&path).unwrap().into_flood_raster().unwrap();
        assert_eq!(back, raster);
    }

    #[test]
    fn meteo_grid_round_trip() {
        let geom = GridGeometry::new(0.0, 0.0, 4000.0, 2, 2, "ea_m").unwrap();
        let vals = vec![1.5, -2.25, 30.0, 4.125];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.grid");
        write_grid(
            &path,
            "meteo",
            None,
            &geom,
            [("t_max@2008-06-01", vals.as_slice())],
        )
        .unwrap();
        let back = read_grid(&path).unwrap();
        assert_eq!(back.kind, "meteo");
        assert_eq!(back.band("t_max@2008-06-01").unwrap(), &vals);
    }

    #[test]
    fn wrong_cell_count_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.grid");
        std::fs::write(
            &path,
            "grid v1 kind=meteo origin=0,0 pixel=100 rows=2 cols=2 proj=ea_m\nband x\n1 2 3\n",
        )
        .unwrap();
        assert!(matches!(read_grid(&path), Err(Error::Parse { .. })));
    }
}
