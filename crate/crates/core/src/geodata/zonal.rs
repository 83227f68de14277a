use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geodata::clip::coverage_fraction;
use crate::geodata::polygon::ZipPolygon;
use crate::geodata::raster::{EventId, FloodRaster, ZipId};

/// Coverage-weighted flood statistics for one ZIP polygon and one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalFloodStats {
    pub zip_id: ZipId,
    pub event_id: EventId,
    /// Flooded area inside the ZIP in square kilometers.
    pub flooded_area_km2: f64,
    /// Percent of the ZIP's total area that is flooded, in [0, 100].
    pub pct_area_flooded: f64,
    /// Coverage-weighted mean flood duration over flooded pixels, in days.
    pub mean_duration: f64,
    /// Maximum flood duration over flooded pixels with positive coverage.
    pub max_duration: f64,
}

impl ZonalFloodStats {
    pub fn empty(zip_id: ZipId, event_id: EventId) -> Self {
        ZonalFloodStats {
            zip_id,
            event_id,
            flooded_area_km2: 0.0,
            pct_area_flooded: 0.0,
            mean_duration: 0.0,
            max_duration: 0.0,
        }
    }
}

/// Aggregates a masked flood raster over one ZIP polygon.
///
/// Flooded area is the sum of pixel area times the exact coverage fraction
/// over flooded pixels; duration statistics are taken over flooded pixels
/// with positive coverage, weighted by coverage. A polygon that misses the
/// raster extent yields zero flooded area and a logged coverage warning.
pub fn zonal_flood_stats(raster: &FloodRaster, polygon: &ZipPolygon) -> Result<ZonalFloodStats> {
    raster.geom.check_projection(&polygon.projection)?;
    let mut stats = ZonalFloodStats::empty(polygon.zip_id.clone(), raster.event_id);

    let Some((rows, cols)) = raster.geom.cells_in_bbox(polygon.bbox()) else {
        log::warn!(
            "ZIP {} lies outside raster extent of event {}; zero coverage",
            polygon.zip_id,
            raster.event_id
        );
        return Ok(stats);
    };

    let pixel_area = raster.geom.cell_area_km2();
    let mut covered_flooded = 0.0; // Σ coverage over flooded pixels
    let mut duration_weighted = 0.0;
    let mut max_duration = 0.0_f64;

    for row in rows {
        for col in cols.clone() {
            let i = raster.idx(row, col);
            if raster.band_flooded[i] == 0 {
                continue;
            }
            let cov = coverage_fraction(raster.geom.cell_rect(row, col), polygon)?;
            if cov <= 0.0 {
                continue;
            }
            covered_flooded += cov;
            let d = raster.band_duration[i] as f64;
            duration_weighted += d * cov;
            max_duration = max_duration.max(d);
        }
    }

    stats.flooded_area_km2 = covered_flooded * pixel_area;
    stats.pct_area_flooded = 100.0 * stats.flooded_area_km2 / polygon.total_area_km2;
    if covered_flooded > 0.0 {
        stats.mean_duration = duration_weighted / covered_flooded;
        stats.max_duration = max_duration;
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodata::raster::{GridGeometry, ZipId};
    use crate::testutil;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom(rows: usize, cols: usize) -> GridGeometry {
        GridGeometry::new(0.0, 0.0, 250.0, rows, cols, "ea_m").unwrap()
    }

    fn raster_with_flooded(geom: GridGeometry, flooded: Vec<u8>, duration: Vec<u16>) -> FloodRaster {
        let n = geom.n_cells();
        FloodRaster::new(geom, EventId(1234), flooded, duration, vec![0; n]).unwrap()
    }

    fn random_raster(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> FloodRaster {
        let g = geom(rows, cols);
        let n = g.n_cells();
        let flooded: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.4))).collect();
        let duration: Vec<u16> = flooded
            .iter()
            .map(|&f| if f == 1 { rng.random_range(1..=30) } else { 0 })
            .collect();
        raster_with_flooded(g, flooded, duration)
    }

    #[test]
    fn one_fully_covered_pixel_is_a_sixteenth_km2() {
        // 250 m × 250 m = 0.0625 km².
        let g = geom(4, 4);
        let mut flooded = vec![0u8; 16];
        let mut duration = vec![0u16; 16];
        flooded[5] = 1; // row 1, col 1
        duration[5] = 3;
        let r = raster_with_flooded(g, flooded, duration);
        // Polygon covering the whole grid.
        let p = ZipPolygon::rect(ZipId::new("00001").unwrap(), 2008, 0.0, 0.0, 1000.0, 1000.0, "ea_m")
            .unwrap();
        let s = zonal_flood_stats(&r, &p).unwrap();
        assert!((s.flooded_area_km2 - 0.0625).abs() < 1e-15);
        assert!((s.pct_area_flooded - 6.25).abs() < 1e-12);
        assert_eq!(s.mean_duration, 3.0);
        assert_eq!(s.max_duration, 3.0);
    }

    #[test]
    fn zero_flooded_pixels_zero_stats() {
        let r = raster_with_flooded(geom(4, 4), vec![0; 16], vec![0; 16]);
        let p = ZipPolygon::rect(ZipId::new("00001").unwrap(), 2008, 0.0, 0.0, 500.0, 500.0, "ea_m")
            .unwrap();
        let s = zonal_flood_stats(&r, &p).unwrap();
        assert_eq!(s.pct_area_flooded, 0.0);
        assert_eq!(s.mean_duration, 0.0);
        assert_eq!(s.max_duration, 0.0);
    }

    #[test]
    fn polygon_outside_extent_is_zero_with_warning() {
        let r = raster_with_flooded(geom(4, 4), vec![1; 16], vec![1; 16]);
        let p = ZipPolygon::rect(ZipId::new("00001").unwrap(), 2008, 5000.0, 5000.0, 6000.0, 6000.0, "ea_m")
            .unwrap();
        let s = zonal_flood_stats(&r, &p).unwrap();
        assert_eq!(s.flooded_area_km2, 0.0);
    }

    #[test]
    fn matches_exhaustive_pixel_enumeration_oracle() {
        // Brute force over every pixel with the trapezoid-integration area.
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        for _ in 0..25 {
            let r = random_raster(&mut rng, 16, 16);
            let poly = testutil::random_star_polygon(&mut rng, 2000.0, 2000.0, 1800.0);
            let ours = zonal_flood_stats(&r, &poly).unwrap();

            let mut oracle_area = 0.0;
            for row in 0..r.geom.n_rows {
                for col in 0..r.geom.n_cols {
                    let i = r.idx(row, col);
                    if r.band_flooded[i] == 1 {
                        let rect = r.geom.cell_rect(row, col);
                        oracle_area +=
                            testutil::rect_area_by_trapezoids(&poly, rect) / 1.0e6;
                    }
                }
            }
            assert!(
                (ours.flooded_area_km2 - oracle_area).abs() < 1e-9,
                "ours {} vs oracle {}",
                ours.flooded_area_km2,
                oracle_area
            );
        }
    }

    #[test]
    fn additivity_over_split_polygon() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let r = random_raster(&mut rng, 12, 12);
            let zip = ZipId::new("00001").unwrap();
            let whole = ZipPolygon::rect(zip.clone(), 2008, 200.0, 200.0, 2800.0, 2600.0, "ea_m").unwrap();
            let left = ZipPolygon::rect(zip.clone(), 2008, 200.0, 200.0, 1500.0, 2600.0, "ea_m").unwrap();
            let right = ZipPolygon::rect(zip, 2008, 1500.0, 200.0, 2800.0, 2600.0, "ea_m").unwrap();
            let sw = zonal_flood_stats(&r, &whole).unwrap();
            let sl = zonal_flood_stats(&r, &left).unwrap();
            let sr = zonal_flood_stats(&r, &right).unwrap();
            assert!(
                (sw.flooded_area_km2 - (sl.flooded_area_km2 + sr.flooded_area_km2)).abs() < 1e-9
            );
        }
    }

    #[test]
    fn adding_flooded_pixels_never_decreases_pct() {
        let mut rng = ChaCha8Rng::seed_from_u64(555);
        for _ in 0..10 {
            let mut r = random_raster(&mut rng, 10, 10);
            let poly = testutil::random_star_polygon(&mut rng, 1250.0, 1250.0, 1200.0);
            let before = zonal_flood_stats(&r, &poly).unwrap().pct_area_flooded;
            // Flood three more pixels.
            for _ in 0..3 {
                let i = rng.random_range(0..r.band_flooded.len());
                if r.band_flooded[i] == 0 {
                    r.band_flooded[i] = 1;
                    r.band_duration[i] = 1;
                }
            }
            let after = zonal_flood_stats(&r, &poly).unwrap().pct_area_flooded;
            assert!(after >= before - 1e-12);
        }
    }

    #[test]
    fn invariant_max_at_least_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(888);
        for _ in 0..20 {
            let r = random_raster(&mut rng, 8, 8);
            let poly = testutil::random_star_polygon(&mut rng, 1000.0, 1000.0, 900.0);
            let s = zonal_flood_stats(&r, &poly).unwrap();
            assert!(s.max_duration >= s.mean_duration);
            assert!(s.mean_duration >= 0.0);
            assert!((0.0..=100.0 + 1e-9).contains(&s.pct_area_flooded));
            assert!(s.flooded_area_km2 <= poly.total_area_km2 + 1e-9);
        }
    }
}
