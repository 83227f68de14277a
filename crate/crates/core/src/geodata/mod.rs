//! In-memory raster and polygon model, permanent-water masking, and
//! coverage-fraction zonal statistics.
//!
//! Rasters and polygons are assumed pre-projected to a common equal-area
//! projection in meters; a projection tag is validated on every raster /
//! polygon pairing but no reprojection is performed. All types are
//! immutable after construction and all operations are pure functions.

mod clip;
mod grid_io;
mod polygon;
mod raster;
mod zonal;

pub use clip::{coverage_fraction, rect_polygon_area};
pub use grid_io::{read_grid, write_flood_raster, write_grid, GridFile};
pub use polygon::{parse_wkt_polygon, read_polygon_table, select_vintage, to_wkt, PolygonPart, ZipPolygon};
pub use raster::{mask_permanent_water, EventId, FloodRaster, GridGeometry, ZipId};
pub use zonal::{zonal_flood_stats, ZonalFloodStats};

/// Projection tag both sides of a raster/polygon pairing must carry.
pub const DEFAULT_PROJECTION: &str = "ea_m";
