//! Satellite flood maps to cause-specific hospitalization effects.
//!
//! The pipeline runs in four stages, each a module here:
//!
//! - [`geodata`]: rasters, ZIP polygons, permanent-water masking, and exact
//!   coverage-fraction zonal statistics.
//! - [`exposure`]: the flood-event catalog and the ZIP-day exposure rule.
//! - [`covariates`]: coverage-weighted aggregation of gridded daily
//!   meteorology to ZIP-days and period averages.
//! - [`design`]: matched strata (one exposure period, two same-day-of-year
//!   control periods, four lag weeks each) with aggregated counts and
//!   person-day offsets.
//! - [`model`]: natural-spline confounder bases and conditional
//!   quasi-Poisson estimation of the distributed-lag model, with
//!   dispersion-scaled Wald intervals and multiplicity-corrected percent
//!   changes.
//! - [`synth`]: a seeded synthetic world generator with known effects,
//!   used as the ground-truth oracle for end-to-end verification.

pub mod covariates;
pub mod design;
pub mod error;
pub mod exposure;
pub mod geodata;
pub mod model;
pub mod synth;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

pub use design::{CcsCause, ClaimRecord, ExposurePeriod, PeriodObservation, Stratum};
pub use exposure::{ExposureRule, FloodCause, FloodEvent, Severity, ZipDayExposure};
pub use geodata::{FloodRaster, ZipPolygon, ZonalFloodStats};
pub use model::{FitResult, ModelSpec};
pub use synth::DgpConfig;
