//! Flood-event catalog, ZIP-day exposure classification, and event
//! filtering by cause and severity.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodata::{EventId, ZipId, ZonalFloodStats};

/// Square kilometers per square mile (1 mile = 1609.344 m exactly).
pub const KM2_PER_SQ_MILE: f64 = 1.609344 * 1.609344;

/// Catalog cause of a flood event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloodCause {
    HeavyRain,
    TropicalStormSurge,
    Dam,
    SnowmeltIce,
}

impl FloodCause {
    pub fn as_str(self) -> &'static str {
        match self {
            FloodCause::HeavyRain => "heavy_rain",
            FloodCause::TropicalStormSurge => "tropical_storm_surge",
            FloodCause::Dam => "dam",
            FloodCause::SnowmeltIce => "snowmelt_ice",
        }
    }

    /// Causes retained in the primary analysis.
    pub fn primary_set() -> BTreeSet<FloodCause> {
        [FloodCause::HeavyRain, FloodCause::TropicalStormSurge]
            .into_iter()
            .collect()
    }

    /// Sensitivity set: adds dam breaks and snowmelt/ice floods.
    pub fn all_set() -> BTreeSet<FloodCause> {
        [
            FloodCause::HeavyRain,
            FloodCause::TropicalStormSurge,
            FloodCause::Dam,
            FloodCause::SnowmeltIce,
        ]
        .into_iter()
        .collect()
    }
}

impl std::str::FromStr for FloodCause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heavy_rain" => Ok(FloodCause::HeavyRain),
            "tropical_storm_surge" => Ok(FloodCause::TropicalStormSurge),
            "dam" => Ok(FloodCause::Dam),
            "snowmelt_ice" => Ok(FloodCause::SnowmeltIce),
            _ => Err(Error::Validation(format!("unknown flood cause {s:?}"))),
        }
    }
}

impl fmt::Display for FloodCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Catalog severity class: 1, 1.5 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Moderate,
    High,
    Extreme,
}

impl Severity {
    pub fn class_value(self) -> f64 {
        match self {
            Severity::Moderate => 1.0,
            Severity::High => 1.5,
            Severity::Extreme => 2.0,
        }
    }

    pub fn from_class_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(Severity::Moderate)
        } else if v == 1.5 {
            Ok(Severity::High)
        } else if v == 2.0 {
            Ok(Severity::Extreme)
        } else {
            Err(Error::Validation(format!("unknown severity class {v}")))
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Severity::Moderate => "moderate",
            Severity::High => "high",
            Severity::Extreme => "extreme",
        }
    }
}

/// Two-sided severity grouping used by the stratified analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeverityGroup {
    ModerateGroup,
    HighExtremeGroup,
}

/// Splits severity at class 1: class ≤ 1 is the moderate group, anything
/// above is the high/extreme group.
pub fn severity_split(event: &FloodEvent) -> SeverityGroup {
    if event.severity.class_value() <= 1.0 {
        SeverityGroup::ModerateGroup
    } else {
        SeverityGroup::HighExtremeGroup
    }
}

/// One catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloodEvent {
    pub event_id: EventId,
    pub cause: FloodCause,
    pub severity: Severity,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
}

impl FloodEvent {
    pub fn new(
        event_id: EventId,
        cause: FloodCause,
        severity: Severity,
        start_date: NaiveDate,
        end_date: NaiveDate,
    ) -> Result<Self> {
        if start_date > end_date {
            return Err(Error::Validation(format!(
                "event {event_id}: start {start_date} after end {end_date}"
            )));
        }
        let days = (end_date - start_date).num_days() + 1;
        if !(1..=42).contains(&days) {
            return Err(Error::Validation(format!(
                "event {event_id}: duration {days} days outside 1..=42"
            )));
        }
        Ok(FloodEvent {
            event_id,
            cause,
            severity,
            start_date,
            end_date,
        })
    }

    pub fn duration_days(&self) -> i64 {
        (self.end_date - self.start_date).num_days() + 1
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.start_date
            .iter_days()
            .take_while(move |d| *d <= self.end_date)
    }
}

/// ZIP-day exposure rule: a ZIP-day is exposed when the percent-area or the
/// absolute-area threshold is met (disjunction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposureRule {
    pub min_pct_area: f64,
    pub min_area_km2: f64,
}

impl ExposureRule {
    /// Primary rule: at least 0.5 % of ZIP area or at least 5 sq mi flooded.
    pub fn primary() -> Self {
        ExposureRule {
            min_pct_area: 0.5,
            min_area_km2: 12.94994,
        }
    }

    /// Strict sensitivity rule: at least 1 % or at least 10 sq mi.
    pub fn strict() -> Self {
        ExposureRule {
            min_pct_area: 1.0,
            min_area_km2: 25.89988,
        }
    }

    /// Loose sensitivity rule: any positive flooded area counts.
    pub fn loose() -> Self {
        ExposureRule {
            min_pct_area: 1e-12,
            min_area_km2: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min_pct_area.is_finite() && !self.min_area_km2.is_finite() {
            return Err(Error::Validation(
                "exposure rule needs at least one finite threshold".into(),
            ));
        }
        Ok(())
    }
}

/// True when the zonal stats meet either threshold of the rule.
pub fn classify_exposed(stats: &ZonalFloodStats, rule: &ExposureRule) -> bool {
    stats.pct_area_flooded >= rule.min_pct_area || stats.flooded_area_km2 >= rule.min_area_km2
}

/// One classified ZIP-day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipDayExposure {
    pub zip_id: ZipId,
    pub date: NaiveDate,
    pub event_id: EventId,
    pub exposed: bool,
    pub stats: ZonalFloodStats,
}

/// Retains events whose cause is in `causes`. An empty result is reported
/// with a warning, not an error.
pub fn filter_events(catalog: &[FloodEvent], causes: &BTreeSet<FloodCause>) -> Vec<FloodEvent> {
    let kept: Vec<FloodEvent> = catalog
        .iter()
        .filter(|e| causes.contains(&e.cause))
        .cloned()
        .collect();
    if kept.is_empty() {
        log::warn!("cause filter {causes:?} retained no events");
    }
    kept
}

/// Reads the event catalog: a `floodcat v1` line, a column header, then
/// `event_id cause severity start end` rows (tab-separated, ISO dates).
pub fn read_catalog(path: impl AsRef<Path>) -> Result<Vec<FloodEvent>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if lineno == 1 {
            if line.trim() != "floodcat v1" {
                return Err(Error::parse(&name, 1, "expected `floodcat v1`"));
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') || line.starts_with("event_id") {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(Error::parse(&name, lineno, "expected 5 tab-separated fields"));
        }
        let event_id: EventId = f[0]
            .parse()
            .map_err(|e: Error| Error::parse(&name, lineno, e.to_string()))?;
        let cause: FloodCause = f[1]
            .parse()
            .map_err(|e: Error| Error::parse(&name, lineno, e.to_string()))?;
        let sev_val: f64 = f[2]
            .parse()
            .map_err(|_| Error::parse(&name, lineno, format!("bad severity {:?}", f[2])))?;
        let severity = Severity::from_class_value(sev_val)
            .map_err(|e| Error::parse(&name, lineno, e.to_string()))?;
        let start = parse_date(&name, lineno, f[3])?;
        let end = parse_date(&name, lineno, f[4])?;
        out.push(
            FloodEvent::new(event_id, cause, severity, start, end)
                .map_err(|e| Error::parse(&name, lineno, e.to_string()))?,
        );
    }
    Ok(out)
}

pub fn write_catalog(path: impl AsRef<Path>, events: &[FloodEvent]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "floodcat v1")?;
    writeln!(w, "event_id\tcause\tseverity\tstart\tend")?;
    for e in events {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            e.event_id,
            e.cause,
            e.severity.class_value(),
            e.start_date,
            e.end_date
        )?;
    }
    w.flush()?;
    Ok(())
}

fn parse_date(name: &str, lineno: usize, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| Error::parse(name, lineno, format!("bad date {s:?}")))
}

/// Writes the ZIP-day exposure table (exposed rows only).
pub fn write_zip_day_table(path: impl AsRef<Path>, rows: &[ZipDayExposure]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "zipdays v1")?;
    writeln!(
        w,
        "zip_id\tdate\tevent_id\tpct_area_flooded\tflooded_area_km2\tmean_duration\tmax_duration"
    )?;
    for r in rows {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.zip_id,
            r.date,
            r.event_id,
            r.stats.pct_area_flooded,
            r.stats.flooded_area_km2,
            r.stats.mean_duration,
            r.stats.max_duration
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the ZIP-day exposure table written by [`write_zip_day_table`].
pub fn read_zip_day_table(path: impl AsRef<Path>) -> Result<Vec<ZipDayExposure>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if lineno == 1 {
            if line.trim() != "zipdays v1" {
                return Err(Error::parse(&name, 1, "expected `zipdays v1`"));
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') || line.starts_with("zip_id") {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return Err(Error::parse(&name, lineno, "expected 7 tab-separated fields"));
        }
        let zip_id = ZipId::new(f[0]).map_err(|e| Error::parse(&name, lineno, e.to_string()))?;
        let date = parse_date(&name, lineno, f[1])?;
        let event_id: EventId = f[2]
            .parse()
            .map_err(|e: Error| Error::parse(&name, lineno, e.to_string()))?;
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::parse(&name, lineno, format!("bad number {s:?}")))
        };
        let stats = ZonalFloodStats {
            zip_id: zip_id.clone(),
            event_id,
            pct_area_flooded: num(f[3])?,
            flooded_area_km2: num(f[4])?,
            mean_duration: num(f[5])?,
            max_duration: num(f[6])?,
        };
        out.push(ZipDayExposure {
            zip_id,
            date,
            event_id,
            exposed: true,
            stats,
        });
    }
    Ok(out)
}
