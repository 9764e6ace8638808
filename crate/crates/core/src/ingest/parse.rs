use std::io::Read;

use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime};

use super::IngestError;
use crate::spatial::SpatialPoint;

const FEET_TO_METRES: f64 = 0.3048;
/// Geolife marks a missing altitude with this value.
const GEOLIFE_NO_ALTITUDE: f64 = -777.0;
const GEOLIFE_HEADER_LINES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub client_id: String,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub lat: f64,
    pub lon: f64,
    pub alt: f64,
}

impl TrajectoryRecord {
    pub fn to_point(&self) -> SpatialPoint {
        SpatialPoint {
            lat: self.lat,
            lon: self.lon,
            alt: self.alt,
            timestamp: self.timestamp,
            client_id: self.client_id.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParseOutput {
    pub records: Vec<TrajectoryRecord>,
    pub issues: Vec<ParseIssue>,
}

impl ParseOutput {
    pub fn points(&self) -> Vec<SpatialPoint> {
        self.records.iter().map(TrajectoryRecord::to_point).collect()
    }
}

fn parse_timestamp(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Some(v);
    }
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.timestamp());
    }
    ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S", "%Y/%m/%d %H:%M:%S"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
        .map(|t| t.and_utc().timestamp())
}

fn parse_coord(s: &str, name: &str, limit: f64) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{name} {s:?} is not a number"))?;
    if !v.is_finite() || v.abs() > limit {
        return Err(format!("{name} {v} out of range"));
    }
    Ok(v)
}

fn parse_row(row: &csv::StringRecord) -> Result<TrajectoryRecord, String> {
    if row.len() < 4 || row.len() > 5 {
        return Err(format!("expected 4 or 5 fields, found {}", row.len()));
    }
    let client_id = row[0].trim();
    if client_id.is_empty() {
        return Err("empty client id".into());
    }
    let timestamp = parse_timestamp(&row[1]).ok_or_else(|| format!("bad timestamp {:?}", &row[1]))?;
    let lat = parse_coord(&row[2], "latitude", 90.0)?;
    let lon = parse_coord(&row[3], "longitude", 180.0)?;
    let alt = match row.get(4).map(str::trim) {
        None | Some("") => 0.0,
        Some(a) => a.parse().map_err(|_| format!("altitude {a:?} is not a number"))?,
    };
    Ok(TrajectoryRecord {
        client_id: client_id.to_string(),
        timestamp,
        lat,
        lon,
        alt,
    })
}

/// Parse `client_id,timestamp,lat,lon[,alt]` rows. A leading header row is
/// skipped; malformed rows are skipped and reported with their line number.
pub fn parse_csv<R: Read>(input: R) -> Result<ParseOutput, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut out = ParseOutput::default();
    for (i, row) in reader.records().enumerate() {
        let row = match row {
            Ok(r) => r,
            Err(e) => match e.into_kind() {
                csv::ErrorKind::Io(io) => return Err(io.into()),
                other => {
                    out.issues.push(ParseIssue {
                        line: i as u64 + 1,
                        message: format!("{other:?}"),
                    });
                    continue;
                }
            },
        };
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && row.get(0).is_some_and(|f| f.trim().eq_ignore_ascii_case("client_id")) {
            continue;
        }
        match parse_row(&row) {
            Ok(r) => out.records.push(r),
            Err(message) => out.issues.push(ParseIssue { line, message }),
        }
    }
    Ok(out)
}

/// Parse one Geolife `.plt` trajectory file. Altitude is converted from
/// feet to metres.
pub fn parse_geolife<R: Read>(input: R, client_id: &str) -> Result<ParseOutput, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut out = ParseOutput::default();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => match e.into_kind() {
                csv::ErrorKind::Io(io) => return Err(io.into()),
                other => {
                    out.issues.push(ParseIssue {
                        line: 0,
                        message: format!("{other:?}"),
                    });
                    continue;
                }
            },
        };
        let line = row.position().map_or(0, |p| p.line());
        if line <= GEOLIFE_HEADER_LINES as u64 {
            continue;
        }
        match geolife_row(&row, client_id) {
            Ok(r) => out.records.push(r),
            Err(message) => out.issues.push(ParseIssue { line, message }),
        }
    }
    Ok(out)
}

fn geolife_row(row: &csv::StringRecord, client_id: &str) -> Result<TrajectoryRecord, String> {
    if row.len() != 7 {
        return Err(format!("expected 7 fields, found {}", row.len()));
    }
    let lat = parse_coord(&row[0], "latitude", 90.0)?;
    let lon = parse_coord(&row[1], "longitude", 180.0)?;
    let feet: f64 = row[3]
        .trim()
        .parse()
        .map_err(|_| format!("altitude {:?} is not a number", &row[3]))?;
    let alt = if feet == GEOLIFE_NO_ALTITUDE { 0.0 } else { feet * FEET_TO_METRES };
    let date = NaiveDate::parse_from_str(row[5].trim(), "%Y-%m-%d").map_err(|e| format!("date: {e}"))?;
    let time = NaiveTime::parse_from_str(row[6].trim(), "%H:%M:%S").map_err(|e| format!("time: {e}"))?;
    Ok(TrajectoryRecord {
        client_id: client_id.to_string(),
        timestamp: date.and_time(time).and_utc().timestamp(),
        lat,
        lon,
        alt,
    })
}

/// Inverse of [`parse_csv`], with a header row.
pub fn write_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::from("client_id,timestamp,lat,lon,alt\n");
    for r in records {
        out.push_str(&format!("{},{},{},{},{}\n", r.client_id, r.timestamp, r.lat, r.lon, r.alt));
    }
    out
}
