//! Two-line element parsing: fixed-column records, mod-10 checksums, and the
//! epoch/designator conventions needed to turn catalog text into
//! [`DebrisObject`]s.

use super::{DebrisObject, OsculatingElements, PhysicalConstants};
use chrono::NaiveDate;
use std::f64::consts::TAU;
use std::ops::Range;
use thiserror::Error;

/// Two-digit TLE years 57..=99 mean 1957..=1999; 00..=56 mean 2000..=2056.
const CENTURY_PIVOT: u32 = 57;

#[derive(Debug, Error)]
pub enum TleError {
    #[error("line {line_no} has {len} characters; TLE records are exactly 69")]
    WrongLength { line_no: u8, len: usize },
    #[error("line {line_no} contains non-ASCII characters")]
    NotAscii { line_no: u8 },
    #[error("line {line_no} starts with {found:?}, expected {expected:?}")]
    WrongLinePrefix {
        line_no: u8,
        expected: char,
        found: char,
    },
    #[error("line {line_no} checksum is {found:?}, computed {expected}")]
    Checksum {
        line_no: u8,
        expected: u32,
        found: char,
    },
    #[error("line {line_no} field {field} is unreadable: {text:?}")]
    Field {
        line_no: u8,
        field: &'static str,
        text: String,
    },
    #[error("catalog numbers disagree between lines: {line1} vs {line2}")]
    IdMismatch { line1: u32, line2: u32 },
    #[error("eccentricity {0} is not below 1")]
    Eccentricity(f64),
    #[error("catalog number {0} appears more than once")]
    DuplicateId(u32),
    #[error("catalog ends in the middle of the record starting at line {line_no}")]
    Truncated { line_no: usize },
    #[error("record starting at line {line_no}: {source}")]
    Record {
        line_no: usize,
        #[source]
        source: Box<TleError>,
    },
}

/// Result of a catalog scan: parsed objects, plus per-record failures when
/// the caller opted to skip them (1-based line number of the record start).
#[derive(Debug)]
pub struct CatalogParse {
    pub objects: Vec<DebrisObject>,
    pub skipped: Vec<(usize, TleError)>,
}

fn checksum(line: &str) -> u32 {
    line[..68]
        .bytes()
        .map(|b| match b {
            b'0'..=b'9' => (b - b'0') as u32,
            b'-' => 1,
            _ => 0,
        })
        .sum::<u32>()
        % 10
}

fn check_line(line_no: u8, line: &str, expected_prefix: char) -> Result<(), TleError> {
    if !line.is_ascii() {
        return Err(TleError::NotAscii { line_no });
    }
    if line.len() != 69 {
        return Err(TleError::WrongLength {
            line_no,
            len: line.len(),
        });
    }
    let first = line.chars().next().unwrap();
    if first != expected_prefix {
        return Err(TleError::WrongLinePrefix {
            line_no,
            expected: expected_prefix,
            found: first,
        });
    }
    let sum = checksum(line);
    let last = line.chars().nth(68).unwrap();
    if last.to_digit(10) != Some(sum) {
        return Err(TleError::Checksum {
            line_no,
            expected: sum,
            found: last,
        });
    }
    Ok(())
}

fn field_f64(line_no: u8, line: &str, range: Range<usize>, name: &'static str) -> Result<f64, TleError> {
    let text = line[range].trim();
    text.parse().map_err(|_| TleError::Field {
        line_no,
        field: name,
        text: text.to_string(),
    })
}

fn field_u32(line_no: u8, line: &str, range: Range<usize>, name: &'static str) -> Result<u32, TleError> {
    let text = line[range].trim();
    text.parse().map_err(|_| TleError::Field {
        line_no,
        field: name,
        text: text.to_string(),
    })
}

fn expand_year(two_digit: u32) -> i32 {
    if two_digit >= CENTURY_PIVOT {
        1900 + two_digit as i32
    } else {
        2000 + two_digit as i32
    }
}

/// Fractional days since 1949-12-31 00:00 UTC for a TLE epoch
/// (two-digit year + 1-based fractional day of year).
fn epoch_days(year: i32, day_of_year: f64) -> f64 {
    let origin = NaiveDate::from_ymd_opt(1949, 12, 31).unwrap();
    let jan1 = NaiveDate::from_ymd_opt(year, 1, 1).unwrap();
    (jan1 - origin).num_days() as f64 + (day_of_year - 1.0)
}

/// International designator reformatted as a name, e.g. columns holding
/// `82092RP` become `1982-092RP`. Blank designators yield `None`.
fn designator_name(line1: &str) -> Option<String> {
    let yy = line1[9..11].trim();
    let launch = line1[11..14].trim();
    let piece = line1[14..17].trim();
    if yy.is_empty() || launch.is_empty() {
        return None;
    }
    let year = expand_year(yy.parse().ok()?);
    Some(format!("{year}-{launch}{piece}"))
}

/// Parses one TLE record. `name_line` is the optional leading name row of
/// three-line catalogs (a `0 ` marker prefix is tolerated); without one, the
/// name is derived from the international designator, falling back to the
/// catalog number.
pub fn parse_tle(
    name_line: Option<&str>,
    line1: &str,
    line2: &str,
    constants: &PhysicalConstants,
) -> Result<DebrisObject, TleError> {
    check_line(1, line1, '1')?;
    check_line(2, line2, '2')?;
    let id1 = field_u32(1, line1, 2..7, "catalog number")?;
    let id2 = field_u32(2, line2, 2..7, "catalog number")?;
    if id1 != id2 {
        return Err(TleError::IdMismatch {
            line1: id1,
            line2: id2,
        });
    }

    let year = expand_year(field_u32(1, line1, 18..20, "epoch year")?);
    let day_of_year = field_f64(1, line1, 20..32, "epoch day")?;
    let epoch = epoch_days(year, day_of_year);

    let deg = TAU / 360.0;
    let i = field_f64(2, line2, 8..16, "inclination")? * deg;
    let raan = (field_f64(2, line2, 17..25, "RAAN")? * deg).rem_euclid(TAU);
    let e = field_u32(2, line2, 26..33, "eccentricity")? as f64 / 1.0e7;
    if e >= 1.0 {
        return Err(TleError::Eccentricity(e));
    }
    let argp = (field_f64(2, line2, 34..42, "argument of perigee")? * deg).rem_euclid(TAU);
    let mean_anomaly = (field_f64(2, line2, 43..51, "mean anomaly")? * deg).rem_euclid(TAU);
    let revs_per_day = field_f64(2, line2, 52..63, "mean motion")?;
    if !(revs_per_day > 0.0) {
        return Err(TleError::Field {
            line_no: 2,
            field: "mean motion",
            text: line2[52..63].trim().to_string(),
        });
    }
    let n = revs_per_day * TAU / 86400.0; // rad/s
    let a = (constants.mu / (n * n)).cbrt();

    let name = name_line
        .map(|l| l.trim())
        .map(|l| l.strip_prefix("0 ").unwrap_or(l).trim())
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .or_else(|| designator_name(line1))
        .unwrap_or_else(|| format!("{id1:05}"));

    Ok(DebrisObject {
        id: id1,
        name,
        elements: OsculatingElements {
            a,
            e,
            i,
            raan,
            argp,
            mean_anomaly,
            epoch,
        },
    })
}

fn looks_like_line1(line: &str) -> bool {
    line.len() == 69 && line.starts_with("1 ")
}

/// Scans catalog text holding any mix of two-line and named three-line
/// records. In strict mode (`skip_bad = false`) the first broken record
/// aborts the scan with its starting line number; otherwise broken records
/// are collected in [`CatalogParse::skipped`] and the rest still parse.
pub fn parse_catalog(
    text: &str,
    skip_bad: bool,
    constants: &PhysicalConstants,
) -> Result<CatalogParse, TleError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let mut objects: Vec<DebrisObject> = Vec::new();
    let mut skipped = Vec::new();
    let mut idx = 0;
    while idx < lines.len() {
        let (record_start, first) = lines[idx];
        let (name, body, consumed) = if looks_like_line1(first) {
            (None, idx, 2)
        } else {
            (Some(first), idx + 1, 3)
        };
        let result = (|| {
            let (_, l1) = *lines.get(body).ok_or(TleError::Truncated {
                line_no: record_start,
            })?;
            let (_, l2) = *lines.get(body + 1).ok_or(TleError::Truncated {
                line_no: record_start,
            })?;
            let obj = parse_tle(name, l1, l2, constants)?;
            if objects.iter().any(|o| o.id == obj.id) {
                return Err(TleError::DuplicateId(obj.id));
            }
            Ok(obj)
        })();
        match result {
            Ok(obj) => objects.push(obj),
            Err(source) if skip_bad => skipped.push((record_start, source)),
            Err(source) => {
                return Err(TleError::Record {
                    line_no: record_start,
                    source: Box::new(source),
                })
            }
        }
        idx += consumed;
    }
    Ok(CatalogParse { objects, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EARTH: PhysicalConstants = PhysicalConstants::EARTH;

    // Historical station record with well-known field values.
    const ISS_L1: &str = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927";
    const ISS_L2: &str = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537";

    const RP_L1: &str = "1 13771U 82092RP  23236.25000000  .00000000  00000-0  00000-0 0  9993";
    const RP_L2: &str = "2 13771  82.5662  14.1301 0021355  85.0000 275.3000 15.12345678 10009";

    const EPOCH_L1: &str = "1 90002U 20001A   23236.00000000  .00000000  00000-0  00000-0 0  9990";
    const EPOCH_L2: &str = "2 90002  97.5000  10.0000 0010000   0.0000   0.0000 14.80000000 10000";

    #[test]
    fn parses_reference_record() {
        let obj = parse_tle(Some("ISS (ZARYA)"), ISS_L1, ISS_L2, &EARTH).unwrap();
        assert_eq!(obj.id, 25544);
        assert_eq!(obj.name, "ISS (ZARYA)");
        let el = obj.elements;
        assert!((el.i - 51.6416_f64.to_radians()).abs() < 1e-12);
        assert!((el.raan - 247.4627_f64.to_radians()).abs() < 1e-12);
        assert_eq!(el.e, 0.0006703);
        assert!((el.argp - 130.5360_f64.to_radians()).abs() < 1e-12);
        assert!((el.mean_anomaly - 325.0288_f64.to_radians()).abs() < 1e-12);
        // Semimajor axis from 15.72125391 rev/day through a = (mu/n²)^(1/3).
        assert!((el.a - 6730960.676936833).abs() < 1e-3);
        // Epoch 08264.51782528: day 264.51782528 of 2008 on the 1949-12-31 scale.
        assert!((el.epoch - 21448.51782528).abs() < 1e-8);
    }

    #[test]
    fn derives_name_from_designator() {
        let obj = parse_tle(None, RP_L1, RP_L2, &EARTH).unwrap();
        assert_eq!(obj.name, "1982-092RP");
        assert_eq!(obj.id, 13771);
        let named = parse_tle(None, ISS_L1, ISS_L2, &EARTH).unwrap();
        assert_eq!(named.name, "1998-067A");
        let marker = parse_tle(Some("0 COSMOS DEB"), RP_L1, RP_L2, &EARTH).unwrap();
        assert_eq!(marker.name, "COSMOS DEB");
    }

    #[test]
    fn epoch_day_number_pin() {
        // 23236.0 is 2023-08-24 00:00 UTC: exactly 26899 days past the origin.
        let obj = parse_tle(None, EPOCH_L1, EPOCH_L2, &EARTH).unwrap();
        assert_eq!(obj.elements.epoch, 26899.0);
    }

    #[test]
    fn pre_2000_epoch_years_map_to_the_1900s() {
        assert_eq!(expand_year(57), 1957);
        assert_eq!(expand_year(99), 1999);
        assert_eq!(expand_year(0), 2000);
        assert_eq!(expand_year(56), 2056);
    }

    #[test]
    fn rejects_corrupted_checksum() {
        let mut bad = ISS_L1.to_string();
        bad.replace_range(68..69, "8");
        assert!(matches!(
            parse_tle(None, &bad, ISS_L2, &EARTH),
            Err(TleError::Checksum { line_no: 1, .. })
        ));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_tle(None, &ISS_L1[..68], ISS_L2, &EARTH),
            Err(TleError::WrongLength { line_no: 1, len: 68 })
        ));
        assert!(matches!(
            parse_tle(None, ISS_L2, ISS_L2, &EARTH),
            Err(TleError::WrongLinePrefix { line_no: 1, .. })
        ));
        assert!(matches!(
            parse_tle(None, ISS_L1, RP_L2, &EARTH),
            Err(TleError::IdMismatch { .. })
        ));
    }

    #[test]
    fn catalog_mixes_two_and_three_line_records() {
        let text = format!("KOSMOS TEST\n{RP_L1}\n{RP_L2}\n{ISS_L1}\n{ISS_L2}\n");
        let parsed = parse_catalog(&text, false, &EARTH).unwrap();
        assert_eq!(parsed.objects.len(), 2);
        assert!(parsed.skipped.is_empty());
        assert_eq!(parsed.objects[0].name, "KOSMOS TEST");
        assert_eq!(parsed.objects[1].name, "1998-067A");
    }

    #[test]
    fn catalog_strict_mode_reports_record_line() {
        let mut corrupt = RP_L1.to_string();
        corrupt.replace_range(68..69, "0");
        let text = format!("{ISS_L1}\n{ISS_L2}\n{corrupt}\n{RP_L2}\n");
        let err = parse_catalog(&text, false, &EARTH).unwrap_err();
        assert!(matches!(err, TleError::Record { line_no: 3, .. }));
    }

    #[test]
    fn catalog_skip_bad_keeps_the_rest() {
        let mut corrupt = RP_L1.to_string();
        corrupt.replace_range(68..69, "0");
        let text = format!("{corrupt}\n{RP_L2}\n{ISS_L1}\n{ISS_L2}\n");
        let parsed = parse_catalog(&text, true, &EARTH).unwrap();
        assert_eq!(parsed.objects.len(), 1);
        assert_eq!(parsed.objects[0].id, 25544);
        assert_eq!(parsed.skipped.len(), 1);
        assert_eq!(parsed.skipped[0].0, 1);
    }

    #[test]
    fn catalog_rejects_duplicate_ids_and_truncation() {
        let text = format!("{ISS_L1}\n{ISS_L2}\n{ISS_L1}\n{ISS_L2}\n");
        let err = parse_catalog(&text, false, &EARTH).unwrap_err();
        assert!(matches!(err, TleError::Record { line_no: 3, .. }));

        let text = format!("{ISS_L1}\n");
        assert!(matches!(
            parse_catalog(&text, false, &EARTH),
            Err(TleError::Record { line_no: 1, .. })
        ));
    }
}
