//! Universal-time arithmetic and the console's calendar renderings.
//!
//! Universal time (UT) is a count of seconds since the mission calendar
//! reference 1951-01-01T00:00:00. Renderings follow the flight software's
//! conventions: ISO "T" separator for observation stamps, a space separator
//! for safety exceptions and alarm notifications, and fractional seconds
//! shown only when non-zero.

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};

/// Calendar instant of UT zero.
fn ut_reference() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(1951, 1, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap()
}

fn to_datetime(ut: f64) -> NaiveDateTime {
    let micros = (ut * 1e6).round() as i64;
    ut_reference() + chrono::Duration::microseconds(micros)
}

fn format_clock(dt: NaiveDateTime, separator: char) -> String {
    let micros = dt.and_utc().timestamp_subsec_micros();
    let base = format!(
        "{:04}-{:02}-{:02}{}{:02}:{:02}:{:02}",
        dt.year(),
        dt.month(),
        dt.day(),
        separator,
        dt.hour(),
        dt.minute(),
        dt.second()
    );
    if micros == 0 {
        base
    } else {
        format!("{base}.{micros:06}")
    }
}

/// "2045-01-03T19:29:40.254697" (fraction omitted when exactly zero).
pub fn iso_compact(ut: f64) -> String {
    format_clock(to_datetime(ut), 'T')
}

/// "2045-01-03 22:31:41.455186" (fraction omitted when exactly zero).
pub fn human_clock(ut: f64) -> String {
    format_clock(to_datetime(ut), ' ')
}

/// Strict alarm-time parser: exactly "YYYY-MM-DDTHH:MM:SS", nothing else.
pub fn parse_alarm_time(text: &str) -> Option<f64> {
    let dt = NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S").ok()?;
    // parse_from_str is strict about the shape already (no fractional part,
    // no stray characters), so a successful parse is enough.
    let delta = dt - ut_reference();
    Some(delta.num_microseconds()? as f64 / 1e6)
}

/// Mission elapsed time as "T+ 0Y, 000D, 00:00:28" (floors of each unit).
pub fn met_clock(met_seconds: f64) -> String {
    let total = met_seconds.max(0.0).floor() as u64;
    let years = total / (365 * 86_400);
    let days = (total % (365 * 86_400)) / 86_400;
    let hours = (total % 86_400) / 3_600;
    let minutes = (total % 3_600) / 60;
    let seconds = total % 60;
    format!("T+ {years}Y, {days:03}D, {hours:02}:{minutes:02}:{seconds:02}")
}

/// Render a float the way the flight software's runtime printed them:
/// shortest round-trip decimal, with a ".0" kept on integral values.
pub fn pyfloat(value: f64) -> String {
    let text = format!("{value}");
    if text.contains(['.', 'e', 'E']) || value.is_nan() || value.is_infinite() {
        text
    } else {
        format!("{text}.0")
    }
}
