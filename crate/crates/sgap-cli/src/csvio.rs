//! CSV writers and readers for the emitted tables.
//!
//! All files use `.` as the decimal separator, LF line endings, and the
//! shortest round-trip float formatting, so identical runs give byte
//! identical output and every file re-parses exactly.

use std::fmt::Write as _;
use std::path::Path;

use sgap_core::{BoxCount, BoxCountSeries, Dimension, GeometryError, PointCloud};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for CsvError {}

fn bad(line: usize, message: impl Into<String>) -> CsvError {
    CsvError { line, message: message.into() }
}

fn parse_f64(line: usize, field: &str) -> Result<f64, CsvError> {
    field.parse().map_err(|_| bad(line, format!("malformed number `{field}`")))
}

fn split_row(line_no: usize, line: &str, want: usize) -> Result<Vec<&str>, CsvError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != want {
        return Err(bad(line_no, format!("expected {want} fields, found {}", fields.len())));
    }
    Ok(fields)
}

// ---- point clouds: header `x` or `x,y` ----

pub fn write_points_csv(cloud: &PointCloud) -> String {
    let mut out = String::new();
    match cloud.dimension() {
        Dimension::One => {
            out.push_str("x\n");
            for p in cloud.points() {
                let _ = writeln!(out, "{}", p[0]);
            }
        }
        Dimension::Two => {
            out.push_str("x,y\n");
            for p in cloud.points() {
                let _ = writeln!(out, "{},{}", p[0], p[1]);
            }
        }
    }
    out
}

pub fn parse_points_csv(text: &str) -> Result<(Dimension, Vec<[f64; 2]>), CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    let dimension = match header {
        "x" => Dimension::One,
        "x,y" => Dimension::Two,
        other => return Err(bad(1, format!("unexpected header `{other}`"))),
    };
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        match dimension {
            Dimension::One => {
                let fields = split_row(line_no, line, 1)?;
                points.push([parse_f64(line_no, fields[0])?, 0.0]);
            }
            Dimension::Two => {
                let fields = split_row(line_no, line, 2)?;
                points.push([parse_f64(line_no, fields[0])?, parse_f64(line_no, fields[1])?]);
            }
        }
    }
    Ok((dimension, points))
}

// ---- box counts: r, N, ln_inv_r, ln_N ----

pub fn write_box_counts_csv(series: &BoxCountSeries) -> String {
    let mut out = String::from("r,N,ln_inv_r,ln_N\n");
    for e in series.entries() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.scale,
            e.count,
            (1.0 / e.scale).ln(),
            (e.count as f64).ln()
        );
    }
    out
}

pub fn parse_box_counts_csv(text: &str) -> Result<BoxCountSeries, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    if header != "r,N,ln_inv_r,ln_N" {
        return Err(bad(1, format!("unexpected header `{header}`")));
    }
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line_no, line, 4)?;
        let scale = parse_f64(line_no, fields[0])?;
        let count: u64 =
            fields[1].parse().map_err(|_| bad(line_no, format!("malformed count `{}`", fields[1])))?;
        entries.push(BoxCount { scale, count });
    }
    BoxCountSeries::new(entries).map_err(|e: GeometryError| bad(0, e.to_string()))
}

// ---- pressure tables: n, t, sum_lower, pressure_lower, sum_upper, pressure_upper ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureRow {
    pub n: usize,
    pub t: f64,
    pub sum_lower: f64,
    pub pressure_lower: f64,
    pub sum_upper: f64,
    pub pressure_upper: f64,
}

pub fn write_pressure_csv(rows: &[PressureRow]) -> String {
    let mut out = String::from("n,t,sum_lower,pressure_lower,sum_upper,pressure_upper\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.t, r.sum_lower, r.pressure_lower, r.sum_upper, r.pressure_upper
        );
    }
    out
}

pub fn parse_pressure_csv(text: &str) -> Result<Vec<PressureRow>, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    if header != "n,t,sum_lower,pressure_lower,sum_upper,pressure_upper" {
        return Err(bad(1, format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line_no, line, 6)?;
        rows.push(PressureRow {
            n: fields[0].parse().map_err(|_| bad(line_no, "malformed n"))?,
            t: parse_f64(line_no, fields[1])?,
            sum_lower: parse_f64(line_no, fields[2])?,
            pressure_lower: parse_f64(line_no, fields[3])?,
            sum_upper: parse_f64(line_no, fields[4])?,
            pressure_upper: parse_f64(line_no, fields[5])?,
        });
    }
    Ok(rows)
}

// ---- word counts: n, language_count, core_count ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountsRow {
    pub n: usize,
    pub language: u128,
    pub core: u128,
}

pub fn write_counts_csv(rows: &[CountsRow]) -> String {
    let mut out = String::from("n,language_count,core_count\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.n, r.language, r.core);
    }
    out
}

pub fn parse_counts_csv(text: &str) -> Result<Vec<CountsRow>, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    if header != "n,language_count,core_count" {
        return Err(bad(1, format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line_no, line, 3)?;
        rows.push(CountsRow {
            n: fields[0].parse().map_err(|_| bad(line_no, "malformed n"))?,
            language: fields[1].parse().map_err(|_| bad(line_no, "malformed count"))?,
            core: fields[2].parse().map_err(|_| bad(line_no, "malformed count"))?,
        });
    }
    Ok(rows)
}

pub fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    std::fs::write(path, contents)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip() {
        let cloud = PointCloud::from_points(
            Dimension::Two,
            vec![[0.1, 0.9], [1.0 / 3.0, 2.0 / 7.0], [-0.25, 1e-17]],
            5,
        );
        let text = write_points_csv(&cloud);
        let (dim, points) = parse_points_csv(&text).unwrap();
        assert_eq!(dim, Dimension::Two);
        assert_eq!(points, cloud.points());
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn one_dimensional_points_have_single_column() {
        let cloud = PointCloud::from_points(Dimension::One, vec![[0.5, 0.0]], 3);
        let text = write_points_csv(&cloud);
        assert_eq!(text, "x\n0.5\n");
        let (dim, points) = parse_points_csv(&text).unwrap();
        assert_eq!(dim, Dimension::One);
        assert_eq!(points, vec![[0.5, 0.0]]);
    }

    #[test]
    fn box_counts_round_trip() {
        let entries =
            vec![BoxCount { scale: 0.25, count: 3 }, BoxCount { scale: 0.125, count: 7 }];
        let series = BoxCountSeries::new(entries).unwrap();
        let text = write_box_counts_csv(&series);
        let parsed = parse_box_counts_csv(&text).unwrap();
        assert_eq!(parsed, series);
    }

    #[test]
    fn pressure_round_trip() {
        let rows = vec![PressureRow {
            n: 4,
            t: 1.0 / 3.0,
            sum_lower: 1.25,
            pressure_lower: 0.05578,
            sum_upper: 2.5,
            pressure_upper: 0.2291,
        }];
        let text = write_pressure_csv(&rows);
        assert_eq!(parse_pressure_csv(&text).unwrap(), rows);
    }

    #[test]
    fn counts_round_trip() {
        let rows = vec![
            CountsRow { n: 0, language: 1, core: 1 },
            CountsRow { n: 20, language: 17711, core: 4181 },
        ];
        let text = write_counts_csv(&rows);
        assert_eq!(parse_counts_csv(&text).unwrap(), rows);
    }

    #[test]
    fn malformed_rows_report_lines() {
        let err = parse_counts_csv("n,language_count,core_count\n1,2\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_points_csv("x\nnot-a-number\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
