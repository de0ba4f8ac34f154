//! CSV export and import for profiles, ball scans and strip fields.
//!
//! Floats are written with 17 significant digits in scientific notation and
//! records end in a bare LF, so reading a file and writing it back reproduces
//! it byte for byte.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::ball::ScanRow;
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::strip::GridSolution;

pub const PROFILE_HEADER: [&str; 3] = ["t", "u", "du"];
pub const SCAN_HEADER: [&str; 4] = ["r", "J", "sup_norm", "energy"];
pub const FIELD_HEADER: [&str; 5] = ["i", "j", "x", "y", "u"];

/// Decimal form of `v` with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub t: f64,
    pub u: f64,
    pub du: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

pub fn profile_rows(prof: &Profile) -> Vec<ProfileRow> {
    (0..prof.len())
        .map(|k| ProfileRow {
            t: prof.t[k],
            u: prof.u[k],
            du: prof.du[k],
        })
        .collect()
}

pub fn field_rows(sol: &GridSolution) -> Vec<FieldRow> {
    let geom = sol.geometry();
    (0..sol.ny)
        .flat_map(|j| (0..sol.nx).map(move |i| (i, j)))
        .map(|(i, j)| FieldRow {
            i,
            j,
            x: geom.x(i),
            y: geom.y(j),
            u: sol.at(i, j),
        })
        .collect()
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_table<W: Write, const K: usize>(
    w: W,
    header: [&str; K],
    records: impl Iterator<Item = [String; K]>,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header).map_err(io_error)?;
    for rec in records {
        out.write_record(&rec).map_err(io_error)?;
    }
    out.flush().map_err(io_error)
}

fn read_table<R: Read, const K: usize>(r: R, header: [&str; K]) -> Result<Vec<[String; K]>> {
    let mut input = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let found = input.headers().map_err(io_error)?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Io(format!(
            "expected header {}, found {}",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in input.records().enumerate() {
        let rec = rec.map_err(io_error)?;
        let fields: Vec<String> = rec.iter().map(str::to_owned).collect();
        let fields: [String; K] = fields.try_into().map_err(|f: Vec<String>| {
            Error::Io(format!(
                "record {} has {} fields, expected {K}",
                line + 1,
                f.len()
            ))
        })?;
        rows.push(fields);
    }
    Ok(rows)
}

fn parse<T: std::str::FromStr>(field: &str, name: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Io(format!("cannot parse {name} = {field:?}")))
}

pub fn write_profile_csv<W: Write>(w: W, rows: &[ProfileRow]) -> Result<()> {
    write_table(
        w,
        PROFILE_HEADER,
        rows.iter()
            .map(|r| [format_float(r.t), format_float(r.u), format_float(r.du)]),
    )
}

pub fn read_profile_csv<R: Read>(r: R) -> Result<Vec<ProfileRow>> {
    read_table(r, PROFILE_HEADER)?
        .iter()
        .map(|[t, u, du]| {
            Ok(ProfileRow {
                t: parse(t, "t")?,
                u: parse(u, "u")?,
                du: parse(du, "du")?,
            })
        })
        .collect()
}

pub fn write_scan_csv<W: Write>(w: W, rows: &[ScanRow]) -> Result<()> {
    write_table(
        w,
        SCAN_HEADER,
        rows.iter().map(|r| {
            [
                format_float(r.r),
                r.intervals.to_string(),
                format_float(r.sup_norm),
                format_float(r.energy),
            ]
        }),
    )
}

pub fn read_scan_csv<R: Read>(r: R) -> Result<Vec<ScanRow>> {
    read_table(r, SCAN_HEADER)?
        .iter()
        .map(|[r, j, s, e]| {
            Ok(ScanRow {
                r: parse(r, "r")?,
                intervals: parse(j, "J")?,
                sup_norm: parse(s, "sup_norm")?,
                energy: parse(e, "energy")?,
            })
        })
        .collect()
}

pub fn write_field_csv<W: Write>(w: W, rows: &[FieldRow]) -> Result<()> {
    write_table(
        w,
        FIELD_HEADER,
        rows.iter().map(|r| {
            [
                r.i.to_string(),
                r.j.to_string(),
                format_float(r.x),
                format_float(r.y),
                format_float(r.u),
            ]
        }),
    )
}

pub fn read_field_csv<R: Read>(r: R) -> Result<Vec<FieldRow>> {
    read_table(r, FIELD_HEADER)?
        .iter()
        .map(|[i, j, x, y, u]| {
            Ok(FieldRow {
                i: parse(i, "i")?,
                j: parse(j, "j")?,
                x: parse(x, "x")?,
                y: parse(y, "y")?,
                u: parse(u, "u")?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(format_float(-2.5), "-2.5000000000000000e0");
        for v in [std::f64::consts::PI, 1e-300, -7.25e123, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn profile_round_trip_is_byte_identical() {
        let rows = vec![
            ProfileRow {
                t: 0.0,
                u: 0.0,
                du: std::f64::consts::FRAC_1_SQRT_2,
            },
            ProfileRow {
                t: 0.5,
                u: 0.34,
                du: 0.6,
            },
        ];
        let mut first = Vec::new();
        write_profile_csv(&mut first, &rows).unwrap();
        let text = String::from_utf8(first.clone()).unwrap();
        assert!(text.starts_with("t,u,du\n"));
        assert!(!text.contains('\r'));
        let back = read_profile_csv(first.as_slice()).unwrap();
        assert_eq!(back, rows);
        let mut second = Vec::new();
        write_profile_csv(&mut second, &back).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let err = read_scan_csv("r,N,sup_norm,energy\n1,2,3,4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
        let err = read_field_csv("i,j,x,y,u\n1,2,x,4,5\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("x"), "{err}");
    }
}
