use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use danzer::{DyadicRational, Point};

/// A failure tied to a position in an input file.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// `x.exact.csv` next to `x.csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.exact.csv"))
}

fn header(dim: usize) -> Vec<String> {
    if dim == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

fn exact_header(dim: usize) -> Vec<String> {
    (1..=dim).flat_map(|i| [format!("m{i}"), format!("e{i}")]).collect()
}

/// 17 significant digits, enough to round-trip every f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_points<W: Write>(out: W, dim: usize, points: &[Point<f64>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(dim))?;
    for p in points {
        w.write_record(p.coords().iter().map(|&c| fmt_f64(c)))?;
    }
    w.flush()
}

pub fn write_exact(path: &Path, dim: usize, points: &[Point<DyadicRational>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(exact_header(dim))?;
    for p in points {
        w.write_record(
            p.coords()
                .iter()
                .flat_map(|c| [c.mantissa().to_string(), c.exponent().to_string()]),
        )?;
    }
    w.flush()
}

fn reader(path: &Path) -> Result<csv::Reader<File>, InputError> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

pub fn read_points(path: &Path, dim: usize) -> Result<Vec<Point<f64>>, InputError> {
    let mut r = reader(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let line = line_of(&rec);
        if rec.len() != dim {
            return Err(InputError(format!(
                "{}:{line}: expected {dim} columns, found {}",
                path.display(),
                rec.len()
            )));
        }
        let coords = rec
            .iter()
            .enumerate()
            .map(|(i, f)| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(InputError(format!(
                    "{}:{line}: column {}: '{f}' is not a finite number",
                    path.display(),
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Point::new(coords));
    }
    Ok(out)
}

pub fn read_exact(path: &Path, dim: usize) -> Result<Vec<Point<DyadicRational>>, InputError> {
    let mut r = reader(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let line = line_of(&rec);
        if rec.len() != 2 * dim {
            return Err(InputError(format!(
                "{}:{line}: expected {} columns, found {}",
                path.display(),
                2 * dim,
                rec.len()
            )));
        }
        let bad = |col: usize, f: &str| {
            InputError(format!("{}:{line}: column {col}: '{f}' is not an integer", path.display()))
        };
        let mut coords = Vec::with_capacity(dim);
        for i in 0..dim {
            let (m, e) = (&rec[2 * i], &rec[2 * i + 1]);
            let m: i128 = m.parse().map_err(|_| bad(2 * i + 1, m))?;
            let e: i64 = e.parse().map_err(|_| bad(2 * i + 2, e))?;
            coords.push(DyadicRational::new(m, e));
        }
        out.push(Point::new(coords));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/d.csv")), PathBuf::from("out/d.exact.csv"));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 25.298221281347036, -7.5e-12] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
