//! File formats: point sets as JSON (`{"dim": 2, "points": [[x, y], ...]}`)
//! or CSV (one `x,y` row per point), interval families as JSON
//! (`{"alpha": a, "t": [...]}`), and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{IntervalFamily, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    Json,
    Csv,
}

impl PointFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => PointFormat::Csv,
            _ => PointFormat::Json,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            PointFormat::Json => "json",
            PointFormat::Csv => "csv",
        }
    }
}

pub fn points_from_csv_str(text: &str) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::UnsupportedDimension(rec.len()));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::invalid(format!("row {}: bad coordinate `{s}`: {e}", line + 1)))
        };
        pts.push(Point::new(parse(&rec[0])?, parse(&rec[1])?));
    }
    PointSet::new(pts)
}

/// One `x,y` row per point, shortest round-trip formatting.
pub fn points_to_csv_string(ps: &PointSet) -> String {
    let mut out = String::new();
    for p in ps.points() {
        out.push_str(&format!("{:?},{:?}\n", p.x, p.y));
    }
    out
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path)?;
    match PointFormat::from_path(path) {
        PointFormat::Json => PointSet::from_json_str(&text),
        PointFormat::Csv => points_from_csv_str(&text),
    }
}

pub fn read_intervals(path: &Path) -> Result<IntervalFamily> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn points_to_string(ps: &PointSet, format: PointFormat) -> Result<String> {
    Ok(match format {
        PointFormat::Json => to_json_string(ps)?,
        PointFormat::Csv => points_to_csv_string(ps),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let ps = PointSet::from_coords(&[(0.1, 1.0 / 3.0), (-2.5e-7, 12345.678901234567)]).unwrap();
        let text = points_to_csv_string(&ps);
        assert_eq!(points_from_csv_str(&text).unwrap(), ps);
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            points_from_csv_str("1,2,3\n"),
            Err(Error::UnsupportedDimension(3))
        ));
        assert!(matches!(
            points_from_csv_str("1,x\n"),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            points_from_csv_str(""),
            Err(Error::InvalidInput(_))
        ));
        assert_eq!(points_from_csv_str("0, 0\n\n1 ,2\n").unwrap().n(), 2);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("neardist-io-{}", std::process::id()));
        let path = dir.join("a.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
