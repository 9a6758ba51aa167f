use std::fmt::Write as _;
use std::path::Path;

use super::{QuadratureRule, SPHERE_AREA};
use crate::error::{Error, Result};
use crate::harmonics::SphericalPoint;

/// Loaded points farther than this from unit length are rejected.
pub const LOAD_UNIT_TOLERANCE: f64 = 1e-6;

/// Reads a point file: one point per line as `x y z` or `x y z w`,
/// whitespace separated. Blank lines and lines starting with `#` are skipped.
/// Files without a weight column get equal weights `4π/m`. Points within
/// 1e-6 of unit length are renormalized.
pub fn load_rule(path: impl AsRef<Path>) -> Result<QuadratureRule> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_rule(&text, path)
}

/// Parses the contents of a point file; `origin` is only used in errors and the label.
pub fn parse_rule(text: &str, origin: &Path) -> Result<QuadratureRule> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut columns = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split_whitespace()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| err(lineno, format!("cannot parse '{f}' as a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if fields.len() != 3 && fields.len() != 4 {
            return Err(err(
                lineno,
                format!("expected 3 or 4 fields, found {}", fields.len()),
            ));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(err(
                    lineno,
                    format!("found {} fields after earlier lines with {c}", fields.len()),
                ))
            }
            _ => {}
        }
        let (x, y, z) = (fields[0], fields[1], fields[2]);
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > LOAD_UNIT_TOLERANCE {
            return Err(err(
                lineno,
                format!("point has norm {norm}, not on the unit sphere"),
            ));
        }
        points.push(SphericalPoint::new_unchecked(x / norm, y / norm, z / norm));
        if let Some(&w) = fields.get(3) {
            if !(w > 0.0 && w.is_finite()) {
                return Err(err(lineno, format!("weight {w} is not positive")));
            }
            weights.push(w);
        }
    }
    if weights.is_empty() {
        let w = SPHERE_AREA / points.len().max(1) as f64;
        weights = vec![w; points.len()];
    }
    QuadratureRule::new(points, weights, origin.display().to_string())
}

/// Writes the 4-column `x y z w` format, one line per point and nothing
/// else. Values use the shortest decimal representation that parses back to
/// the same `f64`.
pub fn write_rule(rule: &QuadratureRule, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(rule.len() * 80);
    for (p, w) in rule.points().iter().zip(rule.weights()) {
        let _ = writeln!(out, "{:e} {:e} {:e} {:e}", p.x, p.y, p.z, w);
    }
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn parse(text: &str) -> Result<QuadratureRule> {
        parse_rule(text, Path::new("test.txt"))
    }

    #[test]
    fn three_column_files_get_equal_weights() {
        let r = parse("0 0 1\n0 0 -1\n").unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.weights().iter().all(|w| (w - 2.0 * PI).abs() < 1e-15));
    }

    #[test]
    fn four_column_weights_are_verbatim() {
        let r = parse("# comment\n\n1 0 0 6.5\n").unwrap();
        assert_eq!(r.weights(), &[6.5]);
    }

    #[test]
    fn validation_errors_name_the_line() {
        let e = parse("0 0 1\n0 0 0.5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse("1 0 0 -1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse("1 0 zero\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse("1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse("1 0 0\n0 1 0 1.0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn nearly_unit_points_are_renormalized() {
        let r = parse("0 0 1.0000001\n").unwrap();
        assert_eq!(r.points()[0].z, 1.0);
    }
}
