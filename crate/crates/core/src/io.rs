//! Matrix JSON, JSON output with 17 significant digits, and the scan CSV.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::g2::Matrix7;
use crate::locus::ScanRow;

/// `{"rows": [[f64; 7]; 7]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Vec<f64>>,
}

impl From<&Matrix7> for MatrixJson {
    fn from(m: &Matrix7) -> Self {
        MatrixJson {
            rows: (0..7).map(|r| (0..7).map(|c| m[(r, c)]).collect()).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for Matrix7 {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Matrix7> {
        if j.rows.len() != 7 {
            return Err(Error::MatrixFormat(format!("expected 7 rows, found {}", j.rows.len())));
        }
        let mut m = Matrix7::zeros();
        for (r, row) in j.rows.iter().enumerate() {
            if row.len() != 7 {
                return Err(Error::MatrixFormat(format!(
                    "row {} has {} entries, expected 7",
                    r + 1,
                    row.len()
                )));
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::MatrixFormat(format!(
                        "entry ({}, {}) is not finite",
                        r + 1,
                        c + 1
                    )));
                }
                m[(r, c)] = *v;
            }
        }
        Ok(m)
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix7> {
    let j: MatrixJson = serde_json::from_str(text)?;
    Matrix7::try_from(&j)
}

pub fn matrix_value(m: &Matrix7) -> Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix serializes")
}

/// A float in scientific notation with 17 significant digits; non-finite
/// values become `null`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// Compact JSON with every float at 17 significant digits, newline-terminated.
pub fn to_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, &mut s);
    s.push('\n');
    s
}

pub fn to_json_of<T: Serialize>(v: &T) -> Result<String> {
    Ok(to_json(&serde_json::to_value(v)?))
}

pub const SCAN_HEADER: [&str; 6] = [
    "theta",
    "phi",
    "min_certificate",
    "solver_label",
    "theorem_label",
    "agree",
];

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io {
        path: "<csv>".into(),
        source: std::io::Error::other(e),
    };
    csv.write_record(SCAN_HEADER).map_err(io)?;
    for r in rows {
        csv.write_record([
            format_float(r.theta),
            format_float(r.phi),
            format_float(r.min_certificate),
            r.solver_label.to_string(),
            r.theorem_label.to_string(),
            r.agree.to_string(),
        ])
        .map_err(io)?;
    }
    csv.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e,
    })
}

/// Reads `path`, or standard input for `None` or `-`.
pub fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|source| Error::Io {
                path: "<stdin>".into(),
                source,
            })?;
            Ok(s)
        }
    }
}

/// Writes to `path`, or standard output for `None` or `-`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, bytes).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => std::io::stdout().write_all(bytes).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::{Label, SolverLabel};
    use serde_json::json;

    #[test]
    fn floats_carry_17_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-0.1), "-1.0000000000000001e-1");
        for v in [0.1, 1.0 / 3.0, 2.5e-300, -7.25e12, std::f64::consts::PI] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn json_walk_preserves_order_and_types() {
        let v = json!({"theta": 0.5, "n": 3, "neg": -2, "ok": true, "s": "a\"b", "xs": [1.5, null]});
        let s = to_json(&v);
        assert_eq!(
            s,
            "{\"theta\":5.0000000000000000e-1,\"n\":3,\"neg\":-2,\"ok\":true,\"s\":\"a\\\"b\",\"xs\":[1.5000000000000000e0,null]}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["theta"], json!(0.5));
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix7::from_fn(|r, c| (r * 7 + c) as f64 / 9.0);
        let s = to_json(&matrix_value(&m));
        assert_eq!(parse_matrix(&s).unwrap(), m);
        assert!(matches!(
            parse_matrix("{\"rows\":[[1,2]]}"),
            Err(Error::MatrixFormat(_))
        ));
        assert!(matches!(parse_matrix("{\"rows\":"), Err(Error::Json(_))));
    }

    #[test]
    fn csv_layout() {
        let rows = [ScanRow {
            theta: 0.0,
            phi: 0.25,
            min_certificate: 0.125,
            solver_label: SolverLabel::ZeroPlane,
            theorem_label: Label::ZeroPlane,
            agree: true,
        }];
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "theta,phi,min_certificate,solver_label,theorem_label,agree"
        );
        assert_eq!(
            lines.next().unwrap(),
            "0.0000000000000000e0,2.5000000000000000e-1,1.2500000000000000e-1,ZeroPlane,ZeroPlane,true"
        );
    }
}
