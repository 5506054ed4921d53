//! Comma-separated objective files: one point per row, `.` decimals and an
//! optional header row (any non-numeric first row).

use std::io::{Read, Write};

use crate::error::{KneeError, Result};
use crate::objective::TradeoffSet;

pub fn read_points<R: Read>(reader: R) -> Result<TradeoffSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (r, record) in rdr.records().enumerate() {
        let line = r + 1;
        let record = record.map_err(|e| KneeError::Parse {
            line,
            column: 1,
            message: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<std::result::Result<f64, _>> = record.iter().map(str::parse::<f64>).collect();
        if r == 0 && parsed.iter().any(|p| p.is_err()) {
            continue;
        }
        let mut row = Vec::with_capacity(parsed.len());
        for (c, p) in parsed.into_iter().enumerate() {
            match p {
                Ok(v) if v.is_finite() => row.push(v),
                Ok(_) => {
                    return Err(KneeError::Parse {
                        line,
                        column: c + 1,
                        message: "value is not finite".into(),
                    })
                }
                Err(_) => {
                    return Err(KneeError::Parse {
                        line,
                        column: c + 1,
                        message: format!("`{}` is not a number", &record[c]),
                    })
                }
            }
        }
        match width {
            Some(w) if w != row.len() => {
                return Err(KneeError::Parse {
                    line,
                    column: row.len().min(w) + 1,
                    message: format!("expected {w} fields, found {}", row.len()),
                })
            }
            _ => width = Some(row.len()),
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(KneeError::Parse {
            line: 1,
            column: 1,
            message: "no data rows".into(),
        });
    }
    TradeoffSet::new(&rows)
}

/// Writes rows with a `f1,...,fm` header. Values use the shortest decimal
/// form that reads back to the same number.
pub fn write_points<W: Write, R: AsRef<[f64]>>(writer: W, rows: &[R], dim: usize) -> Result<()> {
    let io = |e: csv::Error| KneeError::Io(e.to_string());
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record((1..=dim).map(|j| format!("f{j}"))).map_err(io)?;
    for row in rows {
        wtr.write_record(row.as_ref().iter().map(|v| v.to_string()))
            .map_err(io)?;
    }
    wtr.flush().map_err(|e| KneeError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        let a = read_points("f1,f2\n0,1\n0.2,0.2\n".as_bytes()).unwrap();
        let b = read_points("0,1\n0.2,0.2\n".as_bytes()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn reports_position_of_bad_values() {
        let e = read_points("0,1\n0.2,x\n".as_bytes()).unwrap_err();
        assert!(matches!(e, KneeError::Parse { line: 2, column: 2, .. }), "{e:?}");
        let e = read_points("0,1\n0.2\n".as_bytes()).unwrap_err();
        assert!(matches!(e, KneeError::Parse { line: 2, .. }), "{e:?}");
        let e = read_points("0,1\ninf,2\n".as_bytes()).unwrap_err();
        assert!(matches!(e, KneeError::Parse { line: 2, column: 1, .. }), "{e:?}");
        assert!(read_points("".as_bytes()).is_err());
        assert!(read_points("f1,f2\n".as_bytes()).is_err());
    }

    #[test]
    fn round_trip() {
        let rows = vec![vec![0.1, 1.0 / 3.0], vec![-0.0, 8.5e-9]];
        let mut buf = Vec::new();
        write_points(&mut buf, &rows, 2).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("f1,f2\n0.1,0.3333333333333333\n"));
        let back = read_points(buf.as_slice()).unwrap();
        assert_eq!(back.to_rows(), rows);
    }
}
