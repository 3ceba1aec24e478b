//! Trace CSV: one header row naming every column, one row per control tick.

use std::path::Path;

use stage_ctl_core::sim::{SimTrace, TRACE_COLUMNS};

use crate::{BenchError, Result};

const FLAG_COLUMNS: usize = 3;

/// Writes `trace` with every real value at 17 significant digits.
pub fn write_trace(path: &Path, trace: &SimTrace) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| BenchError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(TRACE_COLUMNS)?;
    let reals = TRACE_COLUMNS.len() - FLAG_COLUMNS;
    let mut fields: Vec<String> = Vec::with_capacity(TRACE_COLUMNS.len());
    for row in &trace.rows {
        fields.clear();
        for (i, v) in row.values().iter().enumerate() {
            fields.push(if i < reals {
                format!("{v:.16e}")
            } else {
                format!("{}", *v as u8)
            });
        }
        w.write_record(&fields)?;
    }
    w.flush().map_err(|source| BenchError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Reads the named columns of a trace file.
pub fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| BenchError::Invalid(format!("no column {n}")))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Vec::new(); names.len()];
    for rec in r.records() {
        let rec = rec?;
        for (col, &i) in out.iter_mut().zip(&idx) {
            let v: f64 = rec[i]
                .parse()
                .map_err(|_| BenchError::Invalid(format!("bad number {:?}", &rec[i])))?;
            col.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stage_ctl_core::sim::{run_episode, SimConfig};

    #[test]
    fn values_round_trip_exactly() {
        let cfg = SimConfig {
            duration: Some(0.05),
            ..SimConfig::default()
        };
        let trace = run_episode(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_trace(&path, &trace).unwrap();
        let cols = read_columns(&path, &TRACE_COLUMNS).unwrap();
        assert_eq!(cols[0].len(), trace.len());
        for (k, row) in trace.rows.iter().enumerate() {
            for (c, v) in row.values().iter().enumerate() {
                assert_eq!(
                    cols[c][k].to_bits(),
                    v.to_bits(),
                    "column {}",
                    TRACE_COLUMNS[c]
                );
            }
        }
    }
}
