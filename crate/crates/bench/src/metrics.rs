//! Tracking-error statistics.

use crate::{BenchError, Result};

/// Root mean square of `e` (m) over samples with `t ≥ window_start`, in µm.
pub fn rms<I>(samples: I, window_start: f64) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut n = 0usize;
    let mut acc = 0.0;
    for (t, e) in samples {
        if t >= window_start {
            acc += e * e;
            n += 1;
        }
    }
    if n == 0 {
        return Err(BenchError::EmptyWindow(window_start));
    }
    Ok((acc / n as f64).sqrt() * 1e6)
}

/// Largest `|e|` (m) over samples with `t ≥ window_start`, in µm.
pub fn peak<I>(samples: I, window_start: f64) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut seen = false;
    let mut m = 0.0f64;
    for (t, e) in samples {
        if t >= window_start {
            m = m.max(e.abs());
            seen = true;
        }
    }
    if seen {
        Ok(m * 1e6)
    } else {
        Err(BenchError::EmptyWindow(window_start))
    }
}
