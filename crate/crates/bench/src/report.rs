//! Per-run records and the Table-1-style summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use stage_ctl_core::controllers::GainCheck;
use stage_ctl_core::sim::{Fault, MonitorReport};

use crate::{BenchError, Result};

/// Decimal places for µm figures in the summary.
pub const UM_DECIMALS: usize = 6;

/// Outcome of one (controller, case, seed) episode.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Display name of the controller.
    pub controller: String,
    /// Case name.
    pub case: String,
    /// Noise seed.
    pub seed: u64,
    /// RMS error after the transient (µm); `None` if the window is empty.
    pub rms_um: Option<f64>,
    /// Peak error after the transient (µm).
    pub peak_um: Option<f64>,
    /// Start of the metric window (s).
    pub window_start: f64,
    /// Ticks with the current limit active.
    pub saturated: usize,
    /// Ticks with a clamped network weight.
    pub clamped: usize,
    /// Numeric fault, if the run stopped early.
    pub fault: Option<Fault>,
    /// Gain conditions for super-twisting controllers.
    pub gain_check: Option<GainCheck>,
    /// Convergence-region statistics for super-twisting controllers.
    pub monitor: Option<MonitorReport>,
    /// Trace file written for this run.
    pub trace_file: PathBuf,
}

/// All runs of a benchmark, sorted by (controller, case, seed).
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Controller display names in row order.
    pub controllers: Vec<String>,
    /// Case names in column order.
    pub cases: Vec<String>,
    /// Seeds in row order.
    pub seeds: Vec<u64>,
    /// One record per episode.
    pub records: Vec<RunRecord>,
}

/// Rounds to the printed precision so derived columns match what is shown.
fn printed(v: f64) -> f64 {
    format!("{v:.UM_DECIMALS$}").parse().unwrap_or(f64::NAN)
}

fn um(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.UM_DECIMALS$}"),
        None => "NaN".into(),
    }
}

impl RunReport {
    /// Record for a cell, if present.
    pub fn get(&self, controller: &str, case: &str, seed: u64) -> Option<&RunRecord> {
        self.records
            .iter()
            .find(|r| r.controller == controller && r.case == case && r.seed == seed)
    }

    /// True if any episode stopped on a numeric fault.
    pub fn any_fault(&self) -> bool {
        self.records.iter().any(|r| r.fault.is_some())
    }

    /// Second case minus first, from the printed RMS values.
    pub fn difference(&self, controller: &str, seed: u64) -> Option<f64> {
        if self.cases.len() < 2 {
            return None;
        }
        let a = self.get(controller, &self.cases[0], seed)?.rms_um?;
        let b = self.get(controller, &self.cases[1], seed)?.rms_um?;
        Some(printed(printed(b) - printed(a)))
    }

    fn gain_check_of(&self, controller: &str) -> Option<GainCheck> {
        self.records
            .iter()
            .find(|r| r.controller == controller)
            .and_then(|r| r.gain_check)
    }

    /// Wide summary: one row per (controller, seed).
    pub fn summary_csv(&self) -> String {
        let mut header = vec!["controller".to_string(), "seed".to_string()];
        header.extend(self.cases.iter().map(|c| format!("{c}_rms_um")));
        if self.cases.len() >= 2 {
            header.push("difference_um".into());
        }
        for suffix in ["peak_um", "saturated", "clamped", "status"] {
            header.extend(self.cases.iter().map(|c| format!("{c}_{suffix}")));
        }
        header.push("gain_satisfied".into());

        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory csv");
        for name in &self.controllers {
            for &seed in &self.seeds {
                let cells: Vec<Option<&RunRecord>> =
                    self.cases.iter().map(|c| self.get(name, c, seed)).collect();
                let mut row = vec![name.clone(), seed.to_string()];
                row.extend(cells.iter().map(|r| um(r.and_then(|r| r.rms_um))));
                if self.cases.len() >= 2 {
                    row.push(um(self.difference(name, seed)));
                }
                row.extend(cells.iter().map(|r| um(r.and_then(|r| r.peak_um))));
                row.extend(
                    cells
                        .iter()
                        .map(|r| r.map_or("0".into(), |r| r.saturated.to_string())),
                );
                row.extend(
                    cells
                        .iter()
                        .map(|r| r.map_or("0".into(), |r| r.clamped.to_string())),
                );
                row.extend(
                    cells
                        .iter()
                        .map(|r| match r.and_then(|r| r.fault.as_ref()) {
                            Some(f) => format!("fault@{}", f.tick),
                            None => "ok".into(),
                        }),
                );
                row.push(match self.gain_check_of(name) {
                    Some(g) => g.satisfied.to_string(),
                    None => "n/a".into(),
                });
                w.write_record(&row).expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }

    /// Aligned text report with window, gain checks, monitor results and faults.
    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "RMS tracking error (um); the first scan stroke is excluded as transient"
        );
        for case in &self.cases {
            if let Some(r) = self.records.iter().find(|r| &r.case == case) {
                let _ = writeln!(s, "  window {case}: t >= {} s", r.window_start);
            }
        }
        s.push('\n');

        let w0 = self
            .controllers
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0)
            .max(10);
        let wc = self
            .cases
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0)
            .max(12);
        let mut head = format!("{:<w0$}  {:>6}", "Controller", "Seed");
        for c in &self.cases {
            let _ = write!(head, "  {c:>wc$}");
        }
        if self.cases.len() >= 2 {
            let _ = write!(head, "  {:>wc$}", "Difference");
        }
        let _ = writeln!(s, "{head}");
        for name in &self.controllers {
            for &seed in &self.seeds {
                let mut line = format!("{name:<w0$}  {seed:>6}");
                for c in &self.cases {
                    let _ = write!(
                        line,
                        "  {:>wc$}",
                        um(self.get(name, c, seed).and_then(|r| r.rms_um))
                    );
                }
                if self.cases.len() >= 2 {
                    let _ = write!(line, "  {:>wc$}", um(self.difference(name, seed)));
                }
                let _ = writeln!(s, "{line}");
            }
        }

        if self.seeds.len() > 1 {
            let _ = writeln!(s, "\nMean over {} seeds", self.seeds.len());
            let _ = writeln!(s, "{head}");
            for name in &self.controllers {
                let mut line = format!("{name:<w0$}  {:>6}", "all");
                let means: Vec<Option<f64>> = self
                    .cases
                    .iter()
                    .map(|c| {
                        let v: Option<Vec<f64>> = self
                            .seeds
                            .iter()
                            .map(|&k| self.get(name, c, k).and_then(|r| r.rms_um))
                            .collect();
                        v.map(|v| v.iter().sum::<f64>() / v.len() as f64)
                    })
                    .collect();
                for m in &means {
                    let _ = write!(line, "  {:>wc$}", um(*m));
                }
                if self.cases.len() >= 2 {
                    let d = match (means[0], means[1]) {
                        (Some(a), Some(b)) => Some(printed(printed(b) - printed(a))),
                        _ => None,
                    };
                    let _ = write!(line, "  {:>wc$}", um(d));
                }
                let _ = writeln!(s, "{line}");
            }
        }

        let _ = writeln!(s, "\nGain check (h1 >= h1_min, h2 = h2_required)");
        for name in &self.controllers {
            match self.gain_check_of(name) {
                Some(g) => {
                    let _ = writeln!(
                        s,
                        "  {name:<w0$}  h1_min={:.6} h2_required={:.6} satisfied={}",
                        g.h1_min, g.h2_required, g.satisfied
                    );
                }
                None => {
                    let _ = writeln!(s, "  {name:<w0$}  n/a");
                }
            }
        }

        let _ = writeln!(
            s,
            "\nConvergence region monitor (post-transient, empirical eps)"
        );
        for r in &self.records {
            if let Some(m) = &r.monitor {
                let pct = |x: f64| x * 100.0;
                let _ = writeln!(
                    s,
                    "  {:<w0$}  {:<wc$}  seed {:>4}: eps={:.6e} bound={:.6e} outside={}/{} ({:.3}%) V rising while outside={:.3}%",
                    r.controller,
                    r.case,
                    r.seed,
                    m.eps,
                    m.region_bound,
                    m.outside,
                    m.ticks,
                    pct(m.frac_outside_region_after_transient),
                    pct(m.frac_vquad_increase_while_outside)
                );
            }
        }

        let _ = writeln!(s, "\nSaturation / weight clamp ticks");
        for r in &self.records {
            let _ = writeln!(
                s,
                "  {:<w0$}  {:<wc$}  seed {:>4}: saturated={} clamped={}",
                r.controller, r.case, r.seed, r.saturated, r.clamped
            );
        }

        let faults: Vec<&RunRecord> = self.records.iter().filter(|r| r.fault.is_some()).collect();
        let _ = writeln!(s, "\nFaults: {}", faults.len());
        for r in faults {
            let f = r.fault.as_ref().expect("filtered");
            let _ = writeln!(
                s,
                "  {} {} seed {}: tick {} t={} s: {}",
                r.controller, r.case, r.seed, f.tick, f.t, f.error
            );
        }
        s
    }

    /// Writes `summary.csv` and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        for (name, body) in [
            ("summary.csv", self.summary_csv()),
            ("summary.txt", self.summary_text()),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| BenchError::Write { path, source })?;
        }
        Ok(())
    }
}
