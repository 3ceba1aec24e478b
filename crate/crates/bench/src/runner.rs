//! Batch execution and grid tuning.

use std::cmp::Ordering;
use std::path::Path;

use rayon::prelude::*;
use stage_ctl_core::controllers::ControllerConfig;
use stage_ctl_core::sim::{monitor, run_episode, SimConfig, SimTrace};

use crate::config::{set_param, BenchSpec, CaseSpec, GridSpec};
use crate::metrics::{peak, rms};
use crate::report::{RunRecord, RunReport};
use crate::trace::write_trace;
use crate::{BenchError, Result};

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| BenchError::Invalid(format!("thread pool: {e}")))
}

fn table_rank(c: &ControllerConfig) -> u8 {
    match c {
        ControllerConfig::Pid(_) => 0,
        ControllerConfig::Smc(_) => 1,
        ControllerConfig::Fosta(_) => 2,
        ControllerConfig::AnnFsa { .. } => 3,
        ControllerConfig::Null => 4,
    }
}

/// Display names, in report row order, with the spec index of each.
fn controller_rows(controllers: &[ControllerConfig]) -> Vec<(usize, String)> {
    let mut order: Vec<usize> = (0..controllers.len()).collect();
    order.sort_by_key(|&i| (table_rank(&controllers[i]), i));
    let mut rows = Vec::with_capacity(order.len());
    for i in order {
        let label = controllers[i].label();
        let seen = rows
            .iter()
            .filter(|(j, _): &&(usize, String)| controllers[*j].label() == label)
            .count();
        let name = if seen == 0 {
            label.to_string()
        } else {
            format!("{label}-{}", seen + 1)
        };
        rows.push((i, name));
    }
    rows
}

/// RMS and peak error of a trace over its post-transient window.
pub fn trace_metrics(trace: &SimTrace, window_start: f64) -> (Option<f64>, Option<f64>) {
    let samples = || trace.rows.iter().map(|r| (r.t, r.e));
    (
        rms(samples(), window_start).ok(),
        peak(samples(), window_start).ok(),
    )
}

fn record(
    name: &str,
    case: &str,
    seed: u64,
    cfg: &SimConfig,
    trace: &SimTrace,
    file: &Path,
) -> RunRecord {
    let window_start = cfg.effective_cutoff();
    let (rms_um, peak_um) = trace_metrics(trace, window_start);
    let mon = match trace.meta.eps_empirical {
        Some(eps) if trace.fault.is_none() => monitor(trace, eps, window_start).ok(),
        _ => None,
    };
    RunRecord {
        controller: name.to_string(),
        case: case.to_string(),
        seed,
        rms_um,
        peak_um,
        window_start,
        saturated: trace.saturation_count(),
        clamped: trace.clamp_count(),
        fault: trace.fault.clone(),
        gain_check: trace.meta.gain_check,
        monitor: mon,
        trace_file: file.to_path_buf(),
    }
}

/// Sort key: report row, case column, seed.
type RunKey = (usize, usize, u64);

/// Runs every (controller, case, seed) episode, writes one trace CSV per
/// run under `output_dir/traces` plus `summary.csv` and `summary.txt`.
pub fn run_bench(spec: &BenchSpec) -> Result<RunReport> {
    spec.validate()?;
    let traces = spec.output_dir.join("traces");
    std::fs::create_dir_all(&traces).map_err(|source| BenchError::Write {
        path: traces.clone(),
        source,
    })?;

    let rows = controller_rows(&spec.controllers);
    let mut jobs = Vec::new();
    for (row, (ci, name)) in rows.iter().enumerate() {
        for (k, case) in spec.cases.iter().enumerate() {
            for &seed in &spec.seeds {
                let cfg = SimConfig {
                    controller: spec.controllers[*ci].clone(),
                    seed,
                    ..case.apply(&spec.base)
                };
                let file = traces.join(format!(
                    "{}_{}_seed{}.csv",
                    name.to_lowercase(),
                    case.name,
                    seed
                ));
                jobs.push(((row, k, seed), name.as_str(), case.name.as_str(), cfg, file));
            }
        }
    }

    let results: Vec<Result<(RunKey, RunRecord)>> = pool(spec.workers)?.install(|| {
        jobs.par_iter()
            .map(|(key, name, case, cfg, file)| {
                let trace = run_episode(cfg)?;
                write_trace(file, &trace)?;
                Ok((*key, record(name, case, key.2, cfg, &trace, file)))
            })
            .collect()
    });
    let mut keyed = results.into_iter().collect::<Result<Vec<_>>>()?;
    keyed.sort_by_key(|(key, _)| *key);

    let report = RunReport {
        controllers: rows.into_iter().map(|(_, n)| n).collect(),
        cases: spec.cases.iter().map(|c| c.name.clone()).collect(),
        seeds: spec.seeds.clone(),
        records: keyed.into_iter().map(|(_, r)| r).collect(),
    };
    report.write(&spec.output_dir)?;
    Ok(report)
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    /// Parameter values, sorted by name.
    pub params: Vec<(String, f64)>,
    /// Resulting controller.
    pub config: ControllerConfig,
    /// Case 1 RMS (µm); `None` if the run faulted.
    pub rms_um: Option<f64>,
    /// Case 1 peak (µm).
    pub peak_um: Option<f64>,
}

/// Grid search outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    /// Winning point.
    pub best: GridPoint,
    /// Every point in evaluation order.
    pub evaluated: Vec<GridPoint>,
}

impl TuneResult {
    /// Points excluded for faulting.
    pub fn faulted(&self) -> usize {
        self.evaluated.iter().filter(|p| p.rms_um.is_none()).count()
    }
}

fn rank(a: &GridPoint, b: &GridPoint) -> Ordering {
    let key = |p: &GridPoint| {
        (
            p.rms_um.unwrap_or(f64::INFINITY),
            p.peak_um.unwrap_or(f64::INFINITY),
        )
    };
    let (ra, pa) = key(a);
    let (rb, pb) = key(b);
    ra.total_cmp(&rb).then(pa.total_cmp(&pb)).then_with(|| {
        a.params
            .iter()
            .zip(&b.params)
            .map(|((_, x), (_, y))| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Exhaustive search over the cartesian product of `grid.params` applied
/// to `base`, scored by Case 1 RMS. Faulted runs are excluded; ties go to
/// the smaller peak error, then the lexicographically smaller parameters.
pub fn tune_grid(base: &ControllerConfig, grid: &GridSpec) -> Result<TuneResult> {
    let names: Vec<&String> = grid.params.keys().collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for name in &names {
        let values = &grid.params[*name];
        points = points
            .iter()
            .flat_map(|p| values.iter().map(move |v| [p.as_slice(), &[*v]].concat()))
            .collect();
    }
    let case1 = CaseSpec::case1().apply(&grid.base);
    let configs: Vec<(Vec<(String, f64)>, ControllerConfig)> = points
        .into_iter()
        .map(|vals| {
            let mut c = base.clone();
            for (n, v) in names.iter().zip(&vals) {
                c = set_param(&c, n, *v)?;
            }
            Ok((names.iter().map(|n| n.to_string()).zip(vals).collect(), c))
        })
        .collect::<Result<_>>()?;

    let evaluated: Vec<GridPoint> = pool(grid.workers)?.install(|| {
        configs
            .into_par_iter()
            .map(|(params, config)| {
                let cfg = SimConfig {
                    controller: config.clone(),
                    ..case1.clone()
                };
                let (rms_um, peak_um) = match run_episode(&cfg) {
                    Ok(trace) if trace.fault.is_none() => {
                        trace_metrics(&trace, cfg.effective_cutoff())
                    }
                    _ => (None, None),
                };
                GridPoint {
                    params,
                    config,
                    rms_um: rms_um.filter(|_| peak_um.is_some()),
                    peak_um,
                }
            })
            .collect()
    });
    let best = evaluated
        .iter()
        .filter(|p| p.rms_um.is_some())
        .min_by(|a, b| rank(a, b))
        .cloned()
        .ok_or(BenchError::NoViableConfig)?;
    Ok(TuneResult { best, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use stage_ctl_core::controllers::PidGains;

    #[test]
    fn rows_follow_table_layout() {
        let cs = vec![
            ControllerConfig::ann_fsa(),
            ControllerConfig::Pid(PidGains::default()),
            ControllerConfig::Pid(PidGains {
                kp: 1.0,
                ..PidGains::default()
            }),
        ];
        let names: Vec<String> = controller_rows(&cs).into_iter().map(|(_, n)| n).collect();
        assert_eq!(names, ["PID", "PID-2", "ANN-FSA"]);
    }

    fn point(rms: Option<f64>, peak: f64, p: f64) -> GridPoint {
        GridPoint {
            params: vec![("kp".into(), p)],
            config: ControllerConfig::Null,
            rms_um: rms,
            peak_um: Some(peak),
        }
    }

    #[test]
    fn ranking_breaks_ties_by_peak_then_params() {
        assert_eq!(
            rank(&point(Some(1.0), 5.0, 9.0), &point(Some(2.0), 1.0, 1.0)),
            Ordering::Less
        );
        assert_eq!(
            rank(&point(Some(1.0), 2.0, 9.0), &point(Some(1.0), 3.0, 1.0)),
            Ordering::Less
        );
        assert_eq!(
            rank(&point(Some(1.0), 2.0, 1.0), &point(Some(1.0), 2.0, 9.0)),
            Ordering::Less
        );
        assert_eq!(
            rank(&point(None, 0.0, 0.0), &point(Some(9.0), 9.0, 9.0)),
            Ordering::Greater
        );
    }
}
