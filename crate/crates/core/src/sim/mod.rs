//! Fixed-step closed-loop episodes: reference → controller → plant.
//!
//! Each control tick samples the reference and the (optionally noisy)
//! measurement, evaluates the controller once and holds its current over
//! `h_ctrl / h_phys` RK4 substeps of the true plant.

mod monitor;
mod oracle;

pub use monitor::{empirical_eps, lyapunov_quad, monitor, MonitorReport};
pub use oracle::{f_oracle, OracleForm};

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::controllers::{gain_check, phi1, ControllerConfig, GainCheck, LumpedTerms, Measurement};
use crate::math::{abs, floor, round};
use crate::plant::{self, DisturbanceSpec, PlantParams, PlantState};
use crate::trajgen::ScanProfile;
use crate::{Error, Result};

/// Episode configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SimConfig {
    /// Control period (s).
    pub h_ctrl: f64,
    /// Plant integration step (s); must divide `h_ctrl`.
    pub h_phys: f64,
    /// Simulated time (s); `None` runs the whole reference profile.
    pub duration: Option<f64>,
    /// Seed for measurement noise.
    pub seed: u64,
    /// Controller under test.
    pub controller: ControllerConfig,
    /// True plant; its nominal fields are what the controller sees.
    pub plant: PlantParams,
    /// External disturbance.
    pub dist: DisturbanceSpec,
    /// Scan reference.
    pub profile: ScanProfile,
    /// Standard deviation of additive position-measurement noise (m).
    pub noise_std: f64,
    /// Closed form used for the logged `f_true` and for oracle compensation.
    pub oracle_form: OracleForm,
    /// Start of the post-transient window; `None` uses one scan stroke.
    pub transient_cutoff: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            h_ctrl: 1e-3,
            h_phys: 1e-4,
            duration: None,
            seed: 0,
            controller: ControllerConfig::ann_fsa(),
            plant: PlantParams::default(),
            dist: DisturbanceSpec::None,
            profile: ScanProfile::default(),
            noise_std: 0.0,
            oracle_form: OracleForm::AsPrinted,
            transient_cutoff: None,
        }
    }
}

impl SimConfig {
    /// Simulated time actually used.
    pub fn effective_duration(&self) -> f64 {
        self.duration.unwrap_or_else(|| self.profile.duration())
    }

    /// Post-transient window start.
    pub fn effective_cutoff(&self) -> f64 {
        self.transient_cutoff
            .unwrap_or_else(|| self.profile.stroke_duration())
    }

    /// Number of physics substeps per control tick.
    pub fn substeps(&self) -> Result<usize> {
        if !(self.h_ctrl > 0.0) || !self.h_ctrl.is_finite() {
            return Err(Error::param("h_ctrl", self.h_ctrl));
        }
        if !(self.h_phys > 0.0) || self.h_phys > self.h_ctrl {
            return Err(Error::param("h_phys", self.h_phys));
        }
        let ratio = self.h_ctrl / self.h_phys;
        let n = round(ratio);
        if abs(ratio - n) > 1e-9 * n {
            return Err(Error::param("h_phys", self.h_phys));
        }
        Ok(n as usize)
    }

    /// Number of control ticks, `floor(duration / h_ctrl)`.
    pub fn ticks(&self) -> usize {
        // tolerate representation error in e.g. 2.764 / 0.001
        floor(self.effective_duration() / self.h_ctrl + 1e-9) as usize
    }

    /// Validates every component.
    pub fn validate(&self) -> Result<()> {
        self.substeps()?;
        let d = self.effective_duration();
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::param("duration", d));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(Error::param("noise_std", self.noise_std));
        }
        self.plant.validate()?;
        self.dist.validate()?;
        self.profile.validate()
    }
}

/// One control tick of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceRow {
    /// Tick time (s).
    pub t: f64,
    /// Reference position (m).
    pub r: f64,
    /// True position (m).
    pub p: f64,
    /// True velocity (m/s).
    pub v: f64,
    /// Tracking error `p − r` (m).
    pub e: f64,
    /// Sliding variable.
    pub z: f64,
    /// Super-twisting integrator.
    pub omega: f64,
    /// Equivalent control (A).
    pub u_eq: f64,
    /// Super-twisting / feedback control (A).
    pub u_st: f64,
    /// Compensation control (A).
    pub u_nn: f64,
    /// Applied current (A).
    pub u_total: f64,
    /// Oracle lumped uncertainty.
    pub f_true: f64,
    /// Compensator estimate.
    pub f_hat: f64,
    /// `χᵀPχ`.
    pub v_quad: f64,
    /// `|Φ1(z)|` above the region bound computed from this run.
    pub region_flag: bool,
    /// Current limit active.
    pub sat_flag: bool,
    /// Weight clamp active.
    pub clamp_flag: bool,
}

/// Column names of [`TraceRow`], in field order.
pub const TRACE_COLUMNS: [&str; 17] = [
    "t",
    "r",
    "p",
    "v",
    "e",
    "z",
    "omega",
    "u_eq",
    "u_st",
    "u_nn",
    "u_total",
    "f_true",
    "f_hat",
    "v_quad",
    "region_flag",
    "sat_flag",
    "clamp_flag",
];

impl TraceRow {
    /// Numeric fields in [`TRACE_COLUMNS`] order; flags as 0/1.
    pub fn values(&self) -> [f64; 17] {
        let b = |x: bool| if x { 1.0 } else { 0.0 };
        [
            self.t,
            self.r,
            self.p,
            self.v,
            self.e,
            self.z,
            self.omega,
            self.u_eq,
            self.u_st,
            self.u_nn,
            self.u_total,
            self.f_true,
            self.f_hat,
            self.v_quad,
            b(self.region_flag),
            b(self.sat_flag),
            b(self.clamp_flag),
        ]
    }
}

/// Why an episode stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Fault {
    /// Tick at which the fault occurred.
    pub tick: usize,
    /// Time of that tick (s).
    pub t: f64,
    /// Cause.
    pub error: Error,
}

/// Run-level facts recorded alongside the rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceMeta {
    /// Controller label.
    pub controller: &'static str,
    /// Gain conditions, for super-twisting controllers.
    pub gain_check: Option<GainCheck>,
    /// ρ of the super-twisting controller.
    pub rho: Option<f64>,
    /// h1 of the super-twisting controller.
    pub h1: Option<f64>,
    /// Control period (s).
    pub h_ctrl: f64,
    /// Post-transient window start (s).
    pub transient_cutoff: f64,
    /// `max |f_true − f_hat|` after the transient.
    pub eps_empirical: Option<f64>,
    /// Region bound used for `region_flag`.
    pub region_bound: Option<f64>,
}

/// Full per-tick log of an episode.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTrace {
    /// One row per control tick.
    pub rows: Vec<TraceRow>,
    /// Set when the run was truncated by a numeric fault.
    pub fault: Option<Fault>,
    /// Run metadata.
    pub meta: TraceMeta,
}

impl SimTrace {
    /// Number of ticks logged.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True if no tick was logged.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Ticks with the current limit active.
    pub fn saturation_count(&self) -> usize {
        self.rows.iter().filter(|r| r.sat_flag).count()
    }

    /// Ticks with a weight clamp event.
    pub fn clamp_count(&self) -> usize {
        self.rows.iter().filter(|r| r.clamp_flag).count()
    }
}

/// Runs one episode. Invalid configuration is an error; a numeric fault
/// truncates the trace and is recorded in [`SimTrace::fault`].
pub fn run_episode(cfg: &SimConfig) -> Result<SimTrace> {
    cfg.validate()?;
    let substeps = cfg.substeps()?;
    let ticks = cfg.ticks();
    let mut controller = cfg.controller.build(&cfg.plant, cfg.h_ctrl)?;

    let fosta = cfg.controller.fosta().map(|f| f.gains);
    let mut meta = TraceMeta {
        controller: cfg.controller.label(),
        gain_check: match fosta {
            Some(g) => Some(gain_check(g.rho, g.h1, g.h2)?),
            None => None,
        },
        rho: fosta.map(|g| g.rho),
        h1: fosta.map(|g| g.h1),
        h_ctrl: cfg.h_ctrl,
        transient_cutoff: cfg.effective_cutoff(),
        ..TraceMeta::default()
    };

    let mut noise = if cfg.noise_std > 0.0 {
        let normal = Normal::new(0.0, cfg.noise_std)
            .map_err(|_| Error::param("noise_std", cfg.noise_std))?;
        Some((ChaCha8Rng::seed_from_u64(cfg.seed), normal))
    } else {
        None
    };

    let mut rows = Vec::with_capacity(ticks);
    let mut fault = None;
    let mut state = PlantState::rest();

    for k in 0..ticks {
        let t = k as f64 * cfg.h_ctrl;
        state.t = t;
        let reference = cfg.profile.ref_at(t);
        let p_meas = match &mut noise {
            Some((rng, normal)) => state.p + normal.sample(rng),
            None => state.p,
        };
        let meas = Measurement {
            t,
            p: p_meas,
            v: state.v,
        };

        let d_total = plant::sample_disturbance(&cfg.dist, t)
            + cfg.plant.internal_disturbance(state.p, state.v);
        let plant_true = cfg.plant;
        let form = cfg.oracle_form;
        let oracle = move |terms: &LumpedTerms| f_oracle(&plant_true, terms, d_total, form);
        let out = controller.update(&reference, &meas, Some(&oracle));
        let c = out.control;

        rows.push(TraceRow {
            t,
            r: reference.r,
            p: state.p,
            v: state.v,
            e: state.p - reference.r,
            z: out.z,
            omega: out.omega,
            u_eq: c.u_eq,
            u_st: c.u_st,
            u_nn: c.u_nn,
            u_total: c.u_total,
            f_true: out.f_true,
            f_hat: out.f_hat,
            v_quad: fosta.map_or(0.0, |g| lyapunov_quad(out.z, out.omega, g.rho)),
            region_flag: false,
            sat_flag: c.saturated,
            clamp_flag: out.clamped,
        });

        let mut next = state;
        let mut failed = None;
        for _ in 0..substeps {
            match plant::step(&cfg.plant, &next, c.u_total, &cfg.dist, cfg.h_phys) {
                Ok(s) => next = s,
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        if let Some(error) = failed {
            fault = Some(Fault { tick: k, t, error });
            break;
        }
        state = next;
    }

    let mut trace = SimTrace {
        rows,
        fault,
        meta: TraceMeta::default(),
    };
    if let (Some(g), false) = (fosta, trace.is_empty()) {
        if let Ok(eps) = empirical_eps(&trace, meta.transient_cutoff) {
            meta.eps_empirical = Some(eps);
            if let Ok(bound) = crate::controllers::convergence_bound(g.rho, g.h1, eps) {
                meta.region_bound = Some(bound);
                let cutoff = meta.transient_cutoff;
                for row in trace.rows.iter_mut().filter(|r| r.t >= cutoff) {
                    row.region_flag = abs(phi1(row.z)) > bound;
                }
            }
        }
    }
    trace.meta = meta;
    Ok(trace)
}
