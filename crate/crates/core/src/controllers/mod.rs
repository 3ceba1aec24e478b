//! Control laws: PID and boundary-layer SMC baselines, the fractional-order
//! super-twisting law and its RBF-compensated variant.
//!
//! Every controller is a single-owner state machine advanced once per
//! control tick through [`Controller::update`].

mod baseline;
mod gains;
pub mod rbf;
mod sliding;

pub use baseline::{Pid, PidGains, Smc, SmcGains};
pub use gains::{convergence_bound, gain_check, required_h2, GainCheck, H2_REL_TOL};
pub use rbf::{RbfConfig, RbfNetwork};
pub use sliding::{
    phi1, phi2, sliding_z, u_equivalent, u_supertwist, Compensation, FostaConfig, FostaGains,
    LumpedTerms, SlidingState, SuperTwisting, DEFAULT_H1,
};

use alloc::boxed::Box;

use crate::plant::PlantParams;
use crate::trajgen::RefSample;
use crate::Result;

/// Default actuator current limit (A).
pub const DEFAULT_CURRENT_LIMIT: f64 = 10.0;

/// Measured plant outputs at a control tick.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Measurement {
    /// Time (s).
    pub t: f64,
    /// Position (m).
    pub p: f64,
    /// Velocity (m/s).
    pub v: f64,
}

/// Control terms of one tick, in amperes.
///
/// For the baselines `u_eq` carries the model feedforward (zero for PID) and
/// `u_st` the feedback part.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlDecomposition {
    /// Equivalent (model-based) control.
    pub u_eq: f64,
    /// Super-twisting / feedback control.
    pub u_st: f64,
    /// Uncertainty compensation.
    pub u_nn: f64,
    /// Saturated sum actually applied.
    pub u_total: f64,
    /// True when the current limit clipped the sum.
    pub saturated: bool,
}

impl ControlDecomposition {
    /// Sums the terms and clips to `±limit`.
    pub fn compose(u_eq: f64, u_st: f64, u_nn: f64, limit: f64) -> Self {
        let raw = u_eq + u_st + u_nn;
        let u_total = raw.clamp(-limit, limit);
        ControlDecomposition {
            u_eq,
            u_st,
            u_nn,
            u_total,
            saturated: u_total != raw,
        }
    }
}

/// Everything a controller reports for one tick.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TickOutput {
    /// Applied control and its parts.
    pub control: ControlDecomposition,
    /// Sliding variable (SMC: its surface `s`; PID: 0).
    pub z: f64,
    /// Super-twisting integrator value used this tick.
    pub omega: f64,
    /// Compensator's uncertainty estimate.
    pub f_hat: f64,
    /// Lumped uncertainty from the oracle, when one was supplied.
    pub f_true: f64,
    /// True if a network weight hit its bound this tick.
    pub clamped: bool,
}

/// Source of the true lumped uncertainty, evaluated by whoever knows the
/// true plant.
pub trait LumpedOracle {
    /// `f` for the given controller-side terms.
    fn lumped(&self, terms: &LumpedTerms) -> f64;
}

impl<F: Fn(&LumpedTerms) -> f64> LumpedOracle for F {
    fn lumped(&self, terms: &LumpedTerms) -> f64 {
        self(terms)
    }
}

/// A discrete-time position controller.
pub trait Controller: Send {
    /// Advances one control tick.
    fn update(
        &mut self,
        reference: &RefSample,
        meas: &Measurement,
        oracle: Option<&dyn LumpedOracle>,
    ) -> TickOutput;

    /// Restores the freshly constructed state.
    fn reset(&mut self);
}

/// Controller selection with its gains.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum ControllerConfig {
    /// Zero output; open loop.
    Null,
    /// PID on `r − p`.
    Pid(PidGains),
    /// Boundary-layer sliding mode.
    Smc(SmcGains),
    /// Fractional-order super-twisting, no compensation.
    Fosta(FostaConfig),
    /// Fractional-order super-twisting with RBF compensation.
    AnnFsa {
        /// Sliding/super-twisting part.
        #[cfg_attr(feature = "serde", serde(flatten))]
        fosta: FostaConfig,
        /// Network geometry.
        #[cfg_attr(feature = "serde", serde(default))]
        rbf: RbfConfig,
        /// Replace the network output with the uncertainty oracle.
        #[cfg_attr(feature = "serde", serde(default))]
        use_oracle: bool,
    },
}

impl ControllerConfig {
    /// Short display label.
    pub fn label(&self) -> &'static str {
        match self {
            ControllerConfig::Null => "NULL",
            ControllerConfig::Pid(_) => "PID",
            ControllerConfig::Smc(_) => "SMC",
            ControllerConfig::Fosta(_) => "FOSTA",
            ControllerConfig::AnnFsa { .. } => "ANN-FSA",
        }
    }

    /// Default ANN-FSA configuration.
    pub fn ann_fsa() -> Self {
        ControllerConfig::AnnFsa {
            fosta: FostaConfig::default(),
            rbf: RbfConfig::default(),
            use_oracle: false,
        }
    }

    /// The four benchmarked controllers with default gains, in report order.
    pub fn benchmark_set() -> [ControllerConfig; 4] {
        [
            ControllerConfig::Pid(PidGains::default()),
            ControllerConfig::Smc(SmcGains::default()),
            ControllerConfig::Fosta(FostaConfig::default()),
            Self::ann_fsa(),
        ]
    }

    /// Super-twisting parameters, if this is a super-twisting controller.
    pub fn fosta(&self) -> Option<&FostaConfig> {
        match self {
            ControllerConfig::Fosta(f) | ControllerConfig::AnnFsa { fosta: f, .. } => Some(f),
            _ => None,
        }
    }

    /// Instantiates the controller for nominal plant `nominal` and tick `h_ctrl`.
    pub fn build(&self, nominal: &PlantParams, h_ctrl: f64) -> Result<Box<dyn Controller>> {
        Ok(match self {
            ControllerConfig::Null => Box::new(NullController),
            ControllerConfig::Pid(g) => Box::new(Pid::new(*g, h_ctrl)?),
            ControllerConfig::Smc(g) => Box::new(Smc::new(*g, nominal)?),
            ControllerConfig::Fosta(f) => {
                Box::new(SuperTwisting::new(f, nominal, h_ctrl, Compensation::None)?)
            }
            ControllerConfig::AnnFsa {
                fosta,
                rbf,
                use_oracle,
            } => {
                let comp = if *use_oracle {
                    Compensation::Oracle
                } else {
                    Compensation::Network(RbfNetwork::new(rbf)?)
                };
                Box::new(SuperTwisting::new(fosta, nominal, h_ctrl, comp)?)
            }
        })
    }
}

/// Always outputs zero current.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullController;

impl Controller for NullController {
    fn update(
        &mut self,
        _: &RefSample,
        _: &Measurement,
        _: Option<&dyn LumpedOracle>,
    ) -> TickOutput {
        TickOutput::default()
    }

    fn reset(&mut self) {}
}
