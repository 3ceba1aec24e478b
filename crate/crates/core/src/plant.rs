//! PMLSM wafer-stage axis:
//!
//! ```text
//! p̈ = Ā(1+δ_A)·ṗ + B̄(1+δ_B)·u + d
//! d = d_ext(t) + ripple_amp·sin(2π·p/ripple_period) − coulomb_amp·sgn(ṗ)
//! ```
//!
//! `u` is the motor current (A); `d` is the generalized disturbance in
//! acceleration units (m/s²). External disturbance amplitudes are therefore
//! given in m/s² as well.

use core::f64::consts::PI;

use crate::math::{abs, sgn, sin};
use crate::{Error, Result};

/// Identified nominal motor constants and the true deviations from them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PlantParams {
    /// Nominal viscous term Ā (1/s).
    pub a_nom: f64,
    /// Nominal force constant over mass B̄ (m/(s²·A)).
    pub b_nom: f64,
    /// Relative error δ_A of the true A.
    pub delta_a: f64,
    /// Relative error δ_B of the true B.
    pub delta_b: f64,
    /// Force-ripple amplitude (m/s²).
    pub ripple_amp: f64,
    /// Spatial period of the ripple (m).
    pub ripple_period: f64,
    /// Coulomb friction amplitude (m/s²).
    pub coulomb_amp: f64,
}

/// Identified nominal Ā of the stage (1/s).
pub const A_NOMINAL: f64 = -1.092;
/// Identified nominal B̄ of the stage (m/(s²·A)).
pub const B_NOMINAL: f64 = 3.9124;

impl Default for PlantParams {
    /// Nominal identification with the benchmark uncertainty and ripple on.
    fn default() -> Self {
        PlantParams {
            a_nom: A_NOMINAL,
            b_nom: B_NOMINAL,
            delta_a: 0.2,
            delta_b: -0.1,
            ripple_amp: 0.02,
            ripple_period: 0.01,
            coulomb_amp: 0.0,
        }
    }
}

impl PlantParams {
    /// The identified model with no uncertainty, ripple or friction.
    pub fn nominal() -> Self {
        PlantParams {
            delta_a: 0.0,
            delta_b: 0.0,
            ripple_amp: 0.0,
            coulomb_amp: 0.0,
            ..Self::default()
        }
    }

    /// True viscous term A = Ā(1+δ_A).
    pub fn a_true(&self) -> f64 {
        self.a_nom * (1.0 + self.delta_a)
    }

    /// True gain B = B̄(1+δ_B).
    pub fn b_true(&self) -> f64 {
        self.b_nom * (1.0 + self.delta_b)
    }

    /// Checks the documented parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("a_nom", self.a_nom),
            ("b_nom", self.b_nom),
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("ripple_amp", self.ripple_amp),
            ("ripple_period", self.ripple_period),
            ("coulomb_amp", self.coulomb_amp),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::param(name, v));
            }
        }
        if self.b_nom == 0.0 {
            return Err(Error::param("b_nom", self.b_nom));
        }
        if abs(self.delta_a) >= 1.0 {
            return Err(Error::param("delta_a", self.delta_a));
        }
        if abs(self.delta_b) >= 1.0 {
            return Err(Error::param("delta_b", self.delta_b));
        }
        if self.ripple_amp != 0.0 && !(self.ripple_period > 0.0) {
            return Err(Error::param("ripple_period", self.ripple_period));
        }
        if self.coulomb_amp < 0.0 {
            return Err(Error::param("coulomb_amp", self.coulomb_amp));
        }
        Ok(())
    }

    /// Internal disturbance (ripple and Coulomb) at a given state (m/s²).
    pub fn internal_disturbance(&self, p: f64, v: f64) -> f64 {
        let mut d = 0.0;
        if self.ripple_amp != 0.0 {
            d += self.ripple_amp * sin(2.0 * PI * p / self.ripple_period);
        }
        if self.coulomb_amp != 0.0 {
            d -= self.coulomb_amp * sgn(v);
        }
        d
    }
}

/// Position/velocity of the moving part at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlantState {
    /// Position (m).
    pub p: f64,
    /// Velocity (m/s).
    pub v: f64,
    /// Time (s).
    pub t: f64,
}

impl PlantState {
    /// At rest at the origin, `t = 0`.
    pub fn rest() -> Self {
        Self::default()
    }

    /// True if every field is finite.
    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.v.is_finite() && self.t.is_finite()
    }
}

/// External disturbance injected as a generalized acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum DisturbanceSpec {
    /// No external disturbance.
    #[default]
    None,
    /// `amplitude·sin(2π·frequency·t)`.
    Sinusoid {
        /// Amplitude (m/s²).
        amplitude: f64,
        /// Frequency (Hz).
        frequency: f64,
    },
}

impl DisturbanceSpec {
    /// Amplitude ≥ 0 and, for a sinusoid, frequency > 0.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DisturbanceSpec::None => Ok(()),
            DisturbanceSpec::Sinusoid {
                amplitude,
                frequency,
            } => {
                if !(amplitude >= 0.0) || !amplitude.is_finite() {
                    return Err(Error::param("amplitude", amplitude));
                }
                if !(frequency > 0.0) || !frequency.is_finite() {
                    return Err(Error::param("frequency", frequency));
                }
                Ok(())
            }
        }
    }
}

/// External disturbance value at time `t` (m/s²).
pub fn sample_disturbance(dist: &DisturbanceSpec, t: f64) -> f64 {
    match *dist {
        DisturbanceSpec::None => 0.0,
        DisturbanceSpec::Sinusoid {
            amplitude,
            frequency,
        } => amplitude * sin(2.0 * PI * frequency * t),
    }
}

/// Acceleration of the true plant for current `u` and external disturbance `d_ext`.
pub fn accel(params: &PlantParams, state: &PlantState, u: f64, d_ext: f64) -> f64 {
    params.a_true() * state.v
        + params.b_true() * u
        + d_ext
        + params.internal_disturbance(state.p, state.v)
}

/// Advances the plant by one RK4 step of length `h_phys` with `u` held.
///
/// A non-finite `u` is rejected and the caller keeps the previous state.
pub fn step(
    params: &PlantParams,
    state: &PlantState,
    u: f64,
    dist: &DisturbanceSpec,
    h_phys: f64,
) -> Result<PlantState> {
    if !u.is_finite() {
        return Err(Error::NonFinite("control input"));
    }
    let deriv = |p: f64, v: f64, t: f64| {
        let s = PlantState { p, v, t };
        (v, accel(params, &s, u, sample_disturbance(dist, t)))
    };
    let PlantState { p, v, t } = *state;
    let half = 0.5 * h_phys;
    let (k1p, k1v) = deriv(p, v, t);
    let (k2p, k2v) = deriv(p + half * k1p, v + half * k1v, t + half);
    let (k3p, k3v) = deriv(p + half * k2p, v + half * k2v, t + half);
    let (k4p, k4v) = deriv(p + h_phys * k3p, v + h_phys * k3v, t + h_phys);
    let next = PlantState {
        p: p + h_phys / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        v: v + h_phys / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        t: t + h_phys,
    };
    if !next.is_finite() {
        return Err(Error::NonFinite("plant state"));
    }
    Ok(next)
}
