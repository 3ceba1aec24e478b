//! Fractional-order sliding surface with super-twisting reaching law.
//!
//! ```text
//! z    = ė + α1·D^{η−1}(sig^a(e)) + α2·e
//! u_eq = (r̈ − α1·D^η(sig^a(e)) − α2·ė − Ā·v) / B̄
//! u_st = −(h1/B̄)·Φ1(z) + ω/B̄,     ω̇ = −h2·Φ2(z)
//! u    = sat(u_eq + u_st + u_nn)
//! ```
//!
//! with `e = p − r`, `Φ1(z) = |z|^½·sgn(z)` and `Φ2(z) = ½·sgn(z)`. The
//! composed operator `D(D^{η−1}(·))` is realized as one order-η evaluator.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::rbf::{u_nn, RbfNetwork};
use super::{
    ControlDecomposition, Controller, LumpedOracle, Measurement, TickOutput, DEFAULT_CURRENT_LIMIT,
};
use crate::fracops::{sig_pow, FracEvaluator, FracOrder, SigPower, DEFAULT_MEMORY};
use crate::math::{abs, sgn, sqrt};
use crate::plant::PlantParams;
use crate::trajgen::RefSample;
use crate::{Error, Result};

/// `|z|^½·sgn(z)`.
pub fn phi1(z: f64) -> f64 {
    sgn(z) * sqrt(abs(z))
}

/// `½·sgn(z)`.
pub fn phi2(z: f64) -> f64 {
    0.5 * sgn(z)
}

/// Sliding-surface, reaching-law and adaptation gains.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FostaGains {
    /// Weight of the fractional term in the surface.
    pub alpha1: f64,
    /// Weight of the proportional term in the surface (1/s).
    pub alpha2: f64,
    /// Fractional order, `0 < η < 1`.
    pub eta: f64,
    /// Exponent of `sig^a`, `0 < a ≤ 1`.
    pub a_exp: f64,
    /// Proportional super-twisting gain.
    pub h1: f64,
    /// Integral super-twisting gain.
    pub h2: f64,
    /// Adaptation gain ρ; also fixes the Lyapunov weighting.
    pub rho: f64,
}

impl FostaGains {
    /// The values reported for the hardware experiment.
    pub fn hardware() -> Self {
        FostaGains {
            alpha1: 0.001,
            alpha2: 175.0,
            eta: 0.5,
            a_exp: 0.5,
            h1: 500.0,
            h2: 30.0,
            rho: 0.2,
        }
    }

    /// Checks the documented ranges.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha1 > 0.0) || !self.alpha1.is_finite() {
            return Err(Error::param("alpha1", self.alpha1));
        }
        if !(self.alpha2 > 0.0) || !self.alpha2.is_finite() {
            return Err(Error::param("alpha2", self.alpha2));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param("eta", self.eta));
        }
        SigPower::new(self.a_exp)?;
        if !(self.h1 > 0.0) || !self.h1.is_finite() {
            return Err(Error::param("h1", self.h1));
        }
        if !(self.h2 > 0.0) || !self.h2.is_finite() {
            return Err(Error::param("h2", self.h2));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::param("rho", self.rho));
        }
        Ok(())
    }
}

/// Default `h1`, picked by a grid search on the simulated Case 1 scan.
pub const DEFAULT_H1: f64 = 15.0;

impl Default for FostaGains {
    /// Hardware `alpha`, `eta`, `a` and `rho`, with `h1 = DEFAULT_H1` and
    /// `h2` set to the gain-theorem value.
    fn default() -> Self {
        let base = FostaGains::hardware();
        FostaGains {
            h1: DEFAULT_H1,
            h2: super::gains::required_h2(base.rho, DEFAULT_H1),
            ..base
        }
    }
}

/// Super-twisting controller configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FostaConfig {
    /// Gains.
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub gains: FostaGains,
    /// Short-memory window of the fractional evaluators (samples).
    pub memory: usize,
    /// Floor on `|z|` inside `dΦ1/dz = 1/(2√|z|)`.
    pub z_floor: f64,
    /// Cutoff of the low-pass on the differenced `z` (Hz).
    pub zdot_cutoff_hz: f64,
    /// Current limit (A).
    pub u_limit: f64,
}

impl Default for FostaConfig {
    fn default() -> Self {
        FostaConfig {
            gains: FostaGains::default(),
            memory: DEFAULT_MEMORY,
            z_floor: 1e-6,
            zdot_cutoff_hz: 100.0,
            u_limit: DEFAULT_CURRENT_LIMIT,
        }
    }
}

/// Sliding variable and super-twisting integrator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlidingState {
    /// Sliding variable.
    pub z: f64,
    /// Integrator `ω = −h2·∫Φ2(z)dt`.
    pub omega: f64,
    /// Low-passed backward difference of `z`.
    pub z_dot_est: f64,
    /// Regularized `dΦ1/dz`.
    pub dphi1_dz: f64,
}

/// Controller-side quantities entering the lumped uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LumpedTerms {
    /// `r̈ − α1·D^η(sig^a(e)) − α2·ė`.
    pub q: f64,
    /// Measured velocity.
    pub v: f64,
    /// Super-twisting current this tick.
    pub u_st: f64,
}

/// Pushes `sig^a(e)` into the order-(η−1) evaluator and returns `z`.
pub fn sliding_z(e: f64, e_dot: f64, frac_int: &mut FracEvaluator, gains: &FostaGains) -> f64 {
    let s = sig_pow(e, gains.a_exp);
    e_dot + gains.alpha1 * frac_int.step_sample(s) + gains.alpha2 * e
}

fn equivalent_q(
    reference: &RefSample,
    e: f64,
    e_dot: f64,
    frac_der: &mut FracEvaluator,
    gains: &FostaGains,
) -> f64 {
    let s = sig_pow(e, gains.a_exp);
    reference.r_ddot - gains.alpha1 * frac_der.step_sample(s) - gains.alpha2 * e_dot
}

/// Pushes `sig^a(e)` into the order-η evaluator and returns `u_eq` (A).
pub fn u_equivalent(
    reference: &RefSample,
    e: f64,
    e_dot: f64,
    v: f64,
    frac_der: &mut FracEvaluator,
    nominal: &PlantParams,
    gains: &FostaGains,
) -> f64 {
    (equivalent_q(reference, e, e_dot, frac_der, gains) - nominal.a_nom * v) / nominal.b_nom
}

/// Returns `u_st` for the current `ss.z`, `ss.omega`, then advances `ω` by
/// one Euler step of `−h2·Φ2(z)`.
pub fn u_supertwist(ss: &mut SlidingState, gains: &FostaGains, b_nom: f64, h_ctrl: f64) -> f64 {
    let u = -(gains.h1 / b_nom) * phi1(ss.z) + ss.omega / b_nom;
    ss.omega += -gains.h2 * phi2(ss.z) * h_ctrl;
    u
}

/// How the lumped uncertainty is compensated.
#[derive(Debug, Clone)]
pub enum Compensation {
    /// Plain FOSTA.
    None,
    /// Adaptive RBF estimate (ANN-FSA).
    Network(RbfNetwork),
    /// Oracle value supplied by the simulator.
    Oracle,
}

/// FOSTA / ANN-FSA controller state machine.
#[derive(Debug, Clone)]
pub struct SuperTwisting {
    cfg: FostaConfig,
    a_nom: f64,
    b_nom: f64,
    dt: f64,
    lp_gain: f64,
    integral: FracEvaluator,
    derivative: FracEvaluator,
    state: SlidingState,
    z_prev: f64,
    comp: Compensation,
    activations: Vec<f64>,
}

impl SuperTwisting {
    /// Builds the controller for nominal model `nominal` at tick `h_ctrl`.
    pub fn new(
        cfg: &FostaConfig,
        nominal: &PlantParams,
        h_ctrl: f64,
        comp: Compensation,
    ) -> Result<Self> {
        cfg.gains.validate()?;
        if !(h_ctrl > 0.0) {
            return Err(Error::param("h_ctrl", h_ctrl));
        }
        if !(cfg.z_floor > 0.0) {
            return Err(Error::param("z_floor", cfg.z_floor));
        }
        if !(cfg.zdot_cutoff_hz > 0.0) {
            return Err(Error::param("zdot_cutoff_hz", cfg.zdot_cutoff_hz));
        }
        if !(cfg.u_limit > 0.0) {
            return Err(Error::param("u_limit", cfg.u_limit));
        }
        if nominal.b_nom == 0.0 {
            return Err(Error::param("b_nom", 0.0));
        }
        let eta = cfg.gains.eta;
        let integral = FracEvaluator::new(FracOrder::new(eta - 1.0)?, h_ctrl, cfg.memory)?;
        let derivative = FracEvaluator::new(FracOrder::new(eta)?, h_ctrl, cfg.memory)?;
        let tau = 1.0 / (2.0 * PI * cfg.zdot_cutoff_hz);
        let nodes = match &comp {
            Compensation::Network(n) => n.nodes(),
            _ => 0,
        };
        Ok(SuperTwisting {
            cfg: *cfg,
            a_nom: nominal.a_nom,
            b_nom: nominal.b_nom,
            dt: h_ctrl,
            lp_gain: h_ctrl / (h_ctrl + tau),
            integral,
            derivative,
            state: SlidingState::default(),
            z_prev: 0.0,
            comp,
            activations: vec![0.0; nodes],
        })
    }

    /// Current sliding state.
    pub fn state(&self) -> &SlidingState {
        &self.state
    }

    /// The network, for ANN-FSA.
    pub fn network(&self) -> Option<&RbfNetwork> {
        match &self.comp {
            Compensation::Network(n) => Some(n),
            _ => None,
        }
    }

    /// Configuration in use.
    pub fn config(&self) -> &FostaConfig {
        &self.cfg
    }
}

impl Controller for SuperTwisting {
    fn update(
        &mut self,
        reference: &RefSample,
        meas: &Measurement,
        oracle: Option<&dyn LumpedOracle>,
    ) -> TickOutput {
        let g = self.cfg.gains;
        let e = meas.p - reference.r;
        let e_dot = meas.v - reference.r_dot;

        let z = sliding_z(e, e_dot, &mut self.integral, &g);
        let q = equivalent_q(reference, e, e_dot, &mut self.derivative, &g);
        let u_eq = (q - self.a_nom * meas.v) / self.b_nom;

        let raw_rate = (z - self.z_prev) / self.dt;
        self.z_prev = z;
        let st = &mut self.state;
        st.z = z;
        st.z_dot_est += self.lp_gain * (raw_rate - st.z_dot_est);
        st.dphi1_dz = 1.0 / (2.0 * sqrt(f64::max(abs(z), self.cfg.z_floor)));

        let omega = st.omega;
        let u_st = u_supertwist(st, &g, self.b_nom, self.dt);

        let terms = LumpedTerms { q, v: meas.v, u_st };
        let f_true = oracle.map_or(0.0, |o| o.lumped(&terms));

        let mut clamped = false;
        let f_hat = match &mut self.comp {
            Compensation::None => 0.0,
            Compensation::Oracle => f_true,
            Compensation::Network(net) => {
                net.activations_into([z, st.z_dot_est], &mut self.activations);
                let f_hat = net.output(&self.activations);
                clamped = net.adapt(
                    phi2(z),
                    st.dphi1_dz,
                    omega,
                    &self.activations,
                    g.rho,
                    self.dt,
                );
                f_hat
            }
        };
        let u_comp = match self.comp {
            Compensation::None => 0.0,
            _ => u_nn(f_hat, self.b_nom),
        };
        let control = ControlDecomposition::compose(u_eq, u_st, u_comp, self.cfg.u_limit);
        TickOutput {
            control,
            z,
            omega,
            f_hat,
            f_true,
            clamped,
        }
    }

    fn reset(&mut self) {
        self.integral.reset();
        self.derivative.reset();
        self.state = SlidingState::default();
        self.z_prev = 0.0;
        if let Compensation::Network(n) = &mut self.comp {
            n.reset();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllers::RbfConfig;
    use proptest::prelude::*;

    fn ev(order: f64) -> FracEvaluator {
        FracEvaluator::new(FracOrder::new(order).unwrap(), 1e-3, 100).unwrap()
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi1(4.0), 2.0);
        assert_eq!(phi1(-9.0), -3.0);
        assert_eq!(phi1(0.0), 0.0);
        assert_eq!(phi2(0.0), 0.0);
        assert_eq!(phi2(1e-9), 0.5);
        assert_eq!(phi2(-3.0), -0.5);
    }

    #[test]
    fn surface_at_rest() {
        let g = FostaGains::hardware();
        assert_eq!(sliding_z(0.0, 0.0, &mut ev(g.eta - 1.0), &g), 0.0);
    }

    #[test]
    fn surface_proportional_part() {
        let g = FostaGains {
            alpha1: 0.0,
            ..FostaGains::hardware()
        };
        let z = sliding_z(1e-5, 0.0, &mut ev(-0.5), &g);
        assert!((z - 1.75e-3).abs() < 1e-15);
    }

    #[test]
    fn surface_first_sample_single_term() {
        let g = FostaGains::hardware();
        let (e, e_dot, h) = (2e-5, 3e-4, 1e-3);
        let z = sliding_z(e, e_dot, &mut ev(g.eta - 1.0), &g);
        let expect = e_dot + g.alpha1 * libm::sqrt(h) * libm::sqrt(e) + g.alpha2 * e;
        assert!((z - expect).abs() < 1e-15);
    }

    #[test]
    fn equivalent_control_values() {
        let g = FostaGains::hardware();
        let nominal = PlantParams::nominal();
        let rest = RefSample::default();
        assert_eq!(
            u_equivalent(&rest, 0.0, 0.0, 0.0, &mut ev(g.eta), &nominal, &g),
            0.0
        );
        let accel = RefSample {
            r_ddot: 1.0,
            ..RefSample::default()
        };
        let u = u_equivalent(&accel, 0.0, 0.0, 0.0, &mut ev(g.eta), &nominal, &g);
        assert!((u - 0.25559758715877723).abs() < 1e-12);
        let u = u_equivalent(&rest, 0.0, 0.0, 0.032, &mut ev(g.eta), &nominal, &g);
        assert!((u - 0.008931602085676312).abs() < 1e-12);
    }

    #[test]
    fn supertwist_values() {
        let g = FostaGains::hardware();
        let mut ss = SlidingState::default();
        assert_eq!(u_supertwist(&mut ss, &g, 3.9124, 1e-3), 0.0);
        assert_eq!(ss.omega, 0.0);

        let mut ss = SlidingState {
            z: 4e-6,
            ..SlidingState::default()
        };
        let u = u_supertwist(&mut ss, &g, 3.9124, 1e-3);
        assert!((u + 0.25559758715877723).abs() < 1e-12);
        assert!((ss.omega + 0.015).abs() < 1e-15);
    }

    #[test]
    fn zero_error_is_quiet() {
        let nominal = PlantParams::nominal();
        let mut c = SuperTwisting::new(
            &FostaConfig::default(),
            &nominal,
            1e-3,
            Compensation::Network(RbfNetwork::new(&RbfConfig::default()).unwrap()),
        )
        .unwrap();
        for k in 0..50 {
            let r = RefSample {
                t: k as f64 * 1e-3,
                ..RefSample::default()
            };
            let out = c.update(
                &r,
                &Measurement {
                    t: r.t,
                    p: 0.0,
                    v: 0.0,
                },
                None,
            );
            assert_eq!(out.control.u_total, 0.0);
            assert_eq!(out.z, 0.0);
        }
        assert!(c.network().unwrap().weights().iter().all(|&w| w == 0.0));
    }

    #[test]
    fn reset_restores_fresh_behavior() {
        let nominal = PlantParams::nominal();
        let cfg = FostaConfig::default();
        let comp = || Compensation::Network(RbfNetwork::new(&RbfConfig::default()).unwrap());
        let mut a = SuperTwisting::new(&cfg, &nominal, 1e-3, comp()).unwrap();
        let mut b = SuperTwisting::new(&cfg, &nominal, 1e-3, comp()).unwrap();
        let drive = |c: &mut SuperTwisting, k: usize| {
            let r = RefSample {
                r: 1e-5 * k as f64,
                r_dot: 1e-2,
                r_ddot: 0.0,
                t: k as f64 * 1e-3,
            };
            c.update(
                &r,
                &Measurement {
                    t: r.t,
                    p: 0.0,
                    v: 0.0,
                },
                None,
            )
        };
        for k in 0..30 {
            drive(&mut a, k);
        }
        a.reset();
        for k in 0..30 {
            assert_eq!(drive(&mut a, k), drive(&mut b, k));
        }
    }

    #[test]
    fn gains_validation() {
        assert!(FostaGains::hardware().validate().is_ok());
        assert!(FostaGains {
            eta: 1.0,
            ..FostaGains::hardware()
        }
        .validate()
        .is_err());
        assert!(FostaGains {
            a_exp: 0.0,
            ..FostaGains::hardware()
        }
        .validate()
        .is_err());
        assert!(FostaGains {
            h2: 0.0,
            ..FostaGains::hardware()
        }
        .validate()
        .is_err());
        assert!(FostaGains {
            rho: -0.2,
            ..FostaGains::hardware()
        }
        .validate()
        .is_err());
    }

    proptest! {
        #[test]
        fn phis_are_odd(x in -1e9f64..1e9) {
            prop_assert_eq!(phi1(-x), -phi1(x));
            prop_assert_eq!(phi2(-x), -phi2(x));
        }
    }
}
