//! Baseline controllers the super-twisting laws are compared against.

use super::{
    ControlDecomposition, Controller, LumpedOracle, Measurement, TickOutput, DEFAULT_CURRENT_LIMIT,
};
use crate::plant::PlantParams;
use crate::trajgen::RefSample;
use crate::{Error, Result};

/// PID gains, current output (A per m, A per m·s, A·s per m).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PidGains {
    /// Proportional gain.
    pub kp: f64,
    /// Integral gain.
    pub ki: f64,
    /// Derivative gain.
    pub kd: f64,
    /// Derivative filter coefficient (rad/s).
    pub n: f64,
    /// Current limit (A).
    pub u_limit: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        PidGains {
            kp: 4000.0,
            ki: 80000.0,
            kd: 40.0,
            n: 100.0,
            u_limit: DEFAULT_CURRENT_LIMIT,
        }
    }
}

/// Parallel PID on `e' = r − p` with a first-order filtered derivative
/// (backward Euler) and conditional-integration anti-windup.
#[derive(Debug, Clone)]
pub struct Pid {
    gains: PidGains,
    dt: f64,
    integral: f64,
    deriv: f64,
    prev_err: f64,
}

impl Pid {
    /// Validates gains (all ≥ 0, `n > 0`).
    pub fn new(gains: PidGains, dt: f64) -> Result<Self> {
        for (name, v) in [("kp", gains.kp), ("ki", gains.ki), ("kd", gains.kd)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, v));
            }
        }
        if !(gains.n > 0.0) {
            return Err(Error::param("n", gains.n));
        }
        if !(gains.u_limit > 0.0) {
            return Err(Error::param("u_limit", gains.u_limit));
        }
        if !(dt > 0.0) {
            return Err(Error::param("h_ctrl", dt));
        }
        Ok(Pid {
            gains,
            dt,
            integral: 0.0,
            deriv: 0.0,
            prev_err: 0.0,
        })
    }

    /// Control for error `e' = r − p`.
    pub fn step_error(&mut self, err: f64) -> ControlDecomposition {
        let g = &self.gains;
        self.deriv = (self.deriv + g.n * (err - self.prev_err)) / (1.0 + g.n * self.dt);
        self.prev_err = err;
        let candidate = self.integral + err * self.dt;
        let raw = g.kp * err + g.ki * candidate + g.kd * self.deriv;
        let out = ControlDecomposition::compose(0.0, raw, 0.0, g.u_limit);
        // hold the integrator while saturated in the direction the error pushes
        if !(out.saturated && err * raw > 0.0) {
            self.integral = candidate;
        }
        out
    }
}

impl Controller for Pid {
    fn update(
        &mut self,
        reference: &RefSample,
        meas: &Measurement,
        _: Option<&dyn LumpedOracle>,
    ) -> TickOutput {
        let control = self.step_error(reference.r - meas.p);
        TickOutput {
            control,
            ..TickOutput::default()
        }
    }

    fn reset(&mut self) {
        self.integral = 0.0;
        self.deriv = 0.0;
        self.prev_err = 0.0;
    }
}

/// Boundary-layer sliding mode gains.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SmcGains {
    /// Surface slope λ (1/s).
    pub lambda: f64,
    /// Switching gain (A).
    pub k_s: f64,
    /// Boundary-layer half width (m/s).
    pub phi: f64,
    /// Current limit (A).
    pub u_limit: f64,
}

impl Default for SmcGains {
    fn default() -> Self {
        SmcGains {
            lambda: 175.0,
            k_s: 2.0,
            phi: 1e-4,
            u_limit: DEFAULT_CURRENT_LIMIT,
        }
    }
}

/// `s = ė' + λe'`, `u = (r̈ − Āv + λė')/B̄ + k_s·sat(s/φ)` with `e' = r − p`.
#[derive(Debug, Clone)]
pub struct Smc {
    gains: SmcGains,
    a_nom: f64,
    b_nom: f64,
}

/// Unit saturation.
pub(crate) fn sat(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

impl Smc {
    /// Validates `λ > 0`, `k_s ≥ 0`, `φ > 0`.
    pub fn new(gains: SmcGains, nominal: &PlantParams) -> Result<Self> {
        if !(gains.lambda > 0.0) {
            return Err(Error::param("lambda", gains.lambda));
        }
        if !(gains.k_s >= 0.0) {
            return Err(Error::param("k_s", gains.k_s));
        }
        if !(gains.phi > 0.0) {
            return Err(Error::param("phi", gains.phi));
        }
        if !(gains.u_limit > 0.0) {
            return Err(Error::param("u_limit", gains.u_limit));
        }
        Ok(Smc {
            gains,
            a_nom: nominal.a_nom,
            b_nom: nominal.b_nom,
        })
    }

    /// Switching term `k_s·sat(s/φ)` alone.
    pub fn switching(&self, s: f64) -> f64 {
        self.gains.k_s * sat(s / self.gains.phi)
    }
}

impl Controller for Smc {
    fn update(
        &mut self,
        reference: &RefSample,
        meas: &Measurement,
        _: Option<&dyn LumpedOracle>,
    ) -> TickOutput {
        let g = &self.gains;
        let e = reference.r - meas.p;
        let e_dot = reference.r_dot - meas.v;
        let s = e_dot + g.lambda * e;
        let ff = (reference.r_ddot - self.a_nom * meas.v + g.lambda * e_dot) / self.b_nom;
        let control = ControlDecomposition::compose(ff, self.switching(s), 0.0, g.u_limit);
        TickOutput {
            control,
            z: s,
            ..TickOutput::default()
        }
    }

    fn reset(&mut self) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_error_zero_output() {
        let mut pid = Pid::new(PidGains::default(), 1e-3).unwrap();
        let mut smc = Smc::new(SmcGains::default(), &PlantParams::nominal()).unwrap();
        let r = RefSample::default();
        let m = Measurement::default();
        for _ in 0..10 {
            assert_eq!(pid.update(&r, &m, None).control.u_total, 0.0);
            assert_eq!(smc.update(&r, &m, None).control.u_total, 0.0);
        }
    }

    #[test]
    fn proportional_only() {
        let g = PidGains {
            kp: 100.0,
            ki: 0.0,
            kd: 0.0,
            ..PidGains::default()
        };
        let mut pid = Pid::new(g, 1e-3).unwrap();
        let u = pid.step_error(1e-5).u_total;
        assert!((u - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn filtered_derivative_converges_to_slope() {
        let g = PidGains {
            kp: 0.0,
            ki: 0.0,
            kd: 1.0,
            n: 100.0,
            u_limit: 1e9,
        };
        let mut pid = Pid::new(g, 1e-3).unwrap();
        let mut u = 0.0;
        for k in 0..2000 {
            u = pid.step_error(0.5 * k as f64 * 1e-3).u_total;
        }
        assert!((u - 0.5).abs() < 1e-9);
    }

    #[test]
    fn integrator_holds_while_saturated() {
        let g = PidGains {
            kp: 1.0,
            ki: 10.0,
            kd: 0.0,
            n: 100.0,
            u_limit: 0.5,
        };
        let mut pid = Pid::new(g, 1e-3).unwrap();
        for _ in 0..1000 {
            assert!(pid.step_error(1.0).saturated);
        }
        assert_eq!(pid.integral, 0.0);
        // unwinding direction still integrates
        pid.step_error(-0.01);
        assert!(pid.integral < 0.0);
    }

    #[test]
    fn smc_switching_saturates() {
        let g = SmcGains::default();
        let smc = Smc::new(g, &PlantParams::nominal()).unwrap();
        assert_eq!(smc.switching(g.phi), g.k_s);
        assert_eq!(smc.switching(5.0 * g.phi), g.k_s);
        assert_eq!(smc.switching(-3.0 * g.phi), -g.k_s);
        assert!((smc.switching(0.5 * g.phi) - 0.5 * g.k_s).abs() < 1e-15);
    }

    #[test]
    fn smc_feedforward() {
        let nominal = PlantParams::nominal();
        let mut smc = Smc::new(SmcGains::default(), &nominal).unwrap();
        let r = RefSample {
            r_ddot: 1.0,
            ..RefSample::default()
        };
        let out = smc.update(&r, &Measurement::default(), None);
        assert!((out.control.u_eq - 1.0 / nominal.b_nom).abs() < 1e-15);
        assert_eq!(out.control.u_st, 0.0);
    }

    #[test]
    fn rejects_bad_gains() {
        assert!(Pid::new(
            PidGains {
                kp: -1.0,
                ..PidGains::default()
            },
            1e-3
        )
        .is_err());
        assert!(Pid::new(
            PidGains {
                n: 0.0,
                ..PidGains::default()
            },
            1e-3
        )
        .is_err());
        assert!(Smc::new(
            SmcGains {
                phi: 0.0,
                ..SmcGains::default()
            },
            &PlantParams::nominal()
        )
        .is_err());
    }
}
