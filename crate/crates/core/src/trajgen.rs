//! Trapezoidal-velocity scan reference: dwell, accelerate, cruise,
//! decelerate, then the mirrored return stroke, repeated `cycles` times.

use crate::{Error, Result};

/// Scan move parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ScanProfile {
    /// Stroke length (m).
    pub scan_length: f64,
    /// Cruise velocity (m/s).
    pub scan_velocity: f64,
    /// Acceleration magnitude during ramps (m/s²).
    pub accel_limit: f64,
    /// Rest time at each end before a stroke starts (s).
    pub dwell: f64,
    /// Number of forward+return cycles.
    pub cycles: u32,
}

impl Default for ScanProfile {
    fn default() -> Self {
        ScanProfile {
            scan_length: 0.04,
            scan_velocity: 0.032,
            accel_limit: 1.0,
            dwell: 0.1,
            cycles: 2,
        }
    }
}

/// Reference position and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RefSample {
    /// Position (m).
    pub r: f64,
    /// Velocity (m/s).
    pub r_dot: f64,
    /// Acceleration (m/s²).
    pub r_ddot: f64,
    /// Sample time (s).
    pub t: f64,
}

impl ScanProfile {
    /// Checks positivity and that the cruise segment is non-negative.
    pub fn validate(&self) -> Result<()> {
        if !(self.scan_length > 0.0) || !self.scan_length.is_finite() {
            return Err(Error::param("scan_length", self.scan_length));
        }
        if !(self.scan_velocity > 0.0) || !self.scan_velocity.is_finite() {
            return Err(Error::param("scan_velocity", self.scan_velocity));
        }
        if !(self.accel_limit > 0.0) || !self.accel_limit.is_finite() {
            return Err(Error::param("accel_limit", self.accel_limit));
        }
        if !(self.dwell >= 0.0) || !self.dwell.is_finite() {
            return Err(Error::param("dwell", self.dwell));
        }
        if self.cruise_distance() < 0.0 {
            return Err(Error::param("scan_velocity", self.scan_velocity));
        }
        Ok(())
    }

    /// Ramp duration `v/a`.
    pub fn accel_time(&self) -> f64 {
        self.scan_velocity / self.accel_limit
    }

    /// Distance covered at constant velocity, `L − v²/a`.
    pub fn cruise_distance(&self) -> f64 {
        self.scan_length - self.scan_velocity * self.scan_velocity / self.accel_limit
    }

    /// Duration of the constant-velocity segment.
    pub fn cruise_time(&self) -> f64 {
        self.cruise_distance() / self.scan_velocity
    }

    /// One stroke (half cycle): dwell + ramp + cruise + ramp.
    pub fn stroke_duration(&self) -> f64 {
        self.dwell + self.accel_time() + self.cruise_time() + self.accel_time()
    }

    /// Total episode length.
    pub fn duration(&self) -> f64 {
        self.cycles as f64 * (2.0 * self.stroke_duration())
    }

    /// Reference at time `t`. Before 0 and after [`duration`](Self::duration)
    /// the reference rests at the origin.
    pub fn ref_at(&self, t: f64) -> RefSample {
        let rest = RefSample {
            t,
            ..RefSample::default()
        };
        if !(t >= 0.0) || t >= self.duration() {
            return rest;
        }
        let stroke = self.stroke_duration();
        let index = libm::floor(t / stroke);
        let mut tau = t - index * stroke;
        // guard against t/stroke landing one ulp short of an integer
        if tau >= stroke {
            tau -= stroke;
        }
        let forward = (index as u64).is_multiple_of(2);
        let (start, dir) = if forward {
            (0.0, 1.0)
        } else {
            (self.scan_length, -1.0)
        };

        let (v, a) = (self.scan_velocity, self.accel_limit);
        let t_acc = self.accel_time();
        let t_cruise = self.cruise_time();
        let d_acc = 0.5 * v * t_acc;

        let (offset, vel, acc) = if tau < self.dwell {
            (0.0, 0.0, 0.0)
        } else if tau < self.dwell + t_acc {
            let s = tau - self.dwell;
            (0.5 * a * s * s, a * s, a)
        } else if tau < self.dwell + t_acc + t_cruise {
            let s = tau - self.dwell - t_acc;
            (d_acc + v * s, v, 0.0)
        } else {
            let s = tau - self.dwell - t_acc - t_cruise;
            let remaining = t_acc - s;
            (
                self.scan_length - 0.5 * a * remaining * remaining,
                a * remaining,
                -a,
            )
        };
        RefSample {
            r: start + dir * offset,
            r_dot: dir * vel,
            r_ddot: dir * acc,
            t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_profile() -> ScanProfile {
        ScanProfile {
            cycles: 1,
            ..ScanProfile::default()
        }
    }

    #[test]
    fn starts_at_rest() {
        let r = reference_profile().ref_at(0.0);
        assert_eq!((r.r, r.r_dot, r.r_ddot), (0.0, 0.0, 0.0));
    }

    #[test]
    fn cruise_velocity_is_exact() {
        let p = reference_profile();
        let t = p.dwell + p.accel_time() + 0.5 * p.cruise_time();
        assert_eq!(p.ref_at(t).r_dot, 0.032);
        let back = p.stroke_duration() + t;
        assert_eq!(p.ref_at(back).r_dot, -0.032);
    }

    #[test]
    fn forward_stroke_ends_at_scan_length() {
        let p = reference_profile();
        let end = p.ref_at(p.stroke_duration());
        assert!((end.r - 0.04).abs() < 1e-12);
        assert_eq!(end.r_dot, 0.0);
        let just_before = p.ref_at(p.stroke_duration() - 1e-9);
        assert!((just_before.r - 0.04).abs() < 1e-12);
    }

    #[test]
    fn duration_values() {
        let p = reference_profile();
        assert!((p.duration() - 2.764).abs() < 1e-12);
        assert_eq!(ScanProfile { cycles: 0, ..p }.duration(), 0.0);
        let two = ScanProfile { cycles: 2, ..p };
        assert!((two.duration() - 2.0 * p.duration()).abs() < 1e-12);
    }

    #[test]
    fn full_cycle_returns_home() {
        let p = reference_profile();
        let end = p.ref_at(p.duration() - 1e-12);
        assert!(end.r.abs() < 1e-12 && end.r_dot.abs() < 1e-9);
        let after = p.ref_at(p.duration() + 1.0);
        assert_eq!((after.r, after.r_dot), (0.0, 0.0));
    }

    #[test]
    fn velocity_integrates_to_scan_length() {
        // composite Simpson on the forward stroke
        let p = reference_profile();
        let n = 200_000;
        let h = p.stroke_duration() / n as f64;
        let mut sum = p.ref_at(0.0).r_dot + p.ref_at(p.stroke_duration() - 1e-15).r_dot;
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * p.ref_at(k as f64 * h).r_dot;
        }
        let dist = sum * h / 3.0;
        assert!((dist - p.scan_length).abs() < 1e-9, "{dist}");
    }

    #[test]
    fn derivatives_consistent_with_finite_differences() {
        let p = ScanProfile::default();
        let h = 1e-6;
        let mut t = 0.0;
        while t < p.duration() - 2.0 * h {
            let a = p.ref_at(t);
            let b = p.ref_at(t + h);
            assert!(a.r_dot.abs() <= p.scan_velocity + 1e-15);
            assert!(a.r_ddot.abs() <= p.accel_limit);
            // velocity is continuous; position FD error is O(h·a)
            assert!(((b.r - a.r) / h - a.r_dot).abs() < 2.0 * h * p.accel_limit + 1e-9);
            t += 7.3e-4;
        }
    }

    #[test]
    fn rejects_invalid_profiles() {
        let p = ScanProfile::default();
        assert!(p.validate().is_ok());
        assert!(ScanProfile {
            scan_length: 0.0,
            ..p
        }
        .validate()
        .is_err());
        assert!(ScanProfile {
            scan_velocity: -1.0,
            ..p
        }
        .validate()
        .is_err());
        assert!(ScanProfile {
            accel_limit: 0.0,
            ..p
        }
        .validate()
        .is_err());
        // v²/a exceeds the stroke
        assert!(ScanProfile {
            scan_velocity: 1.0,
            ..p
        }
        .validate()
        .is_err());
    }
}
