//! Gain conditions and the residual convergence region of the
//! RBF-compensated super-twisting loop.

use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Outcome of checking `(h1, h2)` against the stability conditions for `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCheck {
    /// Smallest admissible `h1`.
    pub h1_min: f64,
    /// The `h2` the conditions prescribe for the given `h1`.
    pub h2_required: f64,
    /// `h1 ≥ h1_min` and `h2 == h2_required` (1e-9 relative).
    pub satisfied: bool,
}

/// Relative tolerance on the `h2` equality.
pub const H2_REL_TOL: f64 = 1e-9;

/// `h1_min = max(ρ²+ρ+½, (ρ²+3ρ+1)/2)` and `h2 = ρ²+ρ(1+h1)`.
pub fn gain_check(rho: f64, h1: f64, h2: f64) -> Result<GainCheck> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::param("rho", rho));
    }
    let h1_min = f64::max(rho * rho + rho + 0.5, (rho * rho + 3.0 * rho + 1.0) / 2.0);
    let h2_required = rho * rho + rho * (1.0 + h1);
    let satisfied = h1 >= h1_min && abs(h2 - h2_required) <= H2_REL_TOL * abs(h2_required);
    Ok(GainCheck {
        h1_min,
        h2_required,
        satisfied,
    })
}

/// The `h2` that satisfies the equality condition for `(rho, h1)`.
pub fn required_h2(rho: f64, h1: f64) -> f64 {
    rho * rho + rho * (1.0 + h1)
}

/// Radius of the region `|Φ1(z)| ≤ |ε| / min(√(2h1−ρ) − 1 − ρ, −ρ + (2h1−1)/(2(ρ+1)))`.
///
/// The second denominator uses `−ρ`, the sign under which the negative
/// definiteness argument goes through.
pub fn convergence_bound(rho: f64, h1: f64, eps: f64) -> Result<f64> {
    if !(rho > 0.0) || !(2.0 * h1 > rho) {
        return Err(Error::BoundUndefined);
    }
    let d1 = sqrt(2.0 * h1 - rho) - 1.0 - rho;
    let d2 = -rho + (2.0 * h1 - 1.0) / (2.0 * (rho + 1.0));
    let den = f64::min(d1, d2);
    if !(den > 0.0) {
        return Err(Error::BoundUndefined);
    }
    Ok(abs(eps) / den)
}
