//! Lyapunov quadratic form and convergence-region statistics over a trace.

use super::SimTrace;
use crate::controllers::{convergence_bound, phi1};
use crate::{Error, Result};

/// `χᵀPχ` with `χ = [Φ1(z), ω]` and `P = [[ρ+ρ², −ρ], [−ρ, 1]]`.
pub fn lyapunov_quad(z: f64, omega: f64, rho: f64) -> f64 {
    let x = phi1(z);
    (rho + rho * rho) * x * x - 2.0 * rho * x * omega + omega * omega
}

/// Region statistics after the transient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorReport {
    /// `|ε| / min(...)` for the `ε` used.
    pub region_bound: f64,
    /// Approximation-error magnitude the bound was computed with.
    pub eps: f64,
    /// Share of post-transient ticks with `|Φ1(z)| > region_bound`.
    pub frac_outside_region_after_transient: f64,
    /// Among those ticks, share where `χᵀPχ` grew since the previous tick.
    pub frac_vquad_increase_while_outside: f64,
    /// Start of the post-transient window (s).
    pub transient_cutoff: f64,
    /// Post-transient ticks examined.
    pub ticks: usize,
    /// Post-transient ticks outside the region.
    pub outside: usize,
}

/// `max |f_true − f_hat|` over ticks with `t ≥ cutoff`.
pub fn empirical_eps(trace: &SimTrace, cutoff: f64) -> Result<f64> {
    let mut seen = false;
    let mut eps = 0.0f64;
    for row in trace.rows.iter().filter(|r| r.t >= cutoff) {
        seen = true;
        eps = eps.max(crate::math::abs(row.f_true - row.f_hat));
    }
    if seen {
        Ok(eps)
    } else {
        Err(Error::EmptyWindow)
    }
}

/// Evaluates the convergence region with approximation error `bound_eps`
/// over ticks with `t ≥ transient_cutoff`.
pub fn monitor(trace: &SimTrace, bound_eps: f64, transient_cutoff: f64) -> Result<MonitorReport> {
    let (rho, h1) = match (trace.meta.rho, trace.meta.h1) {
        (Some(r), Some(h)) => (r, h),
        _ => return Err(Error::param("rho", f64::NAN)),
    };
    let region_bound = convergence_bound(rho, h1, bound_eps)?;
    let start = trace
        .rows
        .iter()
        .position(|r| r.t >= transient_cutoff)
        .ok_or(Error::EmptyWindow)?;
    let rows = &trace.rows;
    let mut outside = 0usize;
    let mut rising = 0usize;
    for k in start..rows.len() {
        if crate::math::abs(phi1(rows[k].z)) > region_bound {
            outside += 1;
            if k > 0 && rows[k].v_quad > rows[k - 1].v_quad {
                rising += 1;
            }
        }
    }
    let ticks = rows.len() - start;
    Ok(MonitorReport {
        region_bound,
        eps: bound_eps,
        frac_outside_region_after_transient: outside as f64 / ticks as f64,
        frac_vquad_increase_while_outside: if outside == 0 {
            0.0
        } else {
            rising as f64 / outside as f64
        },
        transient_cutoff,
        ticks,
        outside,
    })
}
