//! Gaussian RBF network estimating the lumped uncertainty from `x = [z, ż]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::exp;
use crate::{Error, Result};

/// Network shape and adaptation limits.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct RbfConfig {
    /// Node centers `c_j = [c_z, c_zdot]`.
    pub centers: Vec<[f64; 2]>,
    /// Node widths `b_j`.
    pub widths: Vec<f64>,
    /// Bound on every weight magnitude.
    pub w_max: f64,
}

impl Default for RbfConfig {
    /// Five nodes on the diagonal `c_z ∈ {−3,−1,0,1,3}`, `c_zdot ∈ {−7,−3,0,3,7}`, `b = 50`.
    fn default() -> Self {
        let cz = [-3.0, -1.0, 0.0, 1.0, 3.0];
        let cd = [-7.0, -3.0, 0.0, 3.0, 7.0];
        RbfConfig {
            centers: cz.iter().zip(cd).map(|(&a, b)| [a, b]).collect(),
            widths: vec![50.0; 5],
            w_max: 100.0,
        }
    }
}

/// Weights and geometry of a single-output RBF network.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfNetwork {
    centers: Vec<[f64; 2]>,
    widths: Vec<f64>,
    weights: Vec<f64>,
    w_max: f64,
}

impl RbfNetwork {
    /// Network with zero initial weights.
    pub fn new(cfg: &RbfConfig) -> Result<Self> {
        if cfg.centers.is_empty() {
            return Err(Error::param("centers", 0.0));
        }
        if cfg.centers.len() != cfg.widths.len() {
            return Err(Error::param("widths", cfg.widths.len() as f64));
        }
        for &b in &cfg.widths {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::param("widths", b));
            }
        }
        if cfg.centers.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::param("centers", f64::NAN));
        }
        if !(cfg.w_max > 0.0) {
            return Err(Error::param("w_max", cfg.w_max));
        }
        Ok(RbfNetwork {
            centers: cfg.centers.clone(),
            widths: cfg.widths.clone(),
            weights: vec![0.0; cfg.centers.len()],
            w_max: cfg.w_max,
        })
    }

    /// Node count `J`.
    pub fn nodes(&self) -> usize {
        self.weights.len()
    }

    /// Current weight estimate `Ŵ`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Overwrites the weights (no clamping).
    pub fn set_weights(&mut self, w: &[f64]) {
        self.weights.copy_from_slice(w);
    }

    /// Weight magnitude bound.
    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// Hidden activations `h_j = exp(−‖x − c_j‖² / (2 b_j²))` written into `h`.
    pub fn activations_into(&self, x: [f64; 2], h: &mut [f64]) {
        for ((hj, c), b) in h.iter_mut().zip(&self.centers).zip(&self.widths) {
            let d0 = x[0] - c[0];
            let d1 = x[1] - c[1];
            *hj = exp(-(d0 * d0 + d1 * d1) / (2.0 * b * b));
        }
    }

    /// Returns `(f_hat, h)` with `f_hat = Ŵᵀh(x)`.
    pub fn forward(&self, x: [f64; 2]) -> (f64, Vec<f64>) {
        let mut h = vec![0.0; self.nodes()];
        self.activations_into(x, &mut h);
        (self.output(&h), h)
    }

    /// `Ŵᵀh` for precomputed activations.
    pub fn output(&self, h: &[f64]) -> f64 {
        self.weights.iter().zip(h).map(|(w, h)| w * h).sum()
    }

    /// One explicit-Euler step of
    /// `Ŵ̇ = (1+ρ)·Φ2(z)·h − (dΦ1/dz)·ω·𝟙`, then clamps every weight to
    /// `[−w_max, w_max]`. Returns true if the clamp was active.
    ///
    /// The scalar `(dΦ1/dz)·ω` is applied to every node.
    pub fn adapt(
        &mut self,
        phi2: f64,
        dphi1_dz: f64,
        omega: f64,
        h: &[f64],
        rho: f64,
        dt: f64,
    ) -> bool {
        let common = dphi1_dz * omega;
        let mut clamped = false;
        for (w, hj) in self.weights.iter_mut().zip(h) {
            *w += dt * ((1.0 + rho) * phi2 * hj - common);
            if *w > self.w_max {
                *w = self.w_max;
                clamped = true;
            } else if *w < -self.w_max {
                *w = -self.w_max;
                clamped = true;
            }
        }
        clamped
    }

    /// Zeroes the weights.
    pub fn reset(&mut self) {
        self.weights.iter_mut().for_each(|w| *w = 0.0);
    }
}

/// Compensation current `u_nn = −f_hat / B̄`.
pub fn u_nn(f_hat: f64, b_nom: f64) -> f64 {
    -f_hat / b_nom
}
