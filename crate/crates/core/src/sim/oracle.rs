//! True lumped uncertainty `f`, defined by the closed-loop sliding dynamics
//! `ż = −h1·Φ1(z) + ω + B̄·u_nn + f` under the true plant.

use crate::controllers::LumpedTerms;
use crate::plant::PlantParams;

/// Which closed form of `f` to evaluate.
///
/// Under the true plant the closed loop obeys
/// `ż = (1+δ_B)·(B̄·u_st + f_L − f_hat)` where `f_L` is [`Lumped`](Self::Lumped);
/// the `(1+δ_B)` factor rescales the super-twisting gains but carries no
/// additional uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OracleForm {
    /// `f_L = (Ā·δ_A·v + d + δ_B·(q − Ā·v)) / (1 + δ_B)`: the uncertainty the
    /// compensator has to estimate.
    Lumped,
    /// `f_L + δ_B·B̄·u_st/(1+δ_B)`: with `u_nn = −f/B̄` the sliding dynamics
    /// become exactly the nominal `ż = −h1·Φ1(z) + ω`.
    Exact,
    /// The literal published expression
    /// `δ_B/(1+δ_B)·(q − A·v − d) − (Ā·δ_A + d)/B̄`. Logged by default.
    #[default]
    AsPrinted,
    /// As printed, with the missing velocity factor restored:
    /// `δ_B/(1+δ_B)·(q − A·v − d) − (Ā·δ_A·v + d)/B̄`.
    VelocityCorrected,
}

/// Evaluates `f` for the true plant, controller terms and total generalized
/// disturbance `d` (m/s²).
pub fn f_oracle(plant: &PlantParams, terms: &LumpedTerms, d: f64, form: OracleForm) -> f64 {
    let (a_nom, b_nom, da, db) = (plant.a_nom, plant.b_nom, plant.delta_a, plant.delta_b);
    let LumpedTerms { q, v, u_st } = *terms;
    match form {
        OracleForm::Lumped => (a_nom * da * v + d + db * (q - a_nom * v)) / (1.0 + db),
        OracleForm::Exact => {
            (a_nom * da * v + d + db * (q - a_nom * v + b_nom * u_st)) / (1.0 + db)
        }
        OracleForm::AsPrinted => {
            db / (1.0 + db) * (q - plant.a_true() * v - d) - (a_nom * da + d) / b_nom
        }
        OracleForm::VelocityCorrected => {
            db / (1.0 + db) * (q - plant.a_true() * v - d) - (a_nom * da * v + d) / b_nom
        }
    }
}
