//! Fractional-order operators realized with the Grünwald–Letnikov series.
//!
//! A [`FracEvaluator`] of order `xi` turns a uniformly sampled stream `f_k`
//! into
//!
//! ```text
//! D^xi f(t_n) ≈ h^-xi · Σ_{k=0}^{m-1} w_k · f_{n-k},   m = min(n + 1, N_mem)
//! ```
//!
//! with `w_0 = 1` and `w_k = w_{k-1} · (1 − (xi + 1)/k)`. Positive orders are
//! derivatives, negative orders are Riemann–Liouville integrals. Samples
//! before the window start are taken as zero, so the lower terminal is the
//! instant of the first pushed sample (or of the last [`FracEvaluator::reset`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, powf, sgn};
use crate::{Error, Result};

/// Default short-memory window, in samples.
pub const DEFAULT_MEMORY: usize = 2000;

/// A fractional order `xi` with `|xi| < 2`; positive is a derivative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct FracOrder(f64);

impl FracOrder {
    /// Validates and wraps an order.
    pub fn new(xi: f64) -> Result<Self> {
        if !xi.is_finite() || abs(xi) >= 2.0 {
            return Err(Error::InvalidOrder(xi));
        }
        Ok(FracOrder(xi))
    }

    /// The raw order value.
    pub fn value(self) -> f64 {
        self.0
    }

    /// True for negative orders (fractional integrals).
    pub fn is_integral(self) -> bool {
        self.0 < 0.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(xi: f64) -> Result<Self> {
        FracOrder::new(xi)
    }
}

impl From<FracOrder> for f64 {
    fn from(o: FracOrder) -> f64 {
        o.0
    }
}

/// Exponent of the signed power `sig^a(x) = sgn(x)·|x|^a`, `0 < a ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigPower(f64);

impl SigPower {
    /// Validates `0 < a ≤ 1`.
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::param("a", a));
        }
        Ok(SigPower(a))
    }

    /// Exponent value.
    pub fn exponent(self) -> f64 {
        self.0
    }

    /// Applies the operator.
    pub fn apply(self, x: f64) -> f64 {
        sig_pow(x, self.0)
    }
}

/// `sgn(x)·|x|^a`, with `sig_pow(0, a) = 0`.
pub fn sig_pow(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    sgn(x) * powf(abs(x), a)
}

/// First `count` Grünwald–Letnikov weights for order `xi`.
///
/// For a non-negative integer order the tail past index `xi` is exactly zero.
pub fn gl_weights(xi: f64, count: usize) -> Result<Vec<f64>> {
    if !xi.is_finite() {
        return Err(Error::InvalidOrder(xi));
    }
    if count == 0 {
        return Err(Error::param("count", 0.0));
    }
    let mut w = Vec::with_capacity(count);
    w.push(1.0);
    for k in 1..count {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (xi + 1.0) / k as f64));
    }
    Ok(w)
}

/// Streaming short-memory Grünwald–Letnikov operator.
///
/// Single-writer: one evaluator per signal stream.
#[derive(Debug, Clone)]
pub struct FracEvaluator {
    order: FracOrder,
    step: f64,
    step_pow: f64,
    weights: Vec<f64>,
    history: Vec<f64>,
    // Slot holding the newest sample; meaningless while `len == 0`.
    head: usize,
    len: usize,
    t0: f64,
    steps: u64,
}

impl FracEvaluator {
    /// Builds an evaluator with `memory` retained samples at step `step`.
    pub fn new(order: FracOrder, step: f64, memory: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::param("step", step));
        }
        if memory == 0 {
            return Err(Error::param("memory", 0.0));
        }
        let weights = gl_weights(order.value(), memory)?;
        Ok(FracEvaluator {
            order,
            step,
            step_pow: powf(step, order.value()),
            weights,
            history: vec![0.0; memory],
            head: 0,
            len: 0,
            t0: 0.0,
            steps: 0,
        })
    }

    /// Evaluator with the default memory window.
    pub fn with_default_memory(order: FracOrder, step: f64) -> Result<Self> {
        Self::new(order, step, DEFAULT_MEMORY)
    }

    /// Operator order.
    pub fn order(&self) -> FracOrder {
        self.order
    }

    /// Sample spacing `h`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Memory capacity `N_mem`.
    pub fn memory(&self) -> usize {
        self.weights.len()
    }

    /// Binomial weights `w_0..w_{N_mem-1}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of samples currently contributing to the sum.
    pub fn len(&self) -> usize {
        self.len
    }

    /// True before the first sample.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Window start time.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Time stamp of the most recent sample, if any.
    pub fn time(&self) -> Option<f64> {
        match self.steps {
            0 => None,
            n => Some(self.t0 + (n - 1) as f64 * self.step),
        }
    }

    /// Pushes `sample` (taken one step after the previous one) and returns
    /// the operator value at the sample instant.
    pub fn step_sample(&mut self, sample: f64) -> f64 {
        let cap = self.history.len();
        self.head = if self.len == 0 {
            0
        } else {
            (self.head + 1) % cap
        };
        self.history[self.head] = sample;
        if self.len < cap {
            self.len += 1;
        }
        self.steps += 1;

        // Newest-to-oldest: history[head], history[head-1], ... wrapping.
        let (recent, older) = self.history.split_at(self.head + 1);
        let mut acc = 0.0;
        let mut k = 0;
        for &x in recent.iter().rev() {
            if k == self.len {
                break;
            }
            acc += self.weights[k] * x;
            k += 1;
        }
        if k < self.len {
            for &x in older.iter().rev() {
                if k == self.len {
                    break;
                }
                acc += self.weights[k] * x;
                k += 1;
            }
        }
        acc / self.step_pow
    }

    /// Clears the history and restarts the window at `t0`; weights are kept.
    pub fn reset_at(&mut self, t0: f64) {
        self.history.iter_mut().for_each(|x| *x = 0.0);
        self.head = 0;
        self.len = 0;
        self.steps = 0;
        self.t0 = t0;
    }

    /// [`reset_at`](Self::reset_at) with `t0 = 0`.
    pub fn reset(&mut self) {
        self.reset_at(0.0);
    }
}
