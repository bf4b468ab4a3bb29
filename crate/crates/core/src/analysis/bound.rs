//! The closed-form lower bound on `E[alpha_u + alpha_v] / w_uv`.
//!
//! For a marginal rank `theta`, `u` earns at least `g(y) w_uv` for
//! `y < theta` and `v` earns at least `(1 - g(theta)) w_uv` everywhere, so the
//! bound is `int_0^theta g + (1 - g(theta))`, which equals `1 - 1/e` for all
//! `theta` when `g(y) = e^(y-1)`.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::ranking::exp_gain;

/// Target approximation ratio `1 - 1/e`.
pub const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / E;

const SIMPSON_INTERVALS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticBound {
    pub theta: f64,
    pub closed_form: f64,
    pub quadrature: f64,
}

impl AnalyticBound {
    pub fn value(&self) -> f64 {
        self.closed_form
    }

    /// `|closed_form - quadrature|`.
    pub fn residual(&self) -> f64 {
        (self.closed_form - self.quadrature).abs()
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let x = a + h * k as f64;
        acc += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Evaluates the bound at `theta` in closed form and by composite Simpson quadrature.
pub fn analytic_bound(theta: f64) -> Result<AnalyticBound> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(theta));
    }
    let g_theta = exp_gain(theta);
    let closed_form = (g_theta - (-1.0f64).exp()) + (1.0 - g_theta);
    let quadrature = simpson(exp_gain, 0.0, theta, SIMPSON_INTERVALS) + (1.0 - g_theta);
    Ok(AnalyticBound {
        theta,
        closed_form,
        quadrature,
    })
}
