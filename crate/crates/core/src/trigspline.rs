//! Trigonometric B-splines `Q_{m,h}` on a uniform 1-periodic grid of mesh
//! size `h`, with first derivatives.
//!
//! The order-1 spline is the indicator of `(0, h]`; higher orders follow the
//! sine-weighted recursion
//!
//! ```text
//! Q_{m,h}(t) = ( sin(pi t) Q_{m-1,h}(t) + sin(pi (h m - t)) Q_{m-1,h}(t - h) )
//!              / sin(pi h (m - 1))
//! ```
//!
//! giving a nonnegative bump supported on `(0, m h]` as long as `h m < 1`
//! strictly; at `h m >= 1` the sine weights change sign inside the support
//! and the translate basis degenerates, so such parameters are rejected.
//!
//! Odd orders `m = 2 mu + 1` reproduce the low harmonics `exp(2 pi i k t)`,
//! `|k| <= mu`, on periodic grids; the collocation layer tests exactly that.
//! The period is normalized to 1 throughout; other periods are handled by
//! time scaling in the solver, never inside the basis.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Validated trigonometric basis parameters: order `m >= 1`, mesh `h` in
/// `(0, 1)`, and the strict stability condition `h * m < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigBasisParams {
    m: usize,
    h: f64,
}

impl TrigBasisParams {
    pub fn new(m: usize, h: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidOrder {
                m,
                reason: "order must be at least 1",
            });
        }
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidParams(format!(
                "mesh size h={h} outside (0, 1)"
            )));
        }
        if h * m as f64 >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "h*m = {} >= 1: translate basis is unstable",
                h * m as f64
            )));
        }
        Ok(TrigBasisParams { m, h })
    }

    pub fn m(self) -> usize {
        self.m
    }

    pub fn h(self) -> f64 {
        self.h
    }
}

/// Evaluates `Q_{m,h}(t)`. Exactly 0 outside the support `(0, m h]`.
pub fn eval_q(p: TrigBasisParams, t: f64) -> f64 {
    if t <= 0.0 || t > p.m as f64 * p.h {
        return 0.0;
    }
    q_pair(p.m, p.h, t).0
}

/// Evaluates `d/dt Q_{m,h}(t)` by the product rule applied to the recursion;
/// each level carries the `(Q, Q')` pair jointly so the value recursion is
/// never re-entered. Rejected for `m = 1` (step function). For `m = 2` the
/// spline has kinks at the knots `0, h, 2h`; evaluation exactly at a knot
/// returns the right-hand limit.
pub fn eval_q_deriv(p: TrigBasisParams, t: f64) -> Result<f64> {
    if p.m < 2 {
        return Err(Error::InvalidOrder {
            m: p.m,
            reason: "derivative needs order at least 2",
        });
    }
    if t <= 0.0 || t > p.m as f64 * p.h {
        return Ok(0.0);
    }
    Ok(q_pair(p.m, p.h, t).1)
}

/// Joint `(Q, Q')` recursion. The order-2 level is written out analytically:
/// its pieces are single sines, and giving the derivative on half-open
/// intervals `[k h, (k+1) h)` bakes in the right-hand-limit convention that
/// the recursion with `Q'_1 = 0` would miss exactly at the knots.
fn q_pair(m: usize, h: f64, t: f64) -> (f64, f64) {
    match m {
        1 => {
            let v = if t > 0.0 && t <= h { 1.0 } else { 0.0 };
            (v, 0.0)
        }
        2 => {
            let scale = 1.0 / (PI * h).sin();
            let value = if t > 0.0 && t <= h {
                (PI * t).sin() * scale
            } else if t > h && t <= 2.0 * h {
                (PI * (2.0 * h - t)).sin() * scale
            } else {
                0.0
            };
            let deriv = if (0.0..h).contains(&t) {
                PI * (PI * t).cos() * scale
            } else if (h..2.0 * h).contains(&t) {
                -PI * (PI * (2.0 * h - t)).cos() * scale
            } else {
                0.0
            };
            (value, deriv)
        }
        _ => {
            let (q1, d1) = q_pair(m - 1, h, t);
            let (q2, d2) = q_pair(m - 1, h, t - h);
            let mf = m as f64;
            let denom = (PI * h * (mf - 1.0)).sin();
            let a = (PI * t).sin();
            let a_dot = PI * (PI * t).cos();
            let b = (PI * (h * mf - t)).sin();
            let b_dot = -PI * (PI * (h * mf - t)).cos();
            (
                (a * q1 + b * q2) / denom,
                (a_dot * q1 + a * d1 + b_dot * q2 + b * d2) / denom,
            )
        }
    }
}
