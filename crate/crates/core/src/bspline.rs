//! Cardinal (polynomial) B-splines `N_m` of order `m` and their first
//! derivatives.
//!
//! The order-1 spline is the indicator of `(0, 1]`; higher orders follow the
//! two-term recursion
//!
//! ```text
//! N_m(t) = ( t * N_{m-1}(t) + (m - t) * N_{m-1}(t - 1) ) / (m - 1)
//! ```
//!
//! giving a nonnegative bump supported on `(0, m]`, piecewise polynomial of
//! degree `m - 1` and `C^{m-2}` smooth. Orders in this crate stay small
//! (m <= 7), so the recursion is evaluated directly; no polynomial pieces are
//! precomputed.

use crate::error::{Error, Result};

/// Validated spline order; `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyOrder(usize);

impl PolyOrder {
    /// Rejects `m = 0`; every other order is representable.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidOrder {
                m,
                reason: "order must be at least 1",
            });
        }
        Ok(PolyOrder(m))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Evaluates `N_m(t)`. Exactly 0 outside the support `(0, m]`.
pub fn eval_n(order: PolyOrder, t: f64) -> f64 {
    let m = order.get();
    if t <= 0.0 || t > m as f64 {
        return 0.0;
    }
    n_recurse(m, t)
}

/// Evaluates `N'_m(t)` through the difference identity
/// `N'_m(t) = N_{m-1}(t) - N_{m-1}(t - 1)`, which is exact for `m >= 2`.
/// The order-1 spline is a step function and is rejected.
///
/// At the knots the two one-sided slopes are averaged (only `m = 2` has a
/// jump there), which keeps `N'_m` odd about the support midpoint `m/2`.
/// The averaged endpoint slopes make the effective support the closed
/// `[0, m]`: `N'_2(0) = 1/2` and `N'_2(2) = -1/2`.
pub fn eval_n_deriv(order: PolyOrder, t: f64) -> Result<f64> {
    let m = order.get();
    if m < 2 {
        return Err(Error::InvalidOrder {
            m,
            reason: "derivative needs order at least 2",
        });
    }
    if t < 0.0 || t > m as f64 {
        return Ok(0.0);
    }
    Ok(midpoint_base(m - 1, t) - midpoint_base(m - 1, t - 1.0))
}

/// `N_k` with the order-1 indicator averaged at its endpoints; feeding this
/// into the difference identity yields the mean of the one-sided slopes at
/// knots and leaves every other point untouched (orders above 1 are
/// continuous there).
fn midpoint_base(k: usize, t: f64) -> f64 {
    if k == 1 && (t == 0.0 || t == 1.0) {
        return 0.5;
    }
    n_recurse(k, t)
}

fn n_recurse(m: usize, t: f64) -> f64 {
    if t <= 0.0 || t > m as f64 {
        return 0.0;
    }
    if m == 1 {
        return 1.0;
    }
    let mf = m as f64;
    (t * n_recurse(m - 1, t) + (mf - t) * n_recurse(m - 1, t - 1.0)) / (mf - 1.0)
}
