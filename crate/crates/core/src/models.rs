//! Autonomous oscillator models: right-hand sides, analytic Jacobians, and
//! reference cycle data used to judge solver accuracy.
//!
//! A model is a first-order autonomous system `x' = f(x)` expected to own an
//! attracting limit cycle. Models carry an optional analytic Jacobian (the
//! solver falls back to finite differences without one) and an optional
//! reference amplitude/period pair for the first state dimension.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Known-good cycle data for comparisons: amplitude and period of the first
/// state dimension, plus a short note on where the numbers come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub amplitude: f64,
    pub period: f64,
    pub provenance: &'static str,
}

type Rhs = Box<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
type Jacobian = Box<dyn Fn(&[f64], &mut DMatrix<f64>) + Send + Sync>;

/// Finite-difference step for Jacobian checks and fallbacks.
const FD_STEP: f64 = 1e-6;

/// An autonomous ODE system `x' = f(x)` with optional analytic Jacobian,
/// reference cycle data, and a default initial state for transient runs.
pub struct OscillatorModel {
    name: String,
    dimension: usize,
    parameters: Vec<(String, f64)>,
    rhs: Rhs,
    jac: Option<Jacobian>,
    reference: Option<Reference>,
    default_state: Vec<f64>,
}

impl OscillatorModel {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        parameters: Vec<(String, f64)>,
        rhs: Rhs,
        jac: Option<Jacobian>,
        reference: Option<Reference>,
        default_state: Vec<f64>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParams("model dimension must be positive".into()));
        }
        if default_state.len() != dimension {
            return Err(Error::InvalidParams(format!(
                "default state has {} entries, expected {}",
                default_state.len(),
                dimension
            )));
        }
        Ok(OscillatorModel {
            name: name.into(),
            dimension,
            parameters,
            rhs,
            jac,
            reference,
            default_state,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.parameters
    }

    pub fn reference(&self) -> Option<&Reference> {
        self.reference.as_ref()
    }

    pub fn default_state(&self) -> &[f64] {
        &self.default_state
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jac.is_some()
    }

    /// Evaluates `f(x)` into `out`. Both slices must have the model dimension.
    pub fn f_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dimension);
        debug_assert_eq!(out.len(), self.dimension);
        (self.rhs)(x, out);
    }

    pub fn f(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        self.f_into(x, &mut out);
        out
    }

    /// Jacobian `df/dx` at `x`: analytic when available, otherwise central
    /// finite differences with step 1e-6.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dimension;
        let mut out = DMatrix::zeros(d, d);
        match &self.jac {
            Some(j) => j(x, &mut out),
            None => {
                let mut xp = x.to_vec();
                let mut fp = vec![0.0; d];
                let mut fm = vec![0.0; d];
                for col in 0..d {
                    xp[col] = x[col] + FD_STEP;
                    self.f_into(&xp, &mut fp);
                    xp[col] = x[col] - FD_STEP;
                    self.f_into(&xp, &mut fm);
                    xp[col] = x[col];
                    for row in 0..d {
                        out[(row, col)] = (fp[row] - fm[row]) / (2.0 * FD_STEP);
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for OscillatorModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OscillatorModel")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("parameters", &self.parameters)
            .field("analytic_jacobian", &self.jac.is_some())
            .field("reference", &self.reference)
            .finish()
    }
}

/// Radially attracting unit circle with angular velocity `2*pi`, so the
/// cycle is `(cos 2*pi*t, sin 2*pi*t)` with period exactly 1:
/// `x' = x(1 - x^2 - y^2) - 2*pi*y`, `y' = y(1 - x^2 - y^2) + 2*pi*x`.
pub fn circle_model() -> OscillatorModel {
    let tau = 2.0 * std::f64::consts::PI;
    OscillatorModel::new(
        "circle",
        2,
        vec![],
        Box::new(move |x, out| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            out[0] = x[0] * (1.0 - r2) - tau * x[1];
            out[1] = x[1] * (1.0 - r2) + tau * x[0];
        }),
        Some(Box::new(move |x, out| {
            let (a, b) = (x[0], x[1]);
            out[(0, 0)] = 1.0 - 3.0 * a * a - b * b;
            out[(0, 1)] = -2.0 * a * b - tau;
            out[(1, 0)] = -2.0 * a * b + tau;
            out[(1, 1)] = 1.0 - a * a - 3.0 * b * b;
        })),
        Some(Reference {
            amplitude: 1.0,
            period: 1.0,
            provenance: "closed-form cycle",
        }),
        vec![2.0, 0.0],
    )
    .expect("static model definition")
}

/// Reference amplitude and period of the mu=1 van der Pol cycle, frozen from
/// a long fixed-step transient at dt=1e-4 (first dimension, peak-to-peak
/// half-range and mean upward-crossing spacing).
const VDP_MU1_AMPLITUDE: f64 = 2.0086198599;
const VDP_MU1_PERIOD: f64 = 6.6632868592;

/// Van der Pol oscillator in first-order form:
/// `x' = v`, `v' = mu (1 - x^2) v - x`. Reference cycle data ships only for
/// `mu = 1`.
pub fn van_der_pol(mu: f64) -> Result<OscillatorModel> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::InvalidModelParam(format!(
            "van der Pol damping mu={mu} must be positive"
        )));
    }
    let reference = (mu == 1.0).then_some(Reference {
        amplitude: VDP_MU1_AMPLITUDE,
        period: VDP_MU1_PERIOD,
        provenance: "fixed-step transient, dt=1e-4",
    });
    OscillatorModel::new(
        "vanderpol",
        2,
        vec![("mu".into(), mu)],
        Box::new(move |x, out| {
            out[0] = x[1];
            out[1] = mu * (1.0 - x[0] * x[0]) * x[1] - x[0];
        }),
        Some(Box::new(move |x, out| {
            out[(0, 0)] = 0.0;
            out[(0, 1)] = 1.0;
            out[(1, 0)] = -2.0 * mu * x[0] * x[1] - 1.0;
            out[(1, 1)] = mu * (1.0 - x[0] * x[0]);
        })),
        reference,
        vec![2.0, 0.0],
    )
}

/// Names accepted by [`model_by_name`].
pub const AVAILABLE_MODELS: &[&str] = &["circle", "vanderpol"];

/// Looks up a model by name and applies `name=value` parameter overrides.
/// `vdp` is an alias for `vanderpol`; unknown names and unknown parameter
/// keys are rejected.
pub fn model_by_name(name: &str, params: &[(String, f64)]) -> Result<OscillatorModel> {
    match name {
        "circle" => {
            if let Some((key, _)) = params.first() {
                return Err(Error::InvalidModelParam(format!(
                    "circle model takes no parameters, got {key}"
                )));
            }
            Ok(circle_model())
        }
        "vanderpol" | "vdp" => {
            let mut mu = 1.0;
            for (key, value) in params {
                if key == "mu" {
                    mu = *value;
                } else {
                    return Err(Error::InvalidModelParam(format!(
                        "van der Pol model has no parameter {key}"
                    )));
                }
            }
            van_der_pol(mu)
        }
        other => Err(Error::UnknownModel {
            name: other.into(),
            available: AVAILABLE_MODELS.join(", "),
        }),
    }
}
