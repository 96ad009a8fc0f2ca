//! Periodic steady states of autonomous oscillators by spline collocation.
//!
//! The cycle is sought as a periodic spline `x(tau)` on normalized time
//! `tau in [0,1)` together with the unknown physical period `T`. Collocation
//! at the shifted grid points turns `x' = T f(x)` into the square system
//!
//! ```text
//! (1/T) (C' c_d)_k - f_d(C c at t_k) = 0      (n rows per dimension)
//! x_{d0}(t_0) - a0 = 0                        (phase anchor row)
//! ```
//!
//! in the unknowns `[c_0, ..., c_{dim-1}, T]`. The anchor pins the time
//! shift of the cycle; it must target a value the chosen dimension crosses
//! with nonzero slope (anchoring at an extremum makes the bordered Jacobian
//! singular). A damped Newton iteration with step halving solves the system;
//! warm starts come from a fixed-step RK4 transient plus an
//! amplitude/period estimator on its tail.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::collocation::{basis_matrices, collocation_points, interpolate, BasisSpec, SplineFunction};
use crate::error::{Error, Result};
use crate::models::OscillatorModel;
use crate::spectral::Family;

/// Line-search floor: steps below `2^-10` abandon the iteration.
const MIN_LINE_SEARCH_STEP: f64 = 9.765625e-4;

/// Newton iteration controls. `damping_factor` is the initial step scale in
/// `(0, 1]`; each rejected step halves it down to the floor `2^-10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub damping_factor: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            max_iter: 50,
            tol: 1e-10,
            damping_factor: 1.0,
        }
    }
}

/// Phase condition `x_dimension(t_0) = value`, removing the time-shift
/// degeneracy of an autonomous cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAnchor {
    pub dimension: usize,
    pub value: f64,
}

/// A fully specified periodic steady-state solve: model, basis/grid, initial
/// spline and period guess, phase anchor, and Newton controls.
pub struct PSSProblem<'a> {
    model: &'a OscillatorModel,
    guess: SplineFunction,
    period_guess: f64,
    anchor: PhaseAnchor,
    config: NewtonConfig,
}

impl<'a> PSSProblem<'a> {
    pub fn new(
        model: &'a OscillatorModel,
        guess: SplineFunction,
        period_guess: f64,
        anchor: PhaseAnchor,
        config: NewtonConfig,
    ) -> Result<Self> {
        if !(period_guess.is_finite() && period_guess > 0.0) {
            return Err(Error::InvalidParams(format!(
                "period guess {period_guess} must be positive and finite"
            )));
        }
        if guess.dimension() != model.dimension() {
            return Err(Error::InvalidParams(format!(
                "guess has {} dimensions, model {} needs {}",
                guess.dimension(),
                model.name(),
                model.dimension()
            )));
        }
        if anchor.dimension >= model.dimension() {
            return Err(Error::InvalidParams(format!(
                "anchor dimension {} out of range for a {}-dimensional model",
                anchor.dimension,
                model.dimension()
            )));
        }
        if !anchor.value.is_finite() {
            return Err(Error::InvalidParams("anchor value must be finite".into()));
        }
        if !(config.tol.is_finite() && config.tol > 0.0) {
            return Err(Error::InvalidParams(format!(
                "tolerance {} must be positive",
                config.tol
            )));
        }
        if !(config.damping_factor > 0.0 && config.damping_factor <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "damping factor {} outside (0, 1]",
                config.damping_factor
            )));
        }
        Ok(PSSProblem {
            model,
            guess,
            period_guess,
            anchor,
            config,
        })
    }

    pub fn model(&self) -> &OscillatorModel {
        self.model
    }

    pub fn spec(&self) -> &BasisSpec {
        self.guess.spec()
    }

    pub fn guess(&self) -> &SplineFunction {
        &self.guess
    }

    pub fn period_guess(&self) -> f64 {
        self.period_guess
    }

    pub fn anchor(&self) -> PhaseAnchor {
        self.anchor
    }

    pub fn config(&self) -> NewtonConfig {
        self.config
    }
}

/// Converged (or abandoned) solve result. `trace` records the residual norm
/// before each accepted step and after the last one; it is strictly
/// decreasing by construction.
#[derive(Debug, Clone)]
pub struct PSSolution {
    spline: SplineFunction,
    period: f64,
    residual_norm: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
    fd_jacobian: bool,
}

#[derive(Serialize)]
struct SolutionRecord<'a> {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
    period: f64,
    residual_norm: f64,
    iterations: usize,
    converged: bool,
    coefficients: &'a [Vec<f64>],
}

impl PSSolution {
    pub fn spline(&self) -> &SplineFunction {
        &self.spline
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Residual norms along the accepted Newton path, initial guess first.
    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    /// True when the model supplied no analytic Jacobian and the solve used
    /// finite-difference columns.
    pub fn fd_jacobian(&self) -> bool {
        self.fd_jacobian
    }

    /// Peak-to-peak half-range of one state dimension over a dense uniform
    /// sampling of the normalized period.
    pub fn amplitude(&self, dim: usize, samples: usize) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..samples {
            let v = self.spline.evaluate_dim(dim, j as f64 / samples as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (hi - lo) / 2.0
    }

    /// Single-line JSON: basis fields, period, residual norm, iteration
    /// count, convergence flag, and the coefficients per dimension.
    pub fn to_json(&self) -> String {
        let spec = self.spline.spec();
        let record = SolutionRecord {
            family: spec.family(),
            m: spec.m(),
            n: spec.n(),
            sigma: spec.sigma(),
            period: self.period,
            residual_norm: self.residual_norm,
            iterations: self.iterations,
            converged: self.converged,
            coefficients: self.spline.coeffs(),
        };
        serde_json::to_string(&record).expect("plain numeric record")
    }

    /// Waveform CSV on the normalized period: header `t,x_0,...`, then
    /// `samples` rows at `t = j/samples`.
    pub fn to_waveform_csv(&self, samples: usize) -> String {
        let dim = self.spline.dimension();
        let mut out = String::from("t");
        for d in 0..dim {
            out.push_str(&format!(",x_{d}"));
        }
        out.push('\n');
        for j in 0..samples {
            let t = j as f64 / samples as f64;
            out.push_str(&format!("{t}"));
            for d in 0..dim {
                out.push_str(&format!(",{}", self.spline.evaluate_dim(d, t)));
            }
            out.push('\n');
        }
        out
    }
}

/// Packs spline coefficients and period into the Newton unknown vector
/// `[c_0, ..., c_{dim-1}, T]`.
pub fn pack_unknowns(spline: &SplineFunction, period: f64) -> DVector<f64> {
    let n = spline.spec().n();
    let dim = spline.dimension();
    let mut u = DVector::zeros(n * dim + 1);
    for (d, c) in spline.coeffs().iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            u[d * n + i] = v;
        }
    }
    u[n * dim] = period;
    u
}

/// Collocation matrices and scratch shared across residual and Jacobian
/// evaluations of one problem.
struct Workspace<'p, 'a> {
    problem: &'p PSSProblem<'a>,
    c_mat: DMatrix<f64>,
    cp_mat: DMatrix<f64>,
    n: usize,
    dim: usize,
}

impl<'p, 'a> Workspace<'p, 'a> {
    fn new(problem: &'p PSSProblem<'a>) -> Self {
        let (c_mat, cp_mat) = basis_matrices(problem.spec());
        Workspace {
            problem,
            c_mat,
            cp_mat,
            n: problem.spec().n(),
            dim: problem.model().dimension(),
        }
    }

    fn check(&self, unknowns: &DVector<f64>) -> Result<f64> {
        let expect = self.n * self.dim + 1;
        if unknowns.len() != expect {
            return Err(Error::InvalidParams(format!(
                "unknown vector has {} entries, expected {expect}",
                unknowns.len()
            )));
        }
        let period = unknowns[self.n * self.dim];
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParams(format!(
                "period {period} must be positive and finite"
            )));
        }
        Ok(period)
    }

    /// State and derivative samples at the collocation points, one column
    /// vector per dimension.
    fn samples(&self, unknowns: &DVector<f64>) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
        let mut x = Vec::with_capacity(self.dim);
        let mut xp = Vec::with_capacity(self.dim);
        for d in 0..self.dim {
            let c_d = unknowns.rows(d * self.n, self.n);
            x.push(&self.c_mat * c_d);
            xp.push(&self.cp_mat * c_d);
        }
        (x, xp)
    }

    fn residual(&self, unknowns: &DVector<f64>) -> Result<DVector<f64>> {
        let period = self.check(unknowns)?;
        let (x, xp) = self.samples(unknowns);
        let anchor = self.problem.anchor();
        let mut r = DVector::zeros(self.n * self.dim + 1);
        let mut state = vec![0.0; self.dim];
        let mut field = vec![0.0; self.dim];
        for k in 0..self.n {
            for d in 0..self.dim {
                state[d] = x[d][k];
            }
            self.problem.model().f_into(&state, &mut field);
            for d in 0..self.dim {
                r[d * self.n + k] = xp[d][k] / period - field[d];
            }
        }
        r[self.n * self.dim] = x[anchor.dimension][0] - anchor.value;
        Ok(r)
    }

    fn jacobian(&self, unknowns: &DVector<f64>) -> Result<DMatrix<f64>> {
        let period = self.check(unknowns)?;
        let (x, xp) = self.samples(unknowns);
        let anchor = self.problem.anchor();
        let size = self.n * self.dim + 1;
        let mut jac = DMatrix::zeros(size, size);
        let mut state = vec![0.0; self.dim];
        for k in 0..self.n {
            for d in 0..self.dim {
                state[d] = x[d][k];
            }
            let jf = self.problem.model().jacobian(&state);
            for d in 0..self.dim {
                let row = d * self.n + k;
                for l in 0..self.n {
                    jac[(row, d * self.n + l)] += self.cp_mat[(k, l)] / period;
                    for d2 in 0..self.dim {
                        jac[(row, d2 * self.n + l)] -= jf[(d, d2)] * self.c_mat[(k, l)];
                    }
                }
                jac[(row, size - 1)] = -xp[d][k] / (period * period);
            }
        }
        for l in 0..self.n {
            jac[(size - 1, anchor.dimension * self.n + l)] = self.c_mat[(0, l)];
        }
        Ok(jac)
    }
}

/// Collocation residual of the periodic steady-state system at the packed
/// unknowns. Rejects non-positive periods and wrong-size vectors.
pub fn pss_residual(problem: &PSSProblem, unknowns: &DVector<f64>) -> Result<DVector<f64>> {
    Workspace::new(problem).residual(unknowns)
}

/// Analytic Jacobian of [`pss_residual`] in coefficient space. Models
/// without an analytic state Jacobian contribute finite-difference blocks.
pub fn pss_jacobian(problem: &PSSProblem, unknowns: &DVector<f64>) -> Result<DMatrix<f64>> {
    Workspace::new(problem).jacobian(unknowns)
}

/// Damped Newton iteration on the collocation system. Each iteration solves
/// the bordered linear system by LU and accepts the first step scale (from
/// `damping_factor`, halving down to `2^-10`) that strictly reduces the
/// residual norm; failure to reduce abandons the solve unconverged. Trial
/// steps that leave the valid region (non-positive period) count as
/// rejected rather than erroring.
pub fn newton_solve(problem: &PSSProblem) -> Result<PSSolution> {
    let ws = Workspace::new(problem);
    let config = problem.config();
    let mut u = pack_unknowns(problem.guess(), problem.period_guess());
    let mut r_vec = ws.residual(&u)?;
    let mut r_norm = r_vec.norm();
    let mut trace = vec![r_norm];
    let mut iterations = 0;
    let mut converged = r_norm <= config.tol;
    while !converged && iterations < config.max_iter {
        let jac = ws.jacobian(&u)?;
        let delta = jac
            .lu()
            .solve(&(-&r_vec))
            .ok_or(Error::SingularJacobian { iteration: iterations })?;
        let mut step = config.damping_factor;
        let mut accepted = None;
        while step >= MIN_LINE_SEARCH_STEP {
            let u_try = &u + &delta * step;
            if let Ok(r_try_vec) = ws.residual(&u_try) {
                let r_try = r_try_vec.norm();
                if r_try < r_norm {
                    accepted = Some((u_try, r_try_vec, r_try));
                    break;
                }
            }
            step /= 2.0;
        }
        let Some((u_new, r_new_vec, r_new)) = accepted else {
            break;
        };
        u = u_new;
        r_vec = r_new_vec;
        r_norm = r_new;
        iterations += 1;
        trace.push(r_norm);
        converged = r_norm <= config.tol;
    }
    let n = problem.spec().n();
    let dim = problem.model().dimension();
    let coeffs: Vec<Vec<f64>> = (0..dim)
        .map(|d| u.rows(d * n, n).iter().copied().collect())
        .collect();
    Ok(PSSolution {
        spline: SplineFunction::new(*problem.spec(), coeffs)?,
        period: u[n * dim],
        residual_norm: r_norm,
        iterations,
        converged,
        trace,
        fd_jacobian: !problem.model().has_analytic_jacobian(),
    })
}

/// Fixed-step transient: `times[i] = i*dt` and the state rows to match.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Classic fixed-step RK4 integration of `x' = f(x)` from `x0` to `t_end`,
/// storing every step. Fails on non-finite states with the offending time.
pub fn transient_oracle(
    model: &OscillatorModel,
    x0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if x0.len() != model.dimension() {
        return Err(Error::InvalidParams(format!(
            "initial state has {} entries, model needs {}",
            x0.len(),
            model.dimension()
        )));
    }
    if !(dt.is_finite() && dt > 0.0) || !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need positive t_end and dt, got t_end={t_end} dt={dt}"
        )));
    }
    let steps = (t_end / dt).round() as usize;
    if steps == 0 {
        return Err(Error::InvalidParams(format!(
            "t_end={t_end} shorter than half a step dt={dt}"
        )));
    }
    let dim = model.dimension();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    states.push(x.clone());
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];
    for i in 0..steps {
        model.f_into(&x, &mut k1);
        for d in 0..dim {
            stage[d] = x[d] + 0.5 * dt * k1[d];
        }
        model.f_into(&stage, &mut k2);
        for d in 0..dim {
            stage[d] = x[d] + 0.5 * dt * k2[d];
        }
        model.f_into(&stage, &mut k3);
        for d in 0..dim {
            stage[d] = x[d] + dt * k3[d];
        }
        model.f_into(&stage, &mut k4);
        let t_next = (i + 1) as f64 * dt;
        for d in 0..dim {
            x[d] += dt / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            if !x[d].is_finite() {
                return Err(Error::NonFiniteState { t: t_next });
            }
        }
        times.push(t_next);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// Amplitude, period, and upward mean-crossing times of the second half of a
/// trajectory. The first half is discarded as transient; crossings are
/// detected on the mean-centered signal and refined by linear interpolation.
fn cycle_stats(traj: &Trajectory, dim: usize) -> Result<(f64, f64, Vec<f64>)> {
    if dim >= traj.states.first().map_or(0, Vec::len) {
        return Err(Error::InvalidParams(format!(
            "trajectory has no dimension {dim}"
        )));
    }
    let i0 = traj.times.len() / 2;
    let tail_t = &traj.times[i0..];
    let tail_x: Vec<f64> = traj.states[i0..].iter().map(|s| s[dim]).collect();
    if tail_x.len() < 2 {
        return Err(Error::InsufficientData(
            "trajectory too short to analyze".into(),
        ));
    }
    let mean = tail_x.iter().sum::<f64>() / tail_x.len() as f64;
    let s: Vec<f64> = tail_x.iter().map(|v| v - mean).collect();
    let mut cross = Vec::new();
    for i in 0..s.len() - 1 {
        if s[i] < 0.0 && s[i + 1] >= 0.0 {
            let frac = -s[i] / (s[i + 1] - s[i]);
            cross.push(tail_t[i] + (tail_t[i + 1] - tail_t[i]) * frac);
        }
    }
    if cross.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "found {} upward mean crossings, need at least 3",
            cross.len()
        )));
    }
    let period = (cross[cross.len() - 1] - cross[0]) / (cross.len() - 1) as f64;
    let window_start = cross[cross.len() - 1] - period;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (t, v) in tail_t.iter().zip(&tail_x) {
        if *t >= window_start {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    Ok(((hi - lo) / 2.0, period, cross))
}

/// Amplitude (peak-to-peak half-range over the last full cycle) and period
/// (mean upward mean-crossing spacing) of one trajectory dimension, after
/// discarding the first half as transient. Needs at least three crossings.
pub fn estimate_amplitude_period(traj: &Trajectory, dim: usize) -> Result<(f64, f64)> {
    let (amp, period, _) = cycle_stats(traj, dim)?;
    Ok((amp, period))
}

/// Builds a Newton starting point by integrating the model transient for 20
/// hint periods (the model's reference period, else `2*pi`), estimating
/// amplitude and period from the tail, resampling the last full cycle from
/// the last upward mean crossing backwards, and fitting the spline. Returns
/// the fitted spline, the period estimate, and the anchor value
/// `x_anchor(t_0)` read off the resampled cycle (a steep-branch point, since
/// the cycle starts at a mean crossing).
pub fn warm_start(
    model: &OscillatorModel,
    spec: &BasisSpec,
    anchor_dim: usize,
) -> Result<(SplineFunction, f64, f64)> {
    if anchor_dim >= model.dimension() {
        return Err(Error::InvalidParams(format!(
            "anchor dimension {anchor_dim} out of range for a {}-dimensional model",
            model.dimension()
        )));
    }
    let hint = model
        .reference()
        .map_or(2.0 * std::f64::consts::PI, |r| r.period);
    let dt = hint / 10_000.0;
    let traj = transient_oracle(model, model.default_state(), 20.0 * hint, dt)?;
    let (_, period, cross) = cycle_stats(&traj, anchor_dim)?;
    let start = cross[cross.len() - 1] - period;
    let pts = collocation_points(spec);
    let n = spec.n();
    let dim = model.dimension();
    let mut samples = vec![vec![0.0; n]; dim];
    for (k, &tk) in pts.iter().enumerate() {
        let tt = start + tk * period;
        let i = ((tt / dt) as usize).min(traj.times.len() - 2);
        let w = (tt - traj.times[i]) / dt;
        for d in 0..dim {
            samples[d][k] = (1.0 - w) * traj.states[i][d] + w * traj.states[i + 1][d];
        }
    }
    let coeffs: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| Ok(interpolate(spec, s)?.coeffs()[0].clone()))
        .collect::<Result<_>>()?;
    let spline = SplineFunction::new(*spec, coeffs)?;
    let a0 = samples[anchor_dim][0];
    Ok((spline, period, a0))
}
