//! Uniform periodic spline collocation with damping diagnostics and a
//! periodic steady-state solver for autonomous oscillators.
//!
//! The crate is organized bottom-up:
//!
//! * [`bspline`] evaluates cardinal (polynomial) B-splines `N_m` and their
//!   first derivatives.
//! * [`trigspline`] evaluates trigonometric B-splines `Q_{m,h}` built from a
//!   sine-weighted recursion, for 1-periodic grids.
//! * [`spectral`] holds the discrete Fourier transform (positive-exponent
//!   convention), the interpolation symbol `phi`, the damping symbol `psi`,
//!   and grid spectra of the differentiation map.
//! * [`collocation`] interpolates samples on the uniform shifted grid
//!   `t_k = (k + m/2 + sigma)/n`, evaluates the resulting splines, and
//!   differentiates them at the collocation points via circulant/DFT solves.
//! * [`pss`] computes periodic steady states of autonomous oscillators by a
//!   damped Newton iteration on the collocation system with unknown period,
//!   plus a fixed-step RK4 transient integrator used as ground truth.
//! * [`models`] provides built-in oscillator right-hand sides with analytic
//!   Jacobians and frozen reference data.
//!
//! Everything is deterministic: no global state, no hidden randomness, and
//! identical inputs produce byte-identical serialized outputs.
//!
//! # Conventions
//!
//! Time is normalized so all splines live on the unit period; physical
//! periods enter only through the solver's `1/T` factor. The DFT uses the
//! positive exponent in the forward direction, so the spectrum of a real
//! waveform carries the fundamental in bin `n-1` and its conjugate in bin 1;
//! the damping spectra returned by [`spectral::damping_spectrum`] are the
//! eigenvalues of the samples-to-derivative-samples map in exactly that bin
//! order. A shift `sigma` in `(-1/2, 0)` introduces numerical damping
//! (`Re psi > 0`); `sigma = 0` is damping-free.

pub mod bspline;
pub mod collocation;
pub mod error;
pub mod models;
pub mod pss;
pub mod spectral;
pub mod trigspline;

pub use bspline::{eval_n, eval_n_deriv, PolyOrder};
pub use collocation::{
    assemble_diff_operator, basis_matrices, collocation_points, differentiate_at_collocation,
    evaluate, interpolate, interpolate_dense, BasisSpec, SplineFunction,
};
pub use error::{Error, Result};
pub use models::{
    circle_model, model_by_name, van_der_pol, OscillatorModel, Reference, AVAILABLE_MODELS,
};
pub use pss::{
    estimate_amplitude_period, newton_solve, pack_unknowns, pss_jacobian, pss_residual,
    transient_oracle, warm_start, NewtonConfig, PSSProblem, PSSolution, PhaseAnchor, Trajectory,
};
pub use spectral::{
    damping_spectrum, dft, dft_direct, idft, phi, psi, Family, Spectrum, SpectrumEntry,
    SymbolQuery,
};
