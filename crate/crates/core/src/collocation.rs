//! Uniform periodic spline collocation: collocation points, interpolation
//! (samples to coefficients), spline evaluation, and differentiation at the
//! collocation points, for both basis families.
//!
//! On the grid of size `n` (mesh `h = 1/n`) with shift `sigma`, the
//! collocation points are `t_k = (k + m/2 + sigma)/n` taken mod 1, and the
//! interpolation system couples samples and coefficients through a circulant
//! matrix: `y_k = sum_l c_l B((k - l) mod n)` where `B` is the periodized
//! basis translate. The default interpolation path divides in the frequency
//! domain, `c_hat_k = y_hat_k / phi(sigma, k/n)`; a dense LU solve of the
//! same circulant system ships as the verification path. Coefficient indices
//! wrap mod `n`, so translates reaching across the period boundary reappear
//! on the other side.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bspline::{eval_n, eval_n_deriv, PolyOrder};
use crate::error::{Error, Result};
use crate::spectral::{dft, idft, phi, Family, SymbolQuery, SINGULARITY_THRESHOLD};
use crate::trigspline::{eval_q, eval_q_deriv, TrigBasisParams};

/// Validated basis/grid selection: family, order `m >= 2`, grid size
/// `n > m`, and shift `|sigma| < 1/2`. `n > m` keeps the trigonometric
/// stability condition `h m < 1` strict and gives translate supports that
/// fit inside one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisSpec {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
}

impl BasisSpec {
    pub fn new(family: Family, m: usize, n: usize, sigma: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidOrder {
                m,
                reason: "collocation needs order at least 2",
            });
        }
        if n <= m {
            return Err(Error::InvalidParams(format!(
                "grid size n={n} must exceed order m={m}"
            )));
        }
        if sigma.abs() >= 0.5 {
            return Err(Error::InvalidParams(format!(
                "shift sigma={sigma} outside (-1/2, 1/2)"
            )));
        }
        if family == Family::Trigonometric {
            // n > m makes h*m < 1 automatic; constructing validates the rest.
            TrigBasisParams::new(m, 1.0 / n as f64)?;
        }
        Ok(BasisSpec { family, m, n, sigma })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    fn symbol_query(&self, xi: f64) -> SymbolQuery {
        SymbolQuery {
            family: self.family,
            m: self.m,
            h: self.h(),
            x: self.sigma,
            xi,
        }
    }

    /// Basis translate evaluated at the dimensionless shifted argument
    /// `a = k - l + m/2 + sigma` (grid-cell units for both families).
    fn basis_value(&self, arg: f64) -> f64 {
        match self.family {
            Family::Polynomial => eval_n(PolyOrder::new(self.m).expect("validated"), arg),
            Family::Trigonometric => {
                let p = TrigBasisParams::new(self.m, self.h()).expect("validated");
                eval_q(p, self.h() * arg)
            }
        }
    }

    /// Time derivative of the translate at the same argument, per unit time:
    /// the polynomial chain rule contributes the factor `n`, while the
    /// trigonometric spline is already a function of absolute time.
    fn basis_deriv(&self, arg: f64) -> f64 {
        match self.family {
            Family::Polynomial => {
                let d = eval_n_deriv(PolyOrder::new(self.m).expect("validated"), arg)
                    .expect("order >= 2 validated");
                self.n as f64 * d
            }
            Family::Trigonometric => {
                let p = TrigBasisParams::new(self.m, self.h()).expect("validated");
                eval_q_deriv(p, self.h() * arg).expect("order >= 2 validated")
            }
        }
    }
}

/// Periodic spline with one coefficient sequence of length `n` per state
/// dimension. Immutable value type; evaluation wraps time mod 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplineFunction {
    spec: BasisSpec,
    coeffs: Vec<Vec<f64>>,
}

impl SplineFunction {
    /// Validates that every dimension carries exactly `n` coefficients.
    pub fn new(spec: BasisSpec, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams(
                "spline needs at least one dimension".into(),
            ));
        }
        for (d, c) in coeffs.iter().enumerate() {
            if c.len() != spec.n() {
                return Err(Error::InvalidParams(format!(
                    "dimension {d} has {} coefficients, expected n={}",
                    c.len(),
                    spec.n()
                )));
            }
        }
        Ok(SplineFunction { spec, coeffs })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    /// Evaluates one state dimension at `t` (wrapped mod 1).
    pub fn evaluate_dim(&self, dim: usize, t: f64) -> f64 {
        evaluate_coeffs(&self.spec, &self.coeffs[dim], t)
    }

    /// CSV form: a metadata header (`family,m,n,sigma` plus its value row)
    /// followed by one `dim,index,coeff` row per coefficient per dimension.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,m,n,sigma\n");
        out.push_str(&format!(
            "{},{},{},{}\n",
            self.spec.family(),
            self.spec.m(),
            self.spec.n(),
            self.spec.sigma()
        ));
        for (d, dim_coeffs) in self.coeffs.iter().enumerate() {
            for (i, c) in dim_coeffs.iter().enumerate() {
                out.push_str(&format!("{d},{i},{c}\n"));
            }
        }
        out
    }
}

/// The collocation points `t_k = (k + m/2 + sigma)/n` mod 1, `k = 0..n-1`.
/// Spacing is exactly `1/n`; the mod-1 wrap can rotate the tail to 0.
pub fn collocation_points(spec: &BasisSpec) -> Vec<f64> {
    let n = spec.n();
    let offset = spec.m() as f64 / 2.0 + spec.sigma();
    (0..n)
        .map(|k| ((k as f64 + offset) / n as f64).rem_euclid(1.0))
        .collect()
}

/// Periodized translate row: `row[j] = B(j + m/2 + sigma)` summed over the
/// period images. Supports are shorter than the period, so at most one image
/// contributes per index. `deriv` selects the per-unit-time derivative row.
fn periodized_row(spec: &BasisSpec, deriv: bool) -> Vec<f64> {
    let n = spec.n();
    let offset = spec.m() as f64 / 2.0 + spec.sigma();
    (0..n)
        .map(|j| {
            let mut acc = 0.0;
            for image in [j as f64, j as f64 - n as f64] {
                let arg = image + offset;
                acc += if deriv {
                    spec.basis_deriv(arg)
                } else {
                    spec.basis_value(arg)
                };
            }
            acc
        })
        .collect()
}

/// Dense circulant matrices of the basis at the collocation points:
/// values `C[k][l]` and per-unit-time derivatives `C'[k][l]`, both equal to
/// the periodized row at index `(k - l) mod n`.
pub fn basis_matrices(spec: &BasisSpec) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = spec.n();
    let values = periodized_row(spec, false);
    let derivs = periodized_row(spec, true);
    let mut c = DMatrix::zeros(n, n);
    let mut cp = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let idx = (k + n - l) % n;
            c[(k, l)] = values[idx];
            cp[(k, l)] = derivs[idx];
        }
    }
    (c, cp)
}

/// Interpolates one dimension of samples on the collocation grid by DFT
/// division: `c_hat_k = y_hat_k / phi(sigma, k/n)`. Errors with the
/// offending bin if any `phi` value is within the singularity threshold.
pub fn interpolate(spec: &BasisSpec, samples: &[f64]) -> Result<SplineFunction> {
    let coeffs = interpolate_coeffs(spec, samples)?;
    SplineFunction::new(*spec, vec![coeffs])
}

fn interpolate_coeffs(spec: &BasisSpec, samples: &[f64]) -> Result<Vec<f64>> {
    let n = spec.n();
    if samples.len() != n {
        return Err(Error::InvalidParams(format!(
            "expected {n} samples, got {}",
            samples.len()
        )));
    }
    let y: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut y_hat = dft(&y)?;
    for (k, value) in y_hat.iter_mut().enumerate() {
        let xi = k as f64 / n as f64;
        let phi_k = phi(&spec.symbol_query(xi))?;
        if phi_k.norm() < SINGULARITY_THRESHOLD {
            return Err(Error::InterpolationUnstable { k, xi });
        }
        *value /= phi_k;
    }
    let c = idft(&y_hat)?;
    Ok(c.into_iter().map(|v| v.re).collect())
}

/// Verification path: solves the dense circulant system with LU instead of
/// dividing in the frequency domain. Must agree with [`interpolate`] to
/// 1e-9; tests hold both paths to that.
pub fn interpolate_dense(spec: &BasisSpec, samples: &[f64]) -> Result<SplineFunction> {
    let n = spec.n();
    if samples.len() != n {
        return Err(Error::InvalidParams(format!(
            "expected {n} samples, got {}",
            samples.len()
        )));
    }
    let (c_mat, _) = basis_matrices(spec);
    let rhs = nalgebra::DVector::from_column_slice(samples);
    let solved = c_mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidParams("circulant interpolation matrix is singular".into()))?;
    SplineFunction::new(*spec, vec![solved.iter().copied().collect()])
}

/// Evaluates every state dimension of `f` at `t` (wrapped mod 1).
pub fn evaluate(f: &SplineFunction, t: f64) -> Vec<f64> {
    f.coeffs
        .iter()
        .map(|c| evaluate_coeffs(&f.spec, c, t))
        .collect()
}

fn evaluate_coeffs(spec: &BasisSpec, coeffs: &[f64], t: f64) -> f64 {
    let n = spec.n();
    let m = spec.m();
    let t_wrapped = t.rem_euclid(1.0);
    // Dimensionless position: translate l contributes where the shifted
    // argument u - l falls inside (0, m].
    let u = n as f64 * t_wrapped;
    let base = u.floor() as i64;
    let mut acc = 0.0;
    for back in 0..=(m as i64) {
        let l = base - back;
        let arg = u - l as f64;
        if arg <= 0.0 || arg > m as f64 {
            continue;
        }
        let idx = l.rem_euclid(n as i64) as usize;
        acc += coeffs[idx] * spec.basis_value(arg);
    }
    acc
}

/// Derivative samples `s'(t_k)` for every dimension, by direct summation of
/// the derivative translates (the frequency-domain route `idft(psi * y_hat)`
/// is the cross-check, not the implementation).
pub fn differentiate_at_collocation(f: &SplineFunction) -> Vec<Vec<f64>> {
    let spec = &f.spec;
    let n = spec.n();
    let derivs = periodized_row(spec, true);
    f.coeffs
        .iter()
        .map(|c| {
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| c[l] * derivs[(k + n - l) % n])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// The samples-to-derivative-samples map `D = C' C^{-1}`: circulant, with
/// the damping spectrum as its eigenvalues (the DFT of its first column;
/// the first row transforms to the reflected spectrum).
pub fn assemble_diff_operator(spec: &BasisSpec) -> Result<DMatrix<f64>> {
    let (c_mat, cp_mat) = basis_matrices(spec);
    let inv = c_mat
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::InvalidParams("circulant interpolation matrix is singular".into()))?;
    Ok(cp_mat * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::damping_spectrum;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn spec(family: Family, m: usize, n: usize, sigma: f64) -> BasisSpec {
        BasisSpec::new(family, m, n, sigma).unwrap()
    }

    fn sample_fn(s: &BasisSpec, f: impl Fn(f64) -> f64) -> Vec<f64> {
        collocation_points(s).into_iter().map(f).collect()
    }

    #[test]
    fn spec_validation() {
        assert!(BasisSpec::new(Family::Polynomial, 1, 8, 0.0).is_err());
        assert!(BasisSpec::new(Family::Polynomial, 3, 3, 0.0).is_err());
        assert!(BasisSpec::new(Family::Polynomial, 3, 8, 0.5).is_err());
        assert!(BasisSpec::new(Family::Trigonometric, 3, 4, -0.25).is_ok());
    }

    #[test]
    fn collocation_point_values() {
        let pts = collocation_points(&spec(Family::Polynomial, 2, 4, 0.0));
        let expect = [0.25, 0.5, 0.75, 0.0];
        for (p, e) in pts.iter().zip(expect) {
            assert_abs_diff_eq!(*p, e, epsilon = 1e-15);
        }
        let pts = collocation_points(&spec(Family::Polynomial, 3, 8, -0.25));
        assert_abs_diff_eq!(pts[0], 0.15625, epsilon = 1e-15);
        // Uniform spacing 1/n mod 1.
        for w in pts.windows(2) {
            let gap = (w[1] - w[0]).rem_euclid(1.0);
            assert_abs_diff_eq!(gap, 0.125, epsilon = 1e-12);
        }
    }

    #[test]
    fn constants_reproduce_exactly() {
        let s = spec(Family::Polynomial, 3, 12, -0.25);
        let f = interpolate(&s, &[5.0; 12]).unwrap();
        for c in &f.coeffs()[0] {
            assert_abs_diff_eq!(*c, 5.0, epsilon = 1e-12);
        }
        for i in 0..10 {
            let t = i as f64 / 10.0;
            assert_abs_diff_eq!(f.evaluate_dim(0, t), 5.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn trig_interpolation_is_exact_for_low_harmonics() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0c);
        for &n in &[8usize, 16, 32] {
            let s = spec(Family::Trigonometric, 3, n, -0.25);
            let f = interpolate(&s, &sample_fn(&s, |t| (2.0 * PI * t).cos())).unwrap();
            for _ in 0..200 {
                let t: f64 = rng.gen_range(0.0..1.0);
                assert_abs_diff_eq!(f.evaluate_dim(0, t), (2.0 * PI * t).cos(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn poly_interpolation_deviation_is_frozen() {
        // Grid deviation of the order-3 polynomial interpolant of cos on
        // n=16: computed once with the dense path on a 512-point grid and
        // kept as a regression band. Polynomial splines are not exact here.
        let s = spec(Family::Polynomial, 3, 16, -0.25);
        let f = interpolate_dense(&s, &sample_fn(&s, |t| (2.0 * PI * t).cos())).unwrap();
        let dev = (0..512)
            .map(|i| {
                let t = i as f64 / 512.0;
                (f.evaluate_dim(0, t) - (2.0 * PI * t).cos()).abs()
            })
            .fold(0.0, f64::max);
        assert!(dev > 1e-4, "deviation {dev} suspiciously small");
        assert!(dev < 2e-3, "deviation {dev} regressed");
        assert_abs_diff_eq!(dev, 9.7598e-4, epsilon = 2e-8);
    }

    #[test]
    fn even_order_trig_space_misses_the_fundamental() {
        // Even-order trigonometric spline spaces pair with anti-periodic
        // functions and cannot reproduce the 1-periodic fundamental; the
        // order-2 interpolant misses cos by percent-level errors where the
        // order-3 one is exact to round-off.
        let s2 = spec(Family::Trigonometric, 2, 16, -0.25);
        let f2 = interpolate(&s2, &sample_fn(&s2, |t| (2.0 * PI * t).cos())).unwrap();
        let dev = (0..257)
            .map(|i| {
                let t = i as f64 / 257.0;
                (f2.evaluate_dim(0, t) - (2.0 * PI * t).cos()).abs()
            })
            .fold(0.0, f64::max);
        assert!(dev > 1e-3, "even order unexpectedly accurate: {dev}");
    }

    #[test]
    fn dft_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xafe);
        for family in [Family::Polynomial, Family::Trigonometric] {
            for &m in &[2usize, 3, 4, 5] {
                for &n in &[8usize, 16] {
                    for &sigma in &[-0.3, -0.25, -0.1, 0.0, 0.1] {
                        let s = spec(family, m, n, sigma);
                        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let a = interpolate(&s, &y).unwrap();
                        let b = interpolate_dense(&s, &y).unwrap();
                        for (ca, cb) in a.coeffs()[0].iter().zip(&b.coeffs()[0]) {
                            assert_abs_diff_eq!(ca, cb, epsilon = 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_reproduces_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x27);
        for family in [Family::Polynomial, Family::Trigonometric] {
            for &m in &[2usize, 3, 4, 5] {
                for &n in &[8usize, 16, 32] {
                    for &sigma in &[-0.3, -0.25, -0.1, 0.0, 0.1] {
                        let s = spec(family, m, n, sigma);
                        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let f = interpolate(&s, &y).unwrap();
                        let pts = collocation_points(&s);
                        for (k, &t) in pts.iter().enumerate() {
                            assert_abs_diff_eq!(f.evaluate_dim(0, t), y[k], epsilon = 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn evaluation_is_periodic() {
        let s = spec(Family::Trigonometric, 3, 16, -0.25);
        let f = interpolate(&s, &sample_fn(&s, |t| (2.0 * PI * t).sin())).unwrap();
        // Representable offsets keep t+1 exact, so wrapping is bit-identical.
        for i in 0..256 {
            let t = i as f64 / 256.0;
            assert_eq!(f.evaluate_dim(0, t), f.evaluate_dim(0, t + 1.0));
        }
    }

    #[test]
    fn interpolation_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11e);
        let s = spec(Family::Polynomial, 4, 16, -0.2);
        let y: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let z: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (alpha, beta) = (0.7, -1.3);
        let combined: Vec<f64> = y.iter().zip(&z).map(|(a, b)| alpha * a + beta * b).collect();
        let fy = interpolate(&s, &y).unwrap();
        let fz = interpolate(&s, &z).unwrap();
        let fc = interpolate(&s, &combined).unwrap();
        for i in 0..16 {
            let lin = alpha * fy.coeffs()[0][i] + beta * fz.coeffs()[0][i];
            assert_abs_diff_eq!(fc.coeffs()[0][i], lin, epsilon = 1e-10);
        }
        let dy = differentiate_at_collocation(&fy);
        let dz = differentiate_at_collocation(&fz);
        let dc = differentiate_at_collocation(&fc);
        for i in 0..16 {
            let lin = alpha * dy[0][i] + beta * dz[0][i];
            assert_abs_diff_eq!(dc[0][i], lin, epsilon = 1e-10);
        }
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let s = spec(Family::Polynomial, 3, 8, -0.25);
        let f = interpolate(&s, &[2.5; 8]).unwrap();
        for v in &differentiate_at_collocation(&f)[0] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn trig_differentiation_is_exact_on_the_fundamental() {
        let s = spec(Family::Trigonometric, 3, 16, -0.25);
        let f = interpolate(&s, &sample_fn(&s, |t| (2.0 * PI * t).sin())).unwrap();
        let d = differentiate_at_collocation(&f);
        for (k, &t) in collocation_points(&s).iter().enumerate() {
            assert_abs_diff_eq!(d[0][k], 2.0 * PI * (2.0 * PI * t).cos(), epsilon = 1e-9);
        }
    }

    #[test]
    fn poly_differentiation_error_is_frozen() {
        // Coarse-grid damping/phase error of the order-3 polynomial basis at
        // sigma=-1/4: computed once and kept as a regression band.
        let s = spec(Family::Polynomial, 3, 8, -0.25);
        let f = interpolate(&s, &sample_fn(&s, |t| (2.0 * PI * t).sin())).unwrap();
        let d = differentiate_at_collocation(&f);
        let err = collocation_points(&s)
            .iter()
            .enumerate()
            .map(|(k, &t)| (d[0][k] - 2.0 * PI * (2.0 * PI * t).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err > 0.01, "error {err} suspiciously small");
        assert!(err < 0.1, "error {err} regressed");
        assert_abs_diff_eq!(err, 0.08182149, epsilon = 1e-7);
    }

    #[test]
    fn spectral_and_direct_differentiation_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x70c);
        for family in [Family::Polynomial, Family::Trigonometric] {
            let s = spec(family, 3, 16, -0.25);
            let y: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = interpolate(&s, &y).unwrap();
            let direct = &differentiate_at_collocation(&f)[0];
            let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let mut y_hat = dft(&yc).unwrap();
            let spectrum = damping_spectrum(family, 3, 16, -0.25).unwrap();
            for (k, v) in y_hat.iter_mut().enumerate() {
                *v *= spectrum.entries[k].value.unwrap();
            }
            let via_symbol = idft(&y_hat).unwrap();
            for (a, b) in direct.iter().zip(&via_symbol) {
                assert_abs_diff_eq!(*a, b.re, epsilon = 1e-10);
                assert_abs_diff_eq!(b.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn diff_operator_is_circulant_with_symbol_eigenvalues() {
        for family in [Family::Polynomial, Family::Trigonometric] {
            let s = spec(family, 3, 16, -0.25);
            let n = s.n();
            let d = assemble_diff_operator(&s).unwrap();
            // Annihilates constants.
            let ones = nalgebra::DVector::from_element(n, 1.0);
            assert!((&d * &ones).norm() < 1e-10);
            // Circulant: every row is a rotation of the first.
            for k in 1..n {
                for l in 0..n {
                    let expect = d[(0, (l + n - k) % n)];
                    assert_abs_diff_eq!(d[(k, l)], expect, epsilon = 1e-10);
                }
            }
            // DFT of the first column = damping spectrum; the first row
            // transforms to the reflected spectrum (bin pairing k <-> n-k).
            let spectrum = damping_spectrum(family, 3, 16, -0.25).unwrap();
            let col: Vec<Complex64> = (0..n).map(|k| Complex64::new(d[(k, 0)], 0.0)).collect();
            let col_hat = dft(&col).unwrap();
            let row: Vec<Complex64> = (0..n).map(|l| Complex64::new(d[(0, l)], 0.0)).collect();
            let row_hat = dft(&row).unwrap();
            for k in 0..n {
                let psi_k = spectrum.entries[k].value.unwrap();
                assert!((col_hat[k] - psi_k).norm() < 1e-9, "col bin {k}");
                let psi_reflected = spectrum.entries[(n - k) % n].value.unwrap();
                assert!((row_hat[k] - psi_reflected).norm() < 1e-9, "row bin {k}");
            }
        }
    }

    #[test]
    fn diff_operator_maps_cos_to_minus_sin() {
        let s = spec(Family::Trigonometric, 3, 16, -0.25);
        let d = assemble_diff_operator(&s).unwrap();
        let pts = collocation_points(&s);
        let y = nalgebra::DVector::from_iterator(16, pts.iter().map(|&t| (2.0 * PI * t).cos()));
        let dy = &d * &y;
        for (k, &t) in pts.iter().enumerate() {
            assert_abs_diff_eq!(dy[k], -2.0 * PI * (2.0 * PI * t).sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn unstable_interpolation_names_the_bin() {
        // sigma within 1e-13 of 1/2 collapses phi at the Nyquist bin.
        let s = BasisSpec::new(Family::Polynomial, 3, 8, 0.5 - 1e-13).unwrap();
        let y = [1.0, 0.5, -0.25, 0.0, 0.75, -1.0, 0.1, 0.2];
        match interpolate(&s, &y) {
            Err(Error::InterpolationUnstable { k, xi }) => {
                assert_eq!(k, 4);
                assert_abs_diff_eq!(xi, 0.5, epsilon = 1e-15);
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn sample_count_mismatch_rejected() {
        let s = spec(Family::Polynomial, 3, 8, -0.25);
        assert!(interpolate(&s, &[1.0; 7]).is_err());
        assert!(interpolate_dense(&s, &[1.0; 9]).is_err());
    }

    #[test]
    fn spline_csv_layout() {
        let s = spec(Family::Trigonometric, 3, 4, -0.25);
        let f = SplineFunction::new(s, vec![vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let csv = f.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "family,m,n,sigma");
        assert_eq!(lines[1], "trig,3,4,-0.25");
        assert_eq!(lines[2], "0,0,1");
        assert_eq!(lines.len(), 6);
        assert!(SplineFunction::new(s, vec![vec![1.0; 3]]).is_err());
    }
}
