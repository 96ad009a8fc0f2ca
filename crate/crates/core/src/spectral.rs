//! Discrete Fourier transform and the interpolation/damping symbols of the
//! periodic spline bases.
//!
//! The forward transform uses the POSITIVE exponent,
//! `x_hat_k = sum_l x_l exp(+2 pi i k l / n)`; the inverse applies the
//! negative exponent and the `1/n` factor. Consequence worth keeping in mind
//! everywhere downstream: the signal `exp(+2 pi i t)` sampled on the grid
//! lands in bin `n-1`, i.e. bin `k` carries continuous frequency `-k`
//! (mod n). All symbol identities below are stated in that bin order and are
//! pinned end-to-end by the collocation differentiation tests.
//!
//! The interpolation symbol of a basis with shift `x` is
//!
//! ```text
//! phi_m(x, xi)      = sum_k N_m(x + m/2 + k)        exp(2 pi i k xi)   (polynomial)
//! phi_{m,h}(x, xi)  = sum_k Q_{m,h}(h (x + m/2 + k)) exp(2 pi i k xi)  (trigonometric)
//! ```
//!
//! and the damping symbol is `psi = (d/dx phi) / phi`. Its imaginary part is
//! the effective differentiation frequency, its real part the damping rate:
//! `Re psi > 0` damps the corresponding grid mode. For the trigonometric
//! family the x-derivative is taken WITHOUT the chain-rule factor `h`, so
//! that `psi` is per unit time and the exact-differentiation identity
//! `psi(sigma, k/n) = -2 pi i k` (small `|k|`, odd order) holds literally;
//! for the polynomial family `psi` is per grid cell and the per-unit-time
//! eigenvalues of the differentiation map are `n * psi`, which is what
//! [`damping_spectrum`] returns for both families, in identical units.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bspline::{eval_n, eval_n_deriv, PolyOrder};
use crate::error::{Error, Result};
use crate::trigspline::{eval_q, eval_q_deriv, TrigBasisParams};

/// Below this magnitude of `|phi|` the damping symbol is reported singular.
/// Chosen to separate the true zero of `phi_3` at `(1/2, 1/2)` from
/// small-but-valid values: `|phi_3(0.45, 0.5)| ~ 1e-2`, five decades above.
pub const SINGULARITY_THRESHOLD: f64 = 1e-10;

/// Spline family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "poly")]
    Polynomial,
    #[serde(rename = "trig")]
    Trigonometric,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Polynomial => write!(f, "poly"),
            Family::Trigonometric => write!(f, "trig"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly" | "polynomial" => Ok(Family::Polynomial),
            "trig" | "trigonometric" => Ok(Family::Trigonometric),
            other => Err(Error::InvalidParams(format!(
                "unknown family '{other}' (expected poly|trig)"
            ))),
        }
    }
}

/// One point query against a symbol: family, order, mesh (ignored for the
/// polynomial family), shift argument `x` (typically the collocation shift
/// sigma) and normalized frequency `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolQuery {
    pub family: Family,
    pub m: usize,
    pub h: f64,
    pub x: f64,
    pub xi: f64,
}

impl SymbolQuery {
    pub fn poly(m: usize, x: f64, xi: f64) -> Self {
        SymbolQuery {
            family: Family::Polynomial,
            m,
            h: 0.0,
            x,
            xi,
        }
    }

    pub fn trig(m: usize, h: f64, x: f64, xi: f64) -> Self {
        SymbolQuery {
            family: Family::Trigonometric,
            m,
            h,
            x,
            xi,
        }
    }

    /// Damping queries are meaningful for `|x| < 1/2`; outside that range
    /// the symbol approaches its singularity and results are flagged as not
    /// recommended rather than rejected.
    pub fn in_recommended_range(&self) -> bool {
        self.x.abs() < 0.5
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidOrder {
                m: 0,
                reason: "order must be at least 1",
            });
        }
        if self.family == Family::Trigonometric {
            TrigBasisParams::new(self.m, self.h)?;
        }
        Ok(())
    }
}

/// Forward DFT, positive exponent, unnormalized. Dispatches to the radix-2
/// fast path for power-of-two lengths and to the direct O(n^2) sum
/// otherwise; the two paths agree to 1e-10 and the direct one is normative.
pub fn dft(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(samples, 1.0)
}

/// Inverse DFT: negative exponent and the 1/n factor.
pub fn idft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    let mut out = transform(spectrum, -1.0)?;
    let scale = 1.0 / n as f64;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Direct O(n^2) transform; `sign` +1 for the forward convention.
pub fn dft_direct(samples: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("dft of zero samples"));
    }
    let n = samples.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, &s) in samples.iter().enumerate() {
            let ang = sign * 2.0 * PI * (k as f64) * (l as f64) / n as f64;
            acc += s * Complex64::new(ang.cos(), ang.sin());
        }
        out.push(acc);
    }
    Ok(out)
}

fn transform(samples: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("dft of zero samples"));
    }
    let n = samples.len();
    if n.is_power_of_two() && n > 1 {
        let mut buf = samples.to_vec();
        fft_pow2(&mut buf, sign);
        Ok(buf)
    } else {
        dft_direct(samples, sign)
    }
}

/// Iterative radix-2 transform (bit-reversal then butterflies), in place.
fn fft_pow2(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let w_len = Complex64::new(ang.cos(), ang.sin());
        for chunk in buf.chunks_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            let half = len / 2;
            for i in 0..half {
                let u = chunk[i];
                let v = chunk[i + half] * w;
                chunk[i] = u + v;
                chunk[i + half] = u - v;
                w *= w_len;
            }
        }
        len <<= 1;
    }
}

/// Interpolation symbol. The sum is finite: only the translates whose
/// support contains the shifted argument contribute (at most `m` nonzero
/// terms), so there is no truncation error.
pub fn phi(q: &SymbolQuery) -> Result<Complex64> {
    q.validate()?;
    symbol_sums(q).map(|(value, _)| value)
}

/// Damping symbol `psi = (d/dx phi) / phi`. Errors with the exact location
/// when `|phi|` falls below [`SINGULARITY_THRESHOLD`].
pub fn psi(q: &SymbolQuery) -> Result<Complex64> {
    q.validate()?;
    if q.m < 2 {
        return Err(Error::InvalidOrder {
            m: q.m,
            reason: "damping symbol needs order at least 2",
        });
    }
    let (value, derivative) = symbol_sums(q)?;
    let magnitude = value.norm();
    if magnitude < SINGULARITY_THRESHOLD {
        return Err(Error::SingularSymbol {
            x: q.x,
            xi: q.xi,
            magnitude,
            threshold: SINGULARITY_THRESHOLD,
        });
    }
    Ok(derivative / value)
}

/// Returns (phi, d/dx phi) in one pass over the contributing translates.
/// For the trigonometric family the derivative deliberately omits the
/// chain-rule factor `h` (see the module docs on units).
fn symbol_sums(q: &SymbolQuery) -> Result<(Complex64, Complex64)> {
    let m = q.m;
    let center = q.x + m as f64 / 2.0;
    // Contributing k: 0 <= center + k <= m, padded by one on each side so
    // boundary terms fall out through exact support zeros. The window is
    // closed because the averaged knot slopes put derivative mass on the
    // endpoints (order 2); basis values there are exactly zero.
    let lo = (-center).floor() as i64 - 1;
    let hi = (m as f64 - center).ceil() as i64 + 1;
    let mut value = Complex64::new(0.0, 0.0);
    let mut derivative = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        let arg = center + k as f64;
        if arg < 0.0 || arg > m as f64 {
            continue;
        }
        let (v, d) = match q.family {
            Family::Polynomial => {
                let order = PolyOrder::new(m)?;
                let v = eval_n(order, arg);
                let d = if m >= 2 {
                    eval_n_deriv(order, arg)?
                } else {
                    0.0
                };
                (v, d)
            }
            Family::Trigonometric => {
                let p = TrigBasisParams::new(m, q.h)?;
                let v = eval_q(p, q.h * arg);
                let d = if m >= 2 {
                    eval_q_deriv(p, q.h * arg)?
                } else {
                    0.0
                };
                (v, d)
            }
        };
        let ang = 2.0 * PI * k as f64 * q.xi;
        let phase = Complex64::new(ang.cos(), ang.sin());
        value += phase * v;
        derivative += phase * d;
    }
    Ok((value, derivative))
}

/// One grid frequency of a damping spectrum; `value = None` marks a bin
/// where the symbol is singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub xi: f64,
    pub value: Option<Complex64>,
}

/// Damping spectrum over the grid frequencies `xi = k/n`, together with the
/// query template that generated it (`xi` in the template is the first grid
/// frequency; entries override it).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub meta: SymbolQuery,
}

impl Spectrum {
    /// CSV with the exact column set `xi,re_psi,im_psi,singular`. Singular
    /// bins write zeros with the flag set; the flag is authoritative.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi,re_psi,im_psi,singular\n");
        for e in &self.entries {
            match e.value {
                Some(v) => {
                    out.push_str(&format!("{},{},{},0\n", e.xi, v.re, v.im));
                }
                None => {
                    out.push_str(&format!("{},0,0,1\n", e.xi));
                }
            }
        }
        out
    }
}

/// Eigenvalues of the samples-to-derivative-samples map at every grid
/// frequency `k/n`, in per-unit-time units for BOTH families (polynomial
/// entries are `n * psi_m`; trigonometric entries are the per-period symbol
/// directly). Bins where the symbol is singular carry the explicit marker
/// instead of a value.
pub fn damping_spectrum(family: Family, m: usize, n: usize, sigma: f64) -> Result<Spectrum> {
    // n > m keeps the support of one translate inside a single period, so
    // these entries are exactly the eigenvalues of the circulant pair built
    // on the same grid.
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
    let h = 1.0 / n as f64;
    let scale = match family {
        Family::Polynomial => n as f64,
        Family::Trigonometric => 1.0,
    };
    let mut entries = Vec::with_capacity(n);
    for k in 0..n {
        let xi = k as f64 / n as f64;
        let q = SymbolQuery {
            family,
            m,
            h,
            x: sigma,
            xi,
        };
        match psi(&q) {
            Ok(v) => entries.push(SpectrumEntry {
                xi,
                value: Some(v * scale),
            }),
            Err(Error::SingularSymbol { .. }) => entries.push(SpectrumEntry { xi, value: None }),
            Err(other) => return Err(other),
        }
    }
    Ok(Spectrum {
        entries,
        meta: SymbolQuery {
            family,
            m,
            h,
            x: sigma,
            xi: 0.0,
        },
    })
}
