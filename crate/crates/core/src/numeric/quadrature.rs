//! Fourier integrals `(2 pi)^-1 pv ∫ e^{i x xi} s(xi) d xi` sampled at
//! `x = j h`, by an FFT trapezoid sum with Gaussian regularization
//! `exp(-(xi / R)^2)` and Richardson extrapolation over `R, 2R, 4R`.
//!
//! The symmetric weight makes the value at a jump the principal value. A
//! kink of the kernel gives an `O(1/R)` error there and the smooth part an
//! `O(1/R^2)` one; both are removed by `(8 Q(4R) - 6 Q(2R) + Q(R)) / 3`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::spectral::signed_index;
use crate::error::{Error, Result};

const MAX_FFT_LEN: usize = 1 << 23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// `R = radius_factor / h`.
    pub radius_factor: f64,
    /// Largest admissible `max |Q(2R) - Q(R)|`.
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { radius_factor: 10.0, tol: 1e-3 }
    }
}

/// Values at `x = j h` for `j` in `jmin..=jmax` with regularization radius
/// `radius`. `period` bounds the x-period of the discrete sum from below;
/// it must exceed the sampled range plus the kernel's decay length.
pub fn regularized_kernel(
    symbol: &dyn Fn(f64) -> Complex64,
    h: f64,
    jmin: i64,
    jmax: i64,
    radius: f64,
    period: f64,
) -> Result<Vec<Complex64>> {
    // Oversampling m puts the cutoff pi m / h at least 5R.
    let m = ((5.0 * radius * h / std::f64::consts::PI).ceil() as usize).max(1);
    let dx = h / m as f64;
    let span = (jmax - jmin) as f64 * h;
    let need = (period.max(2.0 * span + 1.0) / dx).ceil() as usize;
    let n = need.next_power_of_two();
    if n > MAX_FFT_LEN {
        return Err(Error::InvalidArgument(format!("kernel quadrature needs {n} nodes")));
    }
    let dxi = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| {
            let xi = signed_index(k, n) * dxi;
            symbol(xi) * (-(xi / radius).powi(2)).exp()
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let s = dxi / (2.0 * std::f64::consts::PI);
    Ok((jmin..=jmax)
        .map(|j| {
            let l = (j * m as i64).rem_euclid(n as i64) as usize;
            buf[l] * s
        })
        .collect())
}

/// Richardson-extrapolated kernel and the disagreement `max |Q(2R) - Q(R)|`.
pub fn richardson_kernel(
    symbol: &dyn Fn(f64) -> Complex64,
    h: f64,
    jmin: i64,
    jmax: i64,
    radius: f64,
    period: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let q1 = regularized_kernel(symbol, h, jmin, jmax, radius, period)?;
    let q2 = regularized_kernel(symbol, h, jmin, jmax, 2.0 * radius, period)?;
    let q4 = regularized_kernel(symbol, h, jmin, jmax, 4.0 * radius, period)?;
    let mut dis = 0.0f64;
    let out = q1
        .iter()
        .zip(&q2)
        .zip(&q4)
        .map(|((a, b), c)| {
            dis = dis.max((b - a).norm());
            (c * 8.0 - b * 6.0 + a) / 3.0
        })
        .collect();
    Ok((out, dis))
}
