//! FFT realizations of Fourier multipliers: interior ψdos `r+ op(s) e+` on
//! the padded box and delays on the periodic time axis.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{BoundaryField, Field, Grid1D, InteriorField};

/// How `e+` extends samples by zero onto the pad box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Plain zero extension; symbol 1 is the exact identity.
    Plain,
    /// Endpoint samples get half weight (trapezoid rule for the jump).
    Trapezoid,
}

/// Signed frequency index of DFT bin `k` in a length-`n` transform.
pub(crate) fn signed_index(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Multiplies the DFT of `buf` by `mult(k)` and transforms back, scaled.
/// At the Nyquist bin of an even length the multiplier is replaced by the
/// even part `(m(k) + m(-k)) / 2` so real data stays real.
fn apply_multiplier(buf: &mut [Complex64], mult: impl Fn(f64) -> Complex64) {
    let n = buf.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = signed_index(k, n);
        let m = if n % 2 == 0 && k == n / 2 { (mult(kk) + mult(-kk)) * 0.5 } else { mult(kk) };
        *c *= m;
    }
    planner.plan_fft_inverse(n).process(buf);
    let s = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= s;
    }
}

/// `r+ op(symbol) e+ v` per time slice, with `xi_k = 2 pi k / pad_factor`.
pub fn pdo_apply(symbol: impl Fn(f64) -> Complex64, v: &InteriorField, g: &Grid1D) -> InteriorField {
    pdo_apply_ext(symbol, v, g, Extension::Plain)
}

pub fn pdo_apply_ext(symbol: impl Fn(f64) -> Complex64, v: &InteriorField, g: &Grid1D, ext: Extension) -> InteriorField {
    let nx = g.nx;
    let m = (nx - 1) * g.pad_factor;
    let dxi = 2.0 * std::f64::consts::PI / g.pad_factor as f64;
    v.map_slices(|s| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (i, x) in s.iter().enumerate() {
            buf[i] = Complex64::new(*x, 0.0);
        }
        if ext == Extension::Trapezoid {
            buf[0] *= 0.5;
            buf[nx - 1] *= 0.5;
        }
        apply_multiplier(&mut buf, |k| symbol(k * dxi));
        buf[..nx].iter().map(|c| c.re).collect()
    })
}

/// Shift `f(t) -> f(t - h)` of one periodic time series of period `t_len`,
/// via the multiplier `exp(-i h eta)`.
pub fn delay_apply(h: f64, f: &[f64], t_len: f64) -> Vec<f64> {
    let n = f.len();
    if n == 1 || h == 0.0 {
        return f.to_vec();
    }
    let deta = 2.0 * std::f64::consts::PI / t_len;
    let mut buf: Vec<Complex64> = f.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    apply_multiplier(&mut buf, |k| Complex64::from_polar(1.0, -h * k * deta));
    buf.into_iter().map(|c| c.re).collect()
}

/// `d/dt` of one periodic time series, via the multiplier `i eta`.
pub fn time_derivative(f: &[f64], t_len: f64) -> Vec<f64> {
    let deta = 2.0 * std::f64::consts::PI / t_len;
    let mut buf: Vec<Complex64> = f.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    apply_multiplier(&mut buf, |k| Complex64::new(0.0, k * deta));
    buf.into_iter().map(|c| c.re).collect()
}

fn map_time_series(f: &Field, g: &Grid1D, op: impl Fn(&[f64]) -> Vec<f64>) -> Field {
    match f {
        Field::Interior(v) => {
            let mut out = v.clone();
            let mut series = vec![0.0; g.nt];
            for i in 0..g.nx {
                for k in 0..g.nt {
                    series[k] = v.at(i, k);
                }
                let d = op(&series);
                for k in 0..g.nt {
                    out.data[k * g.nx + i] = d[k];
                }
            }
            Field::Interior(out)
        }
        Field::Boundary(b) => Field::Boundary(BoundaryField { left: op(&b.left), right: op(&b.right) }),
    }
}

/// [`delay_apply`] on every spatial point of a field.
pub fn delay_field(h: f64, f: &Field, g: &Grid1D) -> Field {
    map_time_series(f, g, |s| delay_apply(h, s, g.t_len))
}

/// [`time_derivative`] on every spatial point of a field.
pub fn dt_field(f: &Field, g: &Grid1D) -> Field {
    map_time_series(f, g, |s| time_derivative(s, g.t_len))
}
