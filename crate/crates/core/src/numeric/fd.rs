//! Finite-difference stencils on a uniform slice. Interior points use
//! central differences, the two end points one-sided second-order ones.

use super::grid::{Grid1D, InteriorField};

/// One-sided second-order `v'(0)`.
pub fn left_derivative(s: &[f64], h: f64) -> f64 {
    (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h)
}

/// One-sided second-order `v'(1)`.
pub fn right_derivative(s: &[f64], h: f64) -> f64 {
    let n = s.len();
    (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h)
}

pub fn d1(s: &[f64], h: f64) -> Vec<f64> {
    let n = s.len();
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
    }
    out[0] = left_derivative(s, h);
    out[n - 1] = right_derivative(s, h);
    out
}

pub fn d2(s: &[f64], h: f64) -> Vec<f64> {
    let n = s.len();
    let h2 = h * h;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / h2;
    }
    out[0] = (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]) / h2;
    out[n - 1] = (2.0 * s[n - 1] - 5.0 * s[n - 2] + 4.0 * s[n - 3] - s[n - 4]) / h2;
    out
}

/// Second derivative, fourth order away from the two outermost points.
pub fn d2_4(s: &[f64], h: f64) -> Vec<f64> {
    let n = s.len();
    let mut out = d2(s, h);
    let c = 12.0 * h * h;
    for i in 2..n - 2 {
        out[i] = (-s[i + 2] + 16.0 * s[i + 1] - 30.0 * s[i] + 16.0 * s[i - 1] - s[i - 2]) / c;
    }
    out
}

/// Periodic second difference along the time axis; zero when `nt < 3`.
pub fn dtt(v: &InteriorField, g: &Grid1D) -> InteriorField {
    let mut out = InteriorField::zeros(g);
    let nt = g.nt;
    if nt < 3 {
        return out;
    }
    let dt2 = g.dt() * g.dt();
    for k in 0..nt {
        let (kp, km) = ((k + 1) % nt, (k + nt - 1) % nt);
        for i in 0..g.nx {
            out.data[k * g.nx + i] = (v.at(i, kp) - 2.0 * v.at(i, k) + v.at(i, km)) / dt2;
        }
    }
    out
}

/// `a v'' + b v' - c v`.
pub fn ld_apply(a: f64, b: f64, c: f64, v: &InteriorField, g: &Grid1D) -> InteriorField {
    let h = g.h();
    v.map_slices(|s| {
        let (v2, v1) = (d2(s, h), d1(s, h));
        (0..s.len()).map(|i| a * v2[i] + b * v1[i] - c * s[i]).collect()
    })
}

/// `(1 - d_x^2) v`.
pub fn helmholtz_apply(v: &InteriorField, g: &Grid1D) -> InteriorField {
    let h = g.h();
    v.map_slices(|s| {
        let v2 = d2_4(s, h);
        s.iter().zip(v2).map(|(a, b)| a - b).collect()
    })
}

/// `(d_t^2 - d_x^2) v`.
pub fn wave_apply(v: &InteriorField, g: &Grid1D) -> InteriorField {
    let h = g.h();
    let mut out = dtt(v, g);
    for k in 0..g.nt {
        let v2 = d2(v.slice(k), h);
        for (o, x) in out.slice_mut(k).iter_mut().zip(v2) {
            *o -= x;
        }
    }
    out
}
