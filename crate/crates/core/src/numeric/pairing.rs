//! Trace operator `T v = d(D) v |_{x = 0, 1}` and its adjoint potential
//! `T* g (x) = (2 pi)^-1 (g(0) ∫ e^{-i xi x} conj d + g(1) ∫ e^{i xi (1 - x)} conj d)`.

use num_complex::Complex64;

use super::grid::{BoundaryField, Grid1D, InteriorField};
use super::quadrature::{richardson_kernel, QuadConfig};
use super::spectral::{pdo_apply_ext, Extension};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingConfig {
    pub quad: QuadConfig,
    /// x-period of the discrete Fourier sums; exceeds the kernel's decay length.
    pub period: f64,
}

impl Default for PairingConfig {
    fn default() -> Self {
        PairingConfig { quad: QuadConfig { radius_factor: 10.0, tol: 1e-2 }, period: 64.0 }
    }
}

/// `kappa(z) = ∫ e^{-i xi z} conj(d(xi)) d xi` at `z = j h`, `j = -n..=n`,
/// returned with the Richardson disagreement.
pub fn adjoint_kernel(dsymbol: &dyn Fn(f64) -> Complex64, grid: &Grid1D, cfg: &PairingConfig) -> Result<(Vec<Complex64>, f64)> {
    let n = grid.nx as i64 - 1;
    let h = grid.h();
    let conj = |xi: f64| dsymbol(-xi).conj();
    // (2 pi)^-1 ∫ e^{i xi z} conj d(-xi) = (2 pi)^-1 ∫ e^{-i xi z} conj d(xi)
    let (f, dis) = richardson_kernel(&conj, h, -n, n, cfg.quad.radius_factor / h, cfg.period)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok((f.into_iter().map(|c| c * two_pi).collect(), dis * two_pi))
}

/// Composite Simpson on a uniform slice (trapezoid if the interval count is odd).
fn integrate(s: &[f64], h: f64) -> f64 {
    let n = s.len() - 1;
    if n % 2 == 1 {
        return h * (s.iter().sum::<f64>() - 0.5 * (s[0] + s[n]));
    }
    let mut acc = s[0] + s[n];
    for (i, v) in s.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// `(<T v, g>_{L2(dG)}, <v, T* g>_{L2(G)})` for real fields; time slices
/// are summed with weight `dt` (weight 1 when `nt = 1`).
pub fn trace_adjoint_pair_check(
    dsymbol: &dyn Fn(f64) -> Complex64,
    v: &InteriorField,
    g: &BoundaryField,
    grid: &Grid1D,
    cfg: &PairingConfig,
) -> Result<(f64, f64)> {
    let n = grid.nx - 1;
    let wt = if grid.nt == 1 { 1.0 } else { grid.dt() };
    let dv = pdo_apply_ext(dsymbol, v, grid, Extension::Trapezoid);
    let (kappa, dis) = adjoint_kernel(dsymbol, grid, cfg)?;
    if dis > cfg.quad.tol {
        return Err(Error::QuadratureNotConverged { disagreement: dis, tol: cfg.quad.tol });
    }
    // kappa(z) sits at index j + n for z = j h.
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for k in 0..grid.nt {
        let s = dv.slice(k);
        lhs += wt * (s[0] * g.left[k] + s[n] * g.right[k]);
        let prod: Vec<f64> = (0..=n)
            .map(|i| {
                let tg = (g.left[k] * kappa[i + n].re + g.right[k] * kappa[i].re) / two_pi;
                v.at(i, k) * tg
            })
            .collect();
        rhs += wt * integrate(&prod, grid.h());
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz(xi: f64) -> Complex64 {
        Complex64::new(1.0 / (1.0 + xi * xi), 0.0)
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let s: Vec<f64> = (0..=8).map(|i| (i as f64 / 8.0).powi(3)).collect();
        assert!((integrate(&s, 1.0 / 8.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn closed_form_kernel() {
        let g = Grid1D::new(257, 1, 32).unwrap();
        let (k, _) = adjoint_kernel(&lorentz, &g, &PairingConfig::default()).unwrap();
        let n = 256;
        for j in [-256i64, -100, 0, 3, 50, 256] {
            let z = j as f64 * g.h();
            let want = std::f64::consts::PI * (-z.abs()).exp();
            assert!((k[(j + n) as usize].re - want).abs() < 1e-6, "z = {z}");
        }
    }

    #[test]
    fn pairings_agree_and_vanish() {
        let g = Grid1D::new(513, 1, 32).unwrap();
        let v = InteriorField::from_fn(&g, |x, _| (2.0 * x).sin() + 0.5);
        let b = BoundaryField::constant(&g, 0.7, -1.3);
        let cfg = PairingConfig::default();
        let (l, r) = trace_adjoint_pair_check(&lorentz, &v, &b, &g, &cfg).unwrap();
        assert!((l - r).abs() / (1.0 + l.abs()) < 1e-4, "{l} {r}");
        let z = trace_adjoint_pair_check(&lorentz, &v, &BoundaryField::zeros(&g), &g, &cfg).unwrap();
        assert_eq!(z, (0.0, 0.0));
        let z = trace_adjoint_pair_check(&lorentz, &InteriorField::zeros(&g), &b, &g, &cfg).unwrap();
        assert_eq!(z, (0.0, 0.0));
    }
}
