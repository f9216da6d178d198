//! Two-point Robin problem on `]0, 1[`:
//!
//! ```text
//! a v'' + b v' - c v = phi,   v'(0) + d1 v(0) = 0,   v'(1) + d2 v(1) = 0
//! ```
//!
//! solved as `v = P0 phi + R0 phi`. `P0` is the whole-line ψdo with symbol
//! `1 / L(xi)`, `L(xi) = -a xi^2 + i b xi - c`; `R0` adds the two homogeneous
//! solutions `g1(x, 0)`, `g2(x, 0)` with coefficients fixed by the boundary
//! values of `P0 phi`.

use num_complex::Complex64;
use serde::Serialize;

use super::grid::{Grid1D, InteriorField};
use super::quadrature::{richardson_kernel, QuadConfig};
use super::spectral::{pdo_apply_ext, Extension};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Default for TwoPointParams {
    fn default() -> Self {
        TwoPointParams { a: 1.0, b: 0.0, c: 1.0, d1: 1.0, d2: 1.0 }
    }
}

impl TwoPointParams {
    pub fn symbol(&self, xi: f64) -> Complex64 {
        Complex64::new(-self.a * xi * xi - self.c, self.b * xi)
    }

    /// Smallest `|Im|` of the roots of `L`; the kernels decay like `exp(-rate |x|)`.
    fn decay_rate(&self) -> f64 {
        let disc = self.b * self.b + 4.0 * self.a * self.c;
        if disc >= 0.0 {
            let s = disc.sqrt();
            ((self.b + s) / (2.0 * self.a)).abs().min(((self.b - s) / (2.0 * self.a)).abs())
        } else {
            (self.b / (2.0 * self.a)).abs()
        }
    }

    /// Checks `inf |L(xi)| > 0` on the pad-box frequencies, at 0 and at the
    /// real minimizer of `|L|^2 = (a xi^2 + c)^2 + b^2 xi^2`.
    pub fn check_symbol(&self, g: &Grid1D) -> Result<()> {
        if self.a == 0.0 {
            return Err(Error::InvalidArgument("leading coefficient a must be nonzero".into()));
        }
        let scale = self.a.abs() + self.b.abs() + self.c.abs();
        let mut min = self.symbol(0.0).norm();
        let crit = -(2.0 * self.a * self.c + self.b * self.b) / (2.0 * self.a * self.a);
        if crit > 0.0 {
            min = min.min(self.symbol(crit.sqrt()).norm());
        }
        let m = (g.nx - 1) * g.pad_factor;
        let dxi = 2.0 * std::f64::consts::PI / g.pad_factor as f64;
        for k in 0..=m / 2 {
            let xi = k as f64 * dxi;
            min = min.min(self.symbol(xi).norm() / (1.0 + xi * xi));
        }
        if min <= 1e-8 * scale {
            return Err(Error::SymbolSingular(min));
        }
        Ok(())
    }
}

/// `1 / L` summed over its aliases `xi + 2 pi m / h`, so that the discrete
/// multiplier is the trapezoid rule for the convolution with the kernel.
/// The `-1 / (a xi^2)` part of the sum is done in closed form,
/// `sum_m (xi + 2 pi m / h)^-2 = h^2 / (4 sin^2(xi h / 2))`.
fn periodized_inverse(p: &TwoPointParams, h: f64, xi: f64) -> Complex64 {
    const IMAGES: i32 = 16;
    let period = 2.0 * std::f64::consts::PI / h;
    let mut acc = p.symbol(xi).inv();
    for m in (-IMAGES..=IMAGES).filter(|m| *m != 0) {
        let x = xi + m as f64 * period;
        acc += p.symbol(x).inv() + 1.0 / (p.a * x * x);
    }
    let half = 0.5 * xi * h;
    let others = if half.abs() < 1e-4 {
        h * h / 12.0
    } else {
        h * h / (4.0 * half.sin().powi(2)) - 1.0 / (xi * xi)
    };
    acc - others / p.a
}

/// `P0 phi`, the ψdo with symbol `1 / L(xi)` (trapezoid extension).
pub fn p0_apply(p: &TwoPointParams, phi: &InteriorField, g: &Grid1D) -> Result<InteriorField> {
    p.check_symbol(g)?;
    let h = g.h();
    Ok(pdo_apply_ext(|xi| periodized_inverse(p, h, xi), phi, g, Extension::Trapezoid))
}

/// Precomputed `g1`, `g2` on the grid and the pv values entering `W(0)`.
#[derive(Debug, Clone)]
pub struct TwoPointSolver {
    pub params: TwoPointParams,
    pub grid: Grid1D,
    /// One-sided values of `g1(x, 0)` and `g2(x, 0)` on `[0, 1]`.
    g1: Vec<f64>,
    g2: Vec<f64>,
    /// Principal values `g_k(j, 0)` at `x = j`, as `[[g1(0), g1(1)], [g2(0), g2(1)]]`.
    pub pv: [[f64; 2]; 2],
    pub wronskian: f64,
    pub quad_disagreement: f64,
}

/// `|W(0)|` below this, relative to `(1 + max |pv|)^2`, counts as degenerate.
pub const WRONSKIAN_TOL: f64 = 1e-6;

impl TwoPointSolver {
    pub fn new(params: TwoPointParams, grid: Grid1D, cfg: QuadConfig) -> Result<Self> {
        params.check_symbol(&grid)?;
        let TwoPointParams { a, b, d1, d2, .. } = params;
        let h = grid.h();
        let n = grid.nx as i64 - 1;
        let period = 2.0 + 30.0 / params.decay_rate();
        let radius = cfg.radius_factor / h;
        let e_sym = |xi: f64| params.symbol(xi).inv();
        let de_sym = |xi: f64| Complex64::new(0.0, xi) * params.symbol(xi).inv();
        let (e, dis_e) = richardson_kernel(&e_sym, h, -n, n, radius, period)?;
        let (de, dis_de) = richardson_kernel(&de_sym, h, -n, n, radius, period)?;
        let dis = dis_e.max(dis_de);
        if dis > cfg.tol {
            return Err(Error::QuadratureNotConverged { disagreement: dis, tol: cfg.tol });
        }
        // E(x), E'(x) at x = j h live at index j + n.
        let at = |v: &Vec<Complex64>, j: i64| v[(j + n) as usize].re;
        let g2_at = |j: i64| -((b - a * d1) * at(&e, j) + a * at(&de, j));
        let g1_at = |j: i64| (b - a * d2) * at(&e, j - n) + a * at(&de, j - n);
        let pv = [[g1_at(0), g1_at(n)], [g2_at(0), g2_at(n)]];
        let mut g1: Vec<f64> = (0..=n).map(g1_at).collect();
        let mut g2: Vec<f64> = (0..=n).map(g2_at).collect();
        // Unit jumps: g2 drops by 1 at x = 0, g1 rises by 1 at x = 1.
        g2[0] -= 0.5;
        g1[n as usize] -= 0.5;
        let w = pv[0][0] * pv[1][1] - (0.5 + pv[0][1]) * (0.5 + pv[1][0]);
        let scale = 1.0 + pv.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if w.abs() < WRONSKIAN_TOL * scale * scale {
            return Err(Error::DegenerateWronskian(w.abs()));
        }
        Ok(TwoPointSolver { params, grid, g1, g2, pv, wronskian: w, quad_disagreement: dis })
    }

    /// `R0 phi` from the already computed `P0 phi`, slice by slice.
    pub fn r0_from_p0(&self, p0: &InteriorField) -> InteriorField {
        let [[g10, g11], [g20, g21]] = self.pv;
        let w = self.wronskian;
        p0.map_slices(|s| {
            let (p0v, p1v) = (s[0], s[s.len() - 1]);
            let c1 = ((0.5 + g20) * p1v - g21 * p0v) / w;
            let c2 = -(g10 * p1v - (0.5 + g11) * p0v) / w;
            self.g1.iter().zip(&self.g2).map(|(x, y)| c1 * x + c2 * y).collect()
        })
    }

    pub fn r0_apply(&self, phi: &InteriorField) -> Result<InteriorField> {
        Ok(self.r0_from_p0(&p0_apply(&self.params, phi, &self.grid)?))
    }

    /// `(P0 + R0) phi`.
    pub fn solve(&self, phi: &InteriorField) -> Result<InteriorField> {
        let mut v = p0_apply(&self.params, phi, &self.grid)?;
        let r = self.r0_from_p0(&v);
        for (x, y) in v.data.iter_mut().zip(&r.data) {
            *x += y;
        }
        Ok(v)
    }
}

/// `R0 phi` with default quadrature settings.
pub fn r0_apply(p: &TwoPointParams, phi: &InteriorField, g: &Grid1D) -> Result<InteriorField> {
    TwoPointSolver::new(*p, *g, QuadConfig::default())?.r0_apply(phi)
}

/// Residuals of a computed solution: max `|L(D) v - phi|` on the margin
/// (second-order differences) and the two Robin residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointResidual {
    pub interior: f64,
    pub bc_left: f64,
    pub bc_right: f64,
}

pub fn twopoint_residual(p: &TwoPointParams, v: &InteriorField, phi: &InteriorField, g: &Grid1D, margin: f64) -> TwoPointResidual {
    use super::fd::{ld_apply, left_derivative, right_derivative};
    let lv = ld_apply(p.a, p.b, p.c, v, g);
    let mut interior = 0.0f64;
    let (mut bl, mut br) = (0.0f64, 0.0f64);
    let h = g.h();
    for k in 0..g.nt {
        for i in g.margin_range(margin) {
            interior = interior.max((lv.at(i, k) - phi.at(i, k)).abs());
        }
        let s = v.slice(k);
        bl = bl.max((left_derivative(s, h) + p.d1 * s[0]).abs());
        br = br.max((right_derivative(s, h) + p.d2 * s[s.len() - 1]).abs());
    }
    TwoPointResidual { interior, bc_left: bl, bc_right: br }
}
