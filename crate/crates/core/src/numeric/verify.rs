//! Numeric check of `L S f = 0` on seeded random smooth inputs `f`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::grid::{BoundaryField, FieldPair, Grid1D, InteriorField};
use super::realize::RealizedMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    /// Spatial bandwidth; `None` means `nx / 8`.
    pub bandwidth: Option<usize>,
    /// Temporal bandwidth; `None` means `nt / 8`.
    pub bandwidth_t: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { trials: 20, seed: 0, tol: 1e-8, margin: 0.1, bandwidth: None, bandwidth_t: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    /// `max |(L u)_interior|` on the margin, divided by `1 + ||u||`.
    pub interior_residual: f64,
    /// `max |(L u)_boundary|` at the end points, divided by `1 + ||u||`.
    pub boundary_residual: f64,
    pub u_norm: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub grid: Grid1D,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub bandwidth: usize,
    pub bandwidth_t: usize,
    pub trials: Vec<TrialReport>,
    pub max_interior: f64,
    pub max_boundary: f64,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "grid nx={} nt={} pad={}  seed={}  bandwidth={}/{}  margin={}  tol={:e}\n",
            self.grid.nx, self.grid.nt, self.grid.pad_factor, self.seed, self.bandwidth, self.bandwidth_t, self.margin, self.tol
        );
        for t in &self.trials {
            s += &format!(
                "trial {:3}  interior {:.3e}  boundary {:.3e}  |u| {:.3e}  {}\n",
                t.trial,
                t.interior_residual,
                t.boundary_residual,
                t.u_norm,
                if t.pass { "ok" } else { "FAIL" }
            );
        }
        s += &format!(
            "max interior {:.3e}  max boundary {:.3e}  {}\n",
            self.max_interior,
            self.max_boundary,
            if self.pass { "PASS" } else { "FAIL" }
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `sum_{k, l} c_kl phi_k(x) psi_l(t)` with `phi` in `{1, cos(pi k x), sin(pi k x)}`,
/// `psi` in `{1, cos(2 pi l t / T), sin(2 pi l t / T)}` and standard normal `c_kl`.
pub fn random_smooth_field(g: &Grid1D, bx: usize, bt: usize, rng: &mut ChaCha8Rng) -> InteriorField {
    let pi = std::f64::consts::PI;
    let phi = |k: usize, x: f64| match k {
        0 => 1.0,
        k if k % 2 == 1 => (pi * k.div_ceil(2) as f64 * x).cos(),
        k => (pi * (k / 2) as f64 * x).sin(),
    };
    let psi = |l: usize, t: f64| match l {
        0 => 1.0,
        l if l % 2 == 1 => (2.0 * pi * l.div_ceil(2) as f64 * t / g.t_len).cos(),
        l => (2.0 * pi * (l / 2) as f64 * t / g.t_len).sin(),
    };
    let (nk, nl) = (2 * bx + 1, if g.nt == 1 { 1 } else { 2 * bt + 1 });
    let c: Vec<f64> = (0..nk * nl).map(|_| StandardNormal.sample(rng)).collect();
    let px: Vec<Vec<f64>> = (0..g.nx).map(|i| (0..nk).map(|k| phi(k, g.x(i))).collect()).collect();
    let pt: Vec<Vec<f64>> = (0..g.nt).map(|j| (0..nl).map(|l| psi(l, g.t(j))).collect()).collect();
    let mut out = InteriorField::zeros(g);
    for j in 0..g.nt {
        // row[k] = sum_l c_kl psi_l(t_j)
        let row: Vec<f64> = (0..nk).map(|k| (0..nl).map(|l| c[k * nl + l] * pt[j][l]).sum()).collect();
        for i in 0..g.nx {
            out.data[j * g.nx + i] = px[i].iter().zip(&row).map(|(a, b)| a * b).sum();
        }
    }
    out
}

fn random_boundary_field(g: &Grid1D, bt: usize, rng: &mut ChaCha8Rng) -> BoundaryField {
    let pi = std::f64::consts::PI;
    let nl = if g.nt == 1 { 1 } else { 2 * bt + 1 };
    let mut side = || -> Vec<f64> {
        let c: Vec<f64> = (0..nl).map(|_| StandardNormal.sample(rng)).collect();
        (0..g.nt)
            .map(|j| {
                let t = g.t(j) / g.t_len;
                c.iter()
                    .enumerate()
                    .map(|(l, a)| match l {
                        0 => *a,
                        l if l % 2 == 1 => a * (2.0 * pi * l.div_ceil(2) as f64 * t).cos(),
                        l => a * (2.0 * pi * (l / 2) as f64 * t).sin(),
                    })
                    .sum()
            })
            .collect()
    };
    let left = side();
    let right = side();
    BoundaryField { left, right }
}

/// For each trial draws `f`, sets `u = S f` and measures `L u`.
pub fn verify_parametrization(l: &RealizedMatrix, s: &RealizedMatrix, opts: &VerifyOptions) -> Result<VerifyReport> {
    if l.cols != s.rows {
        return Err(Error::ShapeMismatch(format!("L has {} columns but S has {} rows", l.cols, s.rows)));
    }
    if !(0.0..0.5).contains(&opts.margin) {
        return Err(Error::InvalidArgument(format!("margin {} outside [0, 0.5)", opts.margin)));
    }
    let g = s.grid;
    let bx = opts.bandwidth.unwrap_or(g.nx / 8);
    let bt = opts.bandwidth_t.unwrap_or(g.nt / 8);
    let range = g.margin_range(opts.margin);
    let mut trials = Vec::with_capacity(opts.trials);
    for trial in 0..opts.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(trial as u64));
        let f: Vec<FieldPair> = (0..s.cols)
            .map(|_| FieldPair {
                interior: random_smooth_field(&g, bx, bt, &mut rng),
                boundary: random_boundary_field(&g, bt, &mut rng),
            })
            .collect();
        let u = s.apply(&f)?;
        let r = l.apply(&u)?;
        let u_norm = u.iter().map(FieldPair::max_abs).fold(0.0, f64::max);
        let ri = r.iter().map(|p| p.interior.max_abs_on(range.clone())).fold(0.0, f64::max);
        let rb = r.iter().map(|p| p.boundary.max_abs()).fold(0.0, f64::max);
        let (ri, rb) = (ri / (1.0 + u_norm), rb / (1.0 + u_norm));
        trials.push(TrialReport {
            trial,
            interior_residual: ri,
            boundary_residual: rb,
            u_norm,
            pass: ri < opts.tol && rb < opts.tol,
        });
    }
    let max_interior = trials.iter().map(|t| t.interior_residual).fold(0.0, f64::max);
    let max_boundary = trials.iter().map(|t| t.boundary_residual).fold(0.0, f64::max);
    Ok(VerifyReport {
        grid: g,
        seed: opts.seed,
        tol: opts.tol,
        margin: opts.margin,
        bandwidth: bx,
        bandwidth_t: bt,
        pass: trials.iter().all(|t| t.pass),
        trials,
        max_interior,
        max_boundary,
    })
}
