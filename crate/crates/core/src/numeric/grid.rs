use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::Space;

/// Uniform grid on `[0, 1]` (inclusive) times a periodic time axis `[0, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub nx: usize,
    pub nt: usize,
    /// FFT embedding box is `[0, pad_factor)`.
    pub pad_factor: usize,
    pub t_len: f64,
}

impl Grid1D {
    pub fn new(nx: usize, nt: usize, pad_factor: usize) -> Result<Self> {
        let g = Grid1D { nx, nt, pad_factor, t_len: 1.0 };
        g.validate()?;
        Ok(g)
    }

    pub fn with_t_len(mut self, t_len: f64) -> Result<Self> {
        self.t_len = t_len;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 16 {
            return Err(Error::InvalidArgument(format!("nx = {} < 16", self.nx)));
        }
        if self.nt == 0 {
            return Err(Error::InvalidArgument("nt must be positive".into()));
        }
        if self.pad_factor < 2 {
            return Err(Error::InvalidArgument(format!("pad_factor = {} < 2", self.pad_factor)));
        }
        if !(self.t_len.is_finite() && self.t_len > 0.0) {
            return Err(Error::InvalidArgument("time length must be positive".into()));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    pub fn dt(&self) -> f64 {
        self.t_len / self.nt as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    /// Indices of grid points inside `[margin, 1 - margin]`.
    pub fn margin_range(&self, margin: f64) -> std::ops::RangeInclusive<usize> {
        let eps = 1e-9 * self.h();
        let lo = ((margin / self.h()) - eps).ceil().max(0.0) as usize;
        let hi = (((1.0 - margin) / self.h()) + eps).floor() as usize;
        lo..=hi.min(self.nx - 1)
    }
}

/// Samples on `nx x nt` points, `data[k * nx + i] = v(x_i, t_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorField {
    pub nx: usize,
    pub nt: usize,
    pub data: Vec<f64>,
}

impl InteriorField {
    pub fn zeros(g: &Grid1D) -> Self {
        InteriorField { nx: g.nx, nt: g.nt, data: vec![0.0; g.nx * g.nt] }
    }

    pub fn from_fn(g: &Grid1D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(g);
        for k in 0..g.nt {
            for i in 0..g.nx {
                out.data[k * g.nx + i] = f(g.x(i), g.t(k));
            }
        }
        out
    }

    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.data[k * self.nx + i]
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        &self.data[k * self.nx..(k + 1) * self.nx]
    }

    pub fn slice_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.nx..(k + 1) * self.nx]
    }

    pub fn map_slices(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> InteriorField {
        let mut out = self.clone();
        for k in 0..self.nt {
            let s = f(self.slice(k));
            out.slice_mut(k).copy_from_slice(&s);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude over points `i` in `range`, all time slices.
    pub fn max_abs_on(&self, range: std::ops::RangeInclusive<usize>) -> f64 {
        let mut m = 0.0f64;
        for k in 0..self.nt {
            for i in range.clone() {
                m = m.max(self.at(i, k).abs());
            }
        }
        m
    }
}

/// Values at `x = 0` (`left`) and `x = 1` (`right`) per time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl BoundaryField {
    pub fn zeros(g: &Grid1D) -> Self {
        BoundaryField { left: vec![0.0; g.nt], right: vec![0.0; g.nt] }
    }

    pub fn constant(g: &Grid1D, left: f64, right: f64) -> Self {
        BoundaryField { left: vec![left; g.nt], right: vec![right; g.nt] }
    }

    pub fn nt(&self) -> usize {
        self.left.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.left.iter().chain(&self.right).fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Interior(InteriorField),
    Boundary(BoundaryField),
}

impl Field {
    pub fn zeros(g: &Grid1D, s: Space) -> Field {
        match s {
            Space::Interior => Field::Interior(InteriorField::zeros(g)),
            Space::Boundary => Field::Boundary(BoundaryField::zeros(g)),
        }
    }

    pub fn space(&self) -> Space {
        match self {
            Field::Interior(_) => Space::Interior,
            Field::Boundary(_) => Space::Boundary,
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = &f64> + '_> {
        match self {
            Field::Interior(v) => Box::new(v.data.iter()),
            Field::Boundary(b) => Box::new(b.left.iter().chain(&b.right)),
        }
    }

    fn values_mut(&mut self) -> Box<dyn Iterator<Item = &mut f64> + '_> {
        match self {
            Field::Interior(v) => Box::new(v.data.iter_mut()),
            Field::Boundary(b) => Box::new(b.left.iter_mut().chain(b.right.iter_mut())),
        }
    }

    /// `self += c * other`; both fields must live on the same space.
    pub fn axpy(&mut self, c: f64, other: &Field) {
        assert_eq!(self.space(), other.space());
        for (a, b) in self.values_mut().zip(other.values()) {
            *a += c * b;
        }
    }

    pub fn scaled(&self, c: f64) -> Field {
        let mut out = self.clone();
        for a in out.values_mut() {
            *a *= c;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn interior(&self) -> Option<&InteriorField> {
        match self {
            Field::Interior(v) => Some(v),
            _ => None,
        }
    }

    pub fn boundary(&self) -> Option<&BoundaryField> {
        match self {
            Field::Boundary(b) => Some(b),
            _ => None,
        }
    }
}

/// One component of a stacked vector in `R^{N, m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub interior: InteriorField,
    pub boundary: BoundaryField,
}

impl FieldPair {
    pub fn zeros(g: &Grid1D) -> Self {
        FieldPair { interior: InteriorField::zeros(g), boundary: BoundaryField::zeros(g) }
    }

    pub fn get(&self, s: Space) -> Field {
        match s {
            Space::Interior => Field::Interior(self.interior.clone()),
            Space::Boundary => Field::Boundary(self.boundary.clone()),
        }
    }

    pub fn add_to(&mut self, c: f64, f: &Field) {
        match f {
            Field::Interior(v) => {
                for (a, b) in self.interior.data.iter_mut().zip(&v.data) {
                    *a += c * b;
                }
            }
            Field::Boundary(bf) => {
                for (a, b) in self.boundary.left.iter_mut().zip(&bf.left) {
                    *a += c * b;
                }
                for (a, b) in self.boundary.right.iter_mut().zip(&bf.right) {
                    *a += c * b;
                }
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.interior.max_abs().max(self.boundary.max_abs())
    }
}
