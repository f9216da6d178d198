//! Exact commutative polynomials over the rationals in at most three
//! variables, module Gröbner bases and syzygies.
//!
//! Constant-coefficient differential operators map to polynomials by
//! `d_j -> xi_j` (no factor `i`); see [`symbol`].

mod groebner;
pub mod symbol;

pub use groebner::{
    as_vectors, buchberger, exactness_check, in_row_module, is_groebner, is_monic, module_groebner, reduce, reduce_vector,
    syzygies, GbConfig,
};
pub use symbol::{op_map, symbol_map, unit_symbol, SymbolTable};

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::Q;

pub const MAX_VARS: usize = 3;

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    /// Total order on exponent vectors; variable 0 is the largest.
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let (da, db) = (deg(a), deg(b));
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

pub fn deg(m: &[u32]) -> u32 {
    m.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The variable `xi_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Q::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: Q) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Poly::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| deg(m) == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| deg(m)).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        use std::collections::btree_map::Entry;
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Leading monomial and coefficient.
    pub fn lead(&self, ord: MonomialOrder) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// `c * x^m * self`.
    pub fn mul_term(&self, m: &[u32], c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (mono_mul(k, m), v * c)).collect(),
        }
    }

    /// `p(-xi)`: the symbol of the formal adjoint under `d_j -> xi_j`.
    pub fn reflect(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if deg(m) % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn make_monic(&self, ord: MonomialOrder) -> Poly {
        match self.lead(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64().unwrap_or(f64::NAN) * m.iter().zip(x).map(|(e, v)| v.powi(*e as i32)).product::<f64>()
            })
            .sum()
    }

    fn check_vars(&self, o: &Poly) {
        assert_eq!(self.nvars, o.nvars, "polynomials over different rings");
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.check_vars(o);
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.check_vars(o);
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.check_vars(o);
        let mut p = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                p.add_term(mono_mul(a, b), x * y);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

const VAR_NAMES: [&str; MAX_VARS] = ["xi1", "xi2", "xi3"];

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ord = MonomialOrder::DegRevLex;
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| ord.cmp(b.0, a.0));
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let body: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { VAR_NAMES[i].to_string() } else { format!("{}^{e}", VAR_NAMES[i]) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            let sign = match (k == 0, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            if body.is_empty() {
                write!(f, "{sign}{a}")?;
            } else if a.is_one() {
                write!(f, "{sign}{}", body.join("*"))?;
            } else {
                write!(f, "{sign}{a}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Dense matrix of polynomials in a common ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zero(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged polynomial rows".into()));
        }
        if rows.iter().flatten().any(|p| p.nvars != nvars) {
            return Err(Error::ShapeMismatch("polynomials over different rings".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.nvars, self.nvars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zero(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != o.rows || self.nvars != o.nvars {
            return Err(Error::ShapeMismatch(format!(
                "polynomial product {}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.rows, o.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
