//! Raw block systems and their square-block matrix form.
//!
//! A system with `N` interior unknowns `v_j`, `m` boundary unknowns `w_k`,
//! `N1` interior equations and `m1` boundary equations is stored as four
//! operator grids. [`assemble`] pads it into an `N1' x N'` matrix `L` of
//! block operators, `N' = max(N, m)`, `N1' = max(N1, m1)`, acting on
//! `u_j = (v_j, w_j)`. Slots without a counterpart in the raw system are
//! zero and are reported as phantom unknowns or equations.

use serde::Serialize;

use crate::algebra::{BvOp, OpExpr, OpMatrix};
use crate::error::{Error, Result};
use crate::order::Space;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub n_state: usize,
    pub m_bdry: usize,
    pub n_eqs: usize,
    pub m_beqs: usize,
    /// `N1 x N`, interior to interior.
    pub block1: Vec<Vec<OpExpr>>,
    /// `N1 x m`, boundary to interior.
    pub block2: Vec<Vec<OpExpr>>,
    /// `m1 x N`, interior to boundary.
    pub block3: Vec<Vec<OpExpr>>,
    /// `m1 x m`, boundary to boundary.
    pub block4: Vec<Vec<OpExpr>>,
    /// Unknowns declared only for notational convenience, e.g. a boundary
    /// slot that no equation uses.
    pub declared_phantoms: Vec<(usize, Space)>,
}

fn zero_grid(r: usize, c: usize, dom: Space, cod: Space) -> Vec<Vec<OpExpr>> {
    vec![vec![OpExpr::zero(dom, cod); c]; r]
}

impl SystemSpec {
    /// All-zero system of the given dimensions.
    pub fn new(n_state: usize, m_bdry: usize, n_eqs: usize, m_beqs: usize) -> Self {
        use Space::*;
        SystemSpec {
            n_state,
            m_bdry,
            n_eqs,
            m_beqs,
            block1: zero_grid(n_eqs, n_state, Interior, Interior),
            block2: zero_grid(n_eqs, m_bdry, Boundary, Interior),
            block3: zero_grid(m_beqs, n_state, Interior, Boundary),
            block4: zero_grid(m_beqs, m_bdry, Boundary, Boundary),
            declared_phantoms: Vec::new(),
        }
    }

    /// Sets an entry; the block is chosen by the expression's signature, the
    /// indices are (equation, unknown) within that block.
    pub fn set(&mut self, i: usize, j: usize, e: OpExpr) -> Result<()> {
        let (grid, r, c) = match (e.cod, e.dom) {
            (Space::Interior, Space::Interior) => (&mut self.block1, self.n_eqs, self.n_state),
            (Space::Interior, Space::Boundary) => (&mut self.block2, self.n_eqs, self.m_bdry),
            (Space::Boundary, Space::Interior) => (&mut self.block3, self.m_beqs, self.n_state),
            (Space::Boundary, Space::Boundary) => (&mut self.block4, self.m_beqs, self.m_bdry),
        };
        if i >= r || j >= c {
            return Err(Error::ShapeMismatch(format!("entry ({}, {}) outside a {r}x{c} block", i + 1, j + 1)));
        }
        grid[i][j] = e;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        use Space::*;
        let checks = [
            (&self.block1, self.n_eqs, self.n_state, Interior, Interior, "block1"),
            (&self.block2, self.n_eqs, self.m_bdry, Boundary, Interior, "block2"),
            (&self.block3, self.m_beqs, self.n_state, Interior, Boundary, "block3"),
            (&self.block4, self.m_beqs, self.m_bdry, Boundary, Boundary, "block4"),
        ];
        for (g, r, c, dom, cod, name) in checks {
            if g.len() != r || g.iter().any(|row| row.len() != c) {
                return Err(Error::ShapeMismatch(format!("{name} must be {r}x{c}")));
            }
            if g.iter().flatten().any(|e| e.dom != dom || e.cod != cod) {
                return Err(Error::KindMismatch(format!("{name} entries must map {dom:?}->{cod:?}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Phantom {
    /// Component `space` of unknown `u_j` (0-based).
    Unknown(usize, Space),
    /// Component `space` of equation row `i` (0-based).
    Equation(usize, Space),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssembledSystem {
    pub l: OpMatrix,
    pub phantoms: Vec<Phantom>,
}

impl AssembledSystem {
    pub fn is_phantom_unknown(&self, j: usize, s: Space) -> bool {
        self.phantoms.contains(&Phantom::Unknown(j, s))
    }
}

/// Pads a raw system into square blocks.
pub fn assemble(spec: &SystemSpec) -> Result<AssembledSystem> {
    spec.validate()?;
    let nb = spec.n_state.max(spec.m_bdry);
    let nb1 = spec.n_eqs.max(spec.m_beqs);
    let mut l = OpMatrix::zero(nb1, nb);
    for i in 0..nb1 {
        for j in 0..nb {
            let mut b = BvOp::zero();
            if i < spec.n_eqs && j < spec.n_state {
                b.a11 = spec.block1[i][j].clone();
            }
            if i < spec.n_eqs && j < spec.m_bdry {
                b.a12 = spec.block2[i][j].clone();
            }
            if i < spec.m_beqs && j < spec.n_state {
                b.a21 = spec.block3[i][j].clone();
            }
            if i < spec.m_beqs && j < spec.m_bdry {
                b.a22 = spec.block4[i][j].clone();
            }
            l.set(i, j, b);
        }
    }
    let mut phantoms = Vec::new();
    for j in spec.n_state..nb {
        phantoms.push(Phantom::Unknown(j, Space::Interior));
    }
    for j in spec.m_bdry..nb {
        phantoms.push(Phantom::Unknown(j, Space::Boundary));
    }
    for i in spec.n_eqs..nb1 {
        phantoms.push(Phantom::Equation(i, Space::Interior));
    }
    for i in spec.m_beqs..nb1 {
        phantoms.push(Phantom::Equation(i, Space::Boundary));
    }
    for &(j, s) in &spec.declared_phantoms {
        phantoms.push(Phantom::Unknown(j, s));
    }
    phantoms.sort();
    phantoms.dedup();
    Ok(AssembledSystem { l, phantoms })
}

/// Reads the four grids back out of `L`.
pub fn disassemble(l: &OpMatrix, n_state: usize, m_bdry: usize, n_eqs: usize, m_beqs: usize) -> Result<SystemSpec> {
    if l.rows() != n_eqs.max(m_beqs) || l.cols() != n_state.max(m_bdry) {
        return Err(Error::ShapeMismatch("L does not match the given dimensions".into()));
    }
    let mut s = SystemSpec::new(n_state, m_bdry, n_eqs, m_beqs);
    for (i, j, b) in l.entries() {
        if i < n_eqs && j < n_state {
            s.block1[i][j] = b.a11.clone();
        }
        if i < n_eqs && j < m_bdry {
            s.block2[i][j] = b.a12.clone();
        }
        if i < m_beqs && j < n_state {
            s.block3[i][j] = b.a21.clone();
        }
        if i < m_beqs && j < m_bdry {
            s.block4[i][j] = b.a22.clone();
        }
    }
    Ok(s)
}

/// One scalar equation `sum_j A_j v_j + sum_k B_k w_k = 0`, as
/// (unknown index, unknown space, operator) triples with zero terms dropped.
pub type ScalarEquation = Vec<(usize, Space, OpExpr)>;

/// The flattened equations of `L u = 0`: for each row, the interior then the
/// boundary component.
pub fn expand(l: &OpMatrix) -> Vec<(usize, Space, ScalarEquation)> {
    let mut out = Vec::new();
    for i in 0..l.rows() {
        for cod in [Space::Interior, Space::Boundary] {
            let mut eq = Vec::new();
            for j in 0..l.cols() {
                for dom in [Space::Interior, Space::Boundary] {
                    let e = l.get(i, j).slot(dom, cod);
                    if !e.is_zero() {
                        eq.push((j, dom, e.clone()));
                    }
                }
            }
            out.push((i, cod, eq));
        }
    }
    out
}

/// `E_1, ..., E_n`: row `j` carries the unit block operator in slot `j`.
pub fn canonical_basis(rank: usize) -> Result<Vec<OpMatrix>> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    Ok((0..rank)
        .map(|j| {
            let mut e = OpMatrix::zero(1, rank);
            e.set(0, j, BvOp::identity());
            e
        })
        .collect())
}

/// `M = D'^N / D'^N1 L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    pub relations: OpMatrix,
    pub ambient_rank: usize,
    pub relation_rank: usize,
}

impl ModulePresentation {
    pub fn is_free(&self) -> bool {
        self.relations.is_zero()
    }
}

pub fn present_module(l: &OpMatrix) -> ModulePresentation {
    ModulePresentation { relations: l.clone(), ambient_rank: l.cols(), relation_rank: l.rows() }
}
