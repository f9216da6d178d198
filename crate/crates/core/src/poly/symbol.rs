//! Symbols of constant-coefficient differential operators.
//!
//! Each variable `xi_j` is attached to one interior generator `d_j`; the map
//! sends `d_j -> xi_j` without the factor `i`. Only the interior block of a
//! matrix entry may be nonzero: the subalgebra's unit is `diag(I, 0)`.

use std::collections::BTreeMap;

use num_traits::One;

use super::{Poly, PolyMatrix, MAX_VARS};
use crate::algebra::{BvOp, OpExpr, OpMatrix, RewriteSystem, Word};
use crate::error::{Error, Result};
use crate::order::{OpKind, Space};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    vars: Vec<String>,
    extra: BTreeMap<String, Poly>,
}

impl SymbolTable {
    /// `vars[j]` is the generator whose symbol is `xi_{j+1}`.
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::InvalidArgument(format!("symbol tables take 1..={MAX_VARS} variables")));
        }
        Ok(SymbolTable { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), extra: BTreeMap::new() })
    }

    /// Assigns a polynomial symbol to a further generator, e.g. `H -> 1 - xi1^2`.
    pub fn with_symbol(mut self, name: &str, p: Poly) -> Self {
        assert_eq!(p.nvars(), self.nvars());
        self.extra.insert(name.to_string(), p);
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn symbol_of(&self, name: &str) -> Option<Poly> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Some(Poly::var(self.nvars(), i));
        }
        self.extra.get(name).cloned()
    }

    /// Commutation rules `d_j . d_i -> d_i . d_j` for `i < j`, so normal
    /// words list variables in ascending order.
    pub fn commutation_rules(&self, rs: &mut RewriteSystem) -> Result<()> {
        for j in 0..self.vars.len() {
            for i in 0..j {
                let lhs = Word::from_names(&[&self.vars[j], &self.vars[i]]);
                let rhs = rs.word(&[&self.vars[i], &self.vars[j]], crate::q(1))?;
                rs.add_rule(lhs, rhs)?;
            }
        }
        Ok(())
    }

    /// Checks that every variable generator is a declared interior operator.
    pub fn check(&self, rs: &RewriteSystem) -> Result<()> {
        for v in self.vars.iter().chain(self.extra.keys()) {
            let g = rs.generator(v).map_err(|_| Error::OutsideSubalgebra(format!("`{v}` is not declared")))?;
            if g.kind != OpKind::InteriorGreen {
                return Err(Error::OutsideSubalgebra(format!("`{v}` is not an interior operator")));
            }
        }
        Ok(())
    }
}

fn expr_symbol(e: &OpExpr, t: &SymbolTable) -> Result<Poly> {
    let n = t.nvars();
    let mut acc = Poly::zero(n);
    for (w, c) in e.terms() {
        let mut p = Poly::constant(n, c.clone());
        for name in &w.0 {
            let s = t
                .symbol_of(name)
                .ok_or_else(|| Error::OutsideSubalgebra(format!("`{name}` has no polynomial symbol")))?;
            p = &p * &s;
        }
        acc = &acc + &p;
    }
    Ok(acc)
}

/// Entrywise symbol of the interior blocks.
pub fn symbol_map(m: &OpMatrix, t: &SymbolTable) -> Result<PolyMatrix> {
    let mut out = PolyMatrix::zero(m.rows(), m.cols(), t.nvars());
    for (i, j, b) in m.entries() {
        if !(b.a12.is_zero() && b.a21.is_zero() && b.a22.is_zero()) {
            return Err(Error::OutsideSubalgebra(format!(
                "entry ({}, {}) has nonzero potential, trace or boundary part",
                i + 1,
                j + 1
            )));
        }
        out.set(i, j, expr_symbol(&b.a11, t)?);
    }
    Ok(out)
}

/// Inverse of [`symbol_map`] on the image: monomials become words with the
/// variable generators in ascending order.
pub fn op_map(p: &PolyMatrix, t: &SymbolTable) -> Result<OpMatrix> {
    if p.nvars() != t.nvars() {
        return Err(Error::ShapeMismatch("symbol table and matrix use different variables".into()));
    }
    let mut out = OpMatrix::zero(p.rows(), p.cols());
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let mut e = OpExpr::zero(Space::Interior, Space::Interior);
            for (mono, c) in p.get(i, j).terms() {
                let mut names = Vec::new();
                for (v, &k) in mono.iter().enumerate() {
                    names.extend(std::iter::repeat(t.vars[v].clone()).take(k as usize));
                }
                e.add_term(Word(names), c.clone());
            }
            out.set(i, j, BvOp { a11: e, ..BvOp::zero() });
        }
    }
    Ok(out)
}

/// The subalgebra unit `diag(I, 0)` maps to the constant 1.
pub fn unit_symbol(nvars: usize) -> Poly {
    Poly::constant(nvars, crate::Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mat_mul;
    use crate::order::GeneratorDecl;
    use crate::q;

    fn setup() -> (RewriteSystem, SymbolTable) {
        let mut rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("D1", OpKind::InteriorGreen, 1).with_transmission().with_adjoint(q(-1), "D1"))
            .gen(GeneratorDecl::new("D2", OpKind::InteriorGreen, 1).with_transmission().with_adjoint(q(-1), "D2"));
        let t = SymbolTable::new(&["D1", "D2"]).unwrap();
        t.commutation_rules(&mut rs).unwrap();
        (rs, t)
    }

    #[test]
    fn curl_row_symbol() {
        let (rs, t) = setup();
        let l = OpMatrix::row(vec![BvOp::from_expr(rs.g("D1")), BvOp::from_expr(rs.g("D2").neg())]);
        let p = symbol_map(&l, &t).unwrap();
        assert_eq!(p.row(0), vec![Poly::var(2, 0), -&Poly::var(2, 1)]);
        assert_eq!(op_map(&p, &t).unwrap(), l);
    }

    #[test]
    fn unit_maps_to_one() {
        let (_, t) = setup();
        let u = OpMatrix::scalar(BvOp::interior_identity());
        assert_eq!(symbol_map(&u, &t).unwrap().get(0, 0), &unit_symbol(2));
        let full = OpMatrix::scalar(BvOp::identity());
        assert!(matches!(symbol_map(&full, &t), Err(Error::OutsideSubalgebra(_))));
    }

    #[test]
    fn products_commute_after_normalization() {
        let (rs, t) = setup();
        let a = OpMatrix::scalar(BvOp::from_expr(rs.g("D2")));
        let b = OpMatrix::scalar(BvOp::from_expr(rs.g("D1")));
        let ab = mat_mul(&a, &b, &rs).unwrap();
        assert_eq!(ab, mat_mul(&b, &a, &rs).unwrap());
        let want = &Poly::var(2, 0) * &Poly::var(2, 1);
        assert_eq!(symbol_map(&ab, &t).unwrap().get(0, 0), &want);
    }
}
