use num_traits::One;
use std::collections::BTreeMap;

use super::expr::{OpExpr, Word};
use crate::error::{Error, Result};
use crate::order::{GeneratorDecl, OpKind, OrderData, Space};
use crate::Q;

pub const DEFAULT_BUDGET: usize = 200_000;

/// Reserved names of the two identities.
pub const INTERIOR_IDENTITY: &str = "I";
pub const BOUNDARY_IDENTITY: &str = "Ib";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: OpExpr,
}

/// Declared generators plus oriented rules `lhs -> rhs`.
///
/// Normal forms are computed by scanning each word left to right and
/// applying, at the first position where some rule matches, the first such
/// rule in declaration order. The strategy is fixed, so results are
/// deterministic even when the rule set is not confluent; confluence is up
/// to whoever writes the rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    generators: BTreeMap<String, GeneratorDecl>,
    rules: Vec<Rule>,
    pub budget: usize,
}

impl Default for RewriteSystem {
    fn default() -> Self {
        RewriteSystem { generators: BTreeMap::new(), rules: Vec::new(), budget: DEFAULT_BUDGET }
    }
}

impl RewriteSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn declare(&mut self, g: GeneratorDecl) -> Result<()> {
        g.validate()?;
        if g.name == INTERIOR_IDENTITY || g.name == BOUNDARY_IDENTITY {
            return Err(Error::InvalidGenerator { name: g.name, reason: "reserved identity name".into() });
        }
        if self.generators.contains_key(&g.name) {
            return Err(Error::InvalidGenerator { name: g.name, reason: "declared twice".into() });
        }
        self.generators.insert(g.name.clone(), g);
        Ok(())
    }

    /// Builder form of [`declare`](Self::declare); panics on invalid input.
    pub fn gen(mut self, g: GeneratorDecl) -> Self {
        self.declare(g).expect("valid generator");
        self
    }

    pub fn generator(&self, name: &str) -> Result<&GeneratorDecl> {
        self.generators
            .get(name)
            .ok_or_else(|| Error::InvalidGenerator { name: name.into(), reason: "not declared".into() })
    }

    /// Sets or clears the numeric binding of a declared generator.
    pub fn set_numeric_key(&mut self, name: &str, key: Option<String>) -> Result<()> {
        let g = self.generators.get_mut(name).ok_or_else(|| Error::InvalidArgument(format!("`{name}` is not declared")))?;
        g.numeric_key = key;
        Ok(())
    }

    pub fn generators(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.generators.values()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Checks that declared adjoints refer to generators of the adjoint kind
    /// and that adjoining twice returns the original generator.
    pub fn check_adjoints(&self) -> Result<()> {
        for g in self.generators.values() {
            let Some(adj) = &g.adjoint else { continue };
            let bad = |reason: String| Error::InvalidGenerator { name: g.name.clone(), reason };
            let h = self.generator(&adj.name).map_err(|_| bad(format!("adjoint `{}` not declared", adj.name)))?;
            if h.kind != g.kind.adjoint() {
                return Err(bad(format!("adjoint `{}` has kind {:?}", h.name, h.kind)));
            }
            let Some(back) = &h.adjoint else {
                return Err(bad(format!("adjoint `{}` declares no adjoint", h.name)));
            };
            if back.name != g.name || &back.coeff * &adj.coeff != Q::one() {
                return Err(bad("adjoint is not an involution".into()));
            }
        }
        Ok(())
    }

    /// `(dom, cod)` of a nonempty word, checking that adjacent factors
    /// compose.
    pub fn word_signature(&self, w: &Word) -> Result<(Space, Space)> {
        let mut sig: Option<(Space, Space)> = None;
        for name in w.0.iter().rev() {
            let k = self.generator(name)?.kind;
            let (d, c) = (k.domain().unwrap(), k.codomain().unwrap());
            sig = Some(match sig {
                None => (d, c),
                Some((dom, cod)) => {
                    if d != cod {
                        return Err(Error::KindMismatch(format!(
                            "`{name}` ({:?}) cannot follow a factor landing in {cod:?} in word {}",
                            k,
                            w.0.join(".")
                        )));
                    }
                    (dom, c)
                }
            });
        }
        sig.ok_or_else(|| Error::KindMismatch("empty word has no intrinsic signature".into()))
    }

    /// Kind of a nonempty word, per the block composition table.
    pub fn word_kind(&self, w: &Word) -> Result<OpKind> {
        let (d, c) = self.word_signature(w)?;
        Ok(OpKind::for_block(d, c))
    }

    /// Expression `c * w` with its signature inferred and checked.
    pub fn word(&self, names: &[&str], c: Q) -> Result<OpExpr> {
        let w = Word::from_names(names);
        let (d, cod) = self.word_signature(&w)?;
        OpExpr::term(d, cod, w, c)
    }

    /// Single generator as an expression.
    pub fn g(&self, name: &str) -> OpExpr {
        self.word(&[name], Q::one()).expect("declared generator")
    }

    /// Builds `c * w` in a prescribed signature.
    pub fn term_in(&self, dom: Space, cod: Space, w: Word, c: Q) -> Result<OpExpr> {
        if !w.is_empty() {
            let sig = self.word_signature(&w)?;
            if sig != (dom, cod) {
                return Err(Error::KindMismatch(format!(
                    "word {} maps {:?}->{:?}, expected {dom:?}->{cod:?}",
                    w.0.join("."),
                    sig.0,
                    sig.1
                )));
            }
        }
        OpExpr::term(dom, cod, w, c)
    }

    pub fn add_rule(&mut self, lhs: Word, rhs: OpExpr) -> Result<()> {
        let sig = self.word_signature(&lhs)?;
        if sig != (rhs.dom, rhs.cod) {
            return Err(Error::KindMismatch(format!(
                "rule {} -> {}: sides have different signatures",
                lhs.0.join("."),
                rhs
            )));
        }
        for w in rhs.terms().keys() {
            if !w.is_empty() {
                self.word_signature(w)?;
            }
        }
        self.rules.push(Rule { lhs, rhs });
        Ok(())
    }

    /// Builder form of [`add_rule`](Self::add_rule); panics on invalid input.
    pub fn rule(mut self, lhs: &[&str], rhs: OpExpr) -> Self {
        self.add_rule(Word::from_names(lhs), rhs).expect("kind-consistent rule");
        self
    }

    fn first_match(&self, w: &Word) -> Option<(usize, &Rule)> {
        for pos in 0..w.len() {
            for r in &self.rules {
                let n = r.lhs.len();
                if pos + n <= w.len() && w.0[pos..pos + n] == r.lhs.0[..] {
                    return Some((pos, r));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.first_match(w).is_none()
    }

    /// Normal form of `e`; `BudgetExceeded` after `budget` rewrite steps.
    pub fn normalize(&self, e: &OpExpr) -> Result<OpExpr> {
        let mut out = OpExpr::zero(e.dom, e.cod);
        let mut work: Vec<(Word, Q)> = e.terms().iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        work.reverse();
        let mut steps = 0usize;
        while let Some((w, c)) = work.pop() {
            match self.first_match(&w) {
                None => out.add_term(w, c),
                Some((pos, rule)) => {
                    steps += 1;
                    if steps > self.budget {
                        return Err(Error::BudgetExceeded { what: "rewriting", steps });
                    }
                    let n = rule.lhs.len();
                    for (rw, rc) in rule.rhs.terms().iter().rev() {
                        work.push((w.splice(pos, n, rw), &c * rc));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Order data of a nonempty word: composition of its factors' slots.
    pub fn word_order(&self, w: &Word, space: Space) -> Result<OrderData> {
        if w.is_empty() {
            return Ok(match space {
                Space::Interior => OrderData::for_generator(OpKind::InteriorIdentity, 0, 0),
                Space::Boundary => OrderData::for_generator(OpKind::BoundaryIdentity, 0, 0),
            });
        }
        let mut acc: Option<OrderData> = None;
        for name in &w.0 {
            let o = self.generator(name)?.order_data();
            acc = Some(match acc {
                None => o,
                Some(a) => a.compose(&o),
            });
        }
        Ok(acc.unwrap())
    }

    /// Formal adjoint: words reversed, generators replaced by their declared
    /// adjoints, signature swapped.
    pub fn adjoint_expr(&self, e: &OpExpr) -> Result<OpExpr> {
        let mut out = OpExpr::zero(e.cod, e.dom);
        for (w, c) in e.terms() {
            let mut coeff = c.clone();
            let mut names = Vec::with_capacity(w.len());
            for name in w.0.iter().rev() {
                let g = self.generator(name)?;
                let adj = g.adjoint.as_ref().ok_or_else(|| Error::NotAdjointable(name.clone()))?;
                coeff *= &adj.coeff;
                names.push(adj.name.clone());
            }
            out.add_term(Word(names), coeff);
        }
        Ok(out)
    }

    /// Whether `e` normalizes to zero.
    pub fn is_zero_mod(&self, e: &OpExpr) -> Result<bool> {
        Ok(self.normalize(e)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::OpKind;
    use crate::q;

    fn wave() -> RewriteSystem {
        let rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("K", OpKind::Potential, 0))
            .gen(GeneratorDecl::new("RP", OpKind::Trace, 0))
            .gen(GeneratorDecl::new("DX2", OpKind::InteriorGreen, 2));
        let ib = OpExpr::identity(Space::Boundary);
        rs.rule(&["RP", "K"], ib)
    }

    #[test]
    fn trace_of_potential_is_boundary_identity() {
        let rs = wave();
        let e = rs.word(&["RP", "K"], q(1)).unwrap();
        assert_eq!(rs.normalize(&e).unwrap(), OpExpr::identity(Space::Boundary));
    }

    #[test]
    fn identity_is_normal() {
        let rs = wave();
        let i = OpExpr::identity(Space::Interior);
        assert_eq!(rs.normalize(&i).unwrap(), i);
    }

    #[test]
    fn rewriting_inside_longer_words() {
        let rs = wave();
        let e = rs.word(&["K", "RP", "K", "RP"], q(3)).unwrap();
        assert_eq!(rs.normalize(&e).unwrap(), rs.word(&["K", "RP"], q(3)).unwrap());
    }

    #[test]
    fn kind_errors_detected() {
        let rs = wave();
        assert!(matches!(rs.word(&["K", "DX2"], q(1)), Err(Error::KindMismatch(_))));
        let mut rs2 = rs.clone();
        assert!(rs2.add_rule(Word::from_names(&["RP", "K"]), OpExpr::identity(Space::Interior)).is_err());
    }

    #[test]
    fn budget_exceeded_on_looping_rules() {
        let rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("A", OpKind::InteriorGreen, 0))
            .gen(GeneratorDecl::new("B", OpKind::InteriorGreen, 0))
            .with_budget(50);
        let rs = rs.clone().rule(&["A"], rs.g("B")).rule(&["B"], rs.g("A"));
        assert!(matches!(rs.normalize(&rs.g("A")), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn adjoint_reverses_words() {
        let rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("A", OpKind::InteriorGreen, 0).with_transmission().with_adjoint(q(1), "As"))
            .gen(GeneratorDecl::new("As", OpKind::InteriorGreen, 0).with_transmission().with_adjoint(q(1), "A"))
            .gen(GeneratorDecl::new("B", OpKind::InteriorGreen, 0).with_transmission().self_adjoint());
        rs.check_adjoints().unwrap();
        let e = rs.word(&["A", "B"], q(1)).unwrap();
        assert_eq!(rs.adjoint_expr(&e).unwrap(), rs.word(&["B", "As"], q(1)).unwrap());
        let k = RewriteSystem::new().gen(GeneratorDecl::new("K", OpKind::Potential, 0));
        assert!(matches!(k.adjoint_expr(&k.g("K")), Err(Error::NotAdjointable(_))));
    }
}
