use std::fmt;

use super::expr::OpExpr;
use super::rewrite::RewriteSystem;
use crate::error::{Error, Result};
use crate::order::{OrderData, Space};
use crate::Q;

use Space::{Boundary as B, Interior as In};

/// `(a11, a12; a21, a22)` = `(r+A + B, K; T, Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BvOp {
    pub a11: OpExpr,
    pub a12: OpExpr,
    pub a21: OpExpr,
    pub a22: OpExpr,
}

impl BvOp {
    pub fn new(a11: OpExpr, a12: OpExpr, a21: OpExpr, a22: OpExpr) -> Result<Self> {
        let want = [(In, In), (B, In), (In, B), (B, B)];
        for (e, (d, c)) in [&a11, &a12, &a21, &a22].into_iter().zip(want) {
            if (e.dom, e.cod) != (d, c) {
                return Err(Error::KindMismatch(format!(
                    "block entry `{e}` maps {:?}->{:?}, slot needs {d:?}->{c:?}",
                    e.dom, e.cod
                )));
            }
        }
        Ok(BvOp { a11, a12, a21, a22 })
    }

    pub fn zero() -> Self {
        BvOp {
            a11: OpExpr::zero(In, In),
            a12: OpExpr::zero(B, In),
            a21: OpExpr::zero(In, B),
            a22: OpExpr::zero(B, B),
        }
    }

    /// `diag(I, I')`.
    pub fn identity() -> Self {
        BvOp { a11: OpExpr::identity(In), a22: OpExpr::identity(B), ..BvOp::zero() }
    }

    /// `diag(I, 0)`.
    pub fn interior_identity() -> Self {
        BvOp { a11: OpExpr::identity(In), ..BvOp::zero() }
    }

    /// Places `e` in the block slot matching its signature.
    pub fn from_expr(e: OpExpr) -> Self {
        let mut b = BvOp::zero();
        let (d, c) = (e.dom, e.cod);
        *b.slot_mut(d, c) = e;
        b
    }

    pub fn slot(&self, dom: Space, cod: Space) -> &OpExpr {
        match (cod, dom) {
            (In, In) => &self.a11,
            (In, B) => &self.a12,
            (B, In) => &self.a21,
            (B, B) => &self.a22,
        }
    }

    pub fn slot_mut(&mut self, dom: Space, cod: Space) -> &mut OpExpr {
        match (cod, dom) {
            (In, In) => &mut self.a11,
            (In, B) => &mut self.a12,
            (B, In) => &mut self.a21,
            (B, B) => &mut self.a22,
        }
    }

    pub fn blocks(&self) -> [&OpExpr; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks().iter().all(|e| e.is_zero())
    }

    fn zip(&self, o: &BvOp, f: impl Fn(&OpExpr, &OpExpr) -> Result<OpExpr>) -> Result<BvOp> {
        Ok(BvOp {
            a11: f(&self.a11, &o.a11)?,
            a12: f(&self.a12, &o.a12)?,
            a21: f(&self.a21, &o.a21)?,
            a22: f(&self.a22, &o.a22)?,
        })
    }

    pub fn map(&self, mut f: impl FnMut(&OpExpr) -> Result<OpExpr>) -> Result<BvOp> {
        Ok(BvOp { a11: f(&self.a11)?, a12: f(&self.a12)?, a21: f(&self.a21)?, a22: f(&self.a22)? })
    }

    pub fn add(&self, o: &BvOp) -> BvOp {
        self.zip(o, |a, b| a.add(b)).expect("block slots share signatures")
    }

    pub fn sub(&self, o: &BvOp) -> BvOp {
        self.zip(o, |a, b| a.sub(b)).expect("block slots share signatures")
    }

    pub fn scale(&self, s: &Q) -> BvOp {
        self.map(|e| Ok(e.scale(s))).unwrap()
    }

    /// Block product without normalization.
    pub fn compose(&self, o: &BvOp) -> BvOp {
        let c = |x: &OpExpr, y: &OpExpr| x.compose(y).expect("block product is well-typed");
        let s = |x: OpExpr, y: OpExpr| x.add(&y).unwrap();
        let out = BvOp {
            a11: s(c(&self.a11, &o.a11), c(&self.a12, &o.a21)),
            a12: s(c(&self.a11, &o.a12), c(&self.a12, &o.a22)),
            a21: s(c(&self.a21, &o.a11), c(&self.a22, &o.a21)),
            a22: s(c(&self.a21, &o.a12), c(&self.a22, &o.a22)),
        };
        debug_assert!(out.well_typed());
        out
    }

    fn well_typed(&self) -> bool {
        [(&self.a11, In, In), (&self.a12, B, In), (&self.a21, In, B), (&self.a22, B, B)]
            .iter()
            .all(|(e, d, c)| e.dom == *d && e.cod == *c)
    }

    pub fn normalize(&self, rs: &RewriteSystem) -> Result<BvOp> {
        self.map(|e| rs.normalize(e))
    }

    /// `(a11*, a21*; a12*, a22*)`.
    pub fn adjoint(&self, rs: &RewriteSystem) -> Result<BvOp> {
        Ok(BvOp {
            a11: rs.adjoint_expr(&self.a11)?,
            a12: rs.adjoint_expr(&self.a21)?,
            a21: rs.adjoint_expr(&self.a12)?,
            a22: rs.adjoint_expr(&self.a22)?,
        })
    }

    /// Slotwise maximum of the order data of all words present.
    pub fn order(&self, rs: &RewriteSystem) -> Result<OrderData> {
        let mut acc = OrderData::zero();
        for e in self.blocks() {
            for w in e.terms().keys() {
                acc = acc.join(&rs.word_order(w, e.cod)?);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for BvOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "[{}, {}; {}, {}]", self.a11, self.a12, self.a21, self.a22)
    }
}
