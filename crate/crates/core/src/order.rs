//! Order and class bookkeeping for block boundary value operators.
//!
//! A block operator `(r+A + B, K; T, Q)` carries five orders
//! `(m1, m2 | m3; m4 | m5)` for the interior pseudo-differential part, the
//! singular Green part, the potential, the trace and the boundary operator,
//! and two classes `(d2; d4)` for the Green and trace parts. A slot is `None`
//! when the corresponding operator is identically zero.
//!
//! Composition follows the block product: each slot of `A o B` is the
//! maximum, over the paths through the two blocks, of the summed orders.
//! Classes use the conservative bound `max(d_B, d_A + max(ord_B, 0))`, except
//! when `B` is a diagonal order reducer `diag(r+T1, T2)`, where the exact
//! shift `d - N1` applies.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::Q;

/// The two function spaces a block operator moves between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    /// `r+A + B`, interior to interior.
    InteriorGreen,
    /// `K`, boundary to interior.
    Potential,
    /// `T`, interior to boundary.
    Trace,
    /// `Q`, boundary to boundary.
    BoundaryPdo,
    InteriorIdentity,
    BoundaryIdentity,
    Zero,
}

impl OpKind {
    pub fn domain(self) -> Option<Space> {
        match self {
            OpKind::InteriorGreen | OpKind::Trace | OpKind::InteriorIdentity => Some(Space::Interior),
            OpKind::Potential | OpKind::BoundaryPdo | OpKind::BoundaryIdentity => Some(Space::Boundary),
            OpKind::Zero => None,
        }
    }

    pub fn codomain(self) -> Option<Space> {
        match self {
            OpKind::InteriorGreen | OpKind::Potential | OpKind::InteriorIdentity => Some(Space::Interior),
            OpKind::Trace | OpKind::BoundaryPdo | OpKind::BoundaryIdentity => Some(Space::Boundary),
            OpKind::Zero => None,
        }
    }

    /// The kind of the operator sitting in block position `(cod, dom)`.
    pub fn for_block(dom: Space, cod: Space) -> OpKind {
        match (cod, dom) {
            (Space::Interior, Space::Interior) => OpKind::InteriorGreen,
            (Space::Interior, Space::Boundary) => OpKind::Potential,
            (Space::Boundary, Space::Interior) => OpKind::Trace,
            (Space::Boundary, Space::Boundary) => OpKind::BoundaryPdo,
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, OpKind::InteriorIdentity | OpKind::BoundaryIdentity)
    }

    /// Kind of the formal adjoint: traces and potentials swap.
    pub fn adjoint(self) -> OpKind {
        match self {
            OpKind::Potential => OpKind::Trace,
            OpKind::Trace => OpKind::Potential,
            k => k,
        }
    }

    pub fn parse(s: &str) -> Option<OpKind> {
        Some(match s {
            "interior" | "green" | "psido" => OpKind::InteriorGreen,
            "potential" => OpKind::Potential,
            "trace" => OpKind::Trace,
            "boundary" => OpKind::BoundaryPdo,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            OpKind::InteriorGreen => "interior",
            OpKind::Potential => "potential",
            OpKind::Trace => "trace",
            OpKind::BoundaryPdo => "boundary",
            OpKind::InteriorIdentity => "interior-identity",
            OpKind::BoundaryIdentity => "boundary-identity",
            OpKind::Zero => "zero",
        }
    }
}

/// Orders `(m1, m2 | m3; m4 | m5)` and classes `(d2; d4)`; `None` marks an
/// absent (zero) slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct OrderData {
    pub m1: Option<i64>,
    pub m2: Option<i64>,
    pub m3: Option<i64>,
    pub m4: Option<i64>,
    pub m5: Option<i64>,
    pub d2: Option<i64>,
    pub d4: Option<i64>,
}

fn add(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

fn max_of<I: IntoIterator<Item = Option<i64>>>(it: I) -> Option<i64> {
    it.into_iter().flatten().max()
}

impl OrderData {
    /// All slots present.
    pub fn full(m: [i64; 5], d2: i64, d4: i64) -> Self {
        OrderData {
            m1: Some(m[0]),
            m2: Some(m[1]),
            m3: Some(m[2]),
            m4: Some(m[3]),
            m5: Some(m[4]),
            d2: Some(d2),
            d4: Some(d4),
        }
    }

    /// The zero operator.
    pub fn zero() -> Self {
        OrderData::default()
    }

    /// `diag(I, I')`.
    pub fn identity() -> Self {
        OrderData { m1: Some(0), m5: Some(0), ..Default::default() }
    }

    /// `diag(r+T1, T2)` with `ord r+T1 = -n1`, `ord T2 = -n2`.
    pub fn diagonal_reducer(n1: i64, n2: i64) -> Self {
        OrderData { m1: Some(-n1), m5: Some(-n2), ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.orders().iter().all(Option::is_none)
    }

    pub fn orders(&self) -> [Option<i64>; 5] {
        [self.m1, self.m2, self.m3, self.m4, self.m5]
    }

    /// Returns `(n1, n2)` when this is a strictly order-lowering diagonal
    /// reducer.
    pub fn as_diagonal_reducer(&self) -> Option<(i64, i64)> {
        match (self.m1, self.m2, self.m3, self.m4, self.m5) {
            (Some(a), None, None, None, Some(b)) if a < 0 && b < 0 => Some((-a, -b)),
            _ => None,
        }
    }

    /// Order data of a single generator placed in its block slot.
    pub fn for_generator(kind: OpKind, order: i64, class: i64) -> Self {
        match kind {
            OpKind::InteriorGreen if class > 0 => OrderData {
                m1: Some(order),
                m2: Some(order),
                d2: Some(class),
                ..Default::default()
            },
            OpKind::InteriorGreen => OrderData { m1: Some(order), ..Default::default() },
            OpKind::Potential => OrderData { m3: Some(order), ..Default::default() },
            OpKind::Trace => OrderData { m4: Some(order), d4: Some(class), ..Default::default() },
            OpKind::BoundaryPdo => OrderData { m5: Some(order), ..Default::default() },
            OpKind::InteriorIdentity => OrderData { m1: Some(0), ..Default::default() },
            OpKind::BoundaryIdentity => OrderData { m5: Some(0), ..Default::default() },
            OpKind::Zero => OrderData::zero(),
        }
    }

    /// Slotwise maximum; the order data of a sum.
    pub fn join(&self, other: &OrderData) -> OrderData {
        let mx = |a: Option<i64>, b: Option<i64>| max_of([a, b]);
        OrderData {
            m1: mx(self.m1, other.m1),
            m2: mx(self.m2, other.m2),
            m3: mx(self.m3, other.m3),
            m4: mx(self.m4, other.m4),
            m5: mx(self.m5, other.m5),
            d2: mx(self.d2, other.d2),
            d4: mx(self.d4, other.d4),
        }
    }

    pub fn compose(&self, rhs: &OrderData) -> OrderData {
        compose_order(self, rhs)
    }
}

impl fmt::Display for OrderData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: Option<i64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        write!(
            f,
            "({}, {} | {}; {} | {}), d = ({}; {})",
            s(self.m1),
            s(self.m2),
            s(self.m3),
            s(self.m4),
            s(self.m5),
            s(self.d2),
            s(self.d4)
        )
    }
}

/// Order and class of `A o B` from those of `A` and `B`.
pub fn compose_order(a: &OrderData, b: &OrderData) -> OrderData {
    let m1 = add(a.m1, b.m1);
    let m2 = max_of([add(a.m1, b.m2), add(a.m2, b.m1), add(a.m2, b.m2), add(a.m3, b.m4)]);
    let m3 = max_of([add(a.m1, b.m3), add(a.m2, b.m3), add(a.m3, b.m5)]);
    let m4 = max_of([add(a.m4, b.m1), add(a.m4, b.m2), add(a.m5, b.m4)]);
    let m5 = max_of([add(a.m4, b.m3), add(a.m5, b.m5)]);

    let (d2, d4) = if let Some((n1, _)) = b.as_diagonal_reducer() {
        (a.d2.map(|d| d - n1).filter(|_| m2.is_some()), a.d4.map(|d| d - n1).filter(|_| m4.is_some()))
    } else {
        let b_int = max_of([b.m1, b.m2]).map(|o| o.max(0));
        let a_int = a.m1.is_some() || a.m2.is_some();
        let d2 = m2.and_then(|_| {
            max_of([
                b.m2.filter(|_| a_int).map(|_| b.d2.unwrap_or(0)),
                a.m3.and(b.m4).map(|_| b.d4.unwrap_or(0)),
                a.m2.and(b_int).map(|o| a.d2.unwrap_or(0) + o),
            ])
        });
        let d4 = m4.and_then(|_| {
            max_of([
                a.m4.and(b.m2).map(|_| b.d2.unwrap_or(0)),
                a.m5.and(b.m4).map(|_| b.d4.unwrap_or(0)),
                a.m4.and(b_int).map(|o| a.d4.unwrap_or(0) + o),
            ])
        });
        (d2, d4)
    };
    OrderData { m1, m2, m3, m4, m5, d2, d4 }
}

/// Orders and classes after composing on the right with `diag(r+T1, T2)`,
/// `ord r+T1 = -n1`, `ord T2 = -n2`.
pub fn reduce_order(m: &OrderData, n1: i64, n2: i64) -> Result<OrderData> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::InvalidArgument(format!(
            "order reduction needs n1, n2 >= 1 (got {n1}, {n2})"
        )));
    }
    Ok(compose_order(m, &OrderData::diagonal_reducer(n1, n2)))
}

/// Whether reducing by `n1` is enough for the adjoint of `A o T` to exist:
/// `n1 > max(m1, d2, d4)`.
pub fn adjoint_reduction_sufficient(m: &OrderData, n1: i64) -> bool {
    max_of([m.m1, m.d2, m.d4]).map_or(true, |bound| n1 > bound)
}

/// A scalar multiple of a generator, used to declare formal adjoints such as
/// `d1* = -d1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjointRef {
    pub coeff: Q,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorDecl {
    pub name: String,
    pub kind: OpKind,
    pub order: i64,
    /// Class of the trace or Green part; zero for other kinds.
    pub class: i64,
    pub adjoint: Option<AdjointRef>,
    /// Only the `alpha_{g,0}` coefficients of the transmission expansion are
    /// nonzero (interior kinds).
    pub transmission_alpha_zero_only: bool,
    pub numeric_key: Option<String>,
}

impl GeneratorDecl {
    pub fn new(name: impl Into<String>, kind: OpKind, order: i64) -> Self {
        GeneratorDecl {
            name: name.into(),
            kind,
            order,
            class: 0,
            adjoint: None,
            transmission_alpha_zero_only: false,
            numeric_key: None,
        }
    }

    pub fn with_class(mut self, class: i64) -> Self {
        self.class = class;
        self
    }

    pub fn with_transmission(mut self) -> Self {
        self.transmission_alpha_zero_only = true;
        self
    }

    pub fn with_adjoint(mut self, coeff: Q, name: impl Into<String>) -> Self {
        self.adjoint = Some(AdjointRef { coeff, name: name.into() });
        self
    }

    pub fn self_adjoint(self) -> Self {
        let name = self.name.clone();
        self.with_adjoint(crate::q(1), name)
    }

    /// Adjoint is `other` with coefficient 1.
    pub fn self_adjoint_as(self, other: &str) -> Self {
        self.with_adjoint(crate::q(1), other)
    }

    pub fn with_numeric(mut self, key: impl Into<String>) -> Self {
        self.numeric_key = Some(key.into());
        self
    }

    pub fn adjointable(&self) -> bool {
        self.kind.is_identity() || self.adjoint.is_some()
    }

    /// Existence conditions for a formal adjoint: class 0 for trace and
    /// Green parts, and only `alpha_{g,0}` terms for interior symbols.
    pub fn passes_adjoint_gate(&self) -> bool {
        match self.kind {
            OpKind::Trace => self.class == 0,
            OpKind::InteriorGreen => self.class == 0 && self.transmission_alpha_zero_only,
            _ => true,
        }
    }

    pub fn order_data(&self) -> OrderData {
        OrderData::for_generator(self.kind, self.order, self.class)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidGenerator { name: self.name.clone(), reason: reason.into() };
        let valid_name = self.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_name {
            return Err(bad("names must match [A-Za-z][A-Za-z0-9_]*"));
        }
        if self.kind == OpKind::Zero {
            return Err(bad("zero is not a generator"));
        }
        if self.class < 0 {
            return Err(bad("class must be non-negative"));
        }
        if self.class > 0 && !matches!(self.kind, OpKind::Trace | OpKind::InteriorGreen) {
            return Err(bad("only trace and interior kinds carry a class"));
        }
        if self.adjoint.is_some() && !self.passes_adjoint_gate() {
            return Err(bad("declared adjoint but class != 0 or transmission terms beyond alpha_0"));
        }
        if let Some(adj) = &self.adjoint {
            if num_traits::Zero::is_zero(&adj.coeff) {
                return Err(bad("adjoint coefficient must be nonzero"));
            }
        }
        Ok(())
    }
}
