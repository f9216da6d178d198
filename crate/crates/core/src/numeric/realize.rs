//! Grid realizations of generators and of whole operator matrices.
//!
//! A generator is bound to a library operator by a key such as `trace`,
//! `robin(d1=1, d2=2)` or `delay(h=0.25)`. Coefficients leave exact
//! arithmetic only here, when a matrix is realized.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::boundary::{potential_k, trace_restrict};
use super::fd::{d1, d2, helmholtz_apply, ld_apply, left_derivative, right_derivative, wave_apply};
use super::grid::{BoundaryField, Field, FieldPair, Grid1D, InteriorField};
use super::quadrature::QuadConfig;
use super::spectral::{delay_field, dt_field, pdo_apply};
use super::twopoint::{TwoPointParams, TwoPointSolver};
use crate::algebra::{OpExpr, OpMatrix, RewriteSystem};
use crate::error::{Error, Result};
use crate::order::{OpKind, Space};

pub type OpFn = Arc<dyn Fn(&Field) -> Field + Send + Sync>;

#[derive(Clone)]
pub struct RealizedOp {
    pub dom: Space,
    pub cod: Space,
    pub f: OpFn,
}

impl fmt::Debug for RealizedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealizedOp({:?} -> {:?})", self.dom, self.cod)
    }
}

/// `key` or `key(name=value, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub key: String,
    pub params: BTreeMap<String, f64>,
}

impl Binding {
    pub fn parse(s: &str) -> Result<Binding> {
        let s = s.trim();
        let bad = |m: &str| Error::InvalidArgument(format!("binding `{s}`: {m}"));
        let (key, rest) = match s.find('(') {
            Some(i) => {
                let inner = s[i + 1..].strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
                (s[..i].trim(), Some(inner))
            }
            None => (s, None),
        };
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad("bad key"));
        }
        let mut params = BTreeMap::new();
        for item in rest.into_iter().flat_map(|r| r.split(',')).map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad("parameters are name=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("parameter value is not a number"))?;
            if !v.is_finite() {
                return Err(bad("parameter value is not finite"));
            }
            params.insert(k.trim().to_string(), v);
        }
        Ok(Binding { key: key.to_string(), params })
    }

    fn get(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    fn check_params(&self, allowed: &[&str]) -> Result<()> {
        for k in self.params.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidArgument(format!("`{}` takes no parameter `{k}`", self.key)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", ps.join(", "))?;
        }
        Ok(())
    }
}

/// Library keys with their fixed signature (`None` = same space in and out,
/// taken from the generator's kind) and parameters.
pub const LIBRARY: &[(&str, Option<(Space, Space)>, &[&str])] = &[
    ("potential_k", Some((Space::Boundary, Space::Interior)), &[]),
    ("trace", Some((Space::Interior, Space::Boundary)), &[]),
    ("normal_trace", Some((Space::Interior, Space::Boundary)), &[]),
    ("robin", Some((Space::Interior, Space::Boundary)), &["d1", "d2"]),
    ("dx_fd", Some((Space::Interior, Space::Interior)), &[]),
    ("dxx_fd", Some((Space::Interior, Space::Interior)), &[]),
    ("wave_fd", Some((Space::Interior, Space::Interior)), &[]),
    ("helmholtz_fd", Some((Space::Interior, Space::Interior)), &[]),
    ("pdo_inv_helmholtz", Some((Space::Interior, Space::Interior)), &[]),
    ("ld_fd", Some((Space::Interior, Space::Interior)), &["a", "b", "c"]),
    ("twopoint_solver", Some((Space::Interior, Space::Interior)), &["a", "b", "c", "d1", "d2"]),
    ("delay", None, &["h"]),
    ("dt_spectral", None, &[]),
    ("multiply", None, &["c"]),
];

fn interior(f: &Field) -> &InteriorField {
    f.interior().expect("realized operator received a boundary field")
}

fn boundary(f: &Field) -> &BoundaryField {
    f.boundary().expect("realized operator received an interior field")
}

fn on_interior(op: impl Fn(&InteriorField) -> InteriorField + Send + Sync + 'static) -> OpFn {
    Arc::new(move |f| Field::Interior(op(interior(f))))
}

fn map_slices(g: Grid1D, op: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static) -> OpFn {
    on_interior(move |v| v.map_slices(|s| op(s, g.h())))
}

#[derive(Debug, Clone)]
pub struct NumericRealization {
    pub grid: Grid1D,
    ops: BTreeMap<String, RealizedOp>,
}

impl NumericRealization {
    pub fn new(grid: Grid1D) -> Self {
        NumericRealization { grid, ops: BTreeMap::new() }
    }

    /// Binds every generator of `rs` that carries a numeric key.
    pub fn from_system(rs: &RewriteSystem, grid: Grid1D) -> Result<Self> {
        let mut nr = NumericRealization::new(grid);
        for g in rs.generators() {
            if let Some(k) = &g.numeric_key {
                nr.bind(&g.name, g.kind, &Binding::parse(k)?)?;
            }
        }
        Ok(nr)
    }

    pub fn insert(&mut self, name: &str, dom: Space, cod: Space, f: OpFn) {
        self.ops.insert(name.to_string(), RealizedOp { dom, cod, f });
    }

    pub fn get(&self, name: &str) -> Option<&RealizedOp> {
        self.ops.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.ops.keys()
    }

    /// Checks a binding against the library without realizing it.
    pub fn check_binding(name: &str, kind: OpKind, b: &Binding) -> Result<(Space, Space)> {
        let (_, sig, allowed) = LIBRARY
            .iter()
            .find(|(k, _, _)| *k == b.key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown numeric key `{}`", b.key)))?;
        b.check_params(allowed)?;
        let (dom, cod) = (kind.domain().unwrap_or(Space::Interior), kind.codomain().unwrap_or(Space::Interior));
        match sig {
            Some(s) if *s != (dom, cod) => {
                return Err(Error::KindMismatch(format!(
                    "`{name}` is declared {} but `{}` maps {:?} -> {:?}",
                    kind.keyword(),
                    b.key,
                    s.0,
                    s.1
                )))
            }
            None if dom != cod => {
                return Err(Error::KindMismatch(format!("`{}` needs a generator mapping a space to itself", b.key)))
            }
            _ => {}
        }
        Ok((dom, cod))
    }

    pub fn bind(&mut self, name: &str, kind: OpKind, b: &Binding) -> Result<()> {
        let (dom, cod) = Self::check_binding(name, kind, b)?;
        let g = self.grid;
        let f: OpFn = match b.key.as_str() {
            "potential_k" => Arc::new(move |f| Field::Interior(potential_k(boundary(f), &g))),
            "trace" => Arc::new(move |f| Field::Boundary(trace_restrict(interior(f), &g, 0, None).unwrap())),
            "normal_trace" => Arc::new(move |f| Field::Boundary(trace_restrict(interior(f), &g, 1, None).unwrap())),
            "robin" => {
                let (c1, c2) = (b.get("d1", 1.0), b.get("d2", 1.0));
                Arc::new(move |f| {
                    let v = interior(f);
                    let mut out = BoundaryField::zeros(&g);
                    for k in 0..g.nt {
                        let s = v.slice(k);
                        out.left[k] = left_derivative(s, g.h()) + c1 * s[0];
                        out.right[k] = right_derivative(s, g.h()) + c2 * s[s.len() - 1];
                    }
                    Field::Boundary(out)
                })
            }
            "dx_fd" => map_slices(g, d1),
            "dxx_fd" => map_slices(g, d2),
            "wave_fd" => on_interior(move |v| wave_apply(v, &g)),
            "helmholtz_fd" => on_interior(move |v| helmholtz_apply(v, &g)),
            "pdo_inv_helmholtz" => {
                on_interior(move |v| pdo_apply(|xi| num_complex::Complex64::new(1.0 / (1.0 + xi * xi), 0.0), v, &g))
            }
            "ld_fd" => {
                let (a, bb, c) = (b.get("a", 1.0), b.get("b", 0.0), b.get("c", 1.0));
                on_interior(move |v| ld_apply(a, bb, c, v, &g))
            }
            "twopoint_solver" => {
                let p = TwoPointParams {
                    a: b.get("a", 1.0),
                    b: b.get("b", 0.0),
                    c: b.get("c", 1.0),
                    d1: b.get("d1", 1.0),
                    d2: b.get("d2", 1.0),
                };
                let solver = TwoPointSolver::new(p, g, QuadConfig::default())?;
                on_interior(move |v| solver.solve(v).expect("symbol checked at construction"))
            }
            "delay" => {
                let h = b.get("h", 0.0);
                Arc::new(move |f| delay_field(h, f, &g))
            }
            "dt_spectral" => Arc::new(move |f| dt_field(f, &g)),
            "multiply" => {
                let c = b.get("c", 1.0);
                Arc::new(move |f| f.scaled(c))
            }
            _ => unreachable!(),
        };
        self.insert(name, dom, cod, f);
        Ok(())
    }
}

/// One realized block entry: sum of `coeff * (op_k o ... o op_1)`.
#[derive(Debug, Clone)]
pub struct RealizedExpr {
    pub dom: Space,
    pub cod: Space,
    /// Operators in application order (innermost first).
    terms: Vec<(f64, Vec<RealizedOp>)>,
}

impl RealizedExpr {
    fn new(e: &OpExpr, nr: &NumericRealization) -> Result<Self> {
        let mut terms = Vec::new();
        for (w, c) in e.terms() {
            let mut ops = Vec::new();
            for name in w.0.iter().rev() {
                let op = nr.get(name).ok_or_else(|| Error::UnrealizedGenerator(name.clone()))?;
                ops.push(op.clone());
            }
            let c = c.to_f64().ok_or_else(|| Error::InvalidArgument(format!("coefficient {c} overflows f64")))?;
            terms.push((c, ops));
        }
        Ok(RealizedExpr { dom: e.dom, cod: e.cod, terms })
    }

    pub fn apply(&self, input: &Field, g: &Grid1D) -> Field {
        let mut out = Field::zeros(g, self.cod);
        for (c, ops) in &self.terms {
            let mut f = input.clone();
            for op in ops {
                f = (op.f)(&f);
            }
            out.axpy(*c, &f);
        }
        out
    }
}

/// A realized operator matrix acting on stacked `(interior, boundary)` pairs.
#[derive(Debug, Clone)]
pub struct RealizedMatrix {
    pub rows: usize,
    pub cols: usize,
    pub grid: Grid1D,
    /// Row-major, each entry's four blocks in `a11, a12, a21, a22` order.
    entries: Vec<[RealizedExpr; 4]>,
}

impl RealizedMatrix {
    pub fn apply(&self, input: &[FieldPair]) -> Result<Vec<FieldPair>> {
        if input.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("matrix has {} columns, got {} components", self.cols, input.len())));
        }
        let g = &self.grid;
        let mut out = vec![FieldPair::zeros(g); self.rows];
        for i in 0..self.rows {
            for (j, u) in input.iter().enumerate() {
                for blk in &self.entries[i * self.cols + j] {
                    if blk.terms.is_empty() {
                        continue;
                    }
                    let r = blk.apply(&u.get(blk.dom), g);
                    out[i].add_to(1.0, &r);
                }
            }
        }
        Ok(out)
    }
}

pub fn realize_matrix(m: &OpMatrix, nr: &NumericRealization) -> Result<RealizedMatrix> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let b = m.get(i, j);
            entries.push([
                RealizedExpr::new(&b.a11, nr)?,
                RealizedExpr::new(&b.a12, nr)?,
                RealizedExpr::new(&b.a21, nr)?,
                RealizedExpr::new(&b.a22, nr)?,
            ]);
        }
    }
    Ok(RealizedMatrix { rows: m.rows(), cols: m.cols(), grid: nr.grid, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mat_mul_raw, BvOp};
    use crate::order::GeneratorDecl;
    use crate::{q, qr};

    fn pair(g: &Grid1D, seed: f64) -> FieldPair {
        FieldPair {
            interior: InteriorField::from_fn(g, |x, t| (seed * x + t).sin() + seed),
            boundary: BoundaryField::constant(g, seed, -2.0 * seed),
        }
    }

    fn close(a: &[FieldPair], b: &[FieldPair], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| {
            x.interior.data.iter().zip(&y.interior.data).all(|(p, q)| (p - q).abs() <= tol)
                && x.boundary.left.iter().zip(&y.boundary.left).all(|(p, q)| (p - q).abs() <= tol)
                && x.boundary.right.iter().zip(&y.boundary.right).all(|(p, q)| (p - q).abs() <= tol)
        })
    }

    #[test]
    fn binding_syntax() {
        let b = Binding::parse("robin(d1=1, d2=2.5)").unwrap();
        assert_eq!(b.key, "robin");
        assert_eq!(b.params["d2"], 2.5);
        assert_eq!(Binding::parse(&b.to_string()).unwrap(), b);
        assert_eq!(Binding::parse("trace").unwrap().to_string(), "trace");
        assert!(Binding::parse("robin(d1)").is_err());
        assert!(Binding::parse("robin(d1=1").is_err());
    }

    #[test]
    fn identity_matrix_is_identity() {
        let g = Grid1D::new(17, 2, 2).unwrap();
        let nr = NumericRealization::new(g);
        let r = realize_matrix(&OpMatrix::identity(2), &nr).unwrap();
        let u = vec![pair(&g, 1.0), pair(&g, 2.0)];
        assert_eq!(r.apply(&u).unwrap(), u);
    }

    #[test]
    fn missing_and_mismatched_bindings() {
        let rs = RewriteSystem::new().gen(GeneratorDecl::new("X", OpKind::InteriorGreen, 0));
        let nr = NumericRealization::new(Grid1D::new(17, 1, 2).unwrap());
        let m = OpMatrix::scalar(BvOp::from_expr(rs.g("X")));
        assert!(matches!(realize_matrix(&m, &nr), Err(Error::UnrealizedGenerator(n)) if n == "X"));
        let mut nr = nr;
        let e = nr.bind("X", OpKind::InteriorGreen, &Binding::parse("trace").unwrap());
        assert!(matches!(e, Err(Error::KindMismatch(_))));
        assert!(nr.bind("X", OpKind::InteriorGreen, &Binding::parse("robin(q=1)").unwrap()).is_err());
    }

    #[test]
    fn realization_is_functorial() {
        let rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("W", OpKind::InteriorGreen, 2).with_numeric("wave_fd"))
            .gen(GeneratorDecl::new("R", OpKind::Trace, 0).with_class(1).with_numeric("trace"))
            .gen(GeneratorDecl::new("K", OpKind::Potential, 0).with_numeric("potential_k"))
            .gen(GeneratorDecl::new("M", OpKind::BoundaryPdo, 0).with_numeric("multiply(c=-0.5)"));
        let g = Grid1D::new(33, 8, 2).unwrap();
        let nr = NumericRealization::from_system(&rs, g).unwrap();
        let e = |b: [(&str, i64); 4]| {
            let mut blocks = Vec::new();
            for (name, c) in b {
                blocks.push(rs.g(name).scale(&qr(c, 3)));
            }
            let [a11, a12, a21, a22]: [OpExpr; 4] = blocks.try_into().unwrap();
            BvOp::new(a11, a12, a21, a22).unwrap()
        };
        let a = OpMatrix::from_rows(vec![
            vec![e([("W", 1), ("K", 2), ("R", -1), ("M", 3)]), e([("W", 0), ("K", 1), ("R", 1), ("M", 1)])],
        ])
        .unwrap();
        let b = OpMatrix::from_rows(vec![
            vec![e([("W", 2), ("K", -1), ("R", 1), ("M", 0)])],
            vec![BvOp::identity().scale(&q(2))],
        ])
        .unwrap();
        let ab = realize_matrix(&mat_mul_raw(&a, &b).unwrap(), &nr).unwrap();
        let (ra, rb) = (realize_matrix(&a, &nr).unwrap(), realize_matrix(&b, &nr).unwrap());
        let u = vec![pair(&g, 0.7)];
        let lhs = ab.apply(&u).unwrap();
        let rhs = ra.apply(&rb.apply(&u).unwrap()).unwrap();
        let scale = lhs.iter().map(FieldPair::max_abs).fold(1.0, f64::max);
        assert!(close(&lhs, &rhs, 1e-12 * scale));
    }
}
