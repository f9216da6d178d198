use std::fmt;

use super::bvop::BvOp;
use super::rewrite::RewriteSystem;
use crate::error::{Error, Result};
use crate::order::OrderData;
use crate::Q;

/// Dense matrix of block operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BvOp>,
}

impl OpMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        OpMatrix { rows, cols, entries: vec![BvOp::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(n, BvOp::identity())
    }

    pub fn diagonal(n: usize, d: BvOp) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BvOp>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(OpMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn row(entries: Vec<BvOp>) -> Self {
        Self::from_rows(vec![entries]).unwrap()
    }

    pub fn column(entries: Vec<BvOp>) -> Self {
        Self::from_rows(entries.into_iter().map(|e| vec![e]).collect()).unwrap()
    }

    pub fn scalar(b: BvOp) -> Self {
        Self::row(vec![b])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BvOp {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: BvOp) {
        self.entries[i * self.cols + j] = b;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BvOp)> {
        self.entries.iter().enumerate().map(move |(k, b)| (k / self.cols, k % self.cols, b))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BvOp::is_zero)
    }

    pub fn map(&self, mut f: impl FnMut(&BvOp) -> Result<BvOp>) -> Result<OpMatrix> {
        Ok(OpMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }

    pub fn normalize(&self, rs: &RewriteSystem) -> Result<OpMatrix> {
        self.map(|b| b.normalize(rs))
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> OpMatrix {
        let mut m = OpMatrix::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Per-entry order data.
    pub fn orders(&self, rs: &RewriteSystem) -> Result<Vec<OrderData>> {
        self.entries.iter().map(|b| b.order(rs)).collect()
    }
}

fn same_shape(a: &OpMatrix, b: &OpMatrix, what: &str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!("{what}: {:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

pub fn mat_add(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    same_shape(a, b, "sum")?;
    let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x.add(y)).collect();
    Ok(OpMatrix { rows: a.rows, cols: a.cols, entries })
}

pub fn mat_sub(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    same_shape(a, b, "difference")?;
    let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x.sub(y)).collect();
    Ok(OpMatrix { rows: a.rows, cols: a.cols, entries })
}

pub fn mat_scale(a: &OpMatrix, s: &Q) -> OpMatrix {
    a.map(|b| Ok(b.scale(s))).unwrap()
}

/// Product without normalization.
pub fn mat_mul_raw(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!("product: {:?} times {:?}", a.shape(), b.shape())));
    }
    let mut out = OpMatrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = BvOp::zero();
            for k in 0..a.cols {
                let (x, y) = (a.get(i, k), b.get(k, j));
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.compose(y));
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Product with every entry normalized.
pub fn mat_mul(a: &OpMatrix, b: &OpMatrix, rs: &RewriteSystem) -> Result<OpMatrix> {
    mat_mul_raw(a, b)?.normalize(rs)
}

/// `result[j][i] = a[i][j]*`.
pub fn mat_adjoint(a: &OpMatrix, rs: &RewriteSystem) -> Result<OpMatrix> {
    let mut out = OpMatrix::zero(a.cols, a.rows);
    for (i, j, b) in a.entries() {
        out.set(j, i, b.adjoint(rs)?);
    }
    Ok(out)
}

/// Entrywise zero of the normalized difference.
pub fn mat_eq(a: &OpMatrix, b: &OpMatrix, rs: &RewriteSystem) -> Result<bool> {
    Ok(mat_sub(a, b)?.normalize(rs)?.is_zero())
}

/// Order data of each entry of `a b`, from the factors' order data.
pub fn product_orders(a: &OpMatrix, b: &OpMatrix, rs: &RewriteSystem) -> Result<Vec<OrderData>> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!("product: {:?} times {:?}", a.shape(), b.shape())));
    }
    let (oa, ob) = (a.orders(rs)?, b.orders(rs)?);
    let mut out = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = OrderData::zero();
            for k in 0..a.cols {
                acc = acc.join(&oa[i * a.cols + k].compose(&ob[k * b.cols + j]));
            }
            out.push(acc);
        }
    }
    Ok(out)
}

impl fmt::Display for OpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                writeln!(f, "({}, {}): {}", i + 1, j + 1, self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OpExpr;
    use crate::order::{GeneratorDecl, OpKind, Space};
    use crate::q;

    fn rs() -> RewriteSystem {
        RewriteSystem::new()
            .gen(GeneratorDecl::new("K", OpKind::Potential, 0))
            .gen(GeneratorDecl::new("R", OpKind::Trace, 0))
            .rule(&["R", "K"], OpExpr::identity(Space::Boundary))
    }

    #[test]
    fn identity_is_neutral() {
        let rs = rs();
        let k = BvOp::from_expr(rs.g("K"));
        let m = OpMatrix::from_rows(vec![vec![k.clone(), BvOp::zero()], vec![BvOp::identity(), k]]).unwrap();
        assert_eq!(mat_mul(&m, &OpMatrix::identity(2), &rs).unwrap(), m);
        assert_eq!(mat_mul(&OpMatrix::identity(2), &m, &rs).unwrap(), m);
    }

    #[test]
    fn add_and_cancel() {
        let rs = rs();
        let m = OpMatrix::scalar(BvOp::from_expr(rs.g("K")));
        assert_eq!(mat_add(&m, &OpMatrix::zero(1, 1)).unwrap(), m);
        assert!(mat_add(&m, &mat_scale(&m, &q(-1))).unwrap().is_zero());
        assert!(matches!(mat_add(&m, &OpMatrix::zero(1, 2)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn trace_after_potential_reduces() {
        let rs = rs();
        let r = OpMatrix::scalar(BvOp::from_expr(rs.g("R")));
        let k = OpMatrix::scalar(BvOp::from_expr(rs.g("K")));
        let p = mat_mul(&r, &k, &rs).unwrap();
        assert_eq!(p.get(0, 0).a22, OpExpr::identity(Space::Boundary));
    }

    #[test]
    fn product_order_bound() {
        let rs = RewriteSystem::new()
            .gen(GeneratorDecl::new("K", OpKind::Potential, 1))
            .gen(GeneratorDecl::new("R", OpKind::Trace, 2).with_class(1));
        let r = OpMatrix::scalar(BvOp::from_expr(rs.g("R")));
        let k = OpMatrix::scalar(BvOp::from_expr(rs.g("K")));
        let o = product_orders(&k, &r, &rs).unwrap();
        assert_eq!(o[0].m2, Some(3));
        assert_eq!(o[0].d2, Some(1));
        let direct = mat_mul(&k, &r, &rs).unwrap().orders(&rs).unwrap();
        assert_eq!(direct[0].m2, Some(3));
    }
}
