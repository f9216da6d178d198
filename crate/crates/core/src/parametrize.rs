//! Matrix-level parametrization checks.
//!
//! Homomorphisms `D'^k -> A` are identified with `k`-columns over `A`, so
//! every module-level statement used here is a matrix product:
//!
//! - `L S = 0` (complex; necessary only),
//! - `L P L = L` (lift) or `L P = I` (right inverse), which make
//!   `S = I - P L` a parametrization,
//! - in the constant-coefficient subalgebra, `S` from syzygies of `L*` and an
//!   exactness certificate from Gröbner membership.

use serde::Serialize;

use crate::algebra::{mat_adjoint, mat_eq, mat_mul, mat_sub, OpMatrix, RewriteSystem};
use crate::error::{Error, Result};
use crate::poly::{exactness_check, op_map, symbol_map, syzygies, GbConfig, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertKind {
    RightInverse,
    Lift,
    SyzygyExact,
    /// Only `L S = 0` was verified; this does not establish a
    /// parametrization.
    ComplexOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCertificate {
    pub kind: CertKind,
    pub l: OpMatrix,
    pub p: Option<OpMatrix>,
    pub s: OpMatrix,
    pub notes: String,
}

impl ParamCertificate {
    pub fn claims_parametrization(&self) -> bool {
        self.kind != CertKind::ComplexOnly
    }
}

fn need_shape(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(msg()))
    }
}

/// `L S` normalizes to zero.
pub fn check_complex(l: &OpMatrix, s: &OpMatrix, rs: &RewriteSystem) -> Result<bool> {
    need_shape(l.cols() == s.rows(), || format!("L is {:?}, S is {:?}", l.shape(), s.shape()))?;
    Ok(mat_mul(l, s, rs)?.is_zero())
}

/// `L P L - L` normalizes to zero.
pub fn check_lift(l: &OpMatrix, p: &OpMatrix, rs: &RewriteSystem) -> Result<bool> {
    need_shape(p.shape() == (l.cols(), l.rows()), || {
        format!("P must be {}x{}, got {:?}", l.cols(), l.rows(), p.shape())
    })?;
    let lp = mat_mul(l, p, rs)?;
    mat_eq(&mat_mul(&lp, l, rs)?, l, rs)
}

/// `L P = I`.
pub fn check_right_inverse(l: &OpMatrix, p: &OpMatrix, rs: &RewriteSystem) -> Result<bool> {
    need_shape(l.cols() == p.rows() && p.cols() == l.rows(), || {
        format!("L is {:?}, P is {:?}", l.shape(), p.shape())
    })?;
    mat_eq(&mat_mul(l, p, rs)?, &OpMatrix::identity(l.rows()), rs)
}

/// `P L = I`.
pub fn check_left_inverse(p: &OpMatrix, l: &OpMatrix, rs: &RewriteSystem) -> Result<bool> {
    need_shape(p.cols() == l.rows() && l.cols() == p.rows(), || {
        format!("P is {:?}, L is {:?}", p.shape(), l.shape())
    })?;
    mat_eq(&mat_mul(p, l, rs)?, &OpMatrix::identity(l.cols()), rs)
}

/// The first nonzero entry of `L S`, for reports.
pub fn complex_witness(l: &OpMatrix, s: &OpMatrix, rs: &RewriteSystem) -> Result<Option<(usize, usize, String)>> {
    let m = mat_mul(l, s, rs)?;
    let hit = m.entries().find(|(_, _, b)| !b.is_zero()).map(|(i, j, b)| (i, j, b.to_string()));
    Ok(hit)
}

/// `S = I - P L` from a lift `P`.
pub fn parametrization_from_lift(l: &OpMatrix, p: &OpMatrix, rs: &RewriteSystem) -> Result<ParamCertificate> {
    if !check_lift(l, p, rs)? {
        return Err(Error::NotALift);
    }
    let pl = mat_mul(p, l, rs)?;
    let s = mat_sub(&OpMatrix::identity(l.cols()), &pl)?.normalize(rs)?;
    debug_assert!(check_complex(l, &s, rs)?);
    let rinv = check_right_inverse(l, p, rs)?;
    let kind = if rinv { CertKind::RightInverse } else { CertKind::Lift };
    let notes = if rinv { "L P = I verified; S = I - P L" } else { "L P L = L verified; S = I - P L" };
    Ok(ParamCertificate { kind, l: l.clone(), p: Some(p.clone()), s, notes: notes.into() })
}

/// An order reducer together with whether it is known to be invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducer {
    pub matrix: OpMatrix,
    pub invertible: bool,
}

impl Reducer {
    pub fn invertible(matrix: OpMatrix) -> Self {
        Reducer { matrix, invertible: true }
    }
}

/// `T' L T`.
pub fn order_reduce_system(l: &OpMatrix, t: &Reducer, tp: &Reducer, rs: &RewriteSystem) -> Result<OpMatrix> {
    if !t.invertible || !tp.invertible {
        return Err(Error::NotInvertible);
    }
    need_shape(t.matrix.rows() == l.cols() && tp.matrix.cols() == l.rows(), || {
        format!("T is {:?}, T' is {:?}, L is {:?}", t.matrix.shape(), tp.matrix.shape(), l.shape())
    })?;
    mat_mul(&mat_mul(&tp.matrix, l, rs)?, &t.matrix, rs)
}

/// `u = T S' f` for a parametrization `S'` of the reduced system.
pub fn pullback_parametrization(t: &Reducer, sp: &OpMatrix, rs: &RewriteSystem) -> Result<OpMatrix> {
    if !t.invertible {
        return Err(Error::NotInvertible);
    }
    mat_mul(&t.matrix, sp, rs)
}

/// `S = (S*)*` with `S*` the syzygies of the rows of `L*`.
///
/// With a symbol table the syzygies are computed and exactness is certified
/// by Gröbner membership. Without one, a caller-supplied `S*` yields at best
/// a complex certificate.
pub fn adjoint_route(
    l: &OpMatrix,
    rs: &RewriteSystem,
    table: Option<&SymbolTable>,
    user_s_star: Option<&OpMatrix>,
    cfg: &GbConfig,
) -> Result<ParamCertificate> {
    let l_star = mat_adjoint(l, rs)?.normalize(rs)?;
    let symbolic = table.map(|t| t.check(rs).and_then(|_| symbol_map(&l_star, t)));
    match (symbolic, table) {
        (Some(Ok(ls)), Some(t)) => {
            let syz = syzygies(&ls, cfg)?;
            let s_star = op_map(&syz, t)?;
            let s = mat_adjoint(&s_star, rs)?.normalize(rs)?;
            let exact = exactness_check(&symbol_map(l, t)?, &symbol_map(&s, t)?, cfg)?;
            let (kind, notes) = if exact {
                (CertKind::SyzygyExact, format!("{} syzygy generator(s) of L*; exactness certified", syz.rows()))
            } else {
                (CertKind::ComplexOnly, "syzygies computed but exactness failed".to_string())
            };
            Ok(ParamCertificate { kind, l: l.clone(), p: None, s, notes })
        }
        (symbolic, _) => {
            let Some(ss) = user_s_star else {
                let why = match symbolic {
                    Some(Err(e)) => e.to_string(),
                    _ => "no symbol table".to_string(),
                };
                return Err(Error::OutsideSubalgebra(why));
            };
            let s = mat_adjoint(ss, rs)?.normalize(rs)?;
            if !check_complex(l, &s, rs)? {
                return Err(Error::InvalidArgument("supplied S* does not give L S = 0".into()));
            }
            Ok(ParamCertificate {
                kind: CertKind::ComplexOnly,
                l: l.clone(),
                p: None,
                s,
                notes: "S from supplied S*; only L S = 0 verified".into(),
            })
        }
    }
}
