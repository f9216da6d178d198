//! Buchberger's algorithm for submodules of `R^r`, `R = Q[xi1..xi3]`, under
//! a position-over-term order (lower position wins, then the monomial
//! order). Ideals are the case `r = 1`.

use num_traits::One;

use super::{deg, divides, lcm, mono_div, Monomial, MonomialOrder, Poly, PolyMatrix};
use crate::error::{Error, Result};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    pub order: MonomialOrder,
    /// S-pairs whose lcm exceeds this total degree abort the computation.
    pub degree_cap: u32,
    /// Maximum number of S-pairs processed.
    pub step_budget: usize,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { order: MonomialOrder::DegRevLex, degree_cap: 8, step_budget: 20_000 }
    }
}

impl GbConfig {
    pub fn new(order: MonomialOrder) -> Self {
        GbConfig { order, ..Default::default() }
    }
}

type Vector = Vec<Poly>;

#[derive(Debug, Clone)]
struct Lead {
    pos: usize,
    mono: Monomial,
    coeff: Q,
}

fn lead(v: &[Poly], ord: MonomialOrder) -> Option<Lead> {
    v.iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .map(|(pos, p)| {
            let (m, c) = p.lead(ord).unwrap();
            Lead { pos, mono: m.clone(), coeff: c.clone() }
        })
}

fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn axpy_term(v: &mut [Poly], g: &[Poly], m: &[u32], c: &Q) {
    for (a, b) in v.iter_mut().zip(g) {
        if !b.is_zero() {
            *a = &*a + &b.mul_term(m, c);
        }
    }
}

fn monic(v: Vector, ord: MonomialOrder) -> Vector {
    match lead(&v, ord) {
        None => v,
        Some(l) => {
            let s = l.coeff.recip();
            v.iter().map(|p| p.scale(&s)).collect()
        }
    }
}

/// Full normal form of `v` modulo `g` (not necessarily a Gröbner basis).
pub fn reduce_vector(v: &[Poly], g: &[Vector], ord: MonomialOrder) -> Vector {
    let leads: Vec<Lead> = g.iter().map(|x| lead(x, ord).expect("nonzero basis element")).collect();
    let mut p: Vector = v.to_vec();
    let mut r: Vector = v.iter().map(|x| Poly::zero(x.nvars())).collect();
    while let Some(l) = lead(&p, ord) {
        let hit = leads.iter().position(|h| h.pos == l.pos && divides(&h.mono, &l.mono));
        match hit {
            Some(k) => {
                let q = mono_div(&l.mono, &leads[k].mono);
                let c = -(&l.coeff / &leads[k].coeff);
                axpy_term(&mut p, &g[k], &q, &c);
            }
            None => {
                let n = p[l.pos].nvars();
                p[l.pos] = &p[l.pos] - &Poly::monomial(n, l.mono.clone(), l.coeff.clone());
                r[l.pos].add_term(l.mono, l.coeff);
            }
        }
    }
    r
}

fn spoly(a: &[Poly], b: &[Poly], ord: MonomialOrder) -> Vector {
    let (la, lb) = (lead(a, ord).unwrap(), lead(b, ord).unwrap());
    let m = lcm(&la.mono, &lb.mono);
    let mut s: Vector = a.iter().map(|p| p.mul_term(&mono_div(&m, &la.mono), &la.coeff.recip())).collect();
    axpy_term(&mut s, b, &mono_div(&m, &lb.mono), &-lb.coeff.recip());
    s
}

fn interreduce(g: Vec<Vector>, ord: MonomialOrder) -> Vec<Vector> {
    let leads: Vec<Lead> = g.iter().map(|x| lead(x, ord).unwrap()).collect();
    let keep: Vec<usize> = (0..g.len())
        .filter(|&i| {
            !(0..g.len()).any(|j| {
                j != i
                    && leads[j].pos == leads[i].pos
                    && divides(&leads[j].mono, &leads[i].mono)
                    && (leads[j].mono != leads[i].mono || j < i)
            })
        })
        .collect();
    let minimal: Vec<Vector> = keep.iter().map(|&i| g[i].clone()).collect();
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Vector> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        out.push(monic(reduce_vector(&minimal[i], &others, ord), ord));
    }
    out.sort_by(|a, b| {
        let (la, lb) = (lead(a, ord).unwrap(), lead(b, ord).unwrap());
        la.pos.cmp(&lb.pos).then_with(|| ord.cmp(&lb.mono, &la.mono))
    });
    out
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn module_groebner(gens: &[Vector], cfg: &GbConfig) -> Result<Vec<Vector>> {
    let ord = cfg.order;
    let rank = gens.first().map_or(0, Vec::len);
    if gens.iter().any(|v| v.len() != rank) {
        return Err(Error::ShapeMismatch("generators of different rank".into()));
    }
    let mut g: Vec<Vector> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let push = |g: &mut Vec<Vector>, pairs: &mut Vec<(usize, usize)>, v: Vector| {
        let lv = lead(&v, ord).unwrap();
        let n = g.len();
        for (i, h) in g.iter().enumerate() {
            let lh = lead(h, ord).unwrap();
            if lh.pos != lv.pos {
                continue;
            }
            // product criterion, valid for ideals only
            if rank == 1 && lh.mono.iter().zip(&lv.mono).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            pairs.push((i, n));
        }
        g.push(v);
    };
    for v in gens {
        let r = reduce_vector(v, &g, ord);
        if !is_zero_vec(&r) {
            push(&mut g, &mut pairs, monic(r, ord));
        }
    }
    let mut steps = 0usize;
    while !pairs.is_empty() {
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, (i, j))| {
                let (a, b) = (lead(&g[*i], ord).unwrap(), lead(&g[*j], ord).unwrap());
                deg(&lcm(&a.mono, &b.mono))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        steps += 1;
        if steps > cfg.step_budget {
            return Err(Error::BudgetExceeded { what: "Groebner S-pairs", steps });
        }
        let (a, b) = (lead(&g[i], ord).unwrap(), lead(&g[j], ord).unwrap());
        if deg(&lcm(&a.mono, &b.mono)) > cfg.degree_cap {
            return Err(Error::BudgetExceeded { what: "Groebner degree cap", steps });
        }
        let s = spoly(&g[i], &g[j], ord);
        let r = reduce_vector(&s, &g, ord);
        if !is_zero_vec(&r) {
            push(&mut g, &mut pairs, monic(r, ord));
        }
    }
    Ok(interreduce(g, ord))
}

/// Reduced Gröbner basis of an ideal.
pub fn buchberger(gens: &[Poly], cfg: &GbConfig) -> Result<Vec<Poly>> {
    let vs: Vec<Vector> = gens.iter().map(|p| vec![p.clone()]).collect();
    Ok(module_groebner(&vs, cfg)?.into_iter().map(|mut v| v.pop().unwrap()).collect())
}

/// Normal form of `p` modulo `gb`.
pub fn reduce(p: &Poly, gb: &[Poly], ord: MonomialOrder) -> Poly {
    let vs: Vec<Vector> = gb.iter().filter(|q| !q.is_zero()).map(|q| vec![q.clone()]).collect();
    reduce_vector(&[p.clone()], &vs, ord).pop().unwrap()
}

/// Generators of `{v : v m = 0}`, one per row of the result.
pub fn syzygies(m: &PolyMatrix, cfg: &GbConfig) -> Result<PolyMatrix> {
    let (k, c, n) = (m.rows(), m.cols(), m.nvars());
    let gens: Vec<Vector> = (0..k)
        .map(|i| {
            let mut v = m.row(i);
            v.extend((0..k).map(|j| if i == j { Poly::one(n) } else { Poly::zero(n) }));
            v
        })
        .collect();
    let gb = module_groebner(&gens, cfg)?;
    let rows: Vec<Vec<Poly>> =
        gb.into_iter().filter(|v| v[..c].iter().all(Poly::is_zero)).map(|v| v[c..].to_vec()).collect();
    if rows.is_empty() {
        return Ok(PolyMatrix::zero(0, k, n));
    }
    PolyMatrix::from_rows(n, rows)
}

/// Whether `v` lies in the module generated by the rows of `rows`.
pub fn in_row_module(v: &[Poly], rows: &PolyMatrix, cfg: &GbConfig) -> Result<bool> {
    if v.len() != rows.cols() {
        return Err(Error::ShapeMismatch("vector length differs from module rank".into()));
    }
    if is_zero_vec(v) {
        return Ok(true);
    }
    let gb = module_groebner(&rows.row_vectors(), cfg)?;
    Ok(is_zero_vec(&reduce_vector(v, &gb, cfg.order)))
}

/// `D L = D'  <=>  D' S = 0`: the row module of `L` equals the syzygies of
/// `S`. False when `L S != 0`.
pub fn exactness_check(l: &PolyMatrix, s: &PolyMatrix, cfg: &GbConfig) -> Result<bool> {
    if !l.mul(s)?.is_zero() {
        return Ok(false);
    }
    let syz = syzygies(s, cfg)?;
    let gb = module_groebner(&l.row_vectors(), cfg)?;
    Ok(syz.row_vectors().iter().all(|v| is_zero_vec(&reduce_vector(v, &gb, cfg.order))))
}

/// S-polynomials of all same-position pairs reduce to zero.
pub fn is_groebner(g: &[Vector], ord: MonomialOrder) -> bool {
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let (a, b) = (lead(&g[i], ord).unwrap(), lead(&g[j], ord).unwrap());
            if a.pos == b.pos && !is_zero_vec(&reduce_vector(&spoly(&g[i], &g[j], ord), g, ord)) {
                return false;
            }
        }
    }
    true
}

/// Whether every element of `g` is monic.
pub fn is_monic(g: &[Vector], ord: MonomialOrder) -> bool {
    g.iter().all(|v| lead(v, ord).is_some_and(|l| l.coeff.is_one()))
}

pub fn as_vectors(g: &[Poly]) -> Vec<Vector> {
    g.iter().map(|p| vec![p.clone()]).collect()
}
