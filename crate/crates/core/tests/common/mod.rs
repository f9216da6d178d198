//! Helpers shared by the integration tests: fixture loading, random
//! expressions and an independent polynomial division oracle.
#![allow(dead_code)]

use bvparam::algebra::{OpExpr, RewriteSystem, Word};
use bvparam::format::{fixtures, SystemFile};
use bvparam::order::{GeneratorDecl, OpKind, Space};
use bvparam::poly::{divides, lcm, mono_div, MonomialOrder, Poly};
use bvparam::{q, qr, Q};
use num_traits::Zero;
use rand::Rng;

pub fn fixture(name: &str) -> SystemFile {
    let src = fixtures::ALL.iter().find(|(n, _)| n.trim_end_matches(".sys") == name.trim_end_matches(".sys")).expect("known fixture").1;
    SystemFile::parse(src).expect("fixture parses")
}

/// Generators with declared adjoints covering all four blocks:
/// `D1* = -D1`, `D2* = -D2`, `K* = T`, `T* = K`, `B* = 2 B`, `C* = 1/2 C`.
pub fn adjointable_system() -> RewriteSystem {
    RewriteSystem::new()
        .gen(GeneratorDecl::new("D1", OpKind::InteriorGreen, 1).with_transmission().with_adjoint(q(-1), "D1"))
        .gen(GeneratorDecl::new("D2", OpKind::InteriorGreen, 1).with_transmission().with_adjoint(q(-1), "D2"))
        .gen(GeneratorDecl::new("K", OpKind::Potential, 0).self_adjoint_as("T"))
        .gen(GeneratorDecl::new("T", OpKind::Trace, 0).self_adjoint_as("K"))
        .gen(GeneratorDecl::new("B", OpKind::BoundaryPdo, 1).with_adjoint(q(2), "C"))
        .gen(GeneratorDecl::new("C", OpKind::BoundaryPdo, 1).with_adjoint(qr(1, 2), "B"))
}

fn step(from: Space, to: Space, rng: &mut impl Rng) -> &'static str {
    match (from, to) {
        (Space::Interior, Space::Interior) => ["D1", "D2"][rng.gen_range(0..2)],
        (Space::Interior, Space::Boundary) => "T",
        (Space::Boundary, Space::Interior) => "K",
        (Space::Boundary, Space::Boundary) => ["B", "C"][rng.gen_range(0..2)],
    }
}

fn space(rng: &mut impl Rng) -> Space {
    if rng.gen_bool(0.5) {
        Space::Interior
    } else {
        Space::Boundary
    }
}

/// Random word mapping `dom -> cod` with 1..=4 factors.
pub fn random_word(dom: Space, cod: Space, rng: &mut impl Rng) -> Word {
    let len = rng.gen_range(1..=4);
    let mut at = dom;
    let mut applied = Vec::new();
    for k in 0..len {
        let next = if k + 1 == len { cod } else { space(rng) };
        applied.push(step(at, next, rng));
        at = next;
    }
    applied.reverse();
    Word::from_names(&applied)
}

/// Random nonzero rational combination of up to 4 words in one signature,
/// plus the identity with probability 1/4 when the signature allows it.
pub fn random_expr(rs: &RewriteSystem, rng: &mut impl Rng) -> OpExpr {
    let (dom, cod) = (space(rng), space(rng));
    let mut e = OpExpr::zero(dom, cod);
    for _ in 0..rng.gen_range(1..=4) {
        let c = qr(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        e = e.add(&rs.term_in(dom, cod, random_word(dom, cod, rng), c).unwrap()).unwrap();
    }
    if dom == cod && rng.gen_bool(0.25) {
        e = e.add(&OpExpr::identity(dom)).unwrap();
    }
    e
}

/// Random polynomial in `nvars` variables of total degree <= `deg`.
pub fn random_poly(nvars: usize, deg: u32, rng: &mut impl Rng) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = vec![0u32; nvars];
        let mut left = rng.gen_range(0..=deg);
        for e in m.iter_mut() {
            let k = rng.gen_range(0..=left);
            *e = k;
            left -= k;
        }
        p.add_term(m, q(rng.gen_range(-4..=4)));
    }
    p
}

/// Remainder of multivariate division by `g` (any order of divisors).
pub fn remainder(p: &Poly, g: &[Poly], ord: MonomialOrder) -> Poly {
    let n = p.nvars();
    let mut p = p.clone();
    let mut r = Poly::zero(n);
    while let Some((lm, lc)) = p.lead(ord).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = g.iter().find(|gi| gi.lead(ord).is_some_and(|(gm, _)| divides(gm, &lm)));
        match hit {
            Some(gi) => {
                let (gm, gc) = gi.lead(ord).unwrap();
                p = &p - &gi.mul_term(&mono_div(&lm, gm), &(&lc / gc));
            }
            None => {
                r.add_term(lm.clone(), lc.clone());
                p = &p - &Poly::monomial(n, lm, lc);
            }
        }
    }
    r
}

/// `S(a, b)` computed from leading terms.
pub fn s_poly(a: &Poly, b: &Poly, ord: MonomialOrder) -> Poly {
    let (am, ac) = a.lead(ord).unwrap();
    let (bm, bc) = b.lead(ord).unwrap();
    let l = lcm(am, bm);
    let one: Q = q(1);
    &a.mul_term(&mono_div(&l, am), &(&one / ac)) - &b.mul_term(&mono_div(&l, bm), &(&one / bc))
}

/// Every S-polynomial of `g` and every element of `f` leave remainder 0.
pub fn groebner_oracle(f: &[Poly], g: &[Poly], ord: MonomialOrder) -> bool {
    let g: Vec<Poly> = g.iter().filter(|p| !p.is_zero()).cloned().collect();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !remainder(&s_poly(&g[i], &g[j], ord), &g, ord).is_zero() {
                return false;
            }
        }
    }
    f.iter().all(|p| remainder(p, &g, ord).is_zero())
}

pub fn is_zero_q(x: &Q) -> bool {
    x.is_zero()
}
