mod common;

use bvparam::algebra::{mat_add, mat_adjoint, mat_mul, BvOp, OpExpr, OpMatrix, RewriteSystem, Word};
use bvparam::format::SystemFile;
use bvparam::order::Space;
use bvparam::parametrize::check_complex;
use bvparam::poly::{symbol_map, SymbolTable};
use bvparam::qr;
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn commuting_system() -> RewriteSystem {
    let mut rs = adjointable_system();
    SymbolTable::new(&["D1", "D2"]).unwrap().commutation_rules(&mut rs).unwrap();
    rs
}

fn random_block(rs: &RewriteSystem, rng: &mut ChaCha8Rng) -> BvOp {
    let mut b = BvOp::zero();
    for _ in 0..3 {
        let x = random_expr(rs, rng);
        let slot = b.slot_mut(x.dom, x.cod);
        *slot = slot.add(&x).unwrap();
    }
    b
}

fn random_matrix(rs: &RewriteSystem, r: usize, c: usize, rng: &mut ChaCha8Rng) -> OpMatrix {
    let mut m = OpMatrix::zero(r, c);
    for i in 0..r {
        for j in 0..c {
            if rng.gen_bool(0.7) {
                m.set(i, j, random_block(rs, rng));
            }
        }
    }
    m
}

/// Interior polynomial in D1, D2 of degree <= 3.
fn random_pdo(rs: &RewriteSystem, rng: &mut ChaCha8Rng) -> OpExpr {
    let mut e = OpExpr::zero(Space::Interior, Space::Interior);
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..=3);
        let names: Vec<&str> = (0..len).map(|_| ["D1", "D2"][rng.gen_range(0..2)]).collect();
        let c = qr(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        e = e.add(&rs.term_in(Space::Interior, Space::Interior, Word::from_names(&names), c).unwrap()).unwrap();
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let rs = commuting_system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_expr(&rs, &mut rng);
        let n = rs.normalize(&x).unwrap();
        prop_assert_eq!(rs.normalize(&n).unwrap(), n);
    }

    #[test]
    fn mat_mul_is_associative(seed in any::<u64>()) {
        let rs = commuting_system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&rs, 2, 2, &mut rng);
        let b = random_matrix(&rs, 2, 1, &mut rng);
        let c = random_matrix(&rs, 1, 2, &mut rng);
        let left = mat_mul(&mat_mul(&a, &b, &rs).unwrap(), &c, &rs).unwrap();
        let right = mat_mul(&a, &mat_mul(&b, &c, &rs).unwrap(), &rs).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matrix_adjoint_is_an_involution(seed in any::<u64>()) {
        let rs = commuting_system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&rs, 2, 3, &mut rng);
        let back = mat_adjoint(&mat_adjoint(&a, &rs).unwrap(), &rs).unwrap().normalize(&rs).unwrap();
        prop_assert_eq!(back, a.normalize(&rs).unwrap());
    }

    #[test]
    fn adjoint_reverses_products(seed in any::<u64>()) {
        let rs = commuting_system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&rs, 1, 2, &mut rng);
        let b = random_matrix(&rs, 2, 2, &mut rng);
        let lhs = mat_adjoint(&mat_mul(&a, &b, &rs).unwrap(), &rs).unwrap().normalize(&rs).unwrap();
        let rhs = mat_mul(&mat_adjoint(&b, &rs).unwrap(), &mat_adjoint(&a, &rs).unwrap(), &rs).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symbol_map_is_a_ring_homomorphism(seed in any::<u64>()) {
        let rs = commuting_system();
        let t = SymbolTable::new(&["D1", "D2"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = OpMatrix::scalar(BvOp::from_expr(random_pdo(&rs, &mut rng)));
        let b = OpMatrix::scalar(BvOp::from_expr(random_pdo(&rs, &mut rng)));
        let (sa, sb) = (symbol_map(&a, &t).unwrap(), symbol_map(&b, &t).unwrap());
        let prod = symbol_map(&mat_mul(&a, &b, &rs).unwrap(), &t).unwrap();
        prop_assert_eq!(prod, sa.mul(&sb).unwrap());
        let sum = symbol_map(&mat_add(&a, &b).unwrap(), &t).unwrap();
        prop_assert_eq!(sum.get(0, 0), &(sa.get(0, 0) + sb.get(0, 0)));
    }

    #[test]
    fn dump_round_trips_random_candidates(seed in any::<u64>()) {
        let rs = commuting_system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&rs, 2, 2, &mut rng);
        let mut src = String::from(
            "[generators]\nD1 interior order=1 adjoint=-D1 transmission\nD2 interior order=1 adjoint=-D2 transmission\n\
             K potential order=0 adjoint=T\nT trace order=0 adjoint=K\nB boundary order=1 adjoint=2*C\nC boundary order=1 adjoint=1/2*B\n\
             [relations]\nD2.D1 -> D1.D2\n[candidates]\nX 2x2\n",
        );
        for (i, j, b) in m.entries() {
            if !b.is_zero() {
                src.push_str(&format!("X({},{}) = {}\n", i + 1, j + 1, b));
            }
        }
        let f = SystemFile::parse(&src).unwrap();
        prop_assert_eq!(f.candidate("X").unwrap().normalize(&rs).unwrap(), m.normalize(&rs).unwrap());
        prop_assert_eq!(SystemFile::parse(&f.dump()).unwrap(), f);
    }
}

#[test]
fn fixtures_round_trip_through_dump() {
    for (name, src) in bvparam::format::fixtures::ALL {
        let f = SystemFile::parse(src).unwrap();
        assert_eq!(SystemFile::parse(&f.dump()).unwrap(), f, "{name}");
    }
}

#[test]
fn wave_printed_sign_is_not_a_complex() {
    // Second component -(W - W.K.RP) with the first kept as I - K.RP.
    let f = fixture("wave");
    let rs = &f.rs;
    let l = f.l().unwrap();
    let ii = |s: &str| bvparam::format::parse_expr(s, rs, Space::Interior, Space::Interior).unwrap();
    let zb = OpExpr::zero(Space::Boundary, Space::Interior);
    let zib = OpExpr::zero(Space::Interior, Space::Boundary);
    let zbb = OpExpr::zero(Space::Boundary, Space::Boundary);
    let col = |a21: &str| {
        OpMatrix::column(vec![
            BvOp::new(ii("I - K.RP"), zb.clone(), zib.clone(), OpExpr::identity(Space::Boundary)).unwrap(),
            BvOp::new(ii(a21), zb.clone(), zib.clone(), zbb.clone()).unwrap(),
        ])
    };
    assert!(!check_complex(&l, &col("-W + W.K.RP"), rs).unwrap());
    assert!(check_complex(&l, &col("W - W.K.RP"), rs).unwrap());
}
