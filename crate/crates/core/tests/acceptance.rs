//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
//! criterion fails, except the two-point line whose literal constants are
//! degenerate (its substitute study must still pass).

mod common;

use std::process::ExitCode;
use std::time::Instant;

use bvparam::algebra::{mat_adjoint, BvOp, OpExpr, OpMatrix, RewriteSystem};
use bvparam::numeric::{
    adjoint_kernel, delay_apply, random_smooth_field, realize_matrix, trace_adjoint_pair_check, twopoint_residual,
    verify_parametrization, BoundaryField, Grid1D, InteriorField, NumericRealization, PairingConfig, QuadConfig,
    TwoPointParams, TwoPointSolver,
};
use bvparam::order::{reduce_order, OrderData, Space};
use bvparam::parametrize::{adjoint_route, check_complex, check_lift, check_right_inverse, parametrization_from_lift, CertKind};
use bvparam::poly::{buchberger, symbol_map, syzygies, GbConfig, MonomialOrder, Poly};
use bvparam::{q, Error};
use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    /// A failure that is expected and recorded; does not fail the run.
    documented: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, documented: false, detail: detail.into() }
}

type Check = fn() -> Result<Outcome, Error>;

fn e(rs: &RewriteSystem, src: &str, dom: Space, cod: Space) -> OpExpr {
    bvparam::format::parse_expr(src, rs, dom, cod).unwrap()
}

fn ii(rs: &RewriteSystem, src: &str) -> OpExpr {
    e(rs, src, Space::Interior, Space::Interior)
}

/// Column `j` of `s` equals `want` or `-want`.
fn column_matches(s: &OpMatrix, j: usize, want: &[BvOp]) -> bool {
    let col: Vec<&BvOp> = (0..s.rows()).map(|i| s.get(i, j)).collect();
    let same = col.iter().zip(want).all(|(a, b)| *a == b);
    let neg = col.iter().zip(want).all(|(a, b)| **a == b.scale(&q(-1)));
    col.len() == want.len() && (same || neg)
}

fn wave_symbolic() -> Result<Outcome, Error> {
    let t0 = Instant::now();
    let f = fixture("wave");
    let rs = &f.rs;
    let l = f.l()?;
    let want_l = OpMatrix::row(vec![
        BvOp::new(rs.g("W"), OpExpr::zero(Space::Boundary, Space::Interior), rs.g("RP"), OpExpr::zero(Space::Boundary, Space::Boundary))?,
        BvOp::from_expr(OpExpr::identity(Space::Interior).neg()),
    ]);
    let layout = l == want_l;
    let p = f.candidate("P").unwrap();
    let rinv = check_right_inverse(&l, p, rs)?;
    let cert = parametrization_from_lift(&l, p, rs)?;
    let s = &cert.s;
    let zb = OpExpr::zero(Space::Boundary, Space::Interior);
    let z_ib = OpExpr::zero(Space::Interior, Space::Boundary);
    let zbb = OpExpr::zero(Space::Boundary, Space::Boundary);
    let col = [
        BvOp::new(ii(rs, "I - K.RP"), zb.clone(), z_ib.clone(), OpExpr::identity(Space::Boundary))?,
        BvOp::new(ii(rs, "W - W.K.RP"), zb, z_ib, zbb)?,
    ];
    let shape = column_matches(s, 0, &col);
    let complex = check_complex(&l, s, rs)?;
    let secs = t0.elapsed().as_secs_f64();
    let pass = layout && rinv && shape && complex && secs < 1.0;
    Ok(ok(
        pass,
        format!("layout={layout} LP=I:{rinv} S=(I-K.RP, W-W.K.RP):{shape} LS=0:{complex} in {secs:.3}s (<1s)"),
    ))
}

fn verify_with(f: &bvparam::format::SystemFile, l: &OpMatrix, s: &OpMatrix, grid: Grid1D) -> Result<bvparam::numeric::VerifyReport, Error> {
    let nr = NumericRealization::from_system(&f.rs, grid)?;
    verify_parametrization(&realize_matrix(l, &nr)?, &realize_matrix(s, &nr)?, &f.numeric.verify_options())
}

fn wave_numeric() -> Result<Outcome, Error> {
    let t0 = Instant::now();
    let f = fixture("wave");
    let l = f.l()?;
    let s = parametrization_from_lift(&l, f.candidate("P").unwrap(), &f.rs)?.s;
    let grid = Grid1D::new(257, 16, 4)?;
    let r = verify_with(&f, &l, &s, grid)?;
    let secs = t0.elapsed().as_secs_f64();
    let pass = r.trials.len() == 20 && r.max_interior < 1e-10 && r.max_boundary < 1e-12 && secs < 10.0;
    Ok(ok(
        pass,
        format!(
            "{} trials, max interior {:.2e} (<1e-10), max boundary {:.2e} (<1e-12) in {secs:.2}s (<10s)",
            r.trials.len(),
            r.max_interior,
            r.max_boundary
        ),
    ))
}

fn helmholtz() -> Result<Outcome, Error> {
    let f = fixture("helmholtz");
    let rs = &f.rs;
    let l = f.l()?;
    let zb = OpExpr::zero(Space::Boundary, Space::Interior);
    let zbb = OpExpr::zero(Space::Boundary, Space::Boundary);
    let ib = |src: &str| e(rs, src, Space::Interior, Space::Boundary);
    let mut shapes = true;
    let mut rinv = true;
    for (name, a11, a21) in [("P", "I - A.H", "DN - DN.A.H"), ("Palt", "I - AB.H", "DN")] {
        let p = f.candidate(name).unwrap();
        rinv &= check_right_inverse(&l, p, rs)?;
        let s = parametrization_from_lift(&l, p, rs)?.s;
        shapes &= column_matches(&s, 0, &[BvOp::new(ii(rs, a11), zb.clone(), ib(a21), zbb.clone())?]);
    }
    let s = parametrization_from_lift(&l, f.candidate("P").unwrap(), rs)?.s;
    let mut res = Vec::new();
    for nx in [257, 513] {
        let r = verify_with(&f, &l, &s, Grid1D::new(nx, 1, 4)?)?;
        res.push(r.max_interior.max(r.max_boundary));
    }
    let pass = rinv && shapes && res[1] < 1e-3 && res[1] < res[0];
    Ok(ok(
        pass,
        format!("LP=I for P,Palt:{rinv} S shapes:{shapes} residual nx257 {:.2e}, nx513 {:.2e} (<1e-3, decreasing)", res[0], res[1]),
    ))
}

fn gradcurl() -> Result<Outcome, Error> {
    let t0 = Instant::now();
    let f = fixture("gradcurl");
    let rs = &f.rs;
    let t = f.symbols.as_ref().unwrap();
    let l = f.l()?;
    let cfg = GbConfig::default();
    let ls = symbol_map(&mat_adjoint(&l, rs)?.normalize(rs)?, t)?;
    let syz = syzygies(&ls, &cfg)?;
    let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
    let gen_ok = syz.rows() == 1 && {
        let (a, b) = (syz.get(0, 0), syz.get(0, 1));
        // (xi2, xi1) up to a nonzero constant
        a.lead(MonomialOrder::DegRevLex).is_some_and(|(_, c)| *a == x2.scale(c) && *b == x1.scale(c))
    };
    let cert = adjoint_route(&l, rs, Some(t), None, &cfg)?;
    let s = &cert.s;
    let d = |n: &str| BvOp::from_expr(rs.g(n));
    let s_ok = s.shape() == (2, 1) && column_matches(s, 0, &[d("D2"), d("D1")]);
    let exact = cert.kind == CertKind::SyzygyExact;
    let secs = t0.elapsed().as_secs_f64();
    let pass = gen_ok && s_ok && exact && secs < 1.0;
    Ok(ok(pass, format!("syz(L*)=(xi2, xi1):{gen_ok} S=±(D2, D1):{s_ok} exact:{exact} in {secs:.3}s (<1s)")))
}

fn twoterm() -> Result<Outcome, Error> {
    let f = fixture("twoterm");
    let l = f.l()?;
    let c = check_complex(&l, f.candidate("S").unwrap(), &f.rs)?;
    Ok(ok(c, format!("L S = 0:{c}")))
}

fn twopoint() -> Result<Outcome, Error> {
    let t0 = Instant::now();
    let literal = TwoPointSolver::new(TwoPointParams::default(), Grid1D::new(129, 1, 16)?, QuadConfig::default());
    let literal_msg = match &literal {
        Err(Error::DegenerateWronskian(w)) => format!("d1=d2=1 degenerate (|W|={w:.1e}, e^-x is a homogeneous solution)"),
        Err(e) => format!("d1=d2=1 failed: {e}"),
        Ok(_) => "d1=d2=1 unexpectedly solvable".into(),
    };
    let params = TwoPointParams { d2: 2.0, ..Default::default() };
    let mut res = Vec::new();
    let mut quad_ok = true;
    for nx in [65, 129, 257, 513] {
        let g = Grid1D::new(nx, 1, 16)?;
        match TwoPointSolver::new(params, g, QuadConfig::default()) {
            Ok(s) => {
                let phi = InteriorField::from_fn(&g, |x, _| (3.0 * x).cos() + x * x);
                let v = s.solve(&phi)?;
                let r = twopoint_residual(&params, &v, &phi, &g, 0.1);
                res.push(r.interior.max(r.bc_left).max(r.bc_right));
            }
            Err(Error::QuadratureNotConverged { .. }) => quad_ok = false,
            Err(e) => return Err(e),
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let conv = res.len() == 4 && res[0] <= 1e-2 && res.windows(2).all(|w| w[1] <= w[0] / 2.0);
    let substitute_ok = conv && quad_ok && secs < 60.0;
    let study: Vec<String> = res.iter().map(|r| format!("{r:.1e}")).collect();
    Ok(Outcome {
        pass: matches!(literal, Ok(_)) && substitute_ok,
        documented: substitute_ok && matches!(literal, Err(Error::DegenerateWronskian(_))),
        detail: format!(
            "{literal_msg}; substitute d2=2 residuals nx65..513 [{}] converging:{conv} quadrature ok:{quad_ok} in {secs:.1}s (<60s)",
            study.join(", ")
        ),
    })
}

fn delay() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 64;
    let t_len = 2.0;
    let dt = t_len / n as f64;
    let mut shift_err = 0.0f64;
    for _ in 0..10 {
        let f: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let k: i64 = rng.gen_range(-70..70);
        let d = delay_apply(k as f64 * dt, &f, t_len);
        for i in 0..n {
            let src = (i as i64 - k).rem_euclid(n as i64) as usize;
            shift_err = shift_err.max((d[i] - f[src]).abs());
        }
    }
    let mut group_err = 0.0f64;
    for _ in 0..10 {
        // band-limited: frequencies below n / 4
        let coeffs: Vec<(f64, f64)> = (0..n / 4).map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, (a, b))| {
                        let w = 2.0 * std::f64::consts::PI * k as f64 / t_len;
                        a * (w * t).cos() + b * (w * t).sin()
                    })
                    .sum()
            })
            .collect();
        let (h1, h2): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let two = delay_apply(h1, &delay_apply(h2, &f, t_len), t_len);
        let one = delay_apply(h1 + h2, &f, t_len);
        for i in 0..n {
            group_err = group_err.max((two[i] - one[i]).abs());
        }
    }
    let fx = fixture("delay");
    let l = fx.l()?;
    let s = fx.candidate("S").unwrap();
    let sym = check_complex(&l, s, &fx.rs)?;
    let r = verify_with(&fx, &l, s, fx.numeric.grid())?;
    let pass = shift_err < 1e-12 && group_err < 1e-10 && sym && r.pass;
    Ok(ok(
        pass,
        format!(
            "integer shift err {shift_err:.1e} (<1e-12), group law err {group_err:.1e} (<1e-10), fixture LS=0:{sym} numeric {:.1e}",
            r.max_interior.max(r.max_boundary)
        ),
    ))
}

fn pairing() -> Result<Outcome, Error> {
    let grid = Grid1D::new(513, 1, 32)?;
    let cfg = PairingConfig::default();
    let d = |xi: f64| Complex64::new(1.0 / (1.0 + xi * xi), 0.0);
    let (kappa, _) = adjoint_kernel(&d, &grid, &cfg)?;
    let n = grid.nx as i64 - 1;
    let h = grid.h();
    let kernel_err = (-n..=n)
        .map(|j| (kappa[(j + n) as usize].re - std::f64::consts::PI * (-(j as f64 * h).abs()).exp()).abs())
        .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let v = random_smooth_field(&grid, 4, 0, &mut rng);
        let g = BoundaryField::constant(&grid, rng.sample(StandardNormal), rng.sample(StandardNormal));
        let (lhs, rhs) = trace_adjoint_pair_check(&d, &v, &g, &grid, &cfg)?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300));
    }
    let pass = worst < 1e-4 && kernel_err < 1e-6;
    Ok(ok(pass, format!("10 pairs, worst relative gap {worst:.1e} (<1e-4); kernel vs pi e^-|z| {kernel_err:.1e} (<1e-6)")))
}

fn properties() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let rs = adjointable_system();
    let mut involution = 0;
    for _ in 0..100 {
        let x = random_expr(&rs, &mut rng);
        let back = rs.adjoint_expr(&rs.adjoint_expr(&x)?)?;
        involution += (back == rs.normalize(&x)?) as usize;
    }

    let mut orders = 0;
    for _ in 0..100 {
        let mut slot = || rng.gen_bool(0.8).then(|| rng.gen_range(-6i64..7));
        let (m1, m2, m3, m4, m5) = (slot(), slot(), slot(), slot(), slot());
        let m = OrderData { m1, m2, m3, m4, m5, d2: m2.map(|_| rng.gen_range(0..4)), d4: m4.map(|_| rng.gen_range(0..4)) };
        let (n1, n2) = (rng.gen_range(1i64..5), rng.gen_range(1i64..5));
        let r = reduce_order(&m, n1, n2)?;
        let s = |v: Option<i64>, k: i64| v.map(|x| x - k);
        let want = OrderData {
            m1: s(m.m1, n1),
            m2: s(m.m2, n1),
            m3: s(m.m3, n2),
            m4: s(m.m4, n1),
            m5: s(m.m5, n2),
            d2: s(m.d2, n1),
            d4: s(m.d4, n1),
        };
        orders += (r == want) as usize;
    }

    let mut lifts = 0;
    let mut lift_ok = true;
    for (name, _) in bvparam::format::fixtures::ALL {
        let f = fixture(name);
        let Ok(l) = f.l() else { continue };
        for (cname, p) in &f.candidates {
            if !cname.starts_with('P') || !check_lift(&l, p, &f.rs)? {
                continue;
            }
            lifts += 1;
            let s = parametrization_from_lift(&l, p, &f.rs)?.s;
            lift_ok &= check_complex(&l, &s, &f.rs)?;
        }
    }

    let mut gb = 0;
    for _ in 0..50 {
        let nvars = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=3);
        let fs: Vec<Poly> = (0..k).map(|_| random_poly(nvars, 4, &mut rng)).filter(|p| !p.is_zero()).collect();
        if fs.is_empty() {
            gb += 1;
            continue;
        }
        let g = buchberger(&fs, &GbConfig::default())?;
        gb += groebner_oracle(&fs, &g, MonomialOrder::DegRevLex) as usize;
    }

    let pass = involution == 100 && orders == 100 && lifts > 0 && lift_ok && gb == 50;
    Ok(ok(
        pass,
        format!(
            "adjoint involution {involution}/100, order reduction {orders}/100, lift=>complex on {lifts} candidates:{lift_ok}, S-poly reduction {gb}/50"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("wave symbolic parametrization", wave_symbolic),
        ("wave numeric residual", wave_numeric),
        ("Helmholtz Dirichlet-to-Neumann", helmholtz),
        ("gradient/curl syzygy route", gradcurl),
        ("two-row complex example", twoterm),
        ("two-point Robin solver", twopoint),
        ("delay operator", delay),
        ("trace/potential pairing", pairing),
        ("property suites", properties),
    ];
    let mut hard_fail = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| ok(false, format!("error: {e}")));
        let tag = match (o.pass, o.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        println!("criterion {} [{name}]: {tag}: {}", i + 1, o.detail);
        hard_fail |= !o.pass && !o.documented;
    }
    if hard_fail {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
