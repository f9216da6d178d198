//! `bvparam assemble|check|parametrize|syzygy|verify <file>`.
//!
//! Exit codes: 0 success, 1 check FAIL or other error, 2 parse error or
//! missing candidate, 3 not a lift, 4 outside the constant-coefficient
//! subalgebra, 5 numeric verification FAIL.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bvparam::algebra::{mat_adjoint, mat_mul, mat_sub, OpMatrix};
use bvparam::assembly::{assemble, present_module};
use bvparam::format::{SystemDecl, SystemFile};
use bvparam::numeric::{realize_matrix, verify_parametrization, Grid1D, NumericRealization, VerifyOptions};
use bvparam::parametrize::{
    adjoint_route, check_complex, check_left_inverse, check_lift, check_right_inverse,
    parametrization_from_lift, ParamCertificate,
};
use bvparam::poly::{exactness_check, symbol_map, syzygies, GbConfig};
use bvparam::Error;

#[derive(Parser)]
#[command(name = "bvparam", version, about = "Parametrizations of boundary value control systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the assembled L and its presentation ranks.
    Assemble {
        file: PathBuf,
        /// Print the parsed file in canonical form instead.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a candidate against L.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "complex")]
        mode: Mode,
        /// Candidate name; S for complex, P otherwise.
        #[arg(long)]
        candidate: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build S from a lift or by the adjoint route.
    Parametrize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lift")]
        route: Route,
        /// Also verify the result numerically.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        num: NumArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Syzygies of the rows of the symbol of L*.
    Syzygy {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Numeric check of L S f = 0 on random inputs.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        num: NumArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Complex,
    Lift,
    Rinv,
    Linv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Lift,
    Adjoint,
}

#[derive(clap::Args)]
struct NumArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    /// `nx` or `nx,nt`.
    #[arg(long)]
    grid: Option<String>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::NotALift => 3,
            Error::OutsideSubalgebra(_) => 4,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

type Outcome = Result<(Value, u8), Failure>;

fn load(path: &PathBuf) -> Result<SystemFile, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let mut f = SystemFile::parse(&src).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    if let Some(b) = budget() {
        f.rs.budget = b;
    }
    Ok(f)
}

fn budget() -> Option<usize> {
    std::env::var("BVPARAM_BUDGET").ok()?.parse().ok()
}

fn gb_config() -> GbConfig {
    let mut c = GbConfig::default();
    if let Some(b) = budget() {
        c.step_budget = b;
    }
    c
}

fn candidate<'a>(f: &'a SystemFile, name: &str) -> Result<&'a OpMatrix, Failure> {
    f.candidate(name).ok_or_else(|| fail(2, format!("the file has no candidate `{name}`")))
}

fn print_matrix(name: &str, m: &OpMatrix) {
    println!("{name} ({}x{}):", m.rows(), m.cols());
    print!("{m}");
}

fn cmd_assemble(f: &SystemFile, dump: bool) -> Outcome {
    if dump {
        print!("{}", f.dump());
        return Ok((json!({ "dump": f.dump() }), 0));
    }
    let l = f.l()?;
    print_matrix("L", &l);
    let p = present_module(&l);
    println!("N' = {}, N1' = {}", p.ambient_rank, p.relation_rank);
    let mut phantoms = Vec::new();
    if let Some(SystemDecl::Blocks(spec)) = &f.system {
        for ph in assemble(spec)?.phantoms {
            println!("phantom {ph:?}");
            phantoms.push(format!("{ph:?}"));
        }
    }
    Ok((json!({ "L": l.to_string(), "n_bar": p.ambient_rank, "n1_bar": p.relation_rank, "phantoms": phantoms }), 0))
}

fn cmd_check(f: &SystemFile, mode: Mode, name: Option<String>) -> Outcome {
    let l = f.l()?;
    let name = name.unwrap_or_else(|| if matches!(mode, Mode::Complex) { "S" } else { "P" }.to_string());
    let c = candidate(f, &name)?;
    let (label, ok) = match mode {
        Mode::Complex => ("L S = 0", check_complex(&l, c, &f.rs)?),
        Mode::Lift => ("L P L = L", check_lift(&l, c, &f.rs)?),
        Mode::Rinv => ("L P = I", check_right_inverse(&l, c, &f.rs)?),
        Mode::Linv => ("P L = I", check_left_inverse(c, &l, &f.rs)?),
    };
    println!("{label} with {name}: {}", if ok { "PASS" } else { "FAIL" });
    let mut witness = None;
    if !ok {
        // the first entry of the normalized residual that fails to vanish
        let (prod, target) = match mode {
            Mode::Complex => (mat_mul(&l, c, &f.rs)?, OpMatrix::zero(l.rows(), c.cols())),
            Mode::Lift => (mat_mul(&mat_mul(&l, c, &f.rs)?, &l, &f.rs)?, l.clone()),
            Mode::Rinv => (mat_mul(&l, c, &f.rs)?, OpMatrix::identity(l.rows())),
            Mode::Linv => (mat_mul(c, &l, &f.rs)?, OpMatrix::identity(l.cols())),
        };
        let d = mat_sub(&prod, &target)?.normalize(&f.rs)?;
        let hit = d.entries().find(|(_, _, e)| !e.is_zero()).map(|(i, j, e)| (i, j, e.to_string()));
        if let Some((i, j, e)) = hit {
            println!("witness ({}, {}): {e}", i + 1, j + 1);
            witness = Some(json!({ "row": i + 1, "col": j + 1, "entry": e }));
        }
    }
    Ok((json!({ "check": label, "candidate": name, "pass": ok, "witness": witness }), if ok { 0 } else { 1 }))
}

fn parametrization(f: &SystemFile, route: Route) -> Result<ParamCertificate, Failure> {
    let l = f.l()?;
    Ok(match route {
        Route::Lift => parametrization_from_lift(&l, candidate(f, "P")?, &f.rs)?,
        Route::Adjoint => adjoint_route(&l, &f.rs, f.symbols.as_ref(), f.candidate("Sstar"), &gb_config())?,
    })
}

fn cmd_parametrize(f: &SystemFile, route: Route, verify: bool, num: &NumArgs) -> Outcome {
    let cert = parametrization(f, route)?;
    println!("certificate: {:?} ({})", cert.kind, cert.notes);
    print_matrix("S", &cert.s);
    let mut out = json!({ "kind": cert.kind, "notes": cert.notes, "S": cert.s.to_string() });
    let mut code = 0;
    if verify {
        let (report, c) = run_verify(f, &cert.l, &cert.s, num)?;
        out["verify"] = report;
        code = c;
    }
    Ok((out, code))
}

fn cmd_syzygy(f: &SystemFile) -> Outcome {
    let t = f.symbols.as_ref().ok_or_else(|| Error::OutsideSubalgebra("the file has no [symbols] section".into()))?;
    t.check(&f.rs)?;
    let l = f.l()?;
    let ls = symbol_map(&mat_adjoint(&l, &f.rs)?.normalize(&f.rs)?, t)?;
    let syz = syzygies(&ls, &gb_config())?;
    println!("symbol of L* ({}x{}):", ls.rows(), ls.cols());
    print!("{ls}");
    println!("syzygies ({} generator(s)):", syz.rows());
    print!("{syz}");
    let cert = adjoint_route(&l, &f.rs, Some(t), None, &gb_config())?;
    let exact = exactness_check(&symbol_map(&l, t)?, &symbol_map(&cert.s, t)?, &gb_config())?;
    println!("exactness: {}", if exact { "PASS" } else { "FAIL" });
    Ok((json!({ "symbol": ls.to_string(), "syzygies": syz.to_string(), "exact": exact }), if exact { 0 } else { 1 }))
}

/// The parametrization to verify: candidate S, else from P, else the
/// adjoint route.
fn cmd_verify(f: &SystemFile, num: &NumArgs) -> Outcome {
    let l = f.l()?;
    let s = match (f.candidate("S"), f.candidate("P")) {
        (Some(s), _) => s.clone(),
        (None, Some(_)) => parametrization(f, Route::Lift)?.s,
        (None, None) => parametrization(f, Route::Adjoint)?.s,
    };
    run_verify(f, &l, &s, num)
}

fn run_verify(f: &SystemFile, l: &OpMatrix, s: &OpMatrix, num: &NumArgs) -> Outcome {
    let mut grid = f.numeric.grid();
    if let Some(g) = &num.grid {
        let (nx, nt) = match g.split_once(',') {
            Some((a, b)) => (a.trim().parse().ok(), b.trim().parse().ok()),
            None => (g.trim().parse().ok(), Some(grid.nt)),
        };
        let (Some(nx), Some(nt)) = (nx, nt) else {
            return Err(fail(2, format!("--grid expects nx or nx,nt, got `{g}`")));
        };
        grid = Grid1D { nx, nt, ..grid };
        grid.validate()?;
    }
    let d = f.numeric.verify_options();
    let opts = VerifyOptions {
        trials: num.trials.unwrap_or(d.trials),
        seed: num.seed.unwrap_or(d.seed),
        tol: num.tol.unwrap_or(d.tol),
        margin: num.margin.unwrap_or(d.margin),
        ..d
    };
    let nr = NumericRealization::from_system(&f.rs, grid)?;
    let report = verify_parametrization(&realize_matrix(l, &nr)?, &realize_matrix(s, &nr)?, &opts)?;
    print!("{}", report.to_text());
    let v: Value = serde_json::from_str(&report.to_json()).expect("report is valid JSON");
    Ok((v, if report.pass { 0 } else { 5 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (file, json_path) = match &cli.cmd {
        Cmd::Assemble { file, json, .. }
        | Cmd::Check { file, json, .. }
        | Cmd::Parametrize { file, json, .. }
        | Cmd::Syzygy { file, json }
        | Cmd::Verify { file, json, .. } => (file, json),
    };
    let run = || -> Outcome {
        let f = load(file)?;
        match &cli.cmd {
            Cmd::Assemble { dump, .. } => cmd_assemble(&f, *dump),
            Cmd::Check { mode, candidate, .. } => cmd_check(&f, *mode, candidate.clone()),
            Cmd::Parametrize { route, verify, num, .. } => cmd_parametrize(&f, *route, *verify, num),
            Cmd::Syzygy { .. } => cmd_syzygy(&f),
            Cmd::Verify { num, .. } => cmd_verify(&f, num),
        }
    };
    match run() {
        Ok((v, code)) => {
            if let Some(p) = json_path {
                let text = serde_json::to_string_pretty(&json!({ "exit_code": code, "result": v })).expect("serializable");
                if let Err(e) = std::fs::write(p, text) {
                    eprintln!("error: {}: {e}", p.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
