//! Line-oriented system files.
//!
//! ```text
//! # comment
//! [generators]
//! W  interior order=2 adjoint=W transmission
//! K  potential order=0
//! R  trace order=0
//! [relations]
//! R.K -> Ib
//! [system]
//! L 1x2
//! L(1,1) = [W, 0; R, 0]
//! L(1,2) = [-I, 0; 0, 0]
//! [candidates]
//! P 2x1
//! P(1,1) = [0, K; 0, 0]
//! [symbols]
//! vars D1 D2
//! [numeric]
//! grid nx=257 nt=16 pad=4 t_len=1
//! bind W = wave_fd
//! ```
//!
//! `[system]` holds either a direct `L` or the four raw blocks: a line
//! `dims N=.. m=.. N1=.. m1=..` followed by entries `A1(i,j) = expr` to
//! `A4(i,j) = expr` and optional `phantom j interior|boundary` lines.
//! Indices in files are 1-based. Matrix entries are `[a11, a12; a21, a22]`
//! or one expression placed in the block its signature selects.

mod expr;
pub mod fixtures;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::One;

pub use expr::{parse_bvop, parse_expr, parse_expr_auto, parse_q};

use crate::algebra::{BvOp, OpMatrix, RewriteSystem, Word};
use crate::assembly::{assemble, SystemSpec};
use crate::error::{Error, Result};
use crate::numeric::{Binding, Grid1D, NumericRealization, VerifyOptions};
use crate::order::{GeneratorDecl, OpKind, Space};
use crate::poly::SymbolTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemDecl {
    Blocks(SystemSpec),
    Direct(OpMatrix),
}

/// Optional `[numeric]` settings; unset fields fall back to defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NumericSettings {
    pub grid: Option<Grid1D>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub margin: Option<f64>,
    pub bandwidth: Option<usize>,
    pub bandwidth_t: Option<usize>,
}

impl NumericSettings {
    pub fn verify_options(&self) -> VerifyOptions {
        let d = VerifyOptions::default();
        VerifyOptions {
            trials: self.trials.unwrap_or(d.trials),
            seed: self.seed.unwrap_or(d.seed),
            tol: self.tol.unwrap_or(d.tol),
            margin: self.margin.unwrap_or(d.margin),
            bandwidth: self.bandwidth,
            bandwidth_t: self.bandwidth_t,
        }
    }

    /// The file's grid, or 129 points, one time slice, pad 4.
    pub fn grid(&self) -> Grid1D {
        self.grid.unwrap_or(Grid1D { nx: 129, nt: 1, pad_factor: 4, t_len: 1.0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    /// Generators (with their numeric bindings) and relations.
    pub rs: RewriteSystem,
    pub system: Option<SystemDecl>,
    pub candidates: BTreeMap<String, OpMatrix>,
    pub symbols: Option<SymbolTable>,
    pub numeric: NumericSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Generators,
    Relations,
    System,
    Candidates,
    Symbols,
    Numeric,
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn key_value(tok: &str) -> std::result::Result<(&str, &str), String> {
    tok.split_once('=').ok_or_else(|| format!("expected key=value, got `{tok}`"))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.trim().parse().map_err(|_| format!("bad {what} `{}`", s.trim()))
}

/// `NAME RxC`.
fn parse_header(line: &str) -> Option<(String, usize, usize)> {
    let (name, dims) = line.split_once(char::is_whitespace)?;
    let (r, c) = dims.trim().split_once('x')?;
    Some((name.to_string(), r.trim().parse().ok()?, c.trim().parse().ok()?))
}

/// `NAME(i,j) = rhs` with 1-based indices, returned 0-based.
fn parse_entry(line: &str) -> std::result::Result<(String, usize, usize, &str), String> {
    let (lhs, rhs) = line.split_once('=').ok_or("expected `NAME(i,j) = ...`")?;
    let lhs = lhs.trim();
    let open = lhs.find('(').ok_or("expected `NAME(i,j)`")?;
    let idx = lhs[open + 1..].strip_suffix(')').ok_or("expected `)`")?;
    let (i, j) = idx.split_once(',').ok_or("expected two indices")?;
    let (i, j): (usize, usize) = (parse_num(i, "index")?, parse_num(j, "index")?);
    if i == 0 || j == 0 {
        return Err("indices start at 1".into());
    }
    Ok((lhs[..open].trim().to_string(), i - 1, j - 1, rhs))
}

fn parse_generator(line: &str) -> std::result::Result<GeneratorDecl, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 3 {
        return Err("expected `NAME KIND order=N ...`".into());
    }
    let kind = OpKind::parse(toks[1]).ok_or_else(|| format!("unknown kind `{}`", toks[1]))?;
    let mut order = None;
    let mut g = GeneratorDecl::new(toks[0], kind, 0);
    for t in &toks[2..] {
        if *t == "transmission" {
            g = g.with_transmission();
            continue;
        }
        let (k, v) = key_value(t)?;
        match k {
            "order" => order = Some(parse_num(v, "order")?),
            "class" => g.class = parse_num(v, "class")?,
            "adjoint" => {
                let (c, name) = match v.split_once('*') {
                    Some((c, n)) => (parse_q(c)?, n),
                    None => match v.strip_prefix('-') {
                        Some(n) => (-crate::Q::one(), n),
                        None => (crate::Q::one(), v),
                    },
                };
                g = g.with_adjoint(c, name);
            }
            _ => return Err(format!("unknown attribute `{k}`")),
        }
    }
    g.order = order.ok_or("missing order=")?;
    Ok(g)
}

fn parse_space(s: &str) -> std::result::Result<Space, String> {
    match s {
        "interior" => Ok(Space::Interior),
        "boundary" => Ok(Space::Boundary),
        _ => Err(format!("expected interior or boundary, got `{s}`")),
    }
}

struct Parser {
    section: Section,
    rs: RewriteSystem,
    system: Option<SystemDecl>,
    candidates: BTreeMap<String, OpMatrix>,
    symbols: Option<SymbolTable>,
    numeric: NumericSettings,
    last_generator_line: usize,
}

impl Parser {
    fn line(&mut self, no: usize, line: &str) -> std::result::Result<(), String> {
        match self.section {
            Section::Preamble => Err("content before the first [section]".into()),
            Section::Generators => {
                self.last_generator_line = no;
                self.rs.declare(parse_generator(line)?).map_err(|e| e.to_string())
            }
            Section::Relations => {
                let (lhs, rhs) = line.split_once("->").ok_or("expected `WORD -> expr`")?;
                let names: Vec<&str> = lhs.trim().split('.').map(str::trim).collect();
                let w = Word::from_names(&names);
                let (dom, cod) = self.rs.word_signature(&w).map_err(|e| e.to_string())?;
                let rhs = parse_expr(rhs, &self.rs, dom, cod)?;
                self.rs.add_rule(w, rhs).map_err(|e| e.to_string())
            }
            Section::System => self.system_line(line),
            Section::Candidates => {
                if let Some((name, r, c)) = parse_header(line).filter(|_| !line.contains('=')) {
                    if self.candidates.insert(name.clone(), OpMatrix::zero(r, c)).is_some() {
                        return Err(format!("candidate `{name}` declared twice"));
                    }
                    return Ok(());
                }
                let (name, i, j, rhs) = parse_entry(line)?;
                let b = parse_bvop(rhs, &self.rs)?;
                let m = self.candidates.get_mut(&name).ok_or_else(|| format!("candidate `{name}` has no `{name} RxC` header"))?;
                set_checked(m, i, j, b)
            }
            Section::Symbols => {
                let rest = line.strip_prefix("vars").ok_or("expected `vars NAME ...`")?;
                let vars: Vec<&str> = rest.split_whitespace().collect();
                let t = SymbolTable::new(&vars).map_err(|e| e.to_string())?;
                t.check(&self.rs).map_err(|e| e.to_string())?;
                self.symbols = Some(t);
                Ok(())
            }
            Section::Numeric => self.numeric_line(line),
        }
    }

    fn system_line(&mut self, line: &str) -> std::result::Result<(), String> {
        if let Some(rest) = line.strip_prefix("dims") {
            let mut d = BTreeMap::new();
            for t in rest.split_whitespace() {
                let (k, v) = key_value(t)?;
                d.insert(k, parse_num::<usize>(v, k)?);
            }
            let get = |k: &str| d.get(k).copied().ok_or_else(|| format!("dims needs {k}="));
            return self.set_system(SystemDecl::Blocks(SystemSpec::new(get("N")?, get("m")?, get("N1")?, get("m1")?)));
        }
        if let Some(rest) = line.strip_prefix("phantom ") {
            let (j, s) = rest.trim().split_once(char::is_whitespace).ok_or("expected `phantom j interior|boundary`")?;
            let j: usize = parse_num(j, "index")?;
            let Some(SystemDecl::Blocks(spec)) = &mut self.system else {
                return Err("phantom needs a preceding dims line".into());
            };
            if j == 0 {
                return Err("indices start at 1".into());
            }
            spec.declared_phantoms.push((j - 1, parse_space(s.trim())?));
            return Ok(());
        }
        if !line.contains('=') {
            let (name, r, c) = parse_header(line).ok_or("expected `dims ...`, `L RxC` or an entry")?;
            if name != "L" {
                return Err(format!("the system matrix is called L, not `{name}`"));
            }
            return self.set_system(SystemDecl::Direct(OpMatrix::zero(r, c)));
        }
        let (name, i, j, rhs) = parse_entry(line)?;
        match (&mut self.system, name.as_str()) {
            (Some(SystemDecl::Direct(m)), "L") => {
                let b = parse_bvop(rhs, &self.rs)?;
                set_checked(m, i, j, b)
            }
            (Some(SystemDecl::Blocks(spec)), "A1" | "A2" | "A3" | "A4") => {
                use Space::*;
                let (dom, cod) = match name.as_str() {
                    "A1" => (Interior, Interior),
                    "A2" => (Boundary, Interior),
                    "A3" => (Interior, Boundary),
                    _ => (Boundary, Boundary),
                };
                let e = parse_expr(rhs, &self.rs, dom, cod)?;
                if e.is_zero() {
                    return Ok(());
                }
                spec.set(i, j, e).map_err(|e| e.to_string())
            }
            (None, _) => Err("entries need a preceding `dims` or `L RxC` line".into()),
            _ => Err(format!("unexpected entry name `{name}`")),
        }
    }

    fn set_system(&mut self, s: SystemDecl) -> std::result::Result<(), String> {
        if self.system.is_some() {
            return Err("the system is declared twice".into());
        }
        self.system = Some(s);
        Ok(())
    }

    fn numeric_line(&mut self, line: &str) -> std::result::Result<(), String> {
        let (key, rest) = line.split_once(char::is_whitespace).ok_or("expected `key value`")?;
        let rest = rest.trim();
        let n = &mut self.numeric;
        match key {
            "grid" => {
                let mut g = Grid1D { nx: 0, nt: 1, pad_factor: 4, t_len: 1.0 };
                for t in rest.split_whitespace() {
                    let (k, v) = key_value(t)?;
                    match k {
                        "nx" => g.nx = parse_num(v, k)?,
                        "nt" => g.nt = parse_num(v, k)?,
                        "pad" => g.pad_factor = parse_num(v, k)?,
                        "t_len" => g.t_len = parse_num(v, k)?,
                        _ => return Err(format!("unknown grid key `{k}`")),
                    }
                }
                g.validate().map_err(|e| e.to_string())?;
                n.grid = Some(g);
            }
            "trials" => n.trials = Some(parse_num(rest, key)?),
            "seed" => n.seed = Some(parse_num(rest, key)?),
            "tol" => n.tol = Some(parse_num(rest, key)?),
            "margin" => n.margin = Some(parse_num(rest, key)?),
            "bandwidth" => n.bandwidth = Some(parse_num(rest, key)?),
            "bandwidth_t" => n.bandwidth_t = Some(parse_num(rest, key)?),
            "bind" => {
                let (name, b) = rest.split_once('=').ok_or("expected `bind NAME = key(...)`")?;
                let (name, b) = (name.trim(), b.trim());
                let binding = Binding::parse(b).map_err(|e| e.to_string())?;
                let kind = self.rs.generator(name).map_err(|e| e.to_string())?.kind;
                NumericRealization::check_binding(name, kind, &binding).map_err(|e| e.to_string())?;
                self.rs.set_numeric_key(name, Some(b.to_string())).map_err(|e| e.to_string())?;
            }
            _ => return Err(format!("unknown numeric setting `{key}`")),
        }
        Ok(())
    }
}

fn set_checked(m: &mut OpMatrix, i: usize, j: usize, b: BvOp) -> std::result::Result<(), String> {
    if i >= m.rows() || j >= m.cols() {
        return Err(format!("entry ({}, {}) outside a {}x{} matrix", i + 1, j + 1, m.rows(), m.cols()));
    }
    m.set(i, j, b);
    Ok(())
}

impl SystemFile {
    pub fn parse(src: &str) -> Result<SystemFile> {
        let mut p = Parser {
            section: Section::Preamble,
            rs: RewriteSystem::new(),
            system: None,
            candidates: BTreeMap::new(),
            symbols: None,
            numeric: NumericSettings::default(),
            last_generator_line: 0,
        };
        let mut seen = Vec::new();
        for (k, raw) in src.lines().enumerate() {
            let no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let s = match name.trim() {
                    "generators" => Section::Generators,
                    "relations" => Section::Relations,
                    "system" => Section::System,
                    "candidates" => Section::Candidates,
                    "symbols" => Section::Symbols,
                    "numeric" => Section::Numeric,
                    other => return Err(parse_error(no, format!("unknown section [{other}]"))),
                };
                if seen.contains(&s) {
                    return Err(parse_error(no, format!("section [{}] appears twice", name.trim())));
                }
                seen.push(s);
                p.section = s;
                continue;
            }
            p.line(no, line).map_err(|m| parse_error(no, m))?;
        }
        p.rs.check_adjoints().map_err(|e| parse_error(p.last_generator_line, e.to_string()))?;
        Ok(SystemFile { rs: p.rs, system: p.system, candidates: p.candidates, symbols: p.symbols, numeric: p.numeric })
    }

    /// The assembled system matrix.
    pub fn l(&self) -> Result<OpMatrix> {
        match &self.system {
            Some(SystemDecl::Direct(m)) => Ok(m.clone()),
            Some(SystemDecl::Blocks(s)) => Ok(assemble(s)?.l),
            None => Err(Error::InvalidArgument("the file has no [system] section".into())),
        }
    }

    pub fn candidate(&self, name: &str) -> Option<&OpMatrix> {
        self.candidates.get(name)
    }

    /// Text that parses back to an identical `SystemFile`.
    pub fn dump(&self) -> String {
        let mut s = String::from("[generators]\n");
        for g in self.rs.generators() {
            let _ = write!(s, "{} {} order={}", g.name, g.kind.keyword(), g.order);
            if g.class != 0 {
                let _ = write!(s, " class={}", g.class);
            }
            if let Some(a) = &g.adjoint {
                let c = if a.coeff.is_one() {
                    String::new()
                } else if (-a.coeff.clone()).is_one() {
                    "-".into()
                } else {
                    format!("{}*", a.coeff)
                };
                let _ = write!(s, " adjoint={c}{}", a.name);
            }
            if g.transmission_alpha_zero_only {
                s += " transmission";
            }
            s += "\n";
        }
        if !self.rs.rules().is_empty() {
            s += "\n[relations]\n";
            for r in self.rs.rules() {
                let _ = writeln!(s, "{} -> {}", r.lhs.0.join("."), r.rhs);
            }
        }
        match &self.system {
            Some(SystemDecl::Direct(m)) => {
                s += "\n[system]\n";
                dump_matrix(&mut s, "L", m);
            }
            Some(SystemDecl::Blocks(spec)) => {
                s += "\n[system]\n";
                let _ = writeln!(s, "dims N={} m={} N1={} m1={}", spec.n_state, spec.m_bdry, spec.n_eqs, spec.m_beqs);
                for (name, grid) in [("A1", &spec.block1), ("A2", &spec.block2), ("A3", &spec.block3), ("A4", &spec.block4)] {
                    for (i, row) in grid.iter().enumerate() {
                        for (j, e) in row.iter().enumerate() {
                            if !e.is_zero() {
                                let _ = writeln!(s, "{name}({},{}) = {e}", i + 1, j + 1);
                            }
                        }
                    }
                }
                for (j, sp) in &spec.declared_phantoms {
                    let sp = if *sp == Space::Interior { "interior" } else { "boundary" };
                    let _ = writeln!(s, "phantom {} {sp}", j + 1);
                }
            }
            None => {}
        }
        if !self.candidates.is_empty() {
            s += "\n[candidates]\n";
            for (name, m) in &self.candidates {
                dump_matrix(&mut s, name, m);
            }
        }
        if let Some(t) = &self.symbols {
            let _ = writeln!(s, "\n[symbols]\nvars {}", t.var_names().join(" "));
        }
        let n = &self.numeric;
        let mut num = String::new();
        if let Some(g) = &n.grid {
            let _ = writeln!(num, "grid nx={} nt={} pad={} t_len={}", g.nx, g.nt, g.pad_factor, g.t_len);
        }
        let opt = |num: &mut String, k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(num, "{k} {v}");
            }
        };
        opt(&mut num, "trials", n.trials.map(|v| v.to_string()));
        opt(&mut num, "seed", n.seed.map(|v| v.to_string()));
        opt(&mut num, "tol", n.tol.map(|v| format!("{v:e}")));
        opt(&mut num, "margin", n.margin.map(|v| v.to_string()));
        opt(&mut num, "bandwidth", n.bandwidth.map(|v| v.to_string()));
        opt(&mut num, "bandwidth_t", n.bandwidth_t.map(|v| v.to_string()));
        for g in self.rs.generators() {
            if let Some(k) = &g.numeric_key {
                let _ = writeln!(num, "bind {} = {k}", g.name);
            }
        }
        if !num.is_empty() {
            s += "\n[numeric]\n";
            s += &num;
        }
        s
    }
}

fn dump_matrix(s: &mut String, name: &str, m: &OpMatrix) {
    let _ = writeln!(s, "{name} {}x{}", m.rows(), m.cols());
    for (i, j, b) in m.entries() {
        if !b.is_zero() {
            let _ = writeln!(s, "{name}({},{}) = [{}, {}; {}, {}]", i + 1, j + 1, b.a11, b.a12, b.a21, b.a22);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = SystemFile::parse("[generators]\nA interior order=1\n[system]\nL 1x1\nL(1,1) = A\n").unwrap();
        assert_eq!(f.l().unwrap(), OpMatrix::scalar(BvOp::from_expr(f.rs.g("A"))));
        assert_eq!(SystemFile::parse(&f.dump()).unwrap(), f);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "[generators]\nA interior order=1\n\n[system]\nL 1x1\nL(1,1) = A.B\n";
        assert!(matches!(SystemFile::parse(bad), Err(Error::Parse { line: 6, .. })));
        let bad = "[generators]\n9A interior order=1\n";
        assert!(matches!(SystemFile::parse(bad), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(SystemFile::parse("A interior order=1"), Err(Error::Parse { line: 1, .. })));
        let bad = "[generators]\nA interior order=1 adjoint=B\n";
        assert!(matches!(SystemFile::parse(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "[generators]\nA interior order=1\n[numeric]\nbind A = trace\n";
        assert!(matches!(SystemFile::parse(bad), Err(Error::Parse { line: 4, .. })));
        let bad = "[generators]\nK potential order=0\n[system]\ndims N=1 m=1 N1=1 m1=1\nA1(1,1) = K\n";
        assert!(matches!(SystemFile::parse(bad), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn blocks_assemble() {
        let src = "[generators]\nW interior order=2\nR trace order=0\n[system]\ndims N=2 m=1 N1=1 m1=1\n\
                   A1(1,1) = W\nA1(1,2) = -I\nA3(1,1) = R\nphantom 1 boundary\n";
        let f = SystemFile::parse(src).unwrap();
        let l = f.l().unwrap();
        assert_eq!(l.shape(), (1, 2));
        assert_eq!(l.get(0, 0).a21, f.rs.g("R"));
        assert_eq!(SystemFile::parse(&f.dump()).unwrap(), f);
    }

    #[test]
    fn fixtures_round_trip() {
        for (name, src) in fixtures::ALL {
            let f = SystemFile::parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            let again = SystemFile::parse(&f.dump()).unwrap_or_else(|e| panic!("{name} dump: {e}"));
            assert_eq!(again, f, "{name}");
        }
    }
}
