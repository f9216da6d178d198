//! Entry grammar: `coef*GEN.GEN + ...`, `I`, `Ib`, `0`.
//!
//! Coefficients are integers, fractions `p/q` or decimals, all exact. A
//! bare coefficient stands for a multiple of the identity. The identity
//! names may also appear inside a word, where they are dropped.

use num_traits::{One, Zero};

use crate::algebra::{BvOp, OpExpr, RewriteSystem, Word, BOUNDARY_IDENTITY, INTERIOR_IDENTITY};
use crate::order::Space;
use crate::Q;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
}

/// Exact rational from `3`, `-3`, `1/2` or `0.25`.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let v = if let Some((n, d)) = body.split_once('/') {
        let n: Q = parse_q(n)?;
        let d: Q = parse_q(d)?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        n / d
    } else if let Some((i, f)) = body.split_once('.') {
        if i.is_empty() || f.is_empty() || !(i.bytes().chain(f.bytes())).all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number `{s}`"));
        }
        let num: num_bigint::BigInt = format!("{i}{f}").parse().map_err(|_| format!("bad number `{s}`"))?;
        let den = num_bigint::BigInt::from(10u32).pow(f.len() as u32);
        Q::new(num, den)
    } else {
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number `{s}`"));
        }
        Q::from_integer(body.parse().map_err(|_| format!("bad number `{s}`"))?)
    };
    Ok(if neg { -v } else { v })
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' | '.' => {
                out.push(match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    _ => Tok::Dot,
                });
                i += 1;
            }
            '0'..='9' => {
                let st = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                // a dot followed by a digit continues a decimal
                if i + 1 < b.len() && b[i] == b'.' && b[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                out.push(Tok::Num(parse_q(&src[st..i])?));
            }
            c if c.is_ascii_alphabetic() => {
                let st = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push(Tok::Ident(src[st..i].to_string()));
            }
            c => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

/// One parsed summand before signature checking. `ids` records identity
/// names seen, so a word made only of identities knows its space.
struct RawTerm {
    coeff: Q,
    names: Vec<String>,
    ids: Vec<Space>,
    bare: bool,
}

fn parse_terms(src: &str) -> Result<Vec<RawTerm>, String> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = 0;
    let mut terms = Vec::new();
    let mut first = true;
    while p < toks.len() {
        let mut sign = Q::one();
        match toks[p] {
            Tok::Plus => p += 1,
            Tok::Minus => {
                sign = -sign;
                p += 1
            }
            _ if !first => return Err("expected `+` or `-` between terms".into()),
            _ => {}
        }
        first = false;
        let mut coeff = sign;
        let mut has_coeff = false;
        if let Some(Tok::Num(n)) = toks.get(p) {
            coeff *= n.clone();
            has_coeff = true;
            p += 1;
            if let Some(Tok::Slash) = toks.get(p) {
                match toks.get(p + 1) {
                    Some(Tok::Num(d)) if !d.is_zero() => coeff /= d.clone(),
                    _ => return Err("expected a nonzero denominator after `/`".into()),
                }
                p += 2;
            }
        }
        let needs_word = match toks.get(p) {
            Some(Tok::Star) if has_coeff => {
                p += 1;
                true
            }
            Some(Tok::Ident(_)) if !has_coeff => true,
            None | Some(Tok::Plus) | Some(Tok::Minus) if has_coeff => false,
            Some(t) => return Err(format!("unexpected token {t:?}")),
            None => return Err("expression ends after a sign".into()),
        };
        let mut t = RawTerm { coeff, names: Vec::new(), ids: Vec::new(), bare: !needs_word };
        if needs_word {
            loop {
                match toks.get(p) {
                    Some(Tok::Ident(n)) if n == INTERIOR_IDENTITY => t.ids.push(Space::Interior),
                    Some(Tok::Ident(n)) if n == BOUNDARY_IDENTITY => t.ids.push(Space::Boundary),
                    Some(Tok::Ident(n)) => t.names.push(n.clone()),
                    _ => return Err("expected a generator name".into()),
                }
                p += 1;
                if let Some(Tok::Dot) = toks.get(p) {
                    p += 1;
                } else {
                    break;
                }
            }
        }
        terms.push(t);
    }
    Ok(terms)
}

fn build(terms: Vec<RawTerm>, rs: &RewriteSystem, dom: Space, cod: Space) -> Result<OpExpr, String> {
    let mut e = OpExpr::zero(dom, cod);
    for t in terms {
        if t.names.is_empty() {
            if t.coeff.is_zero() {
                continue;
            }
            if dom != cod || t.ids.iter().any(|s| *s != dom) {
                let what = if t.bare { "a bare coefficient" } else { "an identity" };
                return Err(format!("{what} cannot map {dom:?} -> {cod:?}"));
            }
        }
        let term = rs.term_in(dom, cod, Word(t.names), t.coeff).map_err(|e| e.to_string())?;
        e = e.add(&term).map_err(|e| e.to_string())?;
    }
    Ok(e)
}

/// Parses an expression in a prescribed signature.
pub fn parse_expr(src: &str, rs: &RewriteSystem, dom: Space, cod: Space) -> Result<OpExpr, String> {
    build(parse_terms(src)?, rs, dom, cod)
}

/// Parses an expression whose signature is read off its first generator
/// word (or identity). `None` for an expression that is identically zero.
pub fn parse_expr_auto(src: &str, rs: &RewriteSystem) -> Result<Option<OpExpr>, String> {
    let terms = parse_terms(src)?;
    let sig = match terms.iter().find(|t| !t.names.is_empty()) {
        Some(t) => rs.word_signature(&Word(t.names.clone())).map_err(|e| e.to_string())?,
        None => match terms.iter().find_map(|t| t.ids.first()) {
            Some(s) => (*s, *s),
            None if terms.iter().all(|t| t.coeff.is_zero()) => return Ok(None),
            None => return Err("cannot tell the space of a bare coefficient; write it as c*I or c*Ib".into()),
        },
    };
    build(terms, rs, sig.0, sig.1).map(Some)
}

/// A matrix entry: `[a11, a12; a21, a22]` or a single expression placed in
/// the block its signature selects.
pub fn parse_bvop(src: &str, rs: &RewriteSystem) -> Result<BvOp, String> {
    let s = src.trim();
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or("missing `]`")?;
        let rows: Vec<&str> = inner.split(';').collect();
        if rows.len() != 2 {
            return Err("block entries are [a11, a12; a21, a22]".into());
        }
        let mut cells = Vec::new();
        for r in rows {
            let c: Vec<&str> = r.split(',').collect();
            if c.len() != 2 {
                return Err("block entries are [a11, a12; a21, a22]".into());
            }
            cells.extend(c);
        }
        use Space::*;
        let a11 = parse_expr(cells[0], rs, Interior, Interior)?;
        let a12 = parse_expr(cells[1], rs, Boundary, Interior)?;
        let a21 = parse_expr(cells[2], rs, Interior, Boundary)?;
        let a22 = parse_expr(cells[3], rs, Boundary, Boundary)?;
        return BvOp::new(a11, a12, a21, a22).map_err(|e| e.to_string());
    }
    Ok(parse_expr_auto(s, rs)?.map_or_else(BvOp::zero, BvOp::from_expr))
}
