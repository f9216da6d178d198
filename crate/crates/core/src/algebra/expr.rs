use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::order::Space;
use crate::Q;

/// Composition of generators, left to right = outermost to innermost.
/// Identities are never stored, so the empty word is the identity of its
/// space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(name: &str) -> Self {
        Word(vec![name.to_string()])
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Word(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn find(&self, pat: &Word, from: usize) -> Option<usize> {
        if pat.is_empty() || pat.len() > self.len() {
            return None;
        }
        (from..=self.len() - pat.len()).find(|&i| self.0[i..i + pat.len()] == pat.0[..])
    }

    pub fn splice(&self, at: usize, len: usize, with: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() - len + with.len());
        v.extend_from_slice(&self.0[..at]);
        v.extend(with.0.iter().cloned());
        v.extend_from_slice(&self.0[at + len..]);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    pub fn display_with(&self, space: Space) -> String {
        if self.is_empty() {
            match space {
                Space::Interior => "I".into(),
                Space::Boundary => "Ib".into(),
            }
        } else {
            self.0.join(".")
        }
    }
}

/// A rational linear combination of words sharing one signature
/// `dom -> cod`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpExpr {
    pub dom: Space,
    pub cod: Space,
    terms: BTreeMap<Word, Q>,
}

impl OpExpr {
    pub fn zero(dom: Space, cod: Space) -> Self {
        OpExpr { dom, cod, terms: BTreeMap::new() }
    }

    pub fn identity(space: Space) -> Self {
        Self::term(space, space, Word::empty(), Q::one()).expect("identity signature")
    }

    /// A single scaled word. The caller is responsible for the word being
    /// kind-consistent; see [`crate::algebra::RewriteSystem::word_signature`].
    pub fn term(dom: Space, cod: Space, w: Word, c: Q) -> Result<Self> {
        if w.is_empty() && dom != cod {
            return Err(Error::KindMismatch(format!(
                "identity word cannot map {dom:?} to {cod:?}"
            )));
        }
        let mut e = OpExpr::zero(dom, cod);
        e.add_term(w, c);
        Ok(e)
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Q> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_signature(&self, other: &OpExpr, what: &str) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::KindMismatch(format!(
                "{what}: {:?}->{:?} vs {:?}->{:?}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &OpExpr) -> Result<OpExpr> {
        self.same_signature(other, "sum of expressions")?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OpExpr) -> Result<OpExpr> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> OpExpr {
        if s.is_zero() {
            return OpExpr::zero(self.dom, self.cod);
        }
        OpExpr {
            dom: self.dom,
            cod: self.cod,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> OpExpr {
        self.scale(&-Q::one())
    }

    /// `self o rhs`, without normalization.
    pub fn compose(&self, rhs: &OpExpr) -> Result<OpExpr> {
        if self.dom != rhs.cod {
            return Err(Error::KindMismatch(format!(
                "cannot compose {:?}->{:?} after {:?}->{:?}",
                self.dom, self.cod, rhs.dom, rhs.cod
            )));
        }
        let mut out = OpExpr::zero(rhs.dom, self.cod);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        Ok(out)
    }
}

pub(crate) fn fmt_coeff_term(c: &Q, body: &str, first: bool) -> String {
    let neg = c < &Q::zero();
    let a = if neg { -c.clone() } else { c.clone() };
    let sign = match (first, neg) {
        (true, true) => "-",
        (true, false) => "",
        (false, true) => " - ",
        (false, false) => " + ",
    };
    if a.is_one() {
        format!("{sign}{body}")
    } else {
        format!("{sign}{a}*{body}")
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sp = self.cod;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            write!(f, "{}", fmt_coeff_term(c, &w.display_with(sp), i == 0))?;
        }
        Ok(())
    }
}
