//! Signatures, terms, finite algebras and the clone of terms.

mod algebra;
mod enumerate;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use algebra::{Congruence, FinAlgebra};
pub use algebra::{all_tuples, set_partitions, tuple_index};
pub use enumerate::{enumerate_terms, enumerate_terms_with_constants, TermTable};
pub use parse::parse_term;

/// An operation symbol with optional surface syntax.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    #[serde(rename = "symbol")]
    pub name: String,
    pub arity: usize,
    /// Binary infix token and its precedence (higher binds tighter).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infix: Option<(String, u8)>,
    /// Unary prefix token.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

impl OpSymbol {
    pub fn new(name: &str, arity: usize) -> Self {
        OpSymbol {
            name: name.to_string(),
            arity,
            infix: None,
            prefix: None,
        }
    }

    pub fn with_infix(mut self, token: &str, prec: u8) -> Self {
        assert_eq!(self.arity, 2);
        self.infix = Some((token.to_string(), prec));
        self
    }

    pub fn with_prefix(mut self, token: &str) -> Self {
        assert_eq!(self.arity, 1);
        self.prefix = Some(token.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(symbols: Vec<OpSymbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Invalid(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].name
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Same names and arities, ignoring surface syntax.
    pub fn same_shape(&self, other: &Signature) -> bool {
        self.symbols.len() == other.symbols.len()
            && self
                .symbols
                .iter()
                .zip(&other.symbols)
                .all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

/// A term over a signature. Variables are 0-based internally and print as `x1, x2, …`.
/// `Const` leaves name elements of a coefficient algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(sym: usize, children: Vec<Term>) -> Term {
        Term::App(sym, children)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, ch) => 1 + ch.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, ch) => 1 + ch.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// One more than the largest variable index, or 0.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Const(_) => 0,
            Term::App(_, ch) => ch.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, ch) => ch.iter().any(Term::has_constants),
        }
    }

    /// Variable indices in order of occurrence (with repeats).
    pub fn var_occurrences(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_vars(&mut |i| out.push(i));
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Term::Var(i) => f(*i),
            Term::Const(_) => {}
            Term::App(_, ch) => ch.iter().for_each(|c| c.visit_vars(f)),
        }
    }

    /// Number of occurrences of variable `i`.
    pub fn occurrences_of(&self, i: usize) -> usize {
        let mut n = 0;
        self.visit_vars(&mut |j| n += usize::from(i == j));
        n
    }

    /// Structural recursion.
    pub fn fold<T>(
        &self,
        var: &impl Fn(usize) -> T,
        cst: &impl Fn(usize) -> T,
        app: &mut impl FnMut(usize, Vec<T>) -> T,
    ) -> T {
        match self {
            Term::Var(i) => var(*i),
            Term::Const(c) => cst(*c),
            Term::App(s, ch) => {
                let vals: Vec<T> = ch.iter().map(|c| c.fold(var, cst, app)).collect();
                app(*s, vals)
            }
        }
    }

    /// Fallible structural recursion.
    pub fn try_fold<T>(
        &self,
        var: &impl Fn(usize) -> Result<T>,
        cst: &impl Fn(usize) -> Result<T>,
        app: &mut impl FnMut(usize, Vec<T>) -> Result<T>,
    ) -> Result<T> {
        match self {
            Term::Var(i) => var(*i),
            Term::Const(c) => cst(*c),
            Term::App(s, ch) => {
                let mut vals = Vec::with_capacity(ch.len());
                for c in ch {
                    vals.push(c.try_fold(var, cst, app)?);
                }
                app(*s, vals)
            }
        }
    }

    /// Replace every variable `x_i` by `subs[i]`.
    pub fn substitute(&self, subs: &[Term]) -> Term {
        match self {
            Term::Var(i) => subs[*i].clone(),
            Term::Const(_) => self.clone(),
            Term::App(s, ch) => Term::App(*s, ch.iter().map(|c| c.substitute(subs)).collect()),
        }
    }

    /// Replace each occurrence of a variable, numbered left to right, via `f`.
    pub fn substitute_occurrences(&self, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
        let mut k = 0;
        self.subst_occ(&mut k, f)
    }

    fn subst_occ(&self, k: &mut usize, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
        match self {
            Term::Var(i) => {
                let t = f(*k, *i);
                *k += 1;
                t
            }
            Term::Const(_) => self.clone(),
            Term::App(s, ch) => Term::App(*s, ch.iter().map(|c| c.subst_occ(k, f)).collect()),
        }
    }

    /// Check symbol arities and variable bound against a signature.
    pub fn validate(&self, sig: &Signature, arity: usize) -> Result<()> {
        match self {
            Term::Var(i) if *i >= arity => Err(Error::ArityMismatch {
                expected: arity,
                found: i + 1,
            }),
            Term::Var(_) | Term::Const(_) => Ok(()),
            Term::App(s, ch) => {
                if *s >= sig.len() {
                    return Err(Error::UnknownSymbol(format!("#{s}")));
                }
                if ch.len() != sig.arity(*s) {
                    return Err(Error::ArityMismatch {
                        expected: sig.arity(*s),
                        found: ch.len(),
                    });
                }
                ch.iter().try_for_each(|c| c.validate(sig, arity))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, consts: Option<&'a [String]>) -> TermDisplay<'a> {
        TermDisplay { term: self, sig, consts }
    }
}

/// Clone composition `t'(t_1, …, t_n)`: plain substitution in the term algebra.
pub fn compose_terms(outer: &Term, outer_arity: usize, inner: &[Term]) -> Result<Term> {
    if inner.len() != outer_arity {
        return Err(Error::ArityMismatch {
            expected: outer_arity,
            found: inner.len(),
        });
    }
    if outer.var_bound() > outer_arity {
        return Err(Error::ArityMismatch {
            expected: outer_arity,
            found: outer.var_bound(),
        });
    }
    Ok(outer.substitute(inner))
}

/// Projections `x_1, …, x_n`.
pub fn projections(n: usize) -> Vec<Term> {
    (0..n).map(Term::Var).collect()
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    consts: Option<&'a [String]>,
}

impl TermDisplay<'_> {
    fn write(&self, t: &Term, f: &mut fmt::Formatter<'_>, parent_prec: u8) -> fmt::Result {
        match t {
            Term::Var(i) => write!(f, "x{}", i + 1),
            Term::Const(c) => match self.consts.and_then(|names| names.get(*c)) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "c{c}"),
            },
            Term::App(s, ch) => {
                let sym = &self.sig.symbols()[*s];
                if let Some((tok, prec)) = &sym.infix {
                    let paren = *prec < parent_prec;
                    if paren {
                        write!(f, "(")?;
                    }
                    self.write(&ch[0], f, *prec)?;
                    write!(f, " {tok} ")?;
                    self.write(&ch[1], f, prec + 1)?;
                    if paren {
                        write!(f, ")")?;
                    }
                    Ok(())
                } else if let Some(tok) = &sym.prefix {
                    write!(f, "{tok}")?;
                    self.write(&ch[0], f, u8::MAX)
                } else if ch.is_empty() {
                    write!(f, "{}", sym.name)
                } else {
                    write!(f, "{}(", sym.name)?;
                    for (k, c) in ch.iter().enumerate() {
                        if k > 0 {
                            write!(f, ", ")?;
                        }
                        self.write(c, f, 0)?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.term, f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_sig() -> Signature {
        Signature::new(vec![
            OpSymbol::new("mul", 2).with_infix("*", 2),
            OpSymbol::new("inv", 1),
            OpSymbol::new("e", 0),
        ])
        .unwrap()
    }

    #[test]
    fn clone_axioms_on_examples() {
        let t = Term::App(0, vec![Term::Var(0), Term::Var(1)]);
        // projection applied to a tuple picks the component
        assert_eq!(compose_terms(&Term::Var(0), 1, std::slice::from_ref(&t)).unwrap(), t);
        assert_eq!(compose_terms(&t, 2, &projections(2)).unwrap(), t);
        let swapped = compose_terms(&t, 2, &[Term::Var(1), Term::Var(0)]).unwrap();
        assert_eq!(swapped, Term::App(0, vec![Term::Var(1), Term::Var(0)]));
    }

    #[test]
    fn arity_mismatch() {
        let t = Term::App(0, vec![Term::Var(0), Term::Var(1)]);
        assert!(matches!(compose_terms(&t, 2, &[Term::Var(0)]), Err(Error::ArityMismatch { .. })));
        assert!(t.validate(&group_sig(), 1).is_err());
    }

    #[test]
    fn display_uses_infix() {
        let sig = group_sig();
        let t = Term::App(0, vec![Term::App(0, vec![Term::Var(0), Term::Var(1)]), Term::Var(2)]);
        assert_eq!(t.display(&sig, None).to_string(), "x1 * x2 * x3");
        let u = Term::App(0, vec![Term::Var(0), Term::App(0, vec![Term::Var(1), Term::Var(2)])]);
        assert_eq!(u.display(&sig, None).to_string(), "x1 * (x2 * x3)");
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(Signature::new(vec![OpSymbol::new("f", 1), OpSymbol::new("f", 2)]).is_err());
    }
}
