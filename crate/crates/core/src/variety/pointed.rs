//! Pointed sets: one constant and no identities.

use crate::error::{Error, Result};
use crate::terms::{FinAlgebra, OpSymbol, Signature, Term};

pub const PT: usize = 0;

pub fn signature() -> Signature {
    Signature::new(vec![OpSymbol::new("pt", 0)]).expect("static signature")
}

pub const IDENTITIES: &[&str] = &[];

/// A polynomial is a variable or a constant; `pt` becomes the constant `pt^A`.
pub fn canon(a: &FinAlgebra, t: &Term) -> Result<Term> {
    match t {
        Term::Var(_) => Ok(t.clone()),
        Term::Const(c) if *c < a.size() => Ok(t.clone()),
        Term::Const(c) => Err(Error::Invalid(format!("constant #{c} outside {}", a.name()))),
        Term::App(PT, ch) if ch.is_empty() => Ok(Term::Const(a.op(PT, &[]))),
        Term::App(s, _) => Err(Error::UnknownSymbol(format!("#{s}"))),
    }
}
