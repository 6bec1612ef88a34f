//! Normal forms `ι(a) + Σ k_i x_i` in `A ⊕ ℤⁿ`.

use crate::error::{Error, Result};
use crate::terms::{FinAlgebra, OpSymbol, Signature, Term};

pub const ADD: usize = 0;
pub const NEG: usize = 1;
pub const ZERO: usize = 2;

pub fn signature() -> Signature {
    Signature::new(vec![
        OpSymbol::new("add", 2).with_infix("+", 1),
        OpSymbol::new("neg", 1).with_prefix("-"),
        OpSymbol::new("zero", 0),
    ])
    .expect("static signature")
}

pub const IDENTITIES: &[&str] = &[
    "(x1 + x2) + x3 = x1 + (x2 + x3)",
    "x1 + x2 = x2 + x1",
    "x1 + zero = x1",
    "x1 + -x1 = zero",
];

/// Constant part and integer coefficients (indexed by variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub constant: usize,
    pub coeffs: Vec<i64>,
}

fn combine(a: &FinAlgebra, mut u: Affine, v: Affine) -> Affine {
    u.constant = a.op(ADD, &[u.constant, v.constant]);
    if u.coeffs.len() < v.coeffs.len() {
        u.coeffs.resize(v.coeffs.len(), 0);
    }
    for (x, y) in u.coeffs.iter_mut().zip(v.coeffs) {
        *x += y;
    }
    u
}

pub fn affine(a: &FinAlgebra, t: &Term) -> Result<Affine> {
    let zero = a.op(ZERO, &[]);
    t.try_fold(
        &|i| {
            let mut coeffs = vec![0; i + 1];
            coeffs[i] = 1;
            Ok(Affine { constant: zero, coeffs })
        },
        &|c| {
            if c >= a.size() {
                return Err(Error::Invalid(format!("constant #{c} outside {}", a.name())));
            }
            Ok(Affine {
                constant: c,
                coeffs: Vec::new(),
            })
        },
        &mut |s, mut ch| match s {
            ADD if ch.len() == 2 => {
                let v = ch.pop().unwrap();
                let u = ch.pop().unwrap();
                Ok(combine(a, u, v))
            }
            NEG if ch.len() == 1 => {
                let mut u = ch.pop().unwrap();
                u.constant = a.op(NEG, &[u.constant]);
                u.coeffs.iter_mut().for_each(|k| *k = -*k);
                Ok(u)
            }
            ZERO if ch.is_empty() => Ok(Affine {
                constant: zero,
                coeffs: Vec::new(),
            }),
            _ => Err(Error::UnknownSymbol(format!("#{s}"))),
        },
    )
}

/// Normal form: the constant (omitted when zero unless nothing else remains),
/// then `|k_i|` copies of `x_i` or `-x_i` for each variable in order, summed left to right.
pub fn canon(a: &FinAlgebra, t: &Term) -> Result<Term> {
    let f = affine(a, t)?;
    let zero = a.op(ZERO, &[]);
    let mut parts = Vec::new();
    if f.constant != zero {
        parts.push(Term::Const(f.constant));
    }
    for (i, &k) in f.coeffs.iter().enumerate() {
        let leaf = if k > 0 {
            Term::Var(i)
        } else {
            Term::App(NEG, vec![Term::Var(i)])
        };
        for _ in 0..k.unsigned_abs() {
            parts.push(leaf.clone());
        }
    }
    let mut it = parts.into_iter();
    let Some(mut out) = it.next() else {
        return Ok(Term::Const(zero));
    };
    for p in it {
        out = Term::App(ADD, vec![out, p]);
    }
    Ok(out)
}
