//! Reduced words in the free product `A ∗ F(x_1, …, x_n)`.

use crate::error::{Error, Result};
use crate::terms::{FinAlgebra, OpSymbol, Signature, Term};

pub const MUL: usize = 0;
pub const INV: usize = 1;
pub const E: usize = 2;

pub fn signature() -> Signature {
    Signature::new(vec![
        OpSymbol::new("mul", 2).with_infix("*", 2),
        OpSymbol::new("inv", 1),
        OpSymbol::new("e", 0),
    ])
    .expect("static signature")
}

pub const IDENTITIES: &[&str] = &[
    "(x1 * x2) * x3 = x1 * (x2 * x3)",
    "x1 * e = x1",
    "e * x1 = x1",
    "x1 * inv(x1) = e",
    "inv(x1) * x1 = e",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    C(usize),
    X(usize, i64),
}

struct Ops<'a> {
    a: &'a FinAlgebra,
    e: usize,
}

impl Ops<'_> {
    fn mul(&self, x: usize, y: usize) -> usize {
        self.a.op(MUL, &[x, y])
    }

    fn inv(&self, x: usize) -> usize {
        self.a.op(INV, &[x])
    }

    fn push(&self, w: &mut Vec<Letter>, l: Letter) {
        match (w.last().copied(), l) {
            (_, Letter::C(c)) if c == self.e => {}
            (Some(Letter::C(c)), Letter::C(d)) => {
                w.pop();
                let p = self.mul(c, d);
                if p != self.e {
                    w.push(Letter::C(p));
                }
            }
            (Some(Letter::X(i, k)), Letter::X(j, m)) if i == j => {
                w.pop();
                if k + m != 0 {
                    w.push(Letter::X(i, k + m));
                }
            }
            _ => w.push(l),
        }
    }

    fn concat(&self, mut u: Vec<Letter>, v: Vec<Letter>) -> Vec<Letter> {
        for l in v {
            self.push(&mut u, l);
        }
        u
    }

    fn inverse(&self, u: Vec<Letter>) -> Vec<Letter> {
        let mut out = Vec::with_capacity(u.len());
        for l in u.into_iter().rev() {
            let inv = match l {
                Letter::C(c) => Letter::C(self.inv(c)),
                Letter::X(i, k) => Letter::X(i, -k),
            };
            self.push(&mut out, inv);
        }
        out
    }
}

fn word(ops: &Ops<'_>, t: &Term) -> Result<Vec<Letter>> {
    t.try_fold(
        &|i| Ok(vec![Letter::X(i, 1)]),
        &|c| {
            if c >= ops.a.size() {
                return Err(Error::Invalid(format!("constant #{c} outside {}", ops.a.name())));
            }
            let mut w = Vec::new();
            ops.push(&mut w, Letter::C(c));
            Ok(w)
        },
        &mut |s, mut ch| match s {
            MUL if ch.len() == 2 => {
                let v = ch.pop().unwrap();
                let u = ch.pop().unwrap();
                Ok(ops.concat(u, v))
            }
            INV if ch.len() == 1 => Ok(ops.inverse(ch.pop().unwrap())),
            E if ch.is_empty() => Ok(Vec::new()),
            _ => Err(Error::UnknownSymbol(format!("#{s}"))),
        },
    )
}

fn power(i: usize, k: i64) -> Term {
    let base = if k > 0 {
        Term::Var(i)
    } else {
        Term::App(INV, vec![Term::Var(i)])
    };
    let mut t = base.clone();
    for _ in 1..k.unsigned_abs() {
        t = Term::App(MUL, vec![t, base.clone()]);
    }
    t
}

fn to_term(ops: &Ops<'_>, w: &[Letter]) -> Term {
    let mut parts = w.iter().map(|l| match *l {
        Letter::C(c) => Term::Const(c),
        Letter::X(i, k) => power(i, k),
    });
    let Some(mut t) = parts.next() else {
        return Term::Const(ops.e);
    };
    for p in parts {
        t = Term::App(MUL, vec![t, p]);
    }
    t
}

/// Normal form: alternating non-identity constants and powers `x_i^k`,
/// multiplied left to right; the identity polynomial is the constant `e^A`.
pub fn canon(a: &FinAlgebra, t: &Term) -> Result<Term> {
    let ops = Ops { a, e: a.op(E, &[]) };
    let w = word(&ops, t)?;
    Ok(to_term(&ops, &w))
}
