//! Polynomials `A[x_1, …, x_n]` over a finite commutative ring.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::terms::{FinAlgebra, OpSymbol, Signature, Term};

pub const ADD: usize = 0;
pub const NEG: usize = 1;
pub const ZERO: usize = 2;
pub const MUL: usize = 3;
pub const ONE: usize = 4;

pub fn signature() -> Signature {
    Signature::new(vec![
        OpSymbol::new("add", 2).with_infix("+", 1),
        OpSymbol::new("neg", 1).with_prefix("-"),
        OpSymbol::new("zero", 0),
        OpSymbol::new("mul", 2).with_infix("*", 2),
        OpSymbol::new("one", 0),
    ])
    .expect("static signature")
}

pub const IDENTITIES: &[&str] = &[
    "(x1 + x2) + x3 = x1 + (x2 + x3)",
    "x1 + x2 = x2 + x1",
    "x1 + zero = x1",
    "x1 + -x1 = zero",
    "(x1 * x2) * x3 = x1 * (x2 * x3)",
    "x1 * x2 = x2 * x1",
    "x1 * one = x1",
    "x1 * (x2 + x3) = x1 * x2 + x1 * x3",
];

/// Exponent vector (trailing zeros trimmed) to nonzero coefficient.
pub type Poly = BTreeMap<Vec<u32>, usize>;

struct Ring<'a> {
    a: &'a FinAlgebra,
    zero: usize,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Ring<'_> {
    fn add_term(&self, p: &mut Poly, e: Vec<u32>, c: usize) {
        let e = trim(e);
        let cur = p.get(&e).copied().unwrap_or(self.zero);
        let s = self.a.op(ADD, &[cur, c]);
        if s == self.zero {
            p.remove(&e);
        } else {
            p.insert(e, s);
        }
    }

    fn add(&self, mut p: Poly, q: Poly) -> Poly {
        for (e, c) in q {
            self.add_term(&mut p, e, c);
        }
        p
    }

    fn neg(&self, p: Poly) -> Poly {
        p.into_iter().map(|(e, c)| (e, self.a.op(NEG, &[c]))).collect()
    }

    fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (e, c) in p {
            for (f, d) in q {
                let n = e.len().max(f.len());
                let g: Vec<u32> = (0..n)
                    .map(|i| e.get(i).copied().unwrap_or(0) + f.get(i).copied().unwrap_or(0))
                    .collect();
                self.add_term(&mut out, g, self.a.op(MUL, &[*c, *d]));
            }
        }
        out
    }

    fn constant(&self, c: usize) -> Poly {
        let mut p = Poly::new();
        self.add_term(&mut p, Vec::new(), c);
        p
    }
}

pub fn poly(a: &FinAlgebra, t: &Term) -> Result<Poly> {
    let r = Ring { a, zero: a.op(ZERO, &[]) };
    let one = a.op(ONE, &[]);
    t.try_fold(
        &|i| {
            let mut e = vec![0; i + 1];
            e[i] = 1;
            let mut p = Poly::new();
            r.add_term(&mut p, e, one);
            Ok(p)
        },
        &|c| {
            if c >= a.size() {
                return Err(Error::Invalid(format!("constant #{c} outside {}", a.name())));
            }
            Ok(r.constant(c))
        },
        &mut |s, mut ch| match s {
            ADD if ch.len() == 2 => {
                let q = ch.pop().unwrap();
                let p = ch.pop().unwrap();
                Ok(r.add(p, q))
            }
            NEG if ch.len() == 1 => Ok(r.neg(ch.pop().unwrap())),
            ZERO if ch.is_empty() => Ok(Poly::new()),
            MUL if ch.len() == 2 => Ok(r.mul(&ch[0], &ch[1])),
            ONE if ch.is_empty() => Ok(r.constant(one)),
            _ => Err(Error::UnknownSymbol(format!("#{s}"))),
        },
    )
}

/// Monomial order: total degree, then exponent vectors lexicographically.
fn monomial_key(e: &[u32]) -> (u32, Vec<u32>) {
    (e.iter().sum(), e.to_vec())
}

/// Normal form: monomials in increasing order summed left to right; a monomial
/// is its coefficient (omitted when it is `1` and the degree is positive)
/// times its variables with multiplicity, multiplied left to right.
pub fn canon(a: &FinAlgebra, t: &Term) -> Result<Term> {
    let p = poly(a, t)?;
    let zero = a.op(ZERO, &[]);
    let one = a.op(ONE, &[]);
    let mut monos: Vec<(&Vec<u32>, &usize)> = p.iter().collect();
    monos.sort_by_key(|(e, _)| monomial_key(e));
    let mut parts = Vec::new();
    for (e, &c) in monos {
        let mut factors = Vec::new();
        if c != one || e.is_empty() {
            factors.push(Term::Const(c));
        }
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                factors.push(Term::Var(i));
            }
        }
        let mut it = factors.into_iter();
        let mut m = it.next().expect("monomial has a factor");
        for f in it {
            m = Term::App(MUL, vec![m, f]);
        }
        parts.push(m);
    }
    let mut it = parts.into_iter();
    let Some(mut out) = it.next() else {
        return Ok(Term::Const(zero));
    };
    for m in it {
        out = Term::App(ADD, vec![out, m]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn zn(n: usize) -> FinAlgebra {
        FinAlgebra::from_fn(
            "Zn",
            signature(),
            (0..n).map(|i| i.to_string()).collect(),
            |s, t| match s {
                ADD => (t[0] + t[1]) % n,
                NEG => (n - t[0]) % n,
                MUL => (t[0] * t[1]) % n,
                ONE => 1 % n,
                _ => 0,
            },
        )
    }

    fn c(a: &FinAlgebra, s: &str) -> Term {
        canon(a, &parse_term(s, a.signature(), a.carrier()).unwrap().0).unwrap()
    }

    #[test]
    fn expansion_reduces_coefficients() {
        let a = zn(2);
        assert_eq!(c(&a, "(x + 1) * (x + 1)"), c(&a, "x * x + 1"));
        assert_ne!(c(&a, "x * x"), c(&a, "x"));
        assert_eq!(c(&a, "x + x"), Term::Const(0));
    }

    #[test]
    fn coefficients_and_order() {
        let a = zn(3);
        assert_eq!(c(&a, "x2 * x1 + 2 * x1 + 1"), c(&a, "1 + x1 * 2 + x1 * x2"));
        assert_eq!(c(&a, "one"), Term::Const(1));
        let t = c(&a, "2 * x * x + x + 2");
        assert_eq!(canon(&a, &t).unwrap(), t);
    }
}
