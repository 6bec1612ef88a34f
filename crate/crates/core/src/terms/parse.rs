use super::{Signature, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Op(String),
    Ident(String),
}

fn tokenize(src: &str, sig: &Signature) -> Result<Vec<Tok>> {
    let mut ops: Vec<String> = sig
        .symbols()
        .iter()
        .flat_map(|s| s.infix.iter().map(|(t, _)| t.clone()).chain(s.prefix.iter().cloned()))
        .collect();
    ops.sort_by_key(|o| std::cmp::Reverse(o.len()));
    let is_ident = |c: char| c.is_alphanumeric() || c == '_' || c == '\'' || c == '@';
    let mut out = Vec::new();
    let mut rest = src;
    while let Some(c) = rest.chars().next() {
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        match c {
            '(' => {
                out.push(Tok::LParen);
                rest = &rest[1..];
                continue;
            }
            ')' => {
                out.push(Tok::RParen);
                rest = &rest[1..];
                continue;
            }
            ',' => {
                out.push(Tok::Comma);
                rest = &rest[1..];
                continue;
            }
            _ => {}
        }
        if let Some(op) = ops.iter().find(|o| rest.starts_with(o.as_str()) && !o.chars().all(is_ident)) {
            out.push(Tok::Op(op.clone()));
            rest = &rest[op.len()..];
            continue;
        }
        let len: usize = rest.chars().take_while(|&c| is_ident(c)).map(char::len_utf8).sum();
        if len == 0 {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
        out.push(Tok::Ident(rest[..len].to_string()));
        rest = &rest[len..];
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    sig: &'a Signature,
    consts: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref u) if *u == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn infix(&self, tok: &str) -> Option<(usize, u8)> {
        self.sig
            .symbols()
            .iter()
            .enumerate()
            .find_map(|(i, s)| s.infix.as_ref().filter(|(t, _)| t == tok).map(|(_, p)| (i, *p)))
    }

    fn prefix(&self, tok: &str) -> Option<usize> {
        self.sig.symbols().iter().position(|s| s.prefix.as_deref() == Some(tok))
    }

    fn expr(&mut self, min_prec: u8) -> Result<Term> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op)) = self.peek() {
            let Some((sym, prec)) = self.infix(op) else { break };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(prec + 1)?;
            lhs = Term::App(sym, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term> {
        match self.next() {
            Some(Tok::Op(op)) => {
                let sym = self
                    .prefix(&op)
                    .ok_or_else(|| Error::Parse(format!("`{op}` is not a prefix operator")))?;
                let arg = self.unary()?;
                Ok(Term::App(sym, vec![arg]))
            }
            Some(Tok::LParen) => {
                let t = self.expr(0)?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => self.ident(name),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn ident(&mut self, name: String) -> Result<Term> {
        if self.peek() == Some(&Tok::LParen) {
            let sym = self.sig.lookup(&name)?;
            self.pos += 1;
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(self.expr(0)?);
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
            if args.len() != self.sig.arity(sym) {
                return Err(Error::ArityMismatch {
                    expected: self.sig.arity(sym),
                    found: args.len(),
                });
            }
            return Ok(Term::App(sym, args));
        }
        if let Some(c) = name.strip_prefix('@') {
            return self.constant(c);
        }
        if name == "x" {
            return Ok(Term::Var(0));
        }
        if let Some(d) = name.strip_prefix('x') {
            if let Ok(i) = d.parse::<usize>() {
                if i == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                return Ok(Term::Var(i - 1));
            }
        }
        if let Ok(sym) = self.sig.lookup(&name) {
            if self.sig.arity(sym) == 0 {
                return Ok(Term::App(sym, vec![]));
            }
            return Err(Error::ArityMismatch {
                expected: self.sig.arity(sym),
                found: 0,
            });
        }
        self.constant(&name)
    }

    fn constant(&self, name: &str) -> Result<Term> {
        self.consts
            .iter()
            .position(|c| c == name)
            .map(Term::Const)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

/// Parse an expression such as `x1 * inv(x2) * g` or `mul(x1, e)`.
///
/// Identifiers resolve as variables (`x`, `x1`, `x2`, …), then nullary
/// symbols, then constant names from `consts`; `@name` forces a constant.
/// Returns the term and its arity (largest variable index used).
pub fn parse_term(src: &str, sig: &Signature, consts: &[String]) -> Result<(Term, usize)> {
    let toks = tokenize(src, sig)?;
    let mut p = Parser { toks, pos: 0, sig, consts };
    let t = p.expr(0)?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    let n = t.var_bound();
    Ok((t, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::OpSymbol;

    fn ab_sig() -> Signature {
        Signature::new(vec![
            OpSymbol::new("add", 2).with_infix("+", 1),
            OpSymbol::new("neg", 1).with_prefix("-"),
            OpSymbol::new("zero", 0),
        ])
        .unwrap()
    }

    #[test]
    fn infix_and_prefix() {
        let sig = ab_sig();
        let consts = vec!["0".to_string(), "1".to_string()];
        let (t, n) = parse_term("x1 + -x2 + 1", &sig, &consts).unwrap();
        assert_eq!(n, 2);
        let expect = Term::App(
            0,
            vec![
                Term::App(0, vec![Term::Var(0), Term::App(1, vec![Term::Var(1)])]),
                Term::Const(1),
            ],
        );
        assert_eq!(t, expect);
        assert_eq!(t.display(&sig, Some(&consts)).to_string(), "x1 + -x2 + 1");
    }

    #[test]
    fn call_syntax_and_errors() {
        let sig = ab_sig();
        let (t, _) = parse_term("add(x, zero)", &sig, &[]).unwrap();
        assert_eq!(t, Term::App(0, vec![Term::Var(0), Term::App(2, vec![])]));
        assert!(parse_term("add(x)", &sig, &[]).is_err());
        assert!(parse_term("foo", &sig, &[]).is_err());
        assert!(parse_term("x +", &sig, &[]).is_err());
    }
}
