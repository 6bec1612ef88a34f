use std::collections::BTreeSet;
use std::sync::Arc;

use super::pointed::{Fiber, PointedOveralg};
use crate::error::{Error, Result};
use crate::terms::{enumerate_terms_with_constants, FinAlgebra, Term};
use crate::variety::Variety;

/// The pointed overalgebra free on an `A`-set, kept symbolic.
///
/// Elements are normal forms of polynomials whose variables are the
/// generators; generator `i` lies over `over[i]`, and an element lies over
/// its value with every generator evaluated at its base point.
#[derive(Clone, Debug)]
pub struct FreePointed {
    variety: Variety,
    base: Arc<FinAlgebra>,
    over: Vec<usize>,
    names: Vec<String>,
}

impl FreePointed {
    /// `gens[a]` lists the names of the generators lying over `a`.
    pub fn new(variety: &Variety, base: Arc<FinAlgebra>, gens: &[Vec<String>]) -> Result<Self> {
        if !variety.has_canonicalizer() {
            return Err(Error::NoCanonicalizer(variety.name().to_string()));
        }
        if gens.len() != base.size() {
            return Err(Error::Invalid("one generator list per base element".into()));
        }
        let mut over = Vec::new();
        let mut names = Vec::new();
        for (a, g) in gens.iter().enumerate() {
            for n in g {
                over.push(a);
                names.push(n.clone());
            }
        }
        Ok(FreePointed {
            variety: variety.clone(),
            base,
            over,
            names,
        })
    }

    /// `U_b`: free on a single generator `x` over `b`.
    pub fn on_one(variety: &Variety, base: Arc<FinAlgebra>, b: usize) -> Result<Self> {
        let mut gens = vec![Vec::new(); base.size()];
        gens[b].push("x".to_string());
        Self::new(variety, base, &gens)
    }

    pub fn generators(&self) -> usize {
        self.over.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn generator_fiber(&self, i: usize) -> usize {
        self.over[i]
    }

    pub fn base(&self) -> &Arc<FinAlgebra> {
        &self.base
    }

    pub fn element(&self, t: &Term) -> Result<Term> {
        if t.var_bound() > self.over.len() {
            return Err(Error::ArityMismatch {
                expected: self.over.len(),
                found: t.var_bound(),
            });
        }
        self.variety.canon(&self.base, t)
    }

    pub fn fiber_of(&self, t: &Term) -> usize {
        let consts: Vec<usize> = (0..self.base.size()).collect();
        self.base.eval_mapped(t, &self.over, &consts)
    }

    pub fn basepoint(&self, a: usize) -> Result<Term> {
        self.variety.canon(&self.base, &Term::Const(a))
    }

    pub fn apply(&self, sym: usize, args: &[Term]) -> Result<Term> {
        self.variety.canon(&self.base, &Term::App(sym, args.to_vec()))
    }

    /// Distinct elements whose normal form has at most `bound` nodes.
    pub fn enumerate(&self, bound: usize) -> Result<Vec<Term>> {
        let mut set = BTreeSet::new();
        for t in enumerate_terms_with_constants(self.base.signature(), self.over.len(), self.base.size(), bound) {
            let c = self.variety.canon(&self.base, &t)?;
            if c.size() <= bound {
                set.insert(c);
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Value of the unique extension of `images` (generator `i ↦` an element
    /// of `_{over[i]}Q`) at the element `t`.
    pub fn extend(&self, target: &PointedOveralg, images: &[usize], t: &Term) -> Result<(usize, usize)> {
        if images.len() != self.over.len() {
            return Err(Error::ArityMismatch {
                expected: self.over.len(),
                found: images.len(),
            });
        }
        target.t_action(t, &self.over, images)
    }

    /// Finite overalgebra on the elements of size at most `bound`, if that set
    /// is closed under the operations. Also returns the elements of each fiber.
    pub fn materialize(&self, bound: usize) -> Result<(PointedOveralg, Vec<Vec<Term>>)> {
        let elems = self.enumerate(bound)?;
        let k = self.base.size();
        let mut members: Vec<Vec<Term>> = vec![Vec::new(); k];
        for e in elems {
            members[self.fiber_of(&e)].push(e);
        }
        let mut fibers = Vec::with_capacity(k);
        for (a, m) in members.iter().enumerate() {
            let star = self.basepoint(a)?;
            let names = m
                .iter()
                .map(|t| t.display(self.base.signature(), Some(self.base.carrier())).to_string())
                .collect();
            fibers.push(Fiber {
                basepoint: m.iter().position(|t| *t == star).ok_or(Error::NotClosed(bound))?,
                names,
            });
        }
        let closed = std::cell::Cell::new(true);
        let p = PointedOveralg::from_fn(self.base.clone(), fibers, |s, a, p| {
            let args: Vec<Term> = a.iter().zip(p).map(|(&x, &i)| members[x][i].clone()).collect();
            let v = self.apply(s, &args).expect("canonicalizer");
            let target = self.base.op(s, a);
            match members[target].iter().position(|t| *t == v) {
                Some(i) => i,
                None => {
                    closed.set(false);
                    0
                }
            }
        });
        // from_fn may reject a table poisoned by the fallback value; closure is what matters
        if !closed.get() {
            return Err(Error::NotClosed(bound));
        }
        Ok((p?, members))
    }
}
