use serde::{Deserialize, Serialize};

use super::{Signature, Term};
use crate::error::{Error, Result};

/// Finite algebra with dense element ids `0..k` and total operation tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    name: String,
    sig: Signature,
    carrier: Vec<String>,
    /// Per symbol, a flat table indexed in mixed radix with the first argument most significant.
    tables: Vec<Vec<usize>>,
}

/// Every `n`-tuple over `0..k` in lexicographic order.
pub fn all_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for t in &out {
            for a in 0..k {
                let mut u = t.clone();
                u.push(a);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

pub fn tuple_index(k: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * k + a)
}

impl FinAlgebra {
    pub fn new(name: &str, sig: Signature, carrier: Vec<String>, tables: Vec<Vec<usize>>) -> Result<Self> {
        let k = carrier.len();
        if tables.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.len()
            )));
        }
        for (s, t) in tables.iter().enumerate() {
            let want = k.pow(sig.arity(s) as u32);
            if t.len() != want {
                return Err(Error::Invalid(format!(
                    "table for `{}` has {} entries, expected {}",
                    sig.name(s),
                    t.len(),
                    want
                )));
            }
            if let Some(bad) = t.iter().find(|&&v| v >= k) {
                return Err(Error::Invalid(format!("table for `{}` has entry {}", sig.name(s), bad)));
            }
        }
        for (i, c) in carrier.iter().enumerate() {
            if carrier[..i].contains(c) {
                return Err(Error::Invalid(format!("duplicate element name `{c}`")));
            }
        }
        Ok(FinAlgebra {
            name: name.to_string(),
            sig,
            carrier,
            tables,
        })
    }

    pub fn from_fn(name: &str, sig: Signature, carrier: Vec<String>, f: impl Fn(usize, &[usize]) -> usize) -> Self {
        let k = carrier.len();
        let tables = (0..sig.len())
            .map(|s| all_tuples(k, sig.arity(s)).iter().map(|t| f(s, t)).collect())
            .collect();
        Self::new(name, sig, carrier, tables).expect("table function stays in the carrier")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.carrier[a]
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.carrier
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Invalid(format!("`{name}` is not an element of {}", self.name)))
    }

    pub fn table(&self, sym: usize) -> &[usize] {
        &self.tables[sym]
    }

    pub fn op(&self, sym: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.sig.arity(sym));
        self.tables[sym][tuple_index(self.size(), args)]
    }

    /// `t^A(args)`; constant leaves are read as elements of this algebra.
    pub fn eval(&self, t: &Term, args: &[usize]) -> Result<usize> {
        if t.var_bound() > args.len() {
            return Err(Error::ArityMismatch {
                expected: t.var_bound(),
                found: args.len(),
            });
        }
        t.try_fold(
            &|i| Ok(args[i]),
            &|c| {
                if c < self.size() {
                    Ok(c)
                } else {
                    Err(Error::Invalid(format!("constant #{c} outside {}", self.name)))
                }
            },
            &mut |s, vals| {
                if s >= self.sig.len() {
                    return Err(Error::UnknownSymbol(format!("#{s}")));
                }
                if vals.len() != self.sig.arity(s) {
                    return Err(Error::ArityMismatch {
                        expected: self.sig.arity(s),
                        found: vals.len(),
                    });
                }
                Ok(self.op(s, &vals))
            },
        )
    }

    /// Evaluation with constants mapped through `f`.
    pub fn eval_mapped(&self, t: &Term, args: &[usize], f: &[usize]) -> usize {
        t.fold(&|i| args[i], &|c| f[c], &mut |s, vals| self.op(s, &vals))
    }

    /// First tuple on which `lhs` and `rhs` differ.
    pub fn find_violation(&self, lhs: &Term, rhs: &Term, n: usize) -> Option<Vec<usize>> {
        all_tuples(self.size(), n)
            .into_iter()
            .find(|a| self.eval(lhs, a).ok() != self.eval(rhs, a).ok())
    }

    pub fn satisfies(&self, lhs: &Term, rhs: &Term, n: usize) -> bool {
        self.find_violation(lhs, rhs, n).is_none()
    }

    pub fn is_congruence(&self, c: &Congruence) -> bool {
        if c.class.len() != self.size() {
            return false;
        }
        let k = self.size();
        for s in 0..self.sig.len() {
            let n = self.sig.arity(s);
            for t in all_tuples(k, n) {
                let base = c.class[self.op(s, &t)];
                for i in 0..n {
                    for a in 0..k {
                        if c.class[a] == c.class[t[i]] {
                            let mut u = t.clone();
                            u[i] = a;
                            if c.class[self.op(s, &u)] != base {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// All congruences, in a fixed order. Intended for small algebras.
    pub fn congruences(&self) -> Vec<Congruence> {
        set_partitions(self.size())
            .into_iter()
            .map(Congruence::from_classes)
            .filter(|c| self.is_congruence(c))
            .collect()
    }

    pub fn is_hom_to(&self, other: &FinAlgebra, f: &[usize]) -> bool {
        if !self.sig.same_shape(&other.sig) || f.len() != self.size() || f.iter().any(|&b| b >= other.size()) {
            return false;
        }
        (0..self.sig.len()).all(|s| {
            all_tuples(self.size(), self.sig.arity(s)).iter().all(|t| {
                let img: Vec<usize> = t.iter().map(|&a| f[a]).collect();
                f[self.op(s, t)] == other.op(s, &img)
            })
        })
    }

    /// All homomorphisms into `other` by backtracking.
    pub fn homs_to(&self, other: &FinAlgebra) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if !self.sig.same_shape(&other.sig) {
            return out;
        }
        let mut f: Vec<Option<usize>> = vec![None; self.size()];
        self.hom_search(other, &mut f, 0, &mut out);
        out
    }

    fn partial_ok(&self, other: &FinAlgebra, f: &[Option<usize>]) -> bool {
        for s in 0..self.sig.len() {
            for t in all_tuples(self.size(), self.sig.arity(s)) {
                let img: Option<Vec<usize>> = t.iter().map(|&a| f[a]).collect();
                if let (Some(img), Some(r)) = (img, f[self.op(s, &t)]) {
                    if other.op(s, &img) != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn hom_search(&self, other: &FinAlgebra, f: &mut Vec<Option<usize>>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == self.size() {
            out.push(f.iter().map(|x| x.unwrap()).collect());
            return;
        }
        for b in 0..other.size() {
            f[i] = Some(b);
            if self.partial_ok(other, f) {
                self.hom_search(other, f, i + 1, out);
            }
        }
        f[i] = None;
    }

    /// Whether a subset (as a membership mask) is closed under all operations.
    pub fn is_subuniverse(&self, mask: &[bool]) -> bool {
        (0..self.sig.len()).all(|s| {
            all_tuples(self.size(), self.sig.arity(s))
                .iter()
                .filter(|t| t.iter().all(|&a| mask[a]))
                .all(|t| mask[self.op(s, t)])
        })
    }

    /// Subalgebra on the elements where `mask` holds; returns it with the inclusion.
    pub fn subalgebra(&self, name: &str, mask: &[bool]) -> Result<(FinAlgebra, Vec<usize>)> {
        if !self.is_subuniverse(mask) {
            return Err(Error::Invalid("subset is not closed under the operations".into()));
        }
        let incl: Vec<usize> = (0..self.size()).filter(|&a| mask[a]).collect();
        let mut back = vec![usize::MAX; self.size()];
        for (i, &a) in incl.iter().enumerate() {
            back[a] = i;
        }
        let carrier = incl.iter().map(|&a| self.carrier[a].clone()).collect();
        let sub = FinAlgebra::from_fn(name, self.sig.clone(), carrier, |s, t| {
            let args: Vec<usize> = t.iter().map(|&i| incl[i]).collect();
            back[self.op(s, &args)]
        });
        Ok((sub, incl))
    }

    /// Direct square `A × A`, element `(a, a')` at index `a * k + a'`.
    pub fn square(&self) -> FinAlgebra {
        let k = self.size();
        let carrier = (0..k * k)
            .map(|i| format!("({},{})", self.carrier[i / k], self.carrier[i % k]))
            .collect();
        FinAlgebra::from_fn(&format!("{}^2", self.name), self.sig.clone(), carrier, |s, t| {
            let l: Vec<usize> = t.iter().map(|&i| i / k).collect();
            let r: Vec<usize> = t.iter().map(|&i| i % k).collect();
            self.op(s, &l) * k + self.op(s, &r)
        })
    }

    /// Quotient algebra by a congruence, with the natural map.
    pub fn quotient(&self, c: &Congruence) -> Result<(FinAlgebra, Vec<usize>)> {
        if !self.is_congruence(c) {
            return Err(Error::NotCongruence("partition is not compatible with the operations".into()));
        }
        let blocks = c.blocks();
        let carrier = blocks
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&a| self.carrier[a].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let q = FinAlgebra::from_fn(&format!("{}/~", self.name), self.sig.clone(), carrier, |s, t| {
            let args: Vec<usize> = t.iter().map(|&i| blocks[i][0]).collect();
            c.class[self.op(s, &args)]
        });
        Ok((q, c.class.clone()))
    }
}

/// All set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max {
            cur.push(c);
            go(i + 1, n, cur, if c == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Equivalence relation on a carrier, stored as normalized class labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Congruence {
    class: Vec<usize>,
}

impl Congruence {
    /// Labels are renumbered by first occurrence.
    pub fn from_classes(labels: Vec<usize>) -> Self {
        let mut map = std::collections::HashMap::new();
        let class = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { class }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &a in block {
                if a >= n || labels[a] != usize::MAX {
                    return Err(Error::Invalid("blocks do not partition the carrier".into()));
                }
                labels[a] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Invalid("blocks do not cover the carrier".into()));
        }
        Ok(Self::from_classes(labels))
    }

    pub fn bottom(n: usize) -> Self {
        Congruence { class: (0..n).collect() }
    }

    pub fn top(n: usize) -> Self {
        Congruence { class: vec![0; n] }
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class[a]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (a, &c) in self.class.iter().enumerate() {
            out[c].push(a);
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn le(&self, other: &Congruence) -> bool {
        let n = self.class.len();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }
}
