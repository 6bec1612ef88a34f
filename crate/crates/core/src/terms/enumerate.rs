use super::{Signature, Term};

/// Terms of each exact size over a signature, `n_vars` variables and
/// `n_consts` constant leaves, built lazily and memoized.
///
/// Order within a size: variables, then constants, then symbols in index
/// order; for a symbol, child size splits in lexicographic order, then
/// children lexicographically by their own position in this order.
pub struct TermTable<'a> {
    sig: &'a Signature,
    n_vars: usize,
    n_consts: usize,
    by_size: Vec<Vec<Term>>,
}

impl<'a> TermTable<'a> {
    pub fn new(sig: &'a Signature, n_vars: usize, n_consts: usize) -> Self {
        TermTable {
            sig,
            n_vars,
            n_consts,
            by_size: vec![Vec::new()],
        }
    }

    pub fn of_size(&mut self, size: usize) -> &[Term] {
        while self.by_size.len() <= size {
            let s = self.by_size.len();
            let next = self.build(s);
            self.by_size.push(next);
        }
        &self.by_size[size]
    }

    fn build(&self, s: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if s == 1 {
            out.extend((0..self.n_vars).map(Term::Var));
            out.extend((0..self.n_consts).map(Term::Const));
        }
        for (sym, op) in self.sig.symbols().iter().enumerate() {
            let k = op.arity;
            if k == 0 {
                if s == 1 {
                    out.push(Term::App(sym, vec![]));
                }
                continue;
            }
            if s < k + 1 {
                continue;
            }
            for split in compositions(s - 1, k) {
                let lists: Vec<&Vec<Term>> = split.iter().map(|&c| &self.by_size[c]).collect();
                product(&lists, &mut Vec::new(), &mut |children| out.push(Term::App(sym, children.to_vec())));
            }
        }
        out
    }
}

/// Compositions of `total` into `parts` positive summands, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product<'t>(lists: &[&'t Vec<Term>], cur: &mut Vec<Term>, f: &mut impl FnMut(&[Term])) {
    if cur.len() == lists.len() {
        f(cur);
        return;
    }
    for t in lists[cur.len()].iter() {
        cur.push(t.clone());
        product(lists, cur, f);
        cur.pop();
    }
}

/// All constant-free terms in `n` variables with at most `max_size` nodes.
pub fn enumerate_terms(sig: &Signature, n: usize, max_size: usize) -> Vec<Term> {
    enumerate_terms_with_constants(sig, n, 0, max_size)
}

/// All terms in `n` variables and `n_consts` constants with at most `max_size` nodes.
pub fn enumerate_terms_with_constants(sig: &Signature, n: usize, n_consts: usize, max_size: usize) -> Vec<Term> {
    let mut table = TermTable::new(sig, n, n_consts);
    let mut out = Vec::new();
    for s in 1..=max_size {
        out.extend_from_slice(table.of_size(s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::OpSymbol;
    use std::collections::HashSet;

    fn group_sig() -> Signature {
        Signature::new(vec![
            OpSymbol::new("mul", 2).with_infix("*", 2),
            OpSymbol::new("inv", 1),
            OpSymbol::new("e", 0),
        ])
        .unwrap()
    }

    // Independent count: number of trees of exactly `s` nodes.
    fn count(s: usize, leaves: usize, arities: &[usize]) -> usize {
        if s == 0 {
            return 0;
        }
        let mut total = if s == 1 { leaves } else { 0 };
        for &k in arities {
            total += forests(s - 1, k, leaves, arities);
        }
        total
    }

    fn forests(s: usize, k: usize, leaves: usize, arities: &[usize]) -> usize {
        if k == 0 {
            return usize::from(s == 0);
        }
        (1..=s).map(|f| count(f, leaves, arities) * forests(s - f, k - 1, leaves, arities)).sum()
    }

    #[test]
    fn smallest_group_terms() {
        let sig = group_sig();
        assert_eq!(
            enumerate_terms(&sig, 1, 1),
            vec![Term::Var(0), Term::App(2, vec![])]
        );
    }

    #[test]
    fn variables_are_present() {
        let sig = group_sig();
        let ts = enumerate_terms(&sig, 3, 1);
        for i in 0..3 {
            assert!(ts.contains(&Term::Var(i)));
        }
    }

    #[test]
    fn counts_match_recursive_counter() {
        let sig = group_sig();
        for n in 1..=2 {
            for d in 1..=6 {
                let ts = enumerate_terms(&sig, n, d);
                let expected: usize = (1..=d).map(|s| count(s, n, &[2, 1, 0])).sum();
                assert_eq!(ts.len(), expected, "n={n} d={d}");
                let set: HashSet<&Term> = ts.iter().collect();
                assert_eq!(set.len(), ts.len());
                assert!(ts.windows(2).all(|w| w[0].size() <= w[1].size()));
            }
        }
        // with constants
        let ts = enumerate_terms_with_constants(&sig, 1, 2, 4);
        let expected: usize = (1..=4).map(|s| count(s, 3, &[2, 1, 0])).sum();
        assert_eq!(ts.len(), expected);
    }

    #[test]
    fn order_is_deterministic() {
        let sig = group_sig();
        assert_eq!(enumerate_terms(&sig, 2, 5), enumerate_terms(&sig, 2, 5));
    }
}
