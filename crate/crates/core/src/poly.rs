//! Polynomials over a finite algebra relative to a variety, and their
//! actions on overalgebras and modules totally in the variety.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::overalg::{AModule, PointedOveralg};
use crate::terms::{parse_term, FinAlgebra, Term};
use crate::variety::Variety;
use crate::zlinalg::{Int, IntMatrix};

/// An `n`-ary polynomial kept in normal form, so structural equality is
/// equality in `Pol_n(A, V)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    arity: usize,
    body: Term,
}

impl Polynomial {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &Term {
        &self.body
    }
}

/// `A` together with a variety containing it.
#[derive(Clone, Debug)]
pub struct PolyContext {
    variety: Variety,
    algebra: Arc<FinAlgebra>,
}

impl PolyContext {
    pub fn new(variety: &Variety, algebra: Arc<FinAlgebra>) -> Result<Self> {
        if !variety.has_canonicalizer() {
            return Err(Error::NoCanonicalizer(variety.name().to_string()));
        }
        if !algebra.signature().same_shape(variety.signature()) {
            return Err(Error::SignatureMismatch(format!("{} is not over {}", algebra.name(), variety.name())));
        }
        if let Some((id, w)) = variety.violation(&algebra) {
            let names: Vec<&str> = w.iter().map(|&x| algebra.element_name(x)).collect();
            return Err(Error::Invalid(format!(
                "{} is not in {}: {} fails at ({})",
                algebra.name(),
                variety.name(),
                id,
                names.join(", ")
            )));
        }
        Ok(PolyContext {
            variety: variety.clone(),
            algebra,
        })
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn algebra(&self) -> &Arc<FinAlgebra> {
        &self.algebra
    }

    pub fn poly(&self, t: &Term, arity: usize) -> Result<Polynomial> {
        t.validate(self.algebra.signature(), arity)?;
        Ok(Polynomial {
            arity,
            body: self.variety.canon(&self.algebra, t)?,
        })
    }

    pub fn constant(&self, c: usize) -> Result<Polynomial> {
        self.poly(&Term::Const(c), 0)
    }

    /// Parse `x1 * g`, `f(x1, c)` and so on; constants are carrier names.
    pub fn parse(&self, src: &str, arity: usize) -> Result<Polynomial> {
        let (t, n) = parse_term(src, self.algebra.signature(), self.algebra.carrier())?;
        if n > arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: n,
            });
        }
        self.poly(&t, arity)
    }

    pub fn display(&self, p: &Polynomial) -> String {
        p.body.display(self.algebra.signature(), Some(self.algebra.carrier())).to_string()
    }

    /// `Π'(Π_1, …, Π_n)`, renormalized.
    pub fn compose(&self, outer: &Polynomial, inner: &[Polynomial]) -> Result<Polynomial> {
        if inner.len() != outer.arity {
            return Err(Error::ArityMismatch {
                expected: outer.arity,
                found: inner.len(),
            });
        }
        let arity = inner.first().map_or(0, |p| p.arity);
        if let Some(p) = inner.iter().find(|p| p.arity != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: p.arity,
            });
        }
        let subs: Vec<Term> = inner.iter().map(|p| p.body.clone()).collect();
        self.poly(&outer.body.substitute(&subs), arity)
    }

    /// `Π^A(a)`.
    pub fn eval(&self, p: &Polynomial, args: &[usize]) -> Result<usize> {
        let consts: Vec<usize> = (0..self.algebra.size()).collect();
        self.eval_via(p, &self.algebra, &consts, args)
    }

    /// `Π^{B,f}(b)`: constants are sent through the homomorphism `f : A → B`.
    pub fn eval_in(&self, p: &Polynomial, b: &FinAlgebra, f: &[usize], args: &[usize]) -> Result<usize> {
        if !b.signature().same_shape(self.algebra.signature()) || f.len() != self.algebra.size() {
            return Err(Error::NotHom("f does not go from A to B".into()));
        }
        if !self.algebra.is_hom_to(b, f) {
            return Err(Error::NotHom(format!("f is not a homomorphism {} → {}", self.algebra.name(), b.name())));
        }
        self.eval_via(p, b, f, args)
    }

    fn eval_via(&self, p: &Polynomial, b: &FinAlgebra, f: &[usize], args: &[usize]) -> Result<usize> {
        if args.len() != p.arity {
            return Err(Error::ArityMismatch {
                expected: p.arity,
                found: args.len(),
            });
        }
        if let Some(&x) = args.iter().find(|&&x| x >= b.size()) {
            return Err(Error::Invalid(format!("argument #{x} outside {}", b.name())));
        }
        Ok(b.eval_mapped(&p.body, args, f))
    }

    /// Access to the polynomial action of an overalgebra, after checking it is totally in `V`.
    pub fn pointed<'a>(&'a self, p: &'a PointedOveralg) -> Result<PointedAction<'a>> {
        self.same_base(p.base())?;
        p.check_totally_in(&self.variety)?;
        Ok(PointedAction { ctx: self, p })
    }

    /// Access to the polynomial action of a module, after checking it is totally in `V`.
    pub fn module<'a>(&'a self, m: &'a AModule) -> Result<ModuleAction<'a>> {
        self.same_base(m.base())?;
        m.check_totally_in(&self.variety)?;
        Ok(ModuleAction {
            ctx: self,
            m,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn same_base(&self, base: &FinAlgebra) -> Result<()> {
        if *base == *self.algebra {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("object lies over {}, not {}", base.name(), self.algebra.name())))
        }
    }
}

/// `Π ↦ Π^P` for a pointed overalgebra known to be totally in `V`.
pub struct PointedAction<'a> {
    ctx: &'a PolyContext,
    p: &'a PointedOveralg,
}

impl PointedAction<'_> {
    /// `Π^P_a(p)` with its base value `Π^A(a)`; constants act as basepoints.
    pub fn act(&self, poly: &Polynomial, a: &[usize], p: &[usize]) -> Result<(usize, usize)> {
        if a.len() != poly.arity {
            return Err(Error::ArityMismatch {
                expected: poly.arity,
                found: a.len(),
            });
        }
        self.p.t_action(&poly.body, a, p)
    }

    pub fn context(&self) -> &PolyContext {
        self.ctx
    }
}

/// `Π ↦ Π^M` for a module known to be totally in `V`. Unary matrices are
/// cached by `(normal form, b)`.
pub struct ModuleAction<'a> {
    ctx: &'a PolyContext,
    m: &'a AModule,
    cache: Mutex<HashMap<(Term, usize), IntMatrix>>,
}

impl ModuleAction<'_> {
    pub fn module(&self) -> &AModule {
        self.m
    }

    pub fn context(&self) -> &PolyContext {
        self.ctx
    }

    /// `Π^M_a(m)`; constants contribute the zero of their fiber.
    pub fn act(&self, poly: &Polynomial, a: &[usize], m: &[Vec<Int>]) -> Result<(usize, Vec<Int>)> {
        if a.len() != poly.arity {
            return Err(Error::ArityMismatch {
                expected: poly.arity,
                found: a.len(),
            });
        }
        self.m.t_action(&poly.body, a, m)
    }

    /// Matrices of `m_i ↦ Π^M_a(0, …, m_i, …, 0)` and the target fiber.
    pub fn parts(&self, poly: &Polynomial, a: &[usize]) -> Result<(usize, Vec<IntMatrix>)> {
        if a.len() != poly.arity {
            return Err(Error::ArityMismatch {
                expected: poly.arity,
                found: a.len(),
            });
        }
        Ok(self.m.term_parts(&poly.body, a))
    }

    /// Matrix of `m ↦ u^M_{⟨b⟩}(m)` for a unary polynomial given by its normal form.
    pub fn unary_matrix(&self, u: &Term, b: usize) -> IntMatrix {
        let key = (u.clone(), b);
        if let Some(m) = self.cache.lock().expect("cache lock").get(&key) {
            return m.clone();
        }
        let (_, mut parts) = self.m.term_parts(u, &[b]);
        let mat = parts.pop().expect("one part for a unary polynomial");
        self.cache.lock().expect("cache lock").entry(key).or_insert(mat).clone()
    }

    /// Whether `Π^M_a` is additive, checked on all pairs of tuples (finite fibers).
    pub fn is_additive(&self, poly: &Polynomial, a: &[usize]) -> Result<bool> {
        let elems = self.m.fiber_elements()?;
        let lists: Vec<&Vec<Vec<Int>>> = a.iter().map(|&x| &elems[x]).collect();
        let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
        let tuples = crate::overalg::mixed_tuples(&sizes);
        let pick = |t: &[usize]| -> Vec<Vec<Int>> { t.iter().enumerate().map(|(i, &j)| lists[i][j].clone()).collect() };
        for s in &tuples {
            for t in &tuples {
                let (ms, mt) = (pick(s), pick(t));
                let sum: Vec<Vec<Int>> = ms
                    .iter()
                    .zip(&mt)
                    .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                    .collect();
                let (target, lhs) = self.act(poly, a, &sum)?;
                let (_, x) = self.act(poly, a, &ms)?;
                let (_, y) = self.act(poly, a, &mt)?;
                let rhs: Vec<Int> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
                if !self.m.fiber(target).elem_eq(&lhs, &rhs) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fleet::{cyclic_group, group_module, zmod_ring, ring_module};
    use crate::overalg::{beta_star, congruence_algebra};
    use crate::terms::{enumerate_terms_with_constants, Congruence};
    use crate::variety::{cring, groups};
    use crate::zlinalg::FGAbGroup;

    fn c2ctx() -> PolyContext {
        PolyContext::new(&Variety::groups(), Arc::new(cyclic_group(2))).unwrap()
    }

    #[test]
    fn composition_examples() {
        let ctx = c2ctx();
        let xg = ctx.parse("x1 * g", 1).unwrap();
        assert_eq!(ctx.compose(&xg, &[xg.clone()]).unwrap(), ctx.parse("x1", 1).unwrap());
        let x1 = ctx.parse("x1", 1).unwrap();
        assert_eq!(ctx.compose(&x1, &[xg.clone()]).unwrap(), xg);
        let p = ctx.parse("x1 * inv(x2) * g", 2).unwrap();
        let proj = [ctx.parse("x1", 2).unwrap(), ctx.parse("x2", 2).unwrap()];
        assert_eq!(ctx.compose(&p, &proj).unwrap(), p);
        assert!(matches!(ctx.compose(&p, &[x1]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn evaluation_examples() {
        let ctx = c2ctx();
        let xg = ctx.parse("x1 * g", 1).unwrap();
        assert_eq!(ctx.eval(&xg, &[1]).unwrap(), 0);
        assert_eq!(ctx.eval(&ctx.parse("x1", 1).unwrap(), &[1]).unwrap(), 1);
        // into C2 × C2 along the diagonal
        let a = ctx.algebra().clone();
        let sq = a.square();
        let diag = vec![0, 3];
        let c = ctx.constant(1).unwrap();
        assert_eq!(ctx.eval_in(&c, &sq, &diag, &[]).unwrap(), 3);
        assert!(matches!(ctx.eval_in(&c, &sq, &[1, 0], &[]), Err(Error::NotHom(_))));
    }

    #[test]
    fn evaluation_is_a_clone_homomorphism() {
        let ctx = c2ctx();
        let a = ctx.algebra().clone();
        let all = enumerate_terms_with_constants(a.signature(), 2, 2, 3);
        let unary = enumerate_terms_with_constants(a.signature(), 1, 2, 3);
        let sq = a.square();
        let diag = vec![0, 3];
        for t in all.iter().step_by(7) {
            let outer = ctx.poly(t, 2).unwrap();
            for (s, u) in unary.iter().step_by(5).zip(unary.iter().skip(3).step_by(11)) {
                let inner = [ctx.poly(s, 1).unwrap(), ctx.poly(u, 1).unwrap()];
                let comp = ctx.compose(&outer, &inner).unwrap();
                for b in 0..4 {
                    let lhs = ctx.eval_in(&comp, &sq, &diag, &[b]).unwrap();
                    let args = [
                        ctx.eval_in(&inner[0], &sq, &diag, &[b]).unwrap(),
                        ctx.eval_in(&inner[1], &sq, &diag, &[b]).unwrap(),
                    ];
                    assert_eq!(lhs, ctx.eval_in(&outer, &sq, &diag, &args).unwrap());
                }
            }
        }
    }

    #[test]
    fn split_action_is_evaluation_in_the_split_algebra() {
        let ctx = c2ctx();
        let a = ctx.algebra().clone();
        let top = Congruence::top(2);
        let p = beta_star(a.clone(), &top).unwrap();
        let (ab, pairs, _, iota) = congruence_algebra(&a, &top).unwrap();
        let act = ctx.pointed(&p).unwrap();
        let polys = enumerate_terms_with_constants(a.signature(), 2, 2, 4);
        for t in &polys {
            let poly = ctx.poly(t, 2).unwrap();
            for x in 0..ab.size() {
                for y in 0..ab.size() {
                    let (ax, ay) = (pairs[x].0, pairs[y].0);
                    let px = p.fibers()[ax].names.iter().position(|n| n == ab.element_name(x)).unwrap();
                    let py = p.fibers()[ay].names.iter().position(|n| n == ab.element_name(y)).unwrap();
                    let (fa, fp) = act.act(&poly, &[ax, ay], &[px, py]).unwrap();
                    let direct = ctx.eval_in(&poly, &ab, &iota, &[x, y]).unwrap();
                    assert_eq!(pairs[direct].0, fa);
                    assert_eq!(p.fibers()[fa].names[fp], ab.element_name(direct));
                    // the raw term gives the same answer
                    assert_eq!(p.t_action(t, &[ax, ay], &[px, py]).unwrap(), (fa, fp));
                }
            }
        }
        let c = ctx.constant(1).unwrap();
        assert_eq!(act.act(&c, &[], &[]).unwrap(), (1, p.basepoint(1)));
    }

    #[test]
    fn module_action() {
        let ctx = c2ctx();
        let a = ctx.algebra().clone();
        let m = group_module(a.clone(), &FGAbGroup::cyclic(4), |g| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 }));
        let act = ctx.module(&m).unwrap();
        let x = ctx.parse("x1", 1).unwrap();
        assert_eq!(act.unary_matrix(x.body(), 1), IntMatrix::identity(1));
        let c = ctx.parse("g", 1).unwrap();
        assert!(act.unary_matrix(c.body(), 0).is_zero());
        // g x g⁻¹ acts by the sign of g
        let conj = ctx.parse("g * x1 * inv(g)", 1).unwrap();
        assert_eq!(act.unary_matrix(conj.body(), 0), IntMatrix::scalar(1, -1));
        for t in enumerate_terms_with_constants(a.signature(), 2, 2, 4) {
            let poly = ctx.poly(&t, 2).unwrap();
            for aa in crate::terms::all_tuples(2, 2) {
                assert!(act.is_additive(&poly, &aa).unwrap());
            }
        }
    }

    #[test]
    fn ring_module_action() {
        let r = Arc::new(zmod_ring(3));
        let ctx = PolyContext::new(&Variety::cring(), r.clone()).unwrap();
        let m = ring_module(r, &FGAbGroup::cyclic(3));
        let act = ctx.module(&m).unwrap();
        // x² at b acts as 2b
        let sq = ctx.poly(&Term::App(cring::MUL, vec![Term::Var(0), Term::Var(0)]), 1).unwrap();
        for b in 0..3 {
            assert_eq!(act.unary_matrix(sq.body(), b), IntMatrix::scalar(1, 2 * b as i64));
        }
    }

    #[test]
    fn requires_total_membership() {
        let ctx = c2ctx();
        let a = ctx.algebra().clone();
        // parts of `*` both zero: not even a monoid
        let bad = crate::overalg::AModule::from_fn(a, vec![FGAbGroup::cyclic(2); 2], |s, _, _| {
            if s == groups::MUL {
                IntMatrix::zeros(1, 1)
            } else {
                IntMatrix::identity(1)
            }
        })
        .unwrap();
        assert!(matches!(ctx.module(&bad), Err(Error::NotTotallyInV { .. })));
        let custom = Variety::custom("magmas", groups::signature(), &[]).unwrap();
        assert!(matches!(
            PolyContext::new(&custom, ctx.algebra().clone()),
            Err(Error::NoCanonicalizer(_))
        ));
    }
}
