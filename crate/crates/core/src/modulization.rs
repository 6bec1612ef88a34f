//! Modulization of a finite pointed overalgebra: free abelian groups on the
//! fibers modulo the submodule generated by the linearization defects.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::overalg::{mixed_tuples, module_homs, AModule, ModuleHom, PointedHom, PointedOveralg};
use crate::terms::{all_tuples, enumerate_terms};
use crate::variety::Identity;
use crate::zlinalg::{subgroup_saturate, FGAbGroup, Int, IntMatrix, Lattice, ZHom};

fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); n];
    v[i] = Int::one();
    v
}

/// `M̂P`: fiber `a` is free on `_aP`, and `ω_{a,i}` sends the generator `p`
/// to `ω^P(*, …, p, …, *)`.
pub fn hat_modulize(p: &PointedOveralg) -> AModule {
    let base = p.base().clone();
    let k = base.size();
    let fibers: Vec<FGAbGroup> = (0..k).map(|a| FGAbGroup::free(p.fiber_size(a))).collect();
    AModule::from_fn(base.clone(), fibers, |s, a, i| {
        let target = base.op(s, a);
        let mut args: Vec<usize> = a.iter().map(|&x| p.basepoint(x)).collect();
        let cols: Vec<Vec<Int>> = (0..p.fiber_size(a[i]))
            .map(|x| {
                args[i] = x;
                unit(p.fiber_size(target), p.apply(s, a, &args))
            })
            .collect();
        IntMatrix::from_columns(p.fiber_size(target), &cols)
    })
    .expect("generators go to generators")
}

/// `𝒮P`: every basepoint, and `ω^P_a(p) − Σ_i ω_{a,i}(p_i)` for every
/// symbol, base tuple and fiber tuple, in that order.
pub fn gen_set(p: &PointedOveralg) -> Vec<(usize, Vec<Int>)> {
    let base = p.base();
    let k = base.size();
    let sig = base.signature();
    let mut out: Vec<(usize, Vec<Int>)> = (0..k).map(|a| (a, unit(p.fiber_size(a), p.basepoint(a)))).collect();
    for s in 0..sig.len() {
        for a in all_tuples(k, sig.arity(s)) {
            let target = base.op(s, &a);
            let n = p.fiber_size(target);
            let sizes: Vec<usize> = a.iter().map(|&x| p.fiber_size(x)).collect();
            for q in mixed_tuples(&sizes) {
                let mut v = unit(n, p.apply(s, &a, &q));
                for i in 0..q.len() {
                    let mut args: Vec<usize> = a.iter().map(|&x| p.basepoint(x)).collect();
                    args[i] = q[i];
                    v[p.apply(s, &a, &args)] -= 1;
                }
                out.push((target, v));
            }
        }
    }
    out
}

/// `ℳP` with everything used to build it.
#[derive(Clone, Debug)]
pub struct Modulization {
    pub source: PointedOveralg,
    pub hat: AModule,
    /// `𝒦P`, fiber by fiber, as lattices in `ℤ^{|_aP|}`.
    pub k: Vec<Lattice>,
    pub result: AModule,
}

/// Modulize a finite pointed overalgebra.
pub fn modulize(p: &PointedOveralg) -> Modulization {
    let hat = hat_modulize(p);
    let start = (0..p.base().size()).map(|a| Lattice::zero(p.fiber_size(a))).collect();
    let k = subgroup_saturate(start, &gen_set(p), &hat.part_maps());
    let (result, _) = hat.quotient(&k).expect("the saturation is a submodule");
    Modulization {
        source: p.clone(),
        hat,
        k,
        result,
    }
}

impl Modulization {
    /// `η(p)` for `p ∈ _aP`, as a reduced vector of `_a(ℳP)`.
    pub fn eta(&self, a: usize, x: usize) -> Vec<Int> {
        self.result.fiber(a).reduce(&unit(self.source.fiber_size(a), x))
    }

    /// The table of `η`: `eta_table()[a][x] = η(x)`.
    pub fn eta_table(&self) -> Vec<Vec<Vec<Int>>> {
        (0..self.source.base().size())
            .map(|a| (0..self.source.fiber_size(a)).map(|x| self.eta(a, x)).collect())
            .collect()
    }

    /// `η` is pointed and commutes with every operation.
    pub fn check_eta(&self) -> Result<()> {
        let eta = self.eta_table();
        check_pointed_hom_into(&self.source, &self.result, &eta)
    }

    /// Every element of `_a(ℳP)` is an integer combination of `η`-images.
    pub fn eta_spans(&self) -> bool {
        (0..self.source.base().size()).all(|a| {
            let mut l = self.k[a].clone();
            for x in 0..self.source.fiber_size(a) {
                l.insert(unit(self.source.fiber_size(a), x));
            }
            l.is_full_rank() && l.index() == Some(Int::one())
        })
    }

    /// Whether every element of `ℳP` is the image of a single element of `P`.
    pub fn eta_onto(&self) -> Result<bool> {
        let elems = self.result.fiber_elements()?;
        Ok((0..self.source.base().size()).all(|a| {
            let g = self.result.fiber(a);
            elems[a]
                .iter()
                .all(|m| (0..self.source.fiber_size(a)).any(|x| g.elem_eq(&self.eta(a, x), m)))
        }))
    }

    /// Re-saturating `𝒦P` adds nothing.
    pub fn saturation_is_idempotent(&self) -> bool {
        subgroup_saturate(self.k.clone(), &[], &self.hat.part_maps()) == self.k
    }

    /// For every term `t` with at most `max_size` nodes, every base tuple,
    /// position `i` and `p`: `t^{M̂P}_{a,i}(p) − t^P_a(*, …, p, …, *) ∈ 𝒦P`.
    pub fn check_term_factorization(&self, max_size: usize, max_arity: usize) -> Result<()> {
        let base = self.source.base();
        let k = base.size();
        for n in 1..=max_arity {
            for t in enumerate_terms(base.signature(), n, max_size) {
                for a in all_tuples(k, n) {
                    let (target, parts) = self.hat.term_parts(&t, &a);
                    for i in 0..n {
                        for x in 0..self.source.fiber_size(a[i]) {
                            let mut args: Vec<usize> = a.iter().map(|&y| self.source.basepoint(y)).collect();
                            args[i] = x;
                            let (_, y) = self.source.t_action(&t, &a, &args)?;
                            let mut v = parts[i].apply(&unit(self.source.fiber_size(a[i]), x));
                            v[y] -= 1;
                            if !self.k[target].contains(&v) {
                                return Err(Error::NotWellDefined(format!(
                                    "term {} at {:?}, position {}, element {}",
                                    t.display(base.signature(), None),
                                    a,
                                    i + 1,
                                    self.source.fibers()[a[i]].names[x]
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Identities of `P` hold in `ℳP` (as equalities of unary parts).
    pub fn check_identity_transfer(&self, ids: &[Identity]) -> bool {
        identity_transfer(&self.source, &self.result, ids)
    }

    /// The unique `ξ : ℳP → M` with `ξ ∘ η = ζ`, where `ζ[a][x]` is the image of `x ∈ _aP`.
    pub fn universal(&self, m: &AModule, zeta: &[Vec<Vec<Int>>]) -> Result<ModuleHom> {
        check_pointed_hom_into(&self.source, m, zeta)
            .map_err(|e| Error::NotWellDefined(format!("ζ is not a pointed homomorphism: {e}")))?;
        let maps = (0..self.source.base().size())
            .map(|a| {
                let mat = IntMatrix::from_columns(m.fiber(a).rank(), &zeta[a]);
                ZHom::new(mat, self.result.fiber(a).clone(), m.fiber(a).clone()).map_err(|_| {
                    Error::NotWellDefined(format!(
                        "a generator of 𝒦P over {} is not killed",
                        self.source.base().element_name(a)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let xi = ModuleHom { maps };
        xi.check(&self.result, m)?;
        Ok(xi)
    }

    /// Every pointed `ζ : P → 𝒰M` into a finite module factors as `ξ ∘ η`;
    /// when `ℳP` is finite the factorizations are also all module maps
    /// `ℳP → M`, each hit once. Returns the number of `ζ`.
    pub fn check_universal(&self, m: &AModule) -> Result<usize> {
        let p = &self.source;
        let k = p.base().size();
        let zetas = pointed_homs_into(p, m)?;
        let mut xis = Vec::with_capacity(zetas.len());
        for zeta in &zetas {
            let xi = self.universal(m, zeta)?;
            for a in 0..k {
                for x in 0..p.fiber_size(a) {
                    if !m.fiber(a).elem_eq(&xi.maps[a].apply(&self.eta(a, x)), &zeta[a][x]) {
                        return Err(Error::NotWellDefined(format!(
                            "ξ η differs from ζ at {} over {}",
                            p.fibers()[a].names[x],
                            p.base().element_name(a)
                        )));
                    }
                }
            }
            xis.push(xi);
        }
        if self.result.is_finite() {
            let homs = module_homs(&self.result, m)?;
            if homs.len() != zetas.len() {
                return Err(Error::NotWellDefined(format!(
                    "{} pointed maps but {} module maps",
                    zetas.len(),
                    homs.len()
                )));
            }
            for h in &homs {
                if xis.iter().filter(|xi| xi.same_map(h)).count() != 1 {
                    return Err(Error::NotWellDefined("a module map is not a unique factorization".into()));
                }
            }
        }
        Ok(zetas.len())
    }

    /// `ℳf` for a pointed homomorphism `f : P → P'`, where `other = ℳP'`.
    pub fn map_hom(&self, other: &Modulization, f: &PointedHom) -> Result<ModuleHom> {
        f.check(&self.source, &other.source)?;
        let maps = (0..self.source.base().size())
            .map(|a| {
                let cols: Vec<Vec<Int>> = f.maps[a]
                    .iter()
                    .map(|&y| unit(other.source.fiber_size(a), y))
                    .collect();
                let mat = IntMatrix::from_columns(other.source.fiber_size(a), &cols);
                ZHom::new(mat, self.result.fiber(a).clone(), other.result.fiber(a).clone())
                    .map_err(|e| Error::NotWellDefined(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let h = ModuleHom { maps };
        h.check(&self.result, &other.result)?;
        Ok(h)
    }
}

/// Whether each identity that holds in `A ⋉ P` gives equal unary parts in `M`.
pub fn identity_transfer(p: &PointedOveralg, m: &AModule, ids: &[Identity]) -> bool {
    let total = p.total_algebra();
    ids.iter()
        .filter(|id| total.algebra.satisfies(&id.lhs, &id.rhs, id.arity))
        .all(|id| m.identity_violation(id).is_none())
}

/// `ζ` (given elementwise) is a pointed overalgebra homomorphism `P → 𝒰M`.
pub fn check_pointed_hom_into(p: &PointedOveralg, m: &AModule, zeta: &[Vec<Vec<Int>>]) -> Result<()> {
    let base = p.base();
    let k = base.size();
    if zeta.len() != k || (0..k).any(|a| zeta[a].len() != p.fiber_size(a)) {
        return Err(Error::NotHom("ζ needs one image per element".into()));
    }
    for a in 0..k {
        if !m.fiber(a).is_zero_elem(&zeta[a][p.basepoint(a)]) {
            return Err(Error::NotHom(format!("basepoint over {} not sent to 0", base.element_name(a))));
        }
    }
    let sig = base.signature();
    for s in 0..sig.len() {
        for a in all_tuples(k, sig.arity(s)) {
            let target = base.op(s, &a);
            let sizes: Vec<usize> = a.iter().map(|&x| p.fiber_size(x)).collect();
            for q in mixed_tuples(&sizes) {
                let imgs: Vec<Vec<Int>> = a.iter().zip(&q).map(|(&x, &y)| zeta[x][y].clone()).collect();
                let lhs = &zeta[target][p.apply(s, &a, &q)];
                if !m.fiber(target).elem_eq(lhs, &m.apply(s, &a, &imgs)) {
                    return Err(Error::NotHom(format!("`{}` at {:?}, {:?}", sig.name(s), a, q)));
                }
            }
        }
    }
    Ok(())
}

/// All pointed homomorphisms `P → 𝒰M` for finite `M`, by backtracking over fibers.
pub fn pointed_homs_into(p: &PointedOveralg, m: &AModule) -> Result<Vec<Vec<Vec<Vec<Int>>>>> {
    let elems = m.fiber_elements()?;
    let k = p.base().size();
    let mut out = Vec::new();
    let mut cur: Vec<Option<Vec<Vec<Int>>>> = vec![None; k];
    search(p, m, &elems, &mut cur, 0, &mut out);
    Ok(out)
}

fn partial_ok(p: &PointedOveralg, m: &AModule, cur: &[Option<Vec<Vec<Int>>>]) -> bool {
    let base = p.base();
    let sig = base.signature();
    for s in 0..sig.len() {
        for a in all_tuples(base.size(), sig.arity(s)) {
            let target = base.op(s, &a);
            let Some(zt) = &cur[target] else { continue };
            if a.iter().any(|&x| cur[x].is_none()) {
                continue;
            }
            let sizes: Vec<usize> = a.iter().map(|&x| p.fiber_size(x)).collect();
            for q in mixed_tuples(&sizes) {
                let imgs: Vec<Vec<Int>> = a
                    .iter()
                    .zip(&q)
                    .map(|(&x, &y)| cur[x].as_ref().unwrap()[y].clone())
                    .collect();
                if !m.fiber(target).elem_eq(&zt[p.apply(s, &a, &q)], &m.apply(s, &a, &imgs)) {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    p: &PointedOveralg,
    m: &AModule,
    elems: &[Vec<Vec<Int>>],
    cur: &mut Vec<Option<Vec<Vec<Int>>>>,
    a: usize,
    out: &mut Vec<Vec<Vec<Vec<Int>>>>,
) {
    if a == cur.len() {
        out.push(cur.iter().map(|z| z.clone().unwrap()).collect());
        return;
    }
    let n = p.fiber_size(a);
    let star = p.basepoint(a);
    let others: Vec<usize> = (0..n).filter(|&x| x != star).collect();
    let choices = mixed_tuples(&vec![elems[a].len(); others.len()]);
    for c in choices {
        let mut z = vec![vec![Int::zero(); m.fiber(a).rank()]; n];
        for (&x, &j) in others.iter().zip(&c) {
            z[x] = elems[a][j].clone();
        }
        cur[a] = Some(z);
        if partial_ok(p, m, cur) {
            search(p, m, elems, cur, a + 1, out);
        }
    }
    cur[a] = None;
}
