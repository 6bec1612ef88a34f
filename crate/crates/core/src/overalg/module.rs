use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::pointed::TotalAlgebra;
use crate::error::{Error, Result};
use crate::terms::{all_tuples, tuple_index, FinAlgebra, Term};
use crate::variety::{Identity, Variety};
use crate::zlinalg::{FGAbGroup, Int, IntMatrix, Lattice, ZHom};

/// `A`-module stored through its unary parts: `parts[ω][index of a][i]` is
/// the matrix of `ω^M_{a,i} : _{a_i}M → _{ω(a)}M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModule {
    base: Arc<FinAlgebra>,
    fibers: Vec<FGAbGroup>,
    parts: Vec<Vec<Vec<IntMatrix>>>,
}

impl AModule {
    pub fn new(base: Arc<FinAlgebra>, fibers: Vec<FGAbGroup>, parts: Vec<Vec<Vec<IntMatrix>>>) -> Result<Self> {
        let k = base.size();
        if fibers.len() != k {
            return Err(Error::Invalid(format!("{} fibers over {} elements", fibers.len(), k)));
        }
        let sig = base.signature();
        if parts.len() != sig.len() {
            return Err(Error::SignatureMismatch("one part family per symbol".into()));
        }
        for (s, per) in parts.iter().enumerate() {
            let n = sig.arity(s);
            if per.len() != k.pow(n as u32) {
                return Err(Error::Invalid(format!("`{}` needs parts for every base tuple", sig.name(s))));
            }
            for a in all_tuples(k, n) {
                let ps = &per[tuple_index(k, &a)];
                if ps.len() != n {
                    return Err(Error::Invalid(format!("`{}` at {:?} needs {} parts", sig.name(s), a, n)));
                }
                let target = base.op(s, &a);
                for (i, m) in ps.iter().enumerate() {
                    ZHom::new(m.clone(), fibers[a[i]].clone(), fibers[target].clone()).map_err(|e| {
                        Error::IllDefinedHom(format!("part {} of `{}` at {:?}: {}", i + 1, sig.name(s), a, e))
                    })?;
                }
            }
        }
        Ok(AModule { base, fibers, parts })
    }

    /// Build from `(ω, a, i) ↦ matrix of ω^M_{a,i}`.
    pub fn from_fn(
        base: Arc<FinAlgebra>,
        fibers: Vec<FGAbGroup>,
        f: impl Fn(usize, &[usize], usize) -> IntMatrix,
    ) -> Result<Self> {
        let k = base.size();
        let sig = base.signature().clone();
        let parts = (0..sig.len())
            .map(|s| {
                all_tuples(k, sig.arity(s))
                    .iter()
                    .map(|a| (0..a.len()).map(|i| f(s, a, i)).collect())
                    .collect()
            })
            .collect();
        Self::new(base, fibers, parts)
    }

    /// All fibers zero.
    pub fn zero(base: Arc<FinAlgebra>) -> Self {
        let k = base.size();
        Self::from_fn(base, vec![FGAbGroup::zero(); k], |_, _, _| IntMatrix::zeros(0, 0)).expect("zero module")
    }

    pub fn base(&self) -> &Arc<FinAlgebra> {
        &self.base
    }

    pub fn fibers(&self) -> &[FGAbGroup] {
        &self.fibers
    }

    pub fn fiber(&self, a: usize) -> &FGAbGroup {
        &self.fibers[a]
    }

    pub fn parts(&self) -> &[Vec<Vec<IntMatrix>>] {
        &self.parts
    }

    pub fn part_matrix(&self, sym: usize, a: &[usize], i: usize) -> &IntMatrix {
        &self.parts[sym][tuple_index(self.base.size(), a)][i]
    }

    pub fn part(&self, sym: usize, a: &[usize], i: usize) -> ZHom {
        ZHom {
            matrix: self.part_matrix(sym, a, i).clone(),
            domain: self.fibers[a[i]].clone(),
            codomain: self.fibers[self.base.op(sym, a)].clone(),
        }
    }

    /// Same base, same fiber presentations, and every part the same map
    /// (compared through canonical matrices).
    pub fn same_as(&self, other: &AModule) -> bool {
        if self.base != other.base || self.fibers != other.fibers {
            return false;
        }
        let k = self.base.size();
        let sig = self.base.signature();
        (0..sig.len()).all(|s| {
            all_tuples(k, sig.arity(s))
                .iter()
                .all(|a| (0..a.len()).all(|i| self.part(s, a, i).canonical_matrix() == other.part(s, a, i).canonical_matrix()))
        })
    }

    /// Replace one part matrix without any checks (used to build faulty fixtures).
    pub fn with_part_unchecked(&self, sym: usize, a: &[usize], i: usize, m: IntMatrix) -> AModule {
        let mut out = self.clone();
        let k = self.base.size();
        out.parts[sym][tuple_index(k, a)][i] = m;
        out
    }

    /// `ω^M_a(m) = Σ_i ω^M_{a,i}(m_i)`, reduced.
    pub fn apply(&self, sym: usize, a: &[usize], m: &[Vec<Int>]) -> Vec<Int> {
        let target = self.base.op(sym, a);
        let mut acc = vec![Int::zero(); self.fibers[target].rank()];
        for (i, mi) in m.iter().enumerate() {
            let v = self.part_matrix(sym, a, i).apply(mi);
            for (x, y) in acc.iter_mut().zip(v) {
                *x += y;
            }
        }
        self.fibers[target].reduce(&acc)
    }

    pub fn is_finite(&self) -> bool {
        self.fibers.iter().all(FGAbGroup::is_finite)
    }

    /// Base value of `t` at `a` and the unary parts `t^M_{a,i}` for each `i`.
    /// Constants contribute nothing (they sit at the zero of their fiber).
    pub fn term_parts(&self, t: &Term, a: &[usize]) -> (usize, Vec<IntMatrix>) {
        let n = a.len();
        let ranks: Vec<usize> = a.iter().map(|&x| self.fibers[x].rank()).collect();
        t.fold(
            &|j| {
                let r = self.fibers[a[j]].rank();
                let mats: Vec<IntMatrix> = (0..n)
                    .map(|i| if i == j { IntMatrix::identity(r) } else { IntMatrix::zeros(r, ranks[i]) })
                    .collect();
                (a[j], mats)
            },
            &|c| {
                let r = self.fibers[c].rank();
                (c, (0..n).map(|i| IntMatrix::zeros(r, ranks[i])).collect())
            },
            &mut |s, vals| {
                let args: Vec<usize> = vals.iter().map(|v| v.0).collect();
                let target = self.base.op(s, &args);
                let r = self.fibers[target].rank();
                let mut mats: Vec<IntMatrix> = (0..n).map(|i| IntMatrix::zeros(r, ranks[i])).collect();
                for (j, (_, sub)) in vals.iter().enumerate() {
                    let pj = self.part_matrix(s, &args, j);
                    for i in 0..n {
                        mats[i] = mats[i].add(&pj.mul(&sub[i]));
                    }
                }
                (target, mats)
            },
        )
    }

    /// `t^M_a(m)`.
    pub fn t_action(&self, t: &Term, a: &[usize], m: &[Vec<Int>]) -> Result<(usize, Vec<Int>)> {
        if a.len() != m.len() || t.var_bound() > a.len() {
            return Err(Error::ArityMismatch {
                expected: t.var_bound(),
                found: a.len().min(m.len()),
            });
        }
        let (target, mats) = self.term_parts(t, a);
        let mut acc = vec![Int::zero(); self.fibers[target].rank()];
        for (mi, x) in mats.iter().zip(m) {
            for (s, y) in acc.iter_mut().zip(mi.apply(x)) {
                *s += y;
            }
        }
        Ok((target, self.fibers[target].reduce(&acc)))
    }

    /// First identity whose unary parts disagree somewhere.
    pub fn identity_violation(&self, id: &Identity) -> Option<String> {
        let k = self.base.size();
        for a in all_tuples(k, id.arity) {
            let (l, lm) = self.term_parts(&id.lhs, &a);
            let (r, rm) = self.term_parts(&id.rhs, &a);
            if l != r {
                return Some(format!("base tuple {:?} (values differ in A)", self.names(&a)));
            }
            for i in 0..id.arity {
                let dom = &self.fibers[a[i]];
                for j in 0..dom.rank() {
                    if !self.fibers[l].elem_eq(&lm[i].column(j), &rm[i].column(j)) {
                        return Some(format!(
                            "base tuple {:?}, variable x{}, generator {}",
                            self.names(&a),
                            i + 1,
                            j
                        ));
                    }
                }
            }
        }
        None
    }

    fn names(&self, a: &[usize]) -> Vec<String> {
        a.iter().map(|&x| self.base.element_name(x).to_string()).collect()
    }

    /// Totally-in-`V` through unary parts; works for infinite fibers too.
    pub fn check_totally_in(&self, v: &Variety) -> Result<()> {
        if !self.base.signature().same_shape(v.signature()) {
            return Err(Error::SignatureMismatch(format!("module is not over {}", v.name())));
        }
        for id in v.identities() {
            if let Some(w) = self.identity_violation(id) {
                return Err(Error::NotTotallyInV {
                    variety: v.name().to_string(),
                    identity: id.text.clone(),
                    witness: w,
                });
            }
        }
        Ok(())
    }

    pub fn is_totally_in(&self, v: &Variety) -> bool {
        self.check_totally_in(v).is_ok()
    }

    /// Canonical elements of each fiber. Finite fibers only.
    pub fn fiber_elements(&self) -> Result<Vec<Vec<Vec<Int>>>> {
        self.fibers
            .iter()
            .enumerate()
            .map(|(a, g)| {
                g.elements()
                    .map_err(|_| Error::InfiniteFiber(self.base.element_name(a).to_string()))
            })
            .collect()
    }

    /// `A ⋉ M` with projection and zero section.
    pub fn total_algebra(&self) -> Result<TotalAlgebra> {
        let elems = self.fiber_elements()?;
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for (a, es) in elems.iter().enumerate() {
            for (x, e) in es.iter().enumerate() {
                index.insert((a, e.clone()), pairs.len());
                pairs.push((a, x));
            }
        }
        let carrier = pairs
            .iter()
            .map(|&(a, x)| format!("<{},{}>", self.base.element_name(a), fmt_vec(&elems[a][x])))
            .collect();
        let algebra = FinAlgebra::from_fn(
            &format!("{} x| M", self.base.name()),
            self.base.signature().clone(),
            carrier,
            |s, t| {
                let aa: Vec<usize> = t.iter().map(|&k| pairs[k].0).collect();
                let ms: Vec<Vec<Int>> = t.iter().map(|&k| elems[pairs[k].0][pairs[k].1].clone()).collect();
                let target = self.base.op(s, &aa);
                index[&(target, self.apply(s, &aa, &ms))]
            },
        );
        let pi = pairs.iter().map(|p| p.0).collect();
        let iota = (0..self.base.size())
            .map(|a| index[&(a, vec![Int::zero(); self.fibers[a].rank()])])
            .collect();
        Ok(TotalAlgebra {
            algebra,
            pairs,
            pi,
            iota,
        })
    }

    /// Closure of a family of lattices (containing the relations) under all parts.
    pub fn is_submodule(&self, sub: &[Lattice]) -> bool {
        crate::zlinalg::saturate::is_closed(sub, &self.part_maps())
            && sub.iter().zip(&self.fibers).all(|(l, g)| l.contains_lattice(g.relations()))
    }

    /// Every unary part as a component map, in a fixed order.
    pub fn part_maps(&self) -> Vec<crate::zlinalg::ComponentMap> {
        let k = self.base.size();
        let sig = self.base.signature();
        let mut out = Vec::new();
        for s in 0..sig.len() {
            for a in all_tuples(k, sig.arity(s)) {
                let target = self.base.op(s, &a);
                for (i, &ai) in a.iter().enumerate() {
                    out.push(crate::zlinalg::ComponentMap {
                        from: ai,
                        to: target,
                        matrix: self.part_matrix(s, &a, i).clone(),
                    });
                }
            }
        }
        out
    }

    /// Submodule generated by the given elements.
    pub fn generated_submodule(&self, gens: &[(usize, Vec<Int>)]) -> Vec<Lattice> {
        let start = self.fibers.iter().map(|g| g.relations().clone()).collect();
        crate::zlinalg::subgroup_saturate(start, gens, &self.part_maps())
    }

    /// Quotient by a submodule, with the natural map.
    pub fn quotient(&self, sub: &[Lattice]) -> Result<(AModule, ModuleHom)> {
        if !self.is_submodule(sub) {
            return Err(Error::NotCongruence("family is not a submodule".into()));
        }
        let fibers: Vec<FGAbGroup> = self
            .fibers
            .iter()
            .zip(sub)
            .map(|(g, l)| FGAbGroup::new(g.rank(), l.clone()))
            .collect();
        let q = AModule {
            base: self.base.clone(),
            fibers: fibers.clone(),
            parts: self.parts.clone(),
        };
        let nat = ModuleHom {
            maps: self
                .fibers
                .iter()
                .zip(&fibers)
                .map(|(g, h)| ZHom {
                    matrix: IntMatrix::identity(g.rank()),
                    domain: g.clone(),
                    codomain: h.clone(),
                })
                .collect(),
        };
        Ok((q, nat))
    }

    /// All submodules (finite fibers, small groups only).
    pub fn submodules(&self) -> Result<Vec<Vec<Lattice>>> {
        let elems = self.fiber_elements()?;
        // every submodule is generated by its elements; enumerate subgroup families
        let per_fiber: Vec<Vec<Lattice>> = self
            .fibers
            .iter()
            .zip(&elems)
            .map(|(g, es)| subgroups(g, es))
            .collect();
        let sizes: Vec<usize> = per_fiber.iter().map(Vec::len).collect();
        Ok(super::pointed::mixed_tuples(&sizes)
            .into_iter()
            .map(|c| c.iter().enumerate().map(|(a, &j)| per_fiber[a][j].clone()).collect::<Vec<_>>())
            .filter(|f| self.is_submodule(f))
            .collect())
    }

    /// `M` with every part precomposed/postcomposed by fiber isomorphisms
    /// `φ_a` (matrix and inverse), giving an isomorphic module.
    pub fn transport(&self, iso: &[(IntMatrix, IntMatrix)]) -> Result<AModule> {
        AModule::from_fn(self.base.clone(), self.fibers_after(iso), |s, a, i| {
            let target = self.base.op(s, a);
            iso[target].0.mul(self.part_matrix(s, a, i)).mul(&iso[a[i]].1)
        })
    }

    fn fibers_after(&self, iso: &[(IntMatrix, IntMatrix)]) -> Vec<FGAbGroup> {
        self.fibers
            .iter()
            .zip(iso)
            .map(|(g, (f, _))| {
                let rels: Vec<Vec<Int>> = g.relations().basis().iter().map(|r| f.apply(r)).collect();
                FGAbGroup::from_relation_columns(f.rows(), &rels)
            })
            .collect()
    }
}

fn fmt_vec(v: &[Int]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(","))
}

/// All subgroups of a finite group as lattices containing its relations.
pub fn subgroups(g: &FGAbGroup, elems: &[Vec<Int>]) -> Vec<Lattice> {
    let mut found: Vec<Lattice> = vec![g.relations().clone()];
    let mut frontier = found.clone();
    while let Some(l) = frontier.pop() {
        for e in elems {
            let mut m = l.clone();
            if m.insert(e.clone()) && !found.contains(&m) {
                found.push(m.clone());
                frontier.push(m);
            }
        }
    }
    found.sort_by(|a, b| a.basis().cmp(b.basis()));
    found
}

/// Fiberwise group homomorphisms between modules over the same base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub maps: Vec<ZHom>,
}

impl ModuleHom {
    pub fn identity(m: &AModule) -> Self {
        ModuleHom {
            maps: m.fibers.iter().map(ZHom::identity).collect(),
        }
    }

    pub fn zero(src: &AModule, dst: &AModule) -> Self {
        ModuleHom {
            maps: src.fibers.iter().zip(&dst.fibers).map(|(g, h)| ZHom::zero(g, h)).collect(),
        }
    }

    pub fn after(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom {
            maps: self.maps.iter().zip(&first.maps).map(|(g, f)| g.after(f)).collect(),
        }
    }

    pub fn same_map(&self, other: &ModuleHom) -> bool {
        self.maps.len() == other.maps.len() && self.maps.iter().zip(&other.maps).all(|(f, g)| f.same_map(g))
    }

    /// Checks `φ_{ω(a)} ∘ ω^M_{a,i} = ω^{M'}_{a,i} ∘ φ_{a_i}` everywhere.
    pub fn check(&self, src: &AModule, dst: &AModule) -> Result<()> {
        if src.base != dst.base || self.maps.len() != src.base.size() {
            return Err(Error::NotHom("different base algebras".into()));
        }
        let k = src.base.size();
        let sig = src.base.signature();
        for s in 0..sig.len() {
            for a in all_tuples(k, sig.arity(s)) {
                let target = src.base.op(s, &a);
                for i in 0..a.len() {
                    let lhs = self.maps[target].after(&src.part(s, &a, i));
                    let rhs = dst.part(s, &a, i).after(&self.maps[a[i]]);
                    if !lhs.same_map(&rhs) {
                        return Err(Error::NotHom(format!("`{}` at {:?}, part {}", sig.name(s), a, i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(M/ker φ, onto part, one-one part)`.
    pub fn image_factorization(&self, src: &AModule) -> Result<(AModule, ModuleHom, ModuleHom)> {
        let kernels: Vec<Lattice> = self
            .maps
            .iter()
            .map(|f| {
                let (_, inc) = f.kernel();
                let mut l = f.domain.relations().clone();
                for c in inc.matrix.columns() {
                    l.insert(c);
                }
                l
            })
            .collect();
        let (img, onto) = src.quotient(&kernels)?;
        let mono = ModuleHom {
            maps: self
                .maps
                .iter()
                .zip(img.fibers())
                .map(|(f, g)| ZHom {
                    matrix: f.matrix.clone(),
                    domain: g.clone(),
                    codomain: f.codomain.clone(),
                })
                .collect(),
        };
        Ok((img, onto, mono))
    }
}

/// All group homomorphisms between finite presented groups (small only).
pub fn group_homs(src: &FGAbGroup, dst: &FGAbGroup) -> Result<Vec<ZHom>> {
    let targets = dst.elements()?;
    let n = src.rank();
    let mut out = Vec::new();
    let choices = super::pointed::mixed_tuples(&vec![targets.len(); n]);
    for c in choices {
        let cols: Vec<Vec<Int>> = c.iter().map(|&j| targets[j].clone()).collect();
        let m = IntMatrix::from_columns(dst.rank(), &cols);
        if let Ok(h) = ZHom::new(m, src.clone(), dst.clone()) {
            out.push(h);
        }
    }
    Ok(out)
}

/// All module homomorphisms between modules with finite fibers, by backtracking.
pub fn module_homs(src: &AModule, dst: &AModule) -> Result<Vec<ModuleHom>> {
    let k = src.base.size();
    let cands: Vec<Vec<ZHom>> = (0..k)
        .map(|a| group_homs(&src.fibers[a], &dst.fibers[a]))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut cur: Vec<Option<ZHom>> = vec![None; k];
    search(src, dst, &cands, &mut cur, 0, &mut out);
    Ok(out)
}

fn consistent(src: &AModule, dst: &AModule, cur: &[Option<ZHom>]) -> bool {
    let k = src.base.size();
    let sig = src.base.signature();
    for s in 0..sig.len() {
        for a in all_tuples(k, sig.arity(s)) {
            let target = src.base.op(s, &a);
            let Some(ft) = &cur[target] else { continue };
            for i in 0..a.len() {
                let Some(fi) = &cur[a[i]] else { continue };
                if !ft.after(&src.part(s, &a, i)).same_map(&dst.part(s, &a, i).after(fi)) {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    src: &AModule,
    dst: &AModule,
    cands: &[Vec<ZHom>],
    cur: &mut Vec<Option<ZHom>>,
    a: usize,
    out: &mut Vec<ModuleHom>,
) {
    if a == cands.len() {
        out.push(ModuleHom {
            maps: cur.iter().map(|f| f.clone().unwrap()).collect(),
        });
        return;
    }
    for f in &cands[a] {
        cur[a] = Some(f.clone());
        if consistent(src, dst, cur) {
            search(src, dst, cands, cur, a + 1, out);
        }
    }
    cur[a] = None;
}
