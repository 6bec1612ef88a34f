use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::terms::{all_tuples, tuple_index, Congruence, FinAlgebra, Term};
use crate::variety::Variety;

/// A finite pointed set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fiber {
    pub names: Vec<String>,
    pub basepoint: usize,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Mixed-radix index of `p` where `p[i] < sizes[i]`.
pub(crate) fn mixed_index(sizes: &[usize], p: &[usize]) -> usize {
    sizes.iter().zip(p).fold(0, |acc, (&k, &x)| acc * k + x)
}

/// All tuples in a product of ranges, lexicographic.
pub(crate) fn mixed_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in sizes {
        let mut next = Vec::with_capacity(out.len() * k);
        for t in &out {
            for x in 0..k {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Pointed `A`-overalgebra with finite fibers.
///
/// `ops[ω][index of a]` is the table of `ω^P_a` over `_{a_1}P × … × _{a_n}P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedOveralg {
    base: Arc<FinAlgebra>,
    fibers: Vec<Fiber>,
    ops: Vec<Vec<Vec<usize>>>,
}

/// `A ⋉ X` with its projection and section.
#[derive(Clone, Debug)]
pub struct TotalAlgebra {
    pub algebra: FinAlgebra,
    /// Element `k` is the pair `pairs[k] = (a, x)`.
    pub pairs: Vec<(usize, usize)>,
    pub pi: Vec<usize>,
    pub iota: Vec<usize>,
}

impl TotalAlgebra {
    pub fn index_of(&self, a: usize, x: usize) -> usize {
        self.pairs.iter().position(|&p| p == (a, x)).expect("pair in total algebra")
    }
}

impl PointedOveralg {
    pub fn new(base: Arc<FinAlgebra>, fibers: Vec<Fiber>, ops: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let k = base.size();
        if fibers.len() != k {
            return Err(Error::Invalid(format!("{} fibers over {} elements", fibers.len(), k)));
        }
        for (a, f) in fibers.iter().enumerate() {
            if f.basepoint >= f.len() {
                return Err(Error::Invalid(format!("fiber over {} has no basepoint", base.element_name(a))));
            }
        }
        let sig = base.signature().clone();
        if ops.len() != sig.len() {
            return Err(Error::SignatureMismatch("one op family per symbol".into()));
        }
        for (s, per) in ops.iter().enumerate() {
            let n = sig.arity(s);
            if per.len() != k.pow(n as u32) {
                return Err(Error::Invalid(format!("`{}` needs a table per base tuple", sig.name(s))));
            }
            for a in all_tuples(k, n) {
                let sizes: Vec<usize> = a.iter().map(|&x| fibers[x].len()).collect();
                let table = &per[tuple_index(k, &a)];
                let target = base.op(s, &a);
                if table.len() != sizes.iter().product::<usize>() {
                    return Err(Error::Invalid(format!("`{}` table at {:?} has wrong size", sig.name(s), a)));
                }
                if table.iter().any(|&v| v >= fibers[target].len()) {
                    return Err(Error::Invalid(format!("`{}` table at {:?} leaves the fiber", sig.name(s), a)));
                }
                let stars: Vec<usize> = a.iter().map(|&x| fibers[x].basepoint).collect();
                if table[mixed_index(&sizes, &stars)] != fibers[target].basepoint {
                    return Err(Error::Invalid(format!(
                        "`{}` at {:?} does not preserve basepoints",
                        sig.name(s),
                        a
                    )));
                }
            }
        }
        Ok(PointedOveralg { base, fibers, ops })
    }

    /// Build from a function `(ω, a, p) ↦ ω^P_a(p)`.
    pub fn from_fn(
        base: Arc<FinAlgebra>,
        fibers: Vec<Fiber>,
        f: impl Fn(usize, &[usize], &[usize]) -> usize,
    ) -> Result<Self> {
        let k = base.size();
        let ops = (0..base.signature().len())
            .map(|s| {
                all_tuples(k, base.signature().arity(s))
                    .iter()
                    .map(|a| {
                        let sizes: Vec<usize> = a.iter().map(|&x| fibers[x].len()).collect();
                        mixed_tuples(&sizes).iter().map(|p| f(s, a, p)).collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(base, fibers, ops)
    }

    /// Every fiber a single basepoint.
    pub fn trivial(base: Arc<FinAlgebra>) -> Self {
        let fibers = (0..base.size())
            .map(|_| Fiber {
                names: vec!["*".into()],
                basepoint: 0,
            })
            .collect();
        Self::from_fn(base, fibers, |_, _, _| 0).expect("trivial overalgebra")
    }

    pub fn base(&self) -> &Arc<FinAlgebra> {
        &self.base
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn fiber_size(&self, a: usize) -> usize {
        self.fibers[a].len()
    }

    pub fn basepoint(&self, a: usize) -> usize {
        self.fibers[a].basepoint
    }

    pub fn ops(&self) -> &[Vec<Vec<usize>>] {
        &self.ops
    }

    /// `ω^P_a(p)`.
    pub fn apply(&self, sym: usize, a: &[usize], p: &[usize]) -> usize {
        let sizes: Vec<usize> = a.iter().map(|&x| self.fibers[x].len()).collect();
        self.ops[sym][tuple_index(self.base.size(), a)][mixed_index(&sizes, p)]
    }

    /// Total number of elements over all fibers.
    pub fn total_size(&self) -> usize {
        self.fibers.iter().map(Fiber::len).sum()
    }

    /// `t^P_a(p)` (with its base value). Constants `c` act as the basepoint of `_cP`.
    pub fn t_action(&self, t: &Term, a: &[usize], p: &[usize]) -> Result<(usize, usize)> {
        if a.len() != p.len() || t.var_bound() > a.len() {
            return Err(Error::ArityMismatch {
                expected: t.var_bound(),
                found: a.len().min(p.len()),
            });
        }
        t.try_fold(
            &|i| Ok((a[i], p[i])),
            &|c| {
                if c < self.base.size() {
                    Ok((c, self.basepoint(c)))
                } else {
                    Err(Error::Invalid(format!("constant #{c}")))
                }
            },
            &mut |s, vals| {
                let (aa, pp): (Vec<usize>, Vec<usize>) = vals.into_iter().unzip();
                Ok((self.base.op(s, &aa), self.apply(s, &aa, &pp)))
            },
        )
    }

    pub fn total_algebra(&self) -> TotalAlgebra {
        let mut pairs = Vec::new();
        for (a, f) in self.fibers.iter().enumerate() {
            for x in 0..f.len() {
                pairs.push((a, x));
            }
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let carrier = pairs
            .iter()
            .map(|&(a, x)| format!("<{},{}>", self.base.element_name(a), self.fibers[a].names[x]))
            .collect();
        let algebra = FinAlgebra::from_fn(
            &format!("{} x| P", self.base.name()),
            self.base.signature().clone(),
            carrier,
            |s, t| {
                let aa: Vec<usize> = t.iter().map(|&k| pairs[k].0).collect();
                let pp: Vec<usize> = t.iter().map(|&k| pairs[k].1).collect();
                index[&(self.base.op(s, &aa), self.apply(s, &aa, &pp))]
            },
        );
        let pi = pairs.iter().map(|p| p.0).collect();
        let iota = (0..self.base.size()).map(|a| index[&(a, self.basepoint(a))]).collect();
        TotalAlgebra {
            algebra,
            pairs,
            pi,
            iota,
        }
    }

    /// Whether `A ⋉ P` lies in `V`; on failure reports the identity and tuple.
    pub fn check_totally_in(&self, v: &Variety) -> Result<()> {
        let total = self.total_algebra();
        match v.violation(&total.algebra) {
            None if total.algebra.signature().same_shape(v.signature()) => Ok(()),
            None => Err(Error::SignatureMismatch(format!("overalgebra is not over {}", v.name()))),
            Some((id, w)) => Err(Error::NotTotallyInV {
                variety: v.name().to_string(),
                identity: id.text.clone(),
                witness: w
                    .iter()
                    .map(|&k| total.algebra.element_name(k).to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
            }),
        }
    }

    pub fn is_totally_in(&self, v: &Variety) -> bool {
        self.check_totally_in(v).is_ok()
    }

    /// Compatible families of fiber equivalences, as a family of partitions.
    pub fn is_congruence(&self, gamma: &[Congruence]) -> bool {
        if gamma.len() != self.fibers.len() {
            return false;
        }
        let k = self.base.size();
        let sig = self.base.signature();
        for s in 0..sig.len() {
            for a in all_tuples(k, sig.arity(s)) {
                let target = self.base.op(s, &a);
                let sizes: Vec<usize> = a.iter().map(|&x| self.fibers[x].len()).collect();
                for p in mixed_tuples(&sizes) {
                    let base = gamma[target].class_of(self.apply(s, &a, &p));
                    for i in 0..p.len() {
                        for y in 0..sizes[i] {
                            if gamma[a[i]].related(p[i], y) {
                                let mut q = p.clone();
                                q[i] = y;
                                if gamma[target].class_of(self.apply(s, &a, &q)) != base {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Quotient by a compatible family of fiber equivalences, with the natural map.
    pub fn quotient(&self, gamma: &[Congruence]) -> Result<(PointedOveralg, PointedHom)> {
        if !self.is_congruence(gamma) {
            return Err(Error::NotCongruence("fiber equivalences are not compatible".into()));
        }
        let blocks: Vec<Vec<Vec<usize>>> = gamma.iter().map(Congruence::blocks).collect();
        let fibers = self
            .fibers
            .iter()
            .enumerate()
            .map(|(a, f)| Fiber {
                names: blocks[a]
                    .iter()
                    .map(|b| {
                        let n: Vec<&str> = b.iter().map(|&x| f.names[x].as_str()).collect();
                        format!("{{{}}}", n.join(","))
                    })
                    .collect(),
                basepoint: gamma[a].class_of(f.basepoint),
            })
            .collect();
        let q = PointedOveralg::from_fn(self.base.clone(), fibers, |s, a, p| {
            let reps: Vec<usize> = a.iter().zip(p).map(|(&x, &c)| blocks[x][c][0]).collect();
            gamma[self.base.op(s, a)].class_of(self.apply(s, a, &reps))
        })?;
        let nat = PointedHom {
            maps: gamma.iter().map(|g| g.labels().to_vec()).collect(),
        };
        Ok((q, nat))
    }

    /// All compatible families of fiber equivalences (small overalgebras only).
    pub fn congruences(&self) -> Vec<Vec<Congruence>> {
        let per_fiber: Vec<Vec<Congruence>> = self
            .fibers
            .iter()
            .map(|f| {
                crate::terms::set_partitions(f.len())
                    .into_iter()
                    .map(Congruence::from_classes)
                    .collect()
            })
            .collect();
        let sizes: Vec<usize> = per_fiber.iter().map(Vec::len).collect();
        mixed_tuples(&sizes)
            .into_iter()
            .map(|choice| choice.iter().enumerate().map(|(a, &c)| per_fiber[a][c].clone()).collect::<Vec<_>>())
            .filter(|g| self.is_congruence(g))
            .collect()
    }
}

/// Fiberwise pointed maps between overalgebras over the same base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedHom {
    pub maps: Vec<Vec<usize>>,
}

impl PointedHom {
    pub fn identity(p: &PointedOveralg) -> Self {
        PointedHom {
            maps: p.fibers.iter().map(|f| (0..f.len()).collect()).collect(),
        }
    }

    pub fn apply(&self, a: usize, x: usize) -> usize {
        self.maps[a][x]
    }

    pub fn after(&self, first: &PointedHom) -> PointedHom {
        PointedHom {
            maps: first
                .maps
                .iter()
                .enumerate()
                .map(|(a, m)| m.iter().map(|&x| self.maps[a][x]).collect())
                .collect(),
        }
    }

    /// Checks pointedness and the homomorphism law on every tuple.
    pub fn check(&self, src: &PointedOveralg, dst: &PointedOveralg) -> Result<()> {
        if src.base != dst.base {
            return Err(Error::NotHom("different base algebras".into()));
        }
        let k = src.base.size();
        for a in 0..k {
            if self.maps[a].len() != src.fiber_size(a) || self.maps[a].iter().any(|&y| y >= dst.fiber_size(a)) {
                return Err(Error::NotHom(format!("map on fiber {a} has the wrong shape")));
            }
            if self.maps[a][src.basepoint(a)] != dst.basepoint(a) {
                return Err(Error::NotHom(format!("basepoint of fiber {a} not preserved")));
            }
        }
        let sig = src.base.signature();
        for s in 0..sig.len() {
            for a in all_tuples(k, sig.arity(s)) {
                let target = src.base.op(s, &a);
                let sizes: Vec<usize> = a.iter().map(|&x| src.fiber_size(x)).collect();
                for p in mixed_tuples(&sizes) {
                    let img: Vec<usize> = a.iter().zip(&p).map(|(&x, &y)| self.maps[x][y]).collect();
                    if self.maps[target][src.apply(s, &a, &p)] != dst.apply(s, &a, &img) {
                        return Err(Error::NotHom(format!("`{}` at {:?}, {:?}", sig.name(s), a, p)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Image factorization: the image overalgebra, the onto part and the inclusion.
    pub fn image_factorization(
        &self,
        src: &PointedOveralg,
        dst: &PointedOveralg,
    ) -> Result<(PointedOveralg, PointedHom, PointedHom)> {
        self.check(src, dst)?;
        let mut images: Vec<Vec<usize>> = self.maps.iter().map(|m| m.clone()).collect();
        for im in &mut images {
            im.sort_unstable();
            im.dedup();
        }
        let fibers = images
            .iter()
            .enumerate()
            .map(|(a, im)| Fiber {
                names: im.iter().map(|&y| dst.fibers[a].names[y].clone()).collect(),
                basepoint: im.iter().position(|&y| y == dst.basepoint(a)).expect("basepoint in image"),
            })
            .collect();
        let img = PointedOveralg::from_fn(src.base.clone(), fibers, |s, a, p| {
            let vals: Vec<usize> = a.iter().zip(p).map(|(&x, &c)| images[x][c]).collect();
            let target = src.base.op(s, a);
            let v = dst.apply(s, a, &vals);
            images[target].iter().position(|&y| y == v).expect("image is closed")
        })?;
        let onto = PointedHom {
            maps: self
                .maps
                .iter()
                .enumerate()
                .map(|(a, m)| m.iter().map(|y| images[a].iter().position(|z| z == y).unwrap()).collect())
                .collect(),
        };
        let incl = PointedHom { maps: images };
        Ok((img, onto, incl))
    }
}

/// `⟦B, π, ι⟧`: fibers `π⁻¹(a)` pointed at `ι(a)`, operations restricted from `B`.
pub fn overalg_from_split(
    base: Arc<FinAlgebra>,
    b: &FinAlgebra,
    pi: &[usize],
    iota: &[usize],
) -> Result<PointedOveralg> {
    if !b.is_hom_to(&base, pi) {
        return Err(Error::NotHom("π is not a homomorphism onto the base".into()));
    }
    if !base.is_hom_to(b, iota) {
        return Err(Error::NotHom("ι is not a homomorphism into B".into()));
    }
    if (0..base.size()).any(|a| pi[iota[a]] != a) {
        return Err(Error::NotSplit("π∘ι is not the identity".into()));
    }
    let members: Vec<Vec<usize>> = (0..base.size())
        .map(|a| (0..b.size()).filter(|&x| pi[x] == a).collect())
        .collect();
    let fibers = members
        .iter()
        .enumerate()
        .map(|(a, m)| Fiber {
            names: m.iter().map(|&x| b.element_name(x).to_string()).collect(),
            basepoint: m.iter().position(|&x| x == iota[a]).expect("ι(a) lies over a"),
        })
        .collect();
    PointedOveralg::from_fn(base.clone(), fibers, |s, a, p| {
        let xs: Vec<usize> = a.iter().zip(p).map(|(&x, &c)| members[x][c]).collect();
        let v = b.op(s, &xs);
        members[base.op(s, a)].iter().position(|&y| y == v).expect("π is a homomorphism")
    })
}

/// `A(β)`, the subalgebra of `A²` on pairs `(a, a')` with `a β a'`, with the
/// pair behind each element, the first projection and the diagonal.
pub fn congruence_algebra(base: &FinAlgebra, beta: &Congruence) -> Result<(FinAlgebra, Vec<(usize, usize)>, Vec<usize>, Vec<usize>)> {
    if !base.is_congruence(beta) {
        return Err(Error::NotCongruence("β is not a congruence".into()));
    }
    let k = base.size();
    let sq = base.square();
    let mask: Vec<bool> = (0..k * k).map(|i| beta.related(i / k, i % k)).collect();
    let (ab, incl) = sq.subalgebra(&format!("{}(β)", base.name()), &mask)?;
    let pairs: Vec<(usize, usize)> = incl.iter().map(|&i| (i / k, i % k)).collect();
    let pi = pairs.iter().map(|p| p.0).collect();
    let iota = (0..k).map(|a| pairs.iter().position(|&p| p == (a, a)).unwrap()).collect();
    Ok((ab, pairs, pi, iota))
}

/// `β* = ⟦A(β), π, ι⟧`.
pub fn beta_star(base: Arc<FinAlgebra>, beta: &Congruence) -> Result<PointedOveralg> {
    let (ab, _, pi, iota) = congruence_algebra(&base, beta)?;
    overalg_from_split(base, &ab, &pi, &iota)
}

/// `P[α, β]` for `α ≤ β`: fibers `{a'/α : a β a'}` pointed at `a/α`.
pub fn p_alpha_beta(base: Arc<FinAlgebra>, alpha: &Congruence, beta: &Congruence) -> Result<PointedOveralg> {
    if !base.is_congruence(alpha) {
        return Err(Error::NotCongruence("α is not a congruence".into()));
    }
    if !alpha.le(beta) {
        return Err(Error::Invalid("α must lie below β".into()));
    }
    let (ab, pairs, pi, iota) = congruence_algebra(&base, beta)?;
    let k = base.size();
    // (a, a') ~ (b, b') iff a = b and a' α b'
    let theta = Congruence::from_classes(pairs.iter().map(|&(a, x)| a * k + alpha.class_of(x)).collect());
    let (q, nat) = ab.quotient(&theta)?;
    let qpi: Vec<usize> = (0..q.size())
        .map(|c| pi[(0..ab.size()).find(|&x| nat[x] == c).unwrap()])
        .collect();
    let qiota: Vec<usize> = iota.iter().map(|&x| nat[x]).collect();
    overalg_from_split(base, &q, &qpi, &qiota)
}
