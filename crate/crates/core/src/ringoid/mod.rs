//! Ringoids presented on finitely many generators per hom-group, their
//! homomorphisms and left modules, and the two ringoids attached to an
//! algebra: `Z_M` inside `End(M)` and the enveloping ringoid.

mod corollaries;
mod envelope;
mod functors;
mod ideal;
mod zm;

#[cfg(test)]
mod tests;

pub use corollaries::{check_difference_term, check_single_generators, check_unit_conjugation, difference_term, lift_to_generator};
pub use envelope::{enveloping_ringoid, minimum_depth, Envelope, StabilizationStep};
pub use functors::{canonical_map, check_action_laws, check_ringoid_laws, functor_g, functor_h, ActionLawReport, LawCheck};
pub use ideal::{compare_j_r, j_lattices, r_lattices, JrComparison};
pub use zm::{z_of_module, z_of_module_presented, ZModule};

use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};

use crate::zlinalg::{matrix::unit_vec, FGAbGroup, Int, IntMatrix, IsoType, Lattice, SmithBasis, ZHom};

/// `2 a - b` style rendering of an integer combination of named generators.
fn combination(names: &[String], v: &[Int]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if !c.abs().is_one() {
            out.push_str(&format!("{} ", c.abs()));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A small additive category on objects `0..k`. `homs[a*k+b]` is `_aX_b`,
/// the maps from `b` to `a`; composition `_aX_b × _bX_c → _aX_c` is given
/// on generator pairs by `comp[(a*k+b)*k+c][i][j]` (unreduced vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ringoid {
    objects: Vec<String>,
    homs: Vec<FGAbGroup>,
    labels: Vec<Vec<String>>,
    comp: Vec<Vec<Vec<Vec<Int>>>>,
    units: Vec<Vec<Int>>,
}

impl Ringoid {
    pub fn new(
        objects: Vec<String>,
        homs: Vec<FGAbGroup>,
        labels: Vec<Vec<String>>,
        comp: Vec<Vec<Vec<Vec<Int>>>>,
        units: Vec<Vec<Int>>,
    ) -> Result<Self> {
        let k = objects.len();
        if homs.len() != k * k || labels.len() != k * k || comp.len() != k * k * k || units.len() != k {
            return Err(Error::Invalid("ringoid tables have the wrong number of entries".into()));
        }
        for (h, l) in homs.iter().zip(&labels) {
            if l.len() != h.rank() {
                return Err(Error::Invalid("one label per generator is required".into()));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let t = &comp[(a * k + b) * k + c];
                    let (r1, r2, r3) = (homs[a * k + b].rank(), homs[b * k + c].rank(), homs[a * k + c].rank());
                    if t.len() != r1 || t.iter().any(|row| row.len() != r2 || row.iter().any(|v| v.len() != r3)) {
                        return Err(Error::Invalid(format!("composition table ({a},{b},{c}) has the wrong shape")));
                    }
                }
            }
        }
        for (b, u) in units.iter().enumerate() {
            if u.len() != homs[b * k + b].rank() {
                return Err(Error::Invalid(format!("unit of object {b} has the wrong length")));
            }
        }
        Ok(Ringoid {
            objects,
            homs,
            labels,
            comp,
            units,
        })
    }

    pub fn size(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn hom(&self, a: usize, b: usize) -> &FGAbGroup {
        &self.homs[a * self.size() + b]
    }

    pub fn homs(&self) -> &[FGAbGroup] {
        &self.homs
    }

    pub fn labels(&self, a: usize, b: usize) -> &[String] {
        &self.labels[a * self.size() + b]
    }

    pub fn unit(&self, b: usize) -> &[Int] {
        &self.units[b]
    }

    pub fn zero(&self, a: usize, b: usize) -> Vec<Int> {
        vec![Int::from(0); self.hom(a, b).rank()]
    }

    pub fn generator(&self, a: usize, b: usize, i: usize) -> Vec<Int> {
        unit_vec(self.hom(a, b).rank(), i)
    }

    /// Product of the `i`th generator of `_aX_b` with the `j`th of `_bX_c`.
    pub fn gen_product(&self, a: usize, b: usize, c: usize, i: usize, j: usize) -> &[Int] {
        let k = self.size();
        &self.comp[(a * k + b) * k + c][i][j]
    }

    /// Bilinear extension of the table, without reduction.
    pub fn compose_raw(&self, a: usize, b: usize, c: usize, z: &[Int], w: &[Int]) -> Vec<Int> {
        let k = self.size();
        let table = &self.comp[(a * k + b) * k + c];
        let mut out = vec![Int::from(0); self.hom(a, c).rank()];
        for (i, zi) in z.iter().enumerate() {
            if zi.sign() == num_bigint::Sign::NoSign {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if wj.sign() == num_bigint::Sign::NoSign {
                    continue;
                }
                let coef = zi * wj;
                for (o, t) in out.iter_mut().zip(&table[i][j]) {
                    if t.sign() != num_bigint::Sign::NoSign {
                        *o += &coef * t;
                    }
                }
            }
        }
        out
    }

    /// `z w` for `z ∈ _aX_b`, `w ∈ _bX_c`, reduced in `_aX_c`.
    pub fn compose(&self, a: usize, b: usize, c: usize, z: &[Int], w: &[Int]) -> Vec<Int> {
        self.hom(a, c).reduce(&self.compose_raw(a, b, c, z, w))
    }

    pub fn iso_types(&self) -> Vec<IsoType> {
        self.homs.iter().map(FGAbGroup::iso_type).collect()
    }

    /// The same ringoid presented on the Smith basis of every hom-group: one
    /// generator per nontrivial cyclic summand, with canonical coordinates in
    /// the composition table and units.
    pub fn smith_form(&self) -> Ringoid {
        let k = self.size();
        let smith: Vec<SmithBasis> = self.homs.iter().map(FGAbGroup::smith).collect();
        let homs = smith
            .iter()
            .map(|sb| {
                let rels: Vec<Vec<Int>> = sb
                    .orders
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| !d.is_zero())
                    .map(|(i, d)| {
                        let mut v = vec![Int::zero(); sb.len()];
                        v[i] = d.clone();
                        v
                    })
                    .collect();
                FGAbGroup::from_relation_columns(sb.len(), &rels)
            })
            .collect();
        let labels = smith
            .iter()
            .zip(&self.labels)
            .map(|(sb, names)| sb.basis.iter().map(|v| combination(names, v)).collect())
            .collect();
        let mut comp = Vec::with_capacity(k * k * k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let (ab, bc, ac) = (&smith[a * k + b], &smith[b * k + c], &smith[a * k + c]);
                    comp.push(
                        ab.basis
                            .iter()
                            .map(|z| {
                                bc.basis
                                    .iter()
                                    .map(|w| ac.coords(&self.compose_raw(a, b, c, z, w)))
                                    .collect()
                            })
                            .collect(),
                    );
                }
            }
        }
        let units = (0..k).map(|b| smith[b * k + b].coords(&self.units[b])).collect();
        Ringoid {
            objects: self.objects.clone(),
            homs,
            labels,
            comp,
            units,
        }
    }

    fn same(&self, a: usize, c: usize, x: &[Int], y: &[Int]) -> bool {
        x == y || self.hom(a, c).elem_eq(x, y)
    }

    /// Composition is well defined on the presentation, the units are
    /// neutral and composition is associative, all on generators.
    pub fn check(&self) -> Result<()> {
        let k = self.size();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let (r1, r2) = (self.hom(a, b).rank(), self.hom(b, c).rank());
                    for rel in self.hom(a, b).relations().basis() {
                        for j in 0..r2 {
                            let p = self.compose_raw(a, b, c, rel, &self.generator(b, c, j));
                            if !self.hom(a, c).is_zero_elem(&p) {
                                return Err(Error::Invalid(format!(
                                    "relation {rel:?} of hom({a},{b}) times {} is not zero",
                                    self.labels(b, c)[j]
                                )));
                            }
                        }
                    }
                    for rel in self.hom(b, c).relations().basis() {
                        for i in 0..r1 {
                            let p = self.compose_raw(a, b, c, &self.generator(a, b, i), rel);
                            if !self.hom(a, c).is_zero_elem(&p) {
                                return Err(Error::Invalid(format!(
                                    "{} times relation {rel:?} of hom({b},{c}) is not zero",
                                    self.labels(a, b)[i]
                                )));
                            }
                        }
                    }
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for i in 0..self.hom(a, b).rank() {
                    let g = self.generator(a, b, i);
                    if !self.same(a, b, &self.compose_raw(a, b, b, &g, self.unit(b)), &g)
                        || !self.same(a, b, &self.compose_raw(a, a, b, self.unit(a), &g), &g)
                    {
                        return Err(Error::Invalid(format!("unit law fails at {}", self.labels(a, b)[i])));
                    }
                }
            }
        }
        self.check_associative()
    }

    pub fn check_associative(&self) -> Result<()> {
        let k = self.size();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        for i in 0..self.hom(a, b).rank() {
                            for j in 0..self.hom(b, c).rank() {
                                let ij = self.gen_product(a, b, c, i, j).to_vec();
                                for l in 0..self.hom(c, d).rank() {
                                    let left = self.compose_raw(a, c, d, &ij, &self.generator(c, d, l));
                                    let jl = self.gen_product(b, c, d, j, l);
                                    let right = self.compose_raw(a, b, d, &self.generator(a, b, i), jl);
                                    if !self.same(a, d, &left, &right) {
                                        return Err(Error::Invalid(format!(
                                            "({} {}) {} differs from {} ({} {})",
                                            self.labels(a, b)[i],
                                            self.labels(b, c)[j],
                                            self.labels(c, d)[l],
                                            self.labels(a, b)[i],
                                            self.labels(b, c)[j],
                                            self.labels(c, d)[l]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// First failure of two-sidedness for a family of subgroups containing
    /// the relations.
    fn ideal_violation(&self, ideal: &[Lattice]) -> Option<String> {
        let k = self.size();
        for a in 0..k {
            for b in 0..k {
                for g in ideal[a * k + b].basis() {
                    for c in 0..k {
                        for j in 0..self.hom(b, c).rank() {
                            let p = self.compose_raw(a, b, c, g, &self.generator(b, c, j));
                            if !ideal[a * k + c].contains(&p) {
                                return Some(format!("{g:?} in hom({a},{b}) times {}", self.labels(b, c)[j]));
                            }
                        }
                        for i in 0..self.hom(c, a).rank() {
                            let p = self.compose_raw(c, a, b, &self.generator(c, a, i), g);
                            if !ideal[c * k + b].contains(&p) {
                                return Some(format!("{} times {g:?} in hom({a},{b})", self.labels(c, a)[i]));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// `X/J` for the ideal generated as subgroups by `gens[a*k+b]`, with `nat J`.
    pub fn quotient(&self, gens: &[Vec<Vec<Int>>]) -> Result<(Ringoid, RingoidHom)> {
        let k = self.size();
        if gens.len() != k * k {
            return Err(Error::Invalid("one generator list per hom-group is required".into()));
        }
        let mut ideal = Vec::with_capacity(k * k);
        for (h, g) in self.homs.iter().zip(gens) {
            let mut l = h.relations().clone();
            for v in g {
                h.check_vec(v)?;
                l.insert(v.clone());
            }
            ideal.push(l);
        }
        if let Some(w) = self.ideal_violation(&ideal) {
            return Err(Error::NotIdeal(w));
        }
        let homs: Vec<FGAbGroup> = self
            .homs
            .iter()
            .zip(ideal)
            .map(|(h, l)| FGAbGroup::new(h.rank(), l))
            .collect();
        let q = Ringoid {
            objects: self.objects.clone(),
            homs,
            labels: self.labels.clone(),
            comp: self.comp.clone(),
            units: self.units.clone(),
        };
        let maps = self
            .homs
            .iter()
            .zip(&q.homs)
            .map(|(h, g)| ZHom {
                matrix: IntMatrix::identity(h.rank()),
                domain: h.clone(),
                codomain: g.clone(),
            })
            .collect();
        Ok((q, RingoidHom { maps }))
    }
}

/// An additive functor that is the identity on objects.
#[derive(Clone, Debug)]
pub struct RingoidHom {
    /// `maps[a*k+b] : _aX_b → _aY_b`.
    pub maps: Vec<ZHom>,
}

impl RingoidHom {
    pub fn map(&self, k: usize, a: usize, b: usize) -> &ZHom {
        &self.maps[a * k + b]
    }

    /// Identities go to identities and products of generators to products.
    pub fn check(&self, src: &Ringoid, dst: &Ringoid) -> Result<()> {
        let k = src.size();
        if dst.size() != k || self.maps.len() != k * k {
            return Err(Error::NotHom("object sets differ".into()));
        }
        for b in 0..k {
            let u = self.map(k, b, b).apply(src.unit(b));
            if !dst.hom(b, b).elem_eq(&u, dst.unit(b)) {
                return Err(Error::NotHom(format!("unit of {} is not preserved", src.objects[b])));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let (fab, fbc, fac) = (self.map(k, a, b), self.map(k, b, c), self.map(k, a, c));
                    for i in 0..src.hom(a, b).rank() {
                        let fi = fab.matrix.column(i);
                        for j in 0..src.hom(b, c).rank() {
                            let lhs = fac.matrix.apply(src.gen_product(a, b, c, i, j));
                            let rhs = dst.compose_raw(a, b, c, &fi, &fbc.matrix.column(j));
                            if !dst.hom(a, c).elem_eq(&lhs, &rhs) {
                                return Err(Error::NotHom(format!(
                                    "product {} {} is not preserved",
                                    src.labels(a, b)[i],
                                    src.labels(b, c)[j]
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_onto(&self) -> bool {
        self.maps.iter().all(ZHom::is_surjective)
    }
}

/// A left module: groups `_aN` and, for each generator of `_aX_b`, its
/// action `_bN → _aN`.
#[derive(Clone, Debug)]
pub struct RingoidModule {
    pub fibers: Vec<FGAbGroup>,
    /// `actions[a*k+b][i]`.
    pub actions: Vec<Vec<ZHom>>,
}

impl RingoidModule {
    pub fn new(x: &Ringoid, fibers: Vec<FGAbGroup>, actions: Vec<Vec<ZHom>>) -> Result<Self> {
        let k = x.size();
        if fibers.len() != k || actions.len() != k * k {
            return Err(Error::Invalid("module tables have the wrong number of entries".into()));
        }
        for a in 0..k {
            for b in 0..k {
                let acts = &actions[a * k + b];
                if acts.len() != x.hom(a, b).rank()
                    || acts.iter().any(|h| h.domain != fibers[b] || h.codomain != fibers[a])
                {
                    return Err(Error::Invalid(format!("actions of hom({a},{b}) do not fit the fibers")));
                }
            }
        }
        let n = RingoidModule { fibers, actions };
        n.check(x)?;
        Ok(n)
    }

    pub fn zero(x: &Ringoid) -> Self {
        let k = x.size();
        let z = FGAbGroup::zero();
        let actions = (0..k * k).map(|ab| vec![ZHom::zero(&z, &z); x.homs[ab].rank()]).collect();
        let fibers = vec![z; k];
        RingoidModule { fibers, actions }
    }

    /// The map `m ↦ z m` for `z ∈ _aX_b`.
    pub fn action(&self, a: usize, b: usize, z: &[Int]) -> ZHom {
        let k = self.fibers.len();
        let mut m = IntMatrix::zeros(self.fibers[a].rank(), self.fibers[b].rank());
        for (zi, h) in z.iter().zip(&self.actions[a * k + b]) {
            if zi.sign() != num_bigint::Sign::NoSign {
                m = m.add(&h.matrix.scale(zi));
            }
        }
        ZHom {
            matrix: m,
            domain: self.fibers[b].clone(),
            codomain: self.fibers[a].clone(),
        }
    }

    pub fn act(&self, a: usize, b: usize, z: &[Int], m: &[Int]) -> Vec<Int> {
        self.action(a, b, z).apply(m)
    }

    /// Relations act as zero, units as identities, and products of
    /// generators as composites.
    pub fn check(&self, x: &Ringoid) -> Result<()> {
        let k = x.size();
        for a in 0..k {
            for b in 0..k {
                for r in x.hom(a, b).relations().basis() {
                    if !self.action(a, b, r).is_zero() {
                        return Err(Error::NotWellDefined(format!("relation {r:?} of hom({a},{b}) acts nontrivially")));
                    }
                }
            }
        }
        for b in 0..k {
            if !self.action(b, b, x.unit(b)).same_map(&ZHom::identity(&self.fibers[b])) {
                return Err(Error::Invalid(format!("unit of {} does not act as the identity", x.objects[b])));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for i in 0..x.hom(a, b).rank() {
                        for j in 0..x.hom(b, c).rank() {
                            let lhs = self.action(a, c, x.gen_product(a, b, c, i, j));
                            let rhs = self.actions[a * k + b][i].after(&self.actions[b * k + c][j]);
                            if !lhs.same_map(&rhs) {
                                return Err(Error::Invalid(format!(
                                    "({} {}) m differs from {} ({} m)",
                                    x.labels(a, b)[i],
                                    x.labels(b, c)[j],
                                    x.labels(a, b)[i],
                                    x.labels(b, c)[j]
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Same fibers and the same action of every generator.
    pub fn same_as(&self, other: &RingoidModule) -> bool {
        self.fibers == other.fibers
            && self.actions.len() == other.actions.len()
            && self
                .actions
                .iter()
                .zip(&other.actions)
                .all(|(x, y)| x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.same_map(q)))
    }
}
