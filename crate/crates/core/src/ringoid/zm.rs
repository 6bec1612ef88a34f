use crate::error::{Error, Result};
use crate::overalg::AModule;
use crate::terms::all_tuples;
use crate::zlinalg::{subgroup_saturate, ComponentMap, FGAbGroup, Int, IntMatrix, Lattice};

use super::Ringoid;

/// `Z_M`: the subringoid of `End(M)` generated by the unary parts of `M`.
///
/// A map `_bM → _aM` is stored as the concatenation of its matrix columns,
/// an element of `ℤ^{r_a r_b}` taken modulo `(relations of _aM)^{r_b}`.
/// `_aZ_b` is presented on the lattice basis of the closure.
#[derive(Clone, Debug)]
pub struct ZModule {
    ringoid: Ringoid,
    ranks: Vec<usize>,
    lattices: Vec<Lattice>,
}

fn encode(m: &IntMatrix) -> Vec<Int> {
    m.columns().into_iter().flatten().collect()
}

fn decode(rows: usize, cols: usize, v: &[Int]) -> IntMatrix {
    let columns: Vec<Vec<Int>> = (0..cols).map(|j| v[j * rows..(j + 1) * rows].to_vec()).collect();
    IntMatrix::from_columns(rows, &columns)
}

/// `I_n ⊗ P`, the action of `h ↦ P h` on encoded maps with `n` columns.
fn left_block(p: &IntMatrix, n: usize) -> IntMatrix {
    let (r, c) = (p.rows(), p.cols());
    let mut cols = Vec::with_capacity(n * c);
    for j in 0..n {
        for i in 0..c {
            let mut v = vec![Int::from(0); n * r];
            for (t, x) in p.column(i).into_iter().enumerate() {
                v[j * r + t] = x;
            }
            cols.push(v);
        }
    }
    IntMatrix::from_columns(n * r, &cols)
}

fn relation_block(g: &FGAbGroup, n: usize) -> Vec<Vec<Int>> {
    let r = g.rank();
    let mut out = Vec::new();
    for j in 0..n {
        for rel in g.relations().basis() {
            let mut v = vec![Int::from(0); n * r];
            v[j * r..(j + 1) * r].clone_from_slice(rel);
            out.push(v);
        }
    }
    out
}

/// `Z_M` for a module with finite fibers.
pub fn z_of_module(m: &AModule) -> Result<ZModule> {
    if let Some(a) = m.fibers().iter().position(|g| !g.is_finite()) {
        return Err(Error::InfiniteFiber(format!(
            "fiber over {} has free rank {}",
            m.base().element_name(a),
            g_free_rank(&m.fibers()[a])
        )));
    }
    z_of_module_presented(m)
}

fn g_free_rank(g: &FGAbGroup) -> usize {
    g.iso_type().free_rank
}

/// `Z_M` as the subgroup lattice generated by the parts, for any module.
/// The closure is computed on lattices and so always terminates, but for
/// infinite fibers the presentation is only of the generated subringoid.
pub fn z_of_module_presented(m: &AModule) -> Result<ZModule> {
    let base = m.base();
    let k = base.size();
    let sig = base.signature();
    let ranks: Vec<usize> = m.fibers().iter().map(FGAbGroup::rank).collect();
    let start: Vec<Lattice> = (0..k * k)
        .map(|ab| {
            let (a, b) = (ab / k, ab % k);
            Lattice::from_generators(ranks[a] * ranks[b], relation_block(m.fiber(a), ranks[b]))
        })
        .collect();
    let seeds: Vec<(usize, Vec<Int>)> = (0..k).map(|a| (a * k + a, encode(&IntMatrix::identity(ranks[a])))).collect();
    let mut maps = Vec::new();
    for s in 0..sig.len() {
        for a in all_tuples(k, sig.arity(s)) {
            let target = base.op(s, &a);
            for (i, &ai) in a.iter().enumerate() {
                let p = m.part_matrix(s, &a, i);
                for b in 0..k {
                    maps.push(ComponentMap {
                        from: ai * k + b,
                        to: target * k + b,
                        matrix: left_block(p, ranks[b]),
                    });
                }
            }
        }
    }
    let lattices = subgroup_saturate(start, &seeds, &maps);

    let mut homs = Vec::with_capacity(k * k);
    let mut labels = Vec::with_capacity(k * k);
    for ab in 0..k * k {
        let (a, b) = (ab / k, ab % k);
        let lat = &lattices[ab];
        let rels: Vec<Vec<Int>> = relation_block(m.fiber(a), ranks[b])
            .iter()
            .map(|r| lat.solve(r).expect("relations lie in the closure"))
            .collect();
        homs.push(FGAbGroup::from_relation_columns(lat.rank(), &rels));
        let (na, nb) = (base.element_name(a), base.element_name(b));
        labels.push((0..lat.rank()).map(|i| format!("s{i}[{na}<-{nb}]")).collect::<Vec<_>>());
    }
    let mut comp = Vec::with_capacity(k * k * k);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let (lab, lbc, lac) = (&lattices[a * k + b], &lattices[b * k + c], &lattices[a * k + c]);
                let table: Vec<Vec<Vec<Int>>> = lab
                    .basis()
                    .iter()
                    .map(|x| {
                        let mx = decode(ranks[a], ranks[b], x);
                        lbc.basis()
                            .iter()
                            .map(|y| {
                                let prod = mx.mul(&decode(ranks[b], ranks[c], y));
                                lac.solve(&encode(&prod)).expect("closure is closed under composition")
                            })
                            .collect()
                    })
                    .collect();
                comp.push(table);
            }
        }
    }
    let units = (0..k)
        .map(|a| {
            lattices[a * k + a]
                .solve(&encode(&IntMatrix::identity(ranks[a])))
                .expect("identity lies in the closure")
        })
        .collect();
    let objects = base.carrier().to_vec();
    let ringoid = Ringoid::new(objects, homs, labels, comp, units)?;
    Ok(ZModule {
        ringoid,
        ranks,
        lattices,
    })
}

impl ZModule {
    pub fn ringoid(&self) -> &Ringoid {
        &self.ringoid
    }

    /// The endomorphism matrix `_bM → _aM` of an element of `_aZ_b`.
    pub fn matrix(&self, a: usize, b: usize, z: &[Int]) -> IntMatrix {
        let k = self.ranks.len();
        let lat = &self.lattices[a * k + b];
        let mut v = vec![Int::from(0); self.ranks[a] * self.ranks[b]];
        for (zi, bi) in z.iter().zip(lat.basis()) {
            crate::zlinalg::matrix::add_scaled(&mut v, bi, zi);
        }
        decode(self.ranks[a], self.ranks[b], &v)
    }

    /// Coordinates of a map `_bM → _aM`, if it lies in `_aZ_b`.
    pub fn coords(&self, a: usize, b: usize, m: &IntMatrix) -> Option<Vec<Int>> {
        let k = self.ranks.len();
        if m.shape() != (self.ranks[a], self.ranks[b]) {
            return None;
        }
        self.lattices[a * k + b].solve(&encode(m))
    }

    /// `{ Σ z m : z ∈ _aZ_b, (b, m) ∈ gens }` together with the relations,
    /// one lattice per fiber.
    pub fn span(&self, m: &AModule, gens: &[(usize, Vec<Int>)]) -> Vec<Lattice> {
        let k = self.ranks.len();
        (0..k)
            .map(|a| {
                let mut l = m.fiber(a).relations().clone();
                for (b, x) in gens {
                    for v in self.lattices[a * k + b].basis() {
                        l.insert(decode(self.ranks[a], self.ranks[*b], v).apply(x));
                    }
                }
                l
            })
            .collect()
    }
}
