//! JSON reports emitted by the command-line tool.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::algebra_to_value;
use crate::modulization::Modulization;
use crate::overalg::TotalAlgebra;
use crate::ringoid::{Envelope, Ringoid, StabilizationStep, ZModule};
use crate::zlinalg::{matrix::json_int, FGAbGroup, Int, IntMatrix, IsoType};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// An integer that serializes as a JSON number when it fits in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JInt(pub Int);

impl Serialize for JInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json_int::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        json_int::deserialize(d).map(JInt)
    }
}

fn jvec(v: &[Int]) -> Vec<JInt> {
    v.iter().cloned().map(JInt).collect()
}

fn unj(v: &[JInt]) -> Vec<Int> {
    v.iter().map(|x| x.0.clone()).collect()
}

/// Smith data of one hom-group: summand orders (`0` for ℤ), an ambient
/// generator of each summand and its name as a combination of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithReport {
    pub orders: Vec<JInt>,
    pub basis: Vec<Vec<JInt>>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub a: String,
    pub b: String,
    pub generators: Vec<String>,
    /// Hermite basis of the relation subgroup, one vector per relation.
    pub relations: Vec<Vec<JInt>>,
    pub iso_type: IsoType,
    pub smith: SmithReport,
}

/// Products of Smith basis elements: `table[i][j]` is the coordinate vector
/// of `e_i e_j` in `_aZ_c` for `e_i ∈ _aZ_b`, `e_j ∈ _bZ_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub a: String,
    pub b: String,
    pub c: String,
    pub table: Vec<Vec<Vec<JInt>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingoidReport {
    pub objects: Vec<String>,
    pub homs: Vec<HomReport>,
    pub composition: Vec<CompositionReport>,
    /// Coordinates of each identity `(x)_b` on the Smith basis of `_bZ_b`.
    pub units: Vec<Vec<JInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub version: String,
    pub algebra: String,
    pub variety: String,
    pub requested_depth: usize,
    pub max_depth: usize,
    pub depth: usize,
    pub stabilized: bool,
    pub history: Vec<StabilizationStep>,
    pub ringoid: RingoidReport,
}

pub fn ringoid_report(r: &Ringoid) -> RingoidReport {
    let k = r.size();
    let objects = r.objects().to_vec();
    let smith = r.smith_form();
    let mut homs = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let h = r.hom(a, b);
            let sb = h.smith();
            homs.push(HomReport {
                a: objects[a].clone(),
                b: objects[b].clone(),
                generators: r.labels(a, b).to_vec(),
                relations: h.relations().basis().iter().map(|v| jvec(v)).collect(),
                iso_type: h.iso_type(),
                smith: SmithReport {
                    orders: jvec(&sb.orders),
                    basis: sb.basis.iter().map(|v| jvec(v)).collect(),
                    labels: smith.labels(a, b).to_vec(),
                },
            });
        }
    }
    let mut composition = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let (n1, n2) = (smith.hom(a, b).rank(), smith.hom(b, c).rank());
                if n1 == 0 || n2 == 0 || smith.hom(a, c).rank() == 0 {
                    continue;
                }
                let table = (0..n1)
                    .map(|i| (0..n2).map(|j| jvec(smith.gen_product(a, b, c, i, j))).collect())
                    .collect();
                composition.push(CompositionReport {
                    a: objects[a].clone(),
                    b: objects[b].clone(),
                    c: objects[c].clone(),
                    table,
                });
            }
        }
    }
    let units = (0..k).map(|b| jvec(smith.unit(b))).collect();
    RingoidReport {
        objects,
        homs,
        composition,
        units,
    }
}

/// The Smith-basis presentation recorded in a report; equal to
/// `smith_form()` of the ringoid it was written from.
pub fn ringoid_from_report(r: &RingoidReport) -> Result<Ringoid> {
    let k = r.objects.len();
    let index = |name: &str| {
        r.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::Invalid(format!("unknown object `{name}`")))
    };
    if r.homs.len() != k * k {
        return Err(Error::Invalid("one hom-group per pair of objects is required".into()));
    }
    let mut homs = vec![FGAbGroup::zero(); k * k];
    let mut labels = vec![Vec::new(); k * k];
    for h in &r.homs {
        let (a, b) = (index(&h.a)?, index(&h.b)?);
        let n = h.smith.orders.len();
        let rels: Vec<Vec<Int>> = h
            .smith
            .orders
            .iter()
            .enumerate()
            .filter(|(_, d)| d.0 != Int::from(0))
            .map(|(i, d)| {
                let mut v = vec![Int::from(0); n];
                v[i] = d.0.clone();
                v
            })
            .collect();
        homs[a * k + b] = FGAbGroup::from_relation_columns(n, &rels);
        labels[a * k + b] = h.smith.labels.clone();
    }
    let mut comp: Vec<Vec<Vec<Vec<Int>>>> = Vec::with_capacity(k * k * k);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let zero = vec![Int::from(0); homs[a * k + c].rank()];
                comp.push(vec![vec![zero; homs[b * k + c].rank()]; homs[a * k + b].rank()]);
            }
        }
    }
    for t in &r.composition {
        let (a, b, c) = (index(&t.a)?, index(&t.b)?, index(&t.c)?);
        let slot = &mut comp[(a * k + b) * k + c];
        if t.table.len() != slot.len() || t.table.iter().any(|row| row.len() != slot[0].len()) {
            return Err(Error::Invalid(format!("composition table ({},{},{}) has the wrong shape", t.a, t.b, t.c)));
        }
        for (i, row) in t.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                slot[i][j] = unj(v);
            }
        }
    }
    let units = r.units.iter().map(|u| unj(u)).collect();
    Ringoid::new(r.objects.clone(), homs, labels, comp, units)
}

pub fn envelope_report(env: &Envelope, requested_depth: usize, max_depth: usize) -> EnvelopeReport {
    EnvelopeReport {
        version: VERSION.to_string(),
        algebra: env.algebra().name().to_string(),
        variety: env.variety().name().to_string(),
        requested_depth,
        max_depth,
        depth: env.depth(),
        stabilized: env.is_stabilized(),
        history: env.history().to_vec(),
        ringoid: ringoid_report(env.ringoid()),
    }
}

pub fn modulize_report(m: &Modulization, variety: &str) -> Value {
    let p = &m.source;
    let base = p.base();
    let fibers: Vec<Value> = (0..base.size())
        .map(|a| {
            let g = m.result.fiber(a);
            let sb = g.smith();
            let eta: Vec<Value> = (0..p.fiber_size(a))
                .map(|x| {
                    let v = m.eta(a, x);
                    json!({
                        "point": p.fibers()[a].names[x],
                        "value": jvec(&v),
                        "smith_coords": jvec(&sb.coords(&v)),
                    })
                })
                .collect();
            json!({
                "element": base.element_name(a),
                "points": p.fibers()[a].names,
                "kernel": m.k[a].basis().iter().map(|v| jvec(v)).collect::<Vec<_>>(),
                "presentation": {
                    "rank": g.rank(),
                    "relations": g.relations().basis().iter().map(|v| jvec(v)).collect::<Vec<_>>(),
                },
                "iso_type": g.iso_type(),
                "eta": eta,
            })
        })
        .collect();
    json!({
        "version": VERSION,
        "algebra": base.name(),
        "variety": variety,
        "fibers": fibers,
    })
}

pub fn zmod_report(z: &ZModule, module_fibers: &[FGAbGroup]) -> Value {
    let r = z.ringoid();
    let k = r.size();
    let mut homs = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let matrices: Vec<IntMatrix> = (0..r.hom(a, b).rank())
                .map(|i| z.matrix(a, b, &r.generator(a, b, i)))
                .collect();
            homs.push(json!({
                "a": r.objects()[a],
                "b": r.objects()[b],
                "generators": matrices,
                "iso_type": r.hom(a, b).iso_type(),
            }));
        }
    }
    json!({
        "version": VERSION,
        "fibers": module_fibers.iter().map(FGAbGroup::iso_type).collect::<Vec<_>>(),
        "homs": homs,
        "ringoid": ringoid_report(r),
    })
}

pub fn total_report(t: &TotalAlgebra, source: &str) -> Value {
    json!({
        "version": VERSION,
        "source": source,
        "algebra": algebra_to_value(&t.algebra),
        "pairs": t.pairs,
        "pi": t.pi,
        "iota": t.iota,
    })
}
