use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::terms::{all_tuples, enumerate_terms_with_constants, Term};
use crate::zlinalg::{subgroup_saturate, Int, Lattice};

use super::Envelope;

/// Result of comparing the two descriptions of the relation ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JrComparison {
    pub depth: usize,
    pub r_in_j: bool,
    pub j_in_r: bool,
    /// First generator found outside the other subgroup, if any.
    pub witness: Option<String>,
}

impl JrComparison {
    pub fn equal(&self) -> bool {
        self.r_in_j && self.j_in_r
    }
}

fn nonzero(v: &[Int]) -> bool {
    v.iter().any(|x| x.sign() != num_bigint::Sign::NoSign)
}

/// The subgroups generated by the projected `R_{Π,b}` with arity and size
/// `≤ depth`, closed under composition with translations on the left.
pub fn r_lattices(env: &Envelope, depth: usize) -> Result<Vec<Lattice>> {
    let seeds = env.relation_vectors(depth)?;
    let start = env.relations().iter().map(|l| Lattice::zero(l.dim())).collect();
    Ok(subgroup_saturate(start, &seeds, &env.translation_maps().0))
}

/// The kernels `_aJ_b` of `Ẑ_b → ℳU_b`, computed as the submodule
/// generated by the defects `ω(u_1, …, u_n) − Σ_i ω(a_1, …, u_i, …, a_n)`
/// with `1 + Σ |u_i| ≤ depth`, projected.
pub fn j_lattices(env: &Envelope, depth: usize) -> Result<Vec<Lattice>> {
    let alg = env.algebra();
    let k = env.size();
    let sig = alg.signature();
    let units: Vec<Term> = if depth >= 2 {
        enumerate_terms_with_constants(sig, 1, k, depth - 1)
    } else {
        Vec::new()
    };
    let mut seeds = Vec::new();
    let mut seen = HashSet::new();
    for s in 0..sig.len() {
        let n = sig.arity(s);
        if n == 0 {
            continue;
        }
        for pick in all_tuples(units.len(), n) {
            let us: Vec<&Term> = pick.iter().map(|&i| &units[i]).collect();
            if 1 + us.iter().map(|u| u.size()).sum::<usize>() > depth {
                continue;
            }
            for b in 0..k {
                let a_vals: Vec<usize> = us.iter().map(|u| alg.eval(u, &[b])).collect::<Result<_>>()?;
                let whole = Term::App(s, us.iter().map(|&u| u.clone()).collect());
                let (c, mut v) = env.class_of(&whole, b)?;
                for i in 0..n {
                    let children = (0..n)
                        .map(|j| if j == i { us[j].clone() } else { Term::Const(a_vals[j]) })
                        .collect();
                    let w = env.split_at(&Term::App(s, children), b)?;
                    for (x, y) in v.iter_mut().zip(w) {
                        *x -= y;
                    }
                }
                if nonzero(&v) && seen.insert((c * k + b, v.clone())) {
                    seeds.push((c * k + b, v));
                }
            }
        }
    }
    let start = env.relations().iter().map(|l| Lattice::zero(l.dim())).collect();
    Ok(subgroup_saturate(start, &seeds, &env.translation_maps().0))
}

/// Double inclusion of the two truncated descriptions at the same depth.
pub fn compare_j_r(env: &Envelope, depth: usize) -> Result<JrComparison> {
    let r = r_lattices(env, depth)?;
    let j = j_lattices(env, depth)?;
    let k = env.size();
    let mut witness = None;
    let mut r_in_j = true;
    let mut j_in_r = true;
    for ab in 0..k * k {
        if let Some(v) = r[ab].basis().iter().find(|v| !j[ab].contains(v)) {
            r_in_j = false;
            witness.get_or_insert_with(|| format!("R vector {v:?} in hom({},{}) is not in J", ab / k, ab % k));
        }
        if let Some(v) = j[ab].basis().iter().find(|v| !r[ab].contains(v)) {
            j_in_r = false;
            witness.get_or_insert_with(|| format!("J vector {v:?} in hom({},{}) is not in R", ab / k, ab % k));
        }
    }
    Ok(JrComparison {
        depth,
        r_in_j,
        j_in_r,
        witness,
    })
}
