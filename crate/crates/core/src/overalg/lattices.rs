//! Exhaustive checks of the lattice correspondences on small examples.

use super::module::AModule;
use super::pointed::PointedOveralg;
use crate::error::Result;
use crate::terms::{set_partitions, Congruence};
use crate::zlinalg::{Int, Lattice};

/// Congruence of `A ⋉ P` induced by a family of fiber equivalences.
fn lift_pointed(p: &PointedOveralg, gamma: &[Congruence]) -> Congruence {
    let total = p.total_algebra();
    let labels = total
        .pairs
        .iter()
        .map(|&(a, x)| {
            let offset: usize = (0..a).map(|b| p.fiber_size(b)).sum();
            offset + gamma[a].class_of(x)
        })
        .collect();
    Congruence::from_classes(labels)
}

/// Congruences of `alg` lying below `ker π`.
fn below_kernel(alg: &crate::terms::FinAlgebra, pi: &[usize]) -> Vec<Congruence> {
    let ker = Congruence::from_classes(pi.to_vec());
    set_partitions(alg.size())
        .into_iter()
        .map(Congruence::from_classes)
        .filter(|c| c.le(&ker) && alg.is_congruence(c))
        .collect()
}

/// `Con P ≅ [⊥, ker π]` in `Con(A ⋉ P)`: the lift is a bijection that
/// preserves and reflects order.
pub fn check_con_interval_pointed(p: &PointedOveralg) -> bool {
    let cons = p.congruences();
    let total = p.total_algebra();
    let interval = below_kernel(&total.algebra, &total.pi);
    let lifted: Vec<Congruence> = cons.iter().map(|g| lift_pointed(p, g)).collect();
    bijective_and_monotone(&cons, &lifted, &interval, |x, y| {
        x.iter().zip(y).all(|(a, b)| a.le(b))
    })
}

fn bijective_and_monotone<T>(
    src: &[T],
    lifted: &[Congruence],
    interval: &[Congruence],
    le: impl Fn(&T, &T) -> bool,
) -> bool {
    if src.len() != interval.len() {
        return false;
    }
    let mut seen = lifted.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != lifted.len() || !lifted.iter().all(|c| interval.contains(c)) {
        return false;
    }
    for i in 0..src.len() {
        for j in 0..src.len() {
            if le(&src[i], &src[j]) != lifted[i].le(&lifted[j]) {
                return false;
            }
        }
    }
    true
}

fn lattice_le(x: &[Lattice], y: &[Lattice]) -> bool {
    x.iter().zip(y).all(|(a, b)| b.contains_lattice(a))
}

/// `Con M ≅ [⊥, ker π]` in `Con(A ⋉ M)` via `M' ↦ {(⟨a,m⟩, ⟨a,m'⟩) : m − m' ∈ M'}`.
pub fn check_con_interval_module(m: &AModule) -> Result<bool> {
    let subs = m.submodules()?;
    let total = m.total_algebra()?;
    let elems = m.fiber_elements()?;
    let interval = below_kernel(&total.algebra, &total.pi);
    let lifted: Vec<Congruence> = subs
        .iter()
        .map(|sub| {
            let labels = total
                .pairs
                .iter()
                .map(|&(a, x)| {
                    let v = sub[a].reduce(&elems[a][x]);
                    (a, v)
                })
                .collect::<Vec<(usize, Vec<Int>)>>();
            let mut keys = labels.clone();
            keys.sort();
            keys.dedup();
            Congruence::from_classes(labels.iter().map(|l| keys.binary_search(l).unwrap()).collect())
        })
        .collect();
    Ok(bijective_and_monotone(&subs, &lifted, &interval, |x, y| lattice_le(x, y)))
}

/// `Sub M ≅ [ι(A), ⊤]` in `Sub(A ⋉ M)` via `M' ↦ A ⋉ M'`.
pub fn check_sub_interval_module(m: &AModule) -> Result<bool> {
    let subs = m.submodules()?;
    let total = m.total_algebra()?;
    let elems = m.fiber_elements()?;
    let n = total.algebra.size();
    let mut interval = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        if total.iota.iter().all(|&i| mask[i]) && total.algebra.is_subuniverse(&mask) {
            interval.push(mask);
        }
    }
    let lifted: Vec<Vec<bool>> = subs
        .iter()
        .map(|sub| {
            total
                .pairs
                .iter()
                .map(|&(a, x)| sub[a].contains(&elems[a][x]))
                .collect()
        })
        .collect();
    if subs.len() != interval.len() || !lifted.iter().all(|l| interval.contains(l)) {
        return Ok(false);
    }
    let subset = |x: &[bool], y: &[bool]| x.iter().zip(y).all(|(a, b)| !a || *b);
    for i in 0..subs.len() {
        for j in 0..subs.len() {
            if lattice_le(&subs[i], &subs[j]) != subset(&lifted[i], &lifted[j]) {
                return Ok(false);
            }
        }
    }
    let mut uniq = lifted.clone();
    uniq.sort();
    uniq.dedup();
    Ok(uniq.len() == lifted.len())
}
