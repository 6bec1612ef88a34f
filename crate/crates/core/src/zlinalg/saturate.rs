use std::collections::VecDeque;

use super::lattice::Lattice;
use super::matrix::{Int, IntMatrix};

/// A map between two components of an indexed family of free groups.
#[derive(Clone, Debug)]
pub struct ComponentMap {
    pub from: usize,
    pub to: usize,
    pub matrix: IntMatrix,
}

/// Smallest family of subgroups `L_c ⊆ ℤ^{dims[c]}` containing `start[c]`, the
/// seeds, and closed under every map. Worklist is FIFO; a vector is queued
/// only when it enlarged its component.
pub fn subgroup_saturate(start: Vec<Lattice>, seeds: &[(usize, Vec<Int>)], maps: &[ComponentMap]) -> Vec<Lattice> {
    let mut lat = start;
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); lat.len()];
    for (k, m) in maps.iter().enumerate() {
        assert_eq!(m.matrix.cols(), lat[m.from].dim());
        assert_eq!(m.matrix.rows(), lat[m.to].dim());
        by_source[m.from].push(k);
    }
    let mut queue: VecDeque<(usize, Vec<Int>)> = VecDeque::new();
    // Existing generators must also be pushed through the maps.
    for (c, l) in lat.iter().enumerate() {
        for b in l.basis() {
            queue.push_back((c, b.clone()));
        }
    }
    for (c, v) in seeds {
        if lat[*c].insert(v.clone()) {
            queue.push_back((*c, v.clone()));
        }
    }
    while let Some((c, v)) = queue.pop_front() {
        for &k in &by_source[c] {
            let m = &maps[k];
            let w = m.matrix.apply(&v);
            if lat[m.to].insert(w.clone()) {
                queue.push_back((m.to, w));
            }
        }
    }
    lat
}

/// Whether every map sends every basis vector back into the family.
pub fn is_closed(lat: &[Lattice], maps: &[ComponentMap]) -> bool {
    maps.iter()
        .all(|m| lat[m.from].basis().iter().all(|b| lat[m.to].contains(&m.matrix.apply(b))))
}
