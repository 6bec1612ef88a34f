use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{Int, IntMatrix};

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g` and `g >= 0`.
pub fn egcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub(crate) fn pivot_of(v: &[Int]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// A subgroup of ℤⁿ kept in column Hermite normal form: basis vectors sorted by
/// pivot row, pivots positive, and every entry in a pivot row of an earlier
/// vector reduced into `[0, pivot)`. Two lattices are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    #[serde(with = "basis_json")]
    basis: Vec<Vec<Int>>,
}

mod basis_json {
    use super::*;
    use crate::zlinalg::matrix::json_int;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = b.iter().map(|x| json_int::vec_to_value(x)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(|x| json_int::vec_from_value(x).ok_or_else(|| serde::de::Error::custom("bad basis vector")))
            .collect()
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let mut l = Self::zero(dim);
        for i in 0..dim {
            l.basis.push(super::matrix::unit_vec(dim, i));
        }
        l
    }

    pub fn from_generators<I: IntoIterator<Item = Vec<Int>>>(dim: usize, gens: I) -> Self {
        let mut l = Self::zero(dim);
        for g in gens {
            l.insert(g);
        }
        l
    }

    pub fn from_columns(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis as the columns of a `dim × rank` matrix.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.basis)
    }

    fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().map(|b| pivot_of(b).expect("basis vectors are nonzero"))
    }

    /// Adds `v` to the lattice. Returns whether the lattice grew.
    pub fn insert(&mut self, v: Vec<Int>) -> bool {
        assert_eq!(v.len(), self.dim, "lattice dimension");
        let mut v = v;
        let mut changed = false;
        while let Some(p) = pivot_of(&v) {
            let found = self
                .basis
                .binary_search_by_key(&p, |b| pivot_of(b).expect("nonzero basis vector"));
            match found {
                Err(pos) => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.basis.insert(pos, v);
                    changed = true;
                    break;
                }
                Ok(pos) => {
                    let b = &self.basis[pos];
                    let (a, c) = (v[p].clone(), b[p].clone());
                    if a.is_multiple_of(&c) {
                        let q = &a / &c;
                        for (x, y) in v.iter_mut().zip(b) {
                            *x -= &q * y;
                        }
                        continue;
                    }
                    let (g, s, t) = egcd(&a, &c);
                    let (ag, cg) = (&a / &g, &c / &g);
                    let new_b: Vec<Int> = v.iter().zip(b).map(|(x, y)| &s * x + &t * y).collect();
                    let rest: Vec<Int> = v.iter().zip(b).map(|(x, y)| &cg * x - &ag * y).collect();
                    self.basis[pos] = new_b;
                    changed = true;
                    v = rest;
                }
            }
        }
        if changed {
            self.normalize();
        }
        changed
    }

    fn normalize(&mut self) {
        let pivots: Vec<usize> = self.pivots().collect();
        for j in 0..self.basis.len() {
            let p = pivots[j];
            let d = self.basis[j][p].clone();
            for k in 0..j {
                let q = self.basis[k][p].div_floor(&d);
                if !q.is_zero() {
                    let bj = self.basis[j].clone();
                    for (x, y) in self.basis[k].iter_mut().zip(&bj) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.solve(v).is_some()
    }

    /// Coefficients of `v` in the HNF basis, if `v` is in the lattice.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim, "lattice dimension");
        let mut v = v.to_vec();
        let mut coeffs = vec![Int::zero(); self.basis.len()];
        for (j, (b, p)) in self.basis.iter().zip(self.pivots()).enumerate() {
            if let Some(q) = pivot_of(&v) {
                if q < p {
                    return None;
                }
            } else {
                break;
            }
            if v[p].is_zero() {
                continue;
            }
            if !v[p].is_multiple_of(&b[p]) {
                return None;
            }
            let q = &v[p] / &b[p];
            for (x, y) in v.iter_mut().zip(b) {
                *x -= &q * y;
            }
            coeffs[j] = q;
        }
        if pivot_of(&v).is_some() {
            None
        } else {
            Some(coeffs)
        }
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut v = v.to_vec();
        for (b, p) in self.basis.iter().zip(self.pivots()) {
            let q = v[p].div_floor(&b[p]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut out = self.clone();
        for b in &other.basis {
            out.insert(b.clone());
        }
        out
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// Index `[ℤⁿ : L]` when finite.
    pub fn index(&self) -> Option<Int> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.basis.iter().zip(self.pivots()).fold(Int::one(), |acc, (b, p)| acc * &b[p]))
    }

    /// Pivot row and pivot value of each basis vector, in order.
    pub fn pivot_entries(&self) -> Vec<(usize, Int)> {
        self.basis
            .iter()
            .zip(self.pivots())
            .map(|(b, p)| (p, b[p].clone()))
            .collect()
    }
}
