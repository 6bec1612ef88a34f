use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::matrix::{is_zero_vec, json_int, unit_vec, zero_vec, Int, IntMatrix};
use super::normal_form::{diagonal, hnf, snf, unimodular_inverse};
use crate::error::{Error, Result};

/// Finitely generated abelian group `ℤⁿ / L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbGroup {
    rank: usize,
    relations: Lattice,
}

/// Free rank and invariant factors (each > 1, dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoType {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl IsoType {
    pub fn new(free_rank: usize, torsion: &[i64]) -> Self {
        IsoType {
            free_rank,
            torsion: torsion.iter().map(|&t| Int::from(t)).collect(),
        }
    }
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        write!(f, "({},[{}])", self.free_rank, t.join(","))
    }
}

impl Serialize for IsoType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "free_rank": self.free_rank,
            "torsion": json_int::vec_to_value(&self.torsion),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsoType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let free_rank = v["free_rank"]
            .as_u64()
            .ok_or_else(|| serde::de::Error::custom("free_rank"))? as usize;
        let torsion = json_int::vec_from_value(&v["torsion"]).ok_or_else(|| serde::de::Error::custom("torsion"))?;
        Ok(IsoType { free_rank, torsion })
    }
}

/// Smith data of a presentation: `x ↦ U x` followed by reduction modulo the
/// invariant factors gives coordinates; `basis` holds an ambient
/// representative of each nontrivial cyclic summand.
#[derive(Clone, Debug)]
pub struct SmithBasis {
    /// Order of each summand, `0` meaning infinite cyclic.
    pub orders: Vec<Int>,
    /// Rows of `U` that survive (trivial summands dropped).
    coord_rows: IntMatrix,
    /// Ambient vectors generating each summand.
    pub basis: Vec<Vec<Int>>,
}

impl SmithBasis {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Coordinates of an ambient vector, reduced into `[0, d)` on torsion summands.
    pub fn coords(&self, v: &[Int]) -> Vec<Int> {
        let mut c = self.coord_rows.apply(v);
        for (x, d) in c.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *x = num_integer::Integer::mod_floor(&*x, d);
            }
        }
        c
    }
}

impl FGAbGroup {
    pub fn new(rank: usize, relations: Lattice) -> Self {
        assert_eq!(relations.dim(), rank);
        FGAbGroup { rank, relations }
    }

    pub fn from_relation_columns(rank: usize, rels: &[Vec<Int>]) -> Self {
        Self::new(rank, Lattice::from_generators(rank, rels.iter().cloned()))
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Lattice::zero(rank))
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `ℤ/k` (`k = 0` gives `ℤ`).
    pub fn cyclic(k: i64) -> Self {
        Self::from_relation_columns(1, &[vec![Int::from(k)]])
    }

    /// Direct sum of cyclic groups of the given orders.
    pub fn from_orders(orders: &[i64]) -> Self {
        let n = orders.len();
        let rels: Vec<Vec<Int>> = orders
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let mut v = zero_vec(n);
                v[i] = Int::from(k);
                v
            })
            .collect();
        Self::from_relation_columns(n, &rels)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        self.relations.reduce(v)
    }

    pub fn is_zero_elem(&self, v: &[Int]) -> bool {
        self.relations.contains(v)
    }

    pub fn elem_eq(&self, v: &[Int], w: &[Int]) -> bool {
        let d: Vec<Int> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        self.is_zero_elem(&d)
    }

    pub fn is_finite(&self) -> bool {
        self.relations.is_full_rank()
    }

    pub fn order(&self) -> Option<Int> {
        self.relations.index()
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_some_and(|o| o.is_one())
    }

    pub fn smith(&self) -> SmithBasis {
        let r = self.relations.matrix();
        let (s, u, _) = snf(&r);
        let d = diagonal(&s);
        let uinv = unimodular_inverse(&u);
        let mut orders = Vec::new();
        let mut rows = Vec::new();
        let mut basis = Vec::new();
        for i in 0..self.rank {
            let di = d.get(i).cloned().unwrap_or_else(Int::zero);
            if di.is_one() {
                continue;
            }
            orders.push(di);
            rows.push(u.row(i).to_vec());
            basis.push(uinv.column(i));
        }
        let coord_rows = if rows.is_empty() {
            IntMatrix::zeros(0, self.rank)
        } else {
            IntMatrix::from_rows(&rows)
        };
        SmithBasis { orders, coord_rows, basis }
    }

    pub fn iso_type(&self) -> IsoType {
        let sb = self.smith();
        let free_rank = sb.orders.iter().filter(|d| d.is_zero()).count();
        let torsion = sb.orders.into_iter().filter(|d| !d.is_zero()).collect();
        IsoType { free_rank, torsion }
    }

    /// Canonical representatives of all elements. Finite groups only.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return Err(Error::InfiniteFiber(format!("group of rank {}", self.rank)));
        }
        let mut bounds = vec![Int::one(); self.rank];
        for (p, d) in self.relations.pivot_entries() {
            bounds[p] = d;
        }
        let mut out = vec![zero_vec(self.rank)];
        for (i, b) in bounds.iter().enumerate() {
            let b = b.to_u64().expect("desk-scale group order");
            let mut next = Vec::with_capacity(out.len() * b as usize);
            for v in &out {
                for k in 0..b {
                    let mut w = v.clone();
                    w[i] = Int::from(k);
                    next.push(w);
                }
            }
            out = next;
        }
        // Canonical reps already (each coordinate is a pivot), but reduce for safety.
        Ok(out.into_iter().map(|v| self.reduce(&v)).collect())
    }

    /// Quotient by the subgroup generated by `gens` (ambient vectors).
    pub fn quotient(&self, gens: &[Vec<Int>]) -> (FGAbGroup, ZHom) {
        let mut l = self.relations.clone();
        for g in gens {
            l.insert(g.clone());
        }
        let q = FGAbGroup::new(self.rank, l);
        let proj = ZHom {
            matrix: IntMatrix::identity(self.rank),
            domain: self.clone(),
            codomain: q.clone(),
        };
        (q, proj)
    }

    /// Quotient by a subgroup given as a lattice containing the relations.
    pub fn quotient_by_lattice(&self, sub: &Lattice) -> (FGAbGroup, ZHom) {
        self.quotient(sub.basis())
    }

    pub fn direct_sum(&self, other: &FGAbGroup) -> FGAbGroup {
        let n = self.rank + other.rank;
        let mut gens = Vec::new();
        for b in self.relations.basis() {
            let mut v = b.clone();
            v.extend(zero_vec(other.rank));
            gens.push(v);
        }
        for b in other.relations.basis() {
            let mut v = zero_vec(self.rank);
            v.extend(b.iter().cloned());
            gens.push(v);
        }
        FGAbGroup::from_relation_columns(n, &gens)
    }
}

/// Integer kernel of a matrix as a lattice basis (columns).
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let (h, u) = hnf(m);
    let mut gens = Vec::new();
    for j in 0..h.cols() {
        if is_zero_vec(&h.column(j)) {
            gens.push(u.column(j));
        }
    }
    Lattice::from_generators(m.cols(), gens)
}

/// Group homomorphism `ℤⁿ/R → ℤᵐ/R'` given by an `m × n` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZHom {
    pub matrix: IntMatrix,
    pub domain: FGAbGroup,
    pub codomain: FGAbGroup,
}

impl ZHom {
    pub fn new(matrix: IntMatrix, domain: FGAbGroup, codomain: FGAbGroup) -> Result<Self> {
        if matrix.shape() != (codomain.rank, domain.rank) {
            return Err(Error::IllDefinedHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.rank,
                domain.rank
            )));
        }
        let h = ZHom { matrix, domain, codomain };
        if let Some(r) = h.domain.relations.basis().iter().find(|r| !h.codomain.is_zero_elem(&h.matrix.apply(r))) {
            return Err(Error::IllDefinedHom(format!("relation {:?} does not map to zero", r)));
        }
        Ok(h)
    }

    pub fn identity(g: &FGAbGroup) -> Self {
        ZHom {
            matrix: IntMatrix::identity(g.rank),
            domain: g.clone(),
            codomain: g.clone(),
        }
    }

    pub fn zero(domain: &FGAbGroup, codomain: &FGAbGroup) -> Self {
        ZHom {
            matrix: IntMatrix::zeros(codomain.rank, domain.rank),
            domain: domain.clone(),
            codomain: codomain.clone(),
        }
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        self.codomain.reduce(&self.matrix.apply(v))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ZHom) -> ZHom {
        ZHom {
            matrix: self.matrix.mul(&first.matrix),
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.domain.rank).all(|j| self.codomain.is_zero_elem(&self.matrix.column(j)))
    }

    /// Equality as maps of groups.
    pub fn same_map(&self, other: &ZHom) -> bool {
        self.matrix.shape() == other.matrix.shape()
            && (0..self.domain.rank)
                .all(|j| self.codomain.elem_eq(&self.matrix.column(j), &other.matrix.column(j)))
    }

    /// Matrix with every column reduced modulo the codomain relations.
    pub fn canonical_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (0..self.domain.rank)
            .map(|j| self.codomain.reduce(&self.matrix.column(j)))
            .collect();
        IntMatrix::from_columns(self.codomain.rank, &cols)
    }

    /// Kernel as a presented group together with its inclusion.
    pub fn kernel(&self) -> (FGAbGroup, ZHom) {
        let n = self.domain.rank;
        let rc = self.codomain.relations.matrix();
        let stacked = self.matrix.hstack(&rc);
        let k = integer_kernel(&stacked);
        let mut kl = Lattice::zero(n);
        for v in k.basis() {
            kl.insert(v[..n].to_vec());
        }
        for r in self.domain.relations.basis() {
            kl.insert(r.clone());
        }
        let basis: Vec<Vec<Int>> = kl.basis().to_vec();
        let s = basis.len();
        let rels: Vec<Vec<Int>> = self
            .domain
            .relations
            .basis()
            .iter()
            .map(|r| kl.solve(r).expect("relations lie in the kernel"))
            .collect();
        let kg = FGAbGroup::from_relation_columns(s, &rels);
        let inc = ZHom {
            matrix: IntMatrix::from_columns(n, &basis),
            domain: kg.clone(),
            codomain: self.domain.clone(),
        };
        (kg, inc)
    }

    /// Image as a lattice in the codomain's ambient space (relations included).
    pub fn image_lattice(&self) -> Lattice {
        let mut l = self.codomain.relations.clone();
        for c in self.matrix.columns() {
            l.insert(c);
        }
        l
    }

    pub fn cokernel(&self) -> (FGAbGroup, ZHom) {
        self.codomain.quotient(&self.matrix.columns())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        let img = self.image_lattice();
        (0..self.codomain.rank).all(|i| img.contains(&unit_vec(self.codomain.rank, i)))
    }
}

impl FGAbGroup {
    /// Whether `v` lies in ℤⁿ at all (sanity for user data).
    pub fn check_vec(&self, v: &[Int]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Canonical representative with nonnegative entries on pivots.
    pub fn normalize_sign(&self, v: &[Int]) -> Vec<Int> {
        let r = self.reduce(v);
        debug_assert!(self.relations.pivot_entries().iter().all(|(p, _)| !r[*p].is_negative()));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::matrix::int_vec;

    fn times(k: i64) -> IntMatrix {
        IntMatrix::from_rows(&[vec![k]])
    }

    #[test]
    fn kernel_examples() {
        let z = FGAbGroup::free(1);
        let f = ZHom::new(times(2), z.clone(), z.clone()).unwrap();
        assert!(f.kernel().0.is_trivial());
        let z2 = FGAbGroup::cyclic(2);
        let g = ZHom::new(times(1), z.clone(), z2).unwrap();
        let (k, inc) = g.kernel();
        assert_eq!(k.iso_type(), IsoType::new(1, &[]));
        assert_eq!(inc.matrix, times(2));
        assert!(g.after(&inc).is_zero());
        let id = ZHom::identity(&FGAbGroup::from_orders(&[2, 0]));
        assert!(id.kernel().0.is_trivial());
    }

    #[test]
    fn cokernel_examples() {
        let z = FGAbGroup::free(1);
        let f = ZHom::new(times(2), z.clone(), z.clone()).unwrap();
        assert_eq!(f.cokernel().0.iso_type(), IsoType::new(0, &[2]));
        assert!(ZHom::identity(&z).cokernel().0.is_trivial());
        let g = FGAbGroup::from_orders(&[4, 0]);
        let zero = ZHom::zero(&FGAbGroup::zero(), &g);
        assert_eq!(zero.cokernel().0.iso_type(), g.iso_type());
    }

    #[test]
    fn iso_type_examples() {
        let g = FGAbGroup::from_relation_columns(2, &[int_vec(&[2, 0])]);
        assert_eq!(g.iso_type(), IsoType::new(1, &[2]));
        assert_eq!(FGAbGroup::free(3).iso_type(), IsoType::new(3, &[]));
        assert_eq!(FGAbGroup::zero().iso_type(), IsoType::new(0, &[]));
        assert_eq!(FGAbGroup::from_orders(&[2, 3]).iso_type(), IsoType::new(0, &[6]));
    }

    #[test]
    fn ill_defined_hom_is_rejected() {
        let z2 = FGAbGroup::cyclic(2);
        let z3 = FGAbGroup::cyclic(3);
        assert!(matches!(ZHom::new(times(1), z2, z3), Err(Error::IllDefinedHom(_))));
    }

    #[test]
    fn elements_of_finite_group() {
        let g = FGAbGroup::from_relation_columns(2, &[int_vec(&[2, 1]), int_vec(&[0, 3])]);
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 6);
        let sb = g.smith();
        let mut coords: Vec<Vec<Int>> = els.iter().map(|e| sb.coords(e)).collect();
        coords.sort();
        coords.dedup();
        assert_eq!(coords.len(), 6);
    }
}
