//! Small standard algebras, modules and overalgebras used by the checks.

use std::sync::Arc;

use crate::overalg::{beta_star, AModule, FreePointed, PointedOveralg};
use crate::terms::{Congruence, FinAlgebra};
use crate::variety::{ab, cring, groups, pointed, Variety};
use crate::zlinalg::{FGAbGroup, IntMatrix};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A group from its multiplication on `0..n` with identity `0`.
pub fn group(name: &str, carrier: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> FinAlgebra {
    let n = carrier.len();
    let inv = |a: usize| (0..n).find(|&b| mul(a, b) == 0).expect("group has inverses");
    FinAlgebra::from_fn(name, groups::signature(), carrier, |s, t| match s {
        groups::MUL => mul(t[0], t[1]),
        groups::INV => inv(t[0]),
        _ => 0,
    })
}

/// `C_n` with elements `e, g, g2, …`.
pub fn cyclic_group(n: usize) -> FinAlgebra {
    let carrier = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    group(&format!("C{n}"), carrier, |a, b| (a + b) % n)
}

const S3_PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];

/// The symmetric group on three letters; `r` is a 3-cycle, `s` a transposition.
pub fn s3() -> FinAlgebra {
    let idx = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).unwrap();
    group("S3", names(&["e", "r", "r2", "s", "sr", "sr2"]), |a, b| {
        let (p, q) = (S3_PERMS[a], S3_PERMS[b]);
        idx([p[q[0]], p[q[1]], p[q[2]]])
    })
}

/// Sign of an element of [`s3`].
pub fn s3_sign(a: usize) -> i64 {
    if a < 3 {
        1
    } else {
        -1
    }
}

/// `ℤ/n` as an abelian group.
pub fn cyclic_ab(n: usize) -> FinAlgebra {
    let carrier = (0..n).map(|i| i.to_string()).collect();
    FinAlgebra::from_fn(&format!("Z{n}"), ab::signature(), carrier, |s, t| match s {
        ab::ADD => (t[0] + t[1]) % n,
        ab::NEG => (n - t[0]) % n,
        _ => 0,
    })
}

/// `ℤ/n` as a commutative ring.
pub fn zmod_ring(n: usize) -> FinAlgebra {
    let carrier = (0..n).map(|i| i.to_string()).collect();
    FinAlgebra::from_fn(&format!("Z{n}ring"), cring::signature(), carrier, |s, t| match s {
        cring::ADD => (t[0] + t[1]) % n,
        cring::NEG => (n - t[0]) % n,
        cring::MUL => (t[0] * t[1]) % n,
        cring::ONE => 1 % n,
        _ => 0,
    })
}

/// A pointed set with `n` elements, the point being `*`.
pub fn pointed_set(n: usize) -> FinAlgebra {
    let carrier = (0..n).map(|i| if i == 0 { "*".to_string() } else { format!("p{i}") }).collect();
    FinAlgebra::from_fn(&format!("Pt{n}"), pointed::signature(), carrier, |_, _| 0)
}

/// Module over a group from a representation `ρ` on `N`: the total algebra
/// is `N ⋊ A` with `(m, a)(n, b) = (m + ρ(a)n, ab)`.
pub fn group_module(base: Arc<FinAlgebra>, n: &FGAbGroup, rho: impl Fn(usize) -> IntMatrix) -> AModule {
    let k = base.size();
    let r = n.rank();
    let inv = |a: usize| base.op(groups::INV, &[a]);
    AModule::from_fn(base.clone(), vec![n.clone(); k], |s, a, i| match (s, i) {
        (groups::MUL, 0) => IntMatrix::identity(r),
        (groups::MUL, _) => rho(a[0]),
        _ => rho(inv(a[0])).scale(&crate::zlinalg::Int::from(-1)),
    })
    .expect("representation gives a module")
}

/// Module over an abelian group: every part of `+` is the identity.
pub fn ab_module(base: Arc<FinAlgebra>, n: &FGAbGroup) -> AModule {
    let k = base.size();
    let r = n.rank();
    AModule::from_fn(base, vec![n.clone(); k], |s, _, _| {
        if s == ab::NEG {
            IntMatrix::scalar(r, -1)
        } else {
            IntMatrix::identity(r)
        }
    })
    .expect("abelian group module")
}

/// Module over `ℤ/n` as a ring, on an abelian group killed by `n`: the total
/// algebra is `R ⋉ N` with `(a, m)(b, n) = (ab, bm + an)`.
pub fn ring_module(base: Arc<FinAlgebra>, n: &FGAbGroup) -> AModule {
    let k = base.size();
    let r = n.rank();
    AModule::from_fn(base, vec![n.clone(); k], |s, a, i| match s {
        cring::NEG => IntMatrix::scalar(r, -1),
        cring::MUL => IntMatrix::scalar(r, a[1 - i] as i64),
        _ => IntMatrix::identity(r),
    })
    .expect("ring module")
}

/// Module over a pointed set: arbitrary fibers, no parts.
pub fn pointed_module(base: Arc<FinAlgebra>, fibers: Vec<FGAbGroup>) -> AModule {
    AModule::from_fn(base, fibers, |_, _, _| IntMatrix::zeros(0, 0)).expect("pointed set module")
}

/// The same module with fiber `a` presented through the unimodular `u`.
pub fn twisted(m: &AModule, a: usize, u: &IntMatrix, u_inv: &IntMatrix) -> AModule {
    let iso: Vec<(IntMatrix, IntMatrix)> = m
        .fibers()
        .iter()
        .enumerate()
        .map(|(b, g)| {
            if b == a {
                (u.clone(), u_inv.clone())
            } else {
                (IntMatrix::identity(g.rank()), IntMatrix::identity(g.rank()))
            }
        })
        .collect();
    m.transport(&iso).expect("unimodular change of basis")
}

fn rows(r: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>())
}

/// One algebra with its variety and sample modules and overalgebras.
#[derive(Clone, Debug)]
pub struct FleetEntry {
    pub variety: Variety,
    pub algebra: Arc<FinAlgebra>,
    pub modules: Vec<(String, AModule)>,
    pub overalgebras: Vec<(String, PointedOveralg)>,
}

impl FleetEntry {
    fn new(variety: Variety, algebra: Arc<FinAlgebra>) -> Self {
        FleetEntry {
            variety,
            algebra,
            modules: Vec::new(),
            overalgebras: Vec::new(),
        }
    }

    fn module(mut self, name: &str, m: AModule) -> Self {
        self.modules.push((name.to_string(), m));
        self
    }

    fn overalg(mut self, name: &str, p: PointedOveralg) -> Self {
        self.overalgebras.push((name.to_string(), p));
        self
    }

    pub fn name(&self) -> String {
        format!("{}/{}", self.algebra.name(), self.variety.name())
    }
}

fn cyclic(n: i64) -> FGAbGroup {
    FGAbGroup::cyclic(n)
}

fn klein() -> FGAbGroup {
    FGAbGroup::from_orders(&[2, 2])
}

fn trivial_overalg(e: FleetEntry) -> FleetEntry {
    let p = PointedOveralg::trivial(e.algebra.clone());
    e.overalg("trivial", p)
}

fn c2_entry() -> FleetEntry {
    let a = Arc::new(cyclic_group(2));
    let sign = |g: usize| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 });
    let swap = |g: usize| if g == 0 { IntMatrix::identity(2) } else { rows(&[&[0, 1], &[1, 0]]) };
    let top = Congruence::top(2);
    let e = FleetEntry::new(Variety::groups(), a.clone());
    let e = trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module("Z2", group_module(a.clone(), &cyclic(2), |_| IntMatrix::identity(1)))
        .module("Z3", group_module(a.clone(), &cyclic(3), |_| IntMatrix::identity(1)))
        .module("Z3 sign", group_module(a.clone(), &cyclic(3), sign))
        .module("Z4 sign", group_module(a.clone(), &cyclic(4), sign))
        .module("Z2^2 swap", group_module(a.clone(), &klein(), swap))
        .module("Z2^2", group_module(a.clone(), &klein(), |_| IntMatrix::identity(2)));
    let bs = beta_star(e.algebra.clone(), &top).expect("top is a congruence");
    e.overalg("beta* top", bs)
}

fn c3_entry() -> FleetEntry {
    let a = Arc::new(cyclic_group(3));
    let rot = |g: usize| {
        let t = rows(&[&[0, 1], &[1, 1]]);
        (0..g).fold(IntMatrix::identity(2), |acc, _| acc.mul(&t))
    };
    let e = FleetEntry::new(Variety::groups(), a.clone());
    trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module("Z2", group_module(a.clone(), &cyclic(2), |_| IntMatrix::identity(1)))
        .module("Z3", group_module(a.clone(), &cyclic(3), |_| IntMatrix::identity(1)))
        .module("Z4", group_module(a.clone(), &cyclic(4), |_| IntMatrix::identity(1)))
        .module("Z2^2 rotation", group_module(a.clone(), &klein(), rot))
}

fn s3_entry() -> FleetEntry {
    let a = Arc::new(s3());
    let sign = |g: usize| IntMatrix::scalar(1, s3_sign(g));
    // S3 ≅ GL(2, 2) acting on the nonzero vectors (1,0), (0,1), (1,1) like the three letters
    let std = |g: usize| {
        let p = S3_PERMS[g];
        let vecs = [[1i64, 0], [0, 1], [1, 1]];
        let c0 = vecs[p[0]];
        let c1 = vecs[p[1]];
        rows(&[&[c0[0], c1[0]], &[c0[1], c1[1]]])
    };
    let parity = Congruence::from_classes((0..6).map(|g| usize::from(g >= 3)).collect());
    let e = FleetEntry::new(Variety::groups(), a.clone());
    let e = trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module("Z2", group_module(a.clone(), &cyclic(2), |_| IntMatrix::identity(1)))
        .module("Z3", group_module(a.clone(), &cyclic(3), |_| IntMatrix::identity(1)))
        .module("Z3 sign", group_module(a.clone(), &cyclic(3), sign))
        .module("Z4 sign", group_module(a.clone(), &cyclic(4), sign))
        .module("Z2^2 standard", group_module(a.clone(), &klein(), std));
    let bs = beta_star(e.algebra.clone(), &parity).expect("parity is a congruence");
    e.overalg("beta* parity", bs)
}

fn ab_entry(n: usize) -> FleetEntry {
    let a = Arc::new(cyclic_ab(n));
    let e = FleetEntry::new(Variety::ab(), a.clone());
    let z3 = ab_module(a.clone(), &cyclic(3));
    let flip = IntMatrix::scalar(1, -1);
    let e = trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module("Z2", ab_module(a.clone(), &cyclic(2)))
        .module("Z3", z3.clone())
        .module("Z3 twisted", twisted(&z3, 1, &flip, &flip))
        .module("Z4", ab_module(a.clone(), &cyclic(4)))
        .module("Z2^2", ab_module(a.clone(), &klein()));
    let bs = beta_star(e.algebra.clone(), &Congruence::top(n)).expect("top is a congruence");
    e.overalg("beta* top", bs)
}

fn ring_entry(n: usize) -> FleetEntry {
    let a = Arc::new(zmod_ring(n));
    let p = n as i64;
    let e = FleetEntry::new(Variety::cring(), a.clone());
    let plane = ring_module(a.clone(), &FGAbGroup::from_orders(&[p, p]));
    let shear = rows(&[&[1, 1], &[0, 1]]);
    let unshear = rows(&[&[1, -1], &[0, 1]]);
    let line = ring_module(a.clone(), &cyclic(p));
    let flip = IntMatrix::scalar(1, -1);
    trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module(&format!("F{n}"), line.clone())
        .module(&format!("F{n} twisted"), twisted(&line, 1, &flip, &flip))
        .module(&format!("F{n}^2"), plane.clone())
        .module(&format!("F{n}^2 sheared"), twisted(&plane, 1, &shear, &unshear))
}

fn pointed_entry() -> FleetEntry {
    let a = Arc::new(pointed_set(2));
    let e = FleetEntry::new(Variety::pointed_set(), a.clone());
    let free = FreePointed::new(&e.variety, a.clone(), &[vec!["x".into()], vec!["y".into()]])
        .expect("pointed sets have normal forms");
    let (p, _) = free.materialize(1).expect("variables and constants are closed");
    trivial_overalg(e)
        .module("0", AModule::zero(a.clone()))
        .module("Z2,0", pointed_module(a.clone(), vec![cyclic(2), FGAbGroup::zero()]))
        .module("Z2,Z3", pointed_module(a.clone(), vec![cyclic(2), cyclic(3)]))
        .module("Z4,Z2^2", pointed_module(a.clone(), vec![cyclic(4), klein()]))
        .module("0,Z3", pointed_module(a.clone(), vec![FGAbGroup::zero(), cyclic(3)]))
        .overalg("free on x, y", p)
}

/// The default fleet: `C2`, `C3`, `S3` as groups, `ℤ/2`, `ℤ/4` as abelian
/// groups, `ℤ/2`, `ℤ/3` as rings, and a two-element pointed set.
pub fn default_fleet() -> Vec<FleetEntry> {
    vec![
        c2_entry(),
        c3_entry(),
        s3_entry(),
        ab_entry(2),
        ab_entry(4),
        ring_entry(2),
        ring_entry(3),
        pointed_entry(),
    ]
}

/// Entry of the default fleet by algebra name (`C2`, `S3`, `Z2`, `Z3ring`, …).
pub fn entry(name: &str) -> Option<FleetEntry> {
    default_fleet().into_iter().find(|e| e.algebra.name() == name)
}
