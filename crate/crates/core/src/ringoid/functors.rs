use serde::Serialize;

use crate::error::{Error, Result};
use crate::overalg::{AModule, ModuleHom};
use crate::terms::{all_tuples, enumerate_terms_with_constants, Term};
use crate::zlinalg::{FGAbGroup, Int, ZHom};

use super::{Envelope, RingoidHom, RingoidModule, ZModule};

fn same_base(env: &Envelope, m: &AModule) -> Result<()> {
    let (a, b) = (env.algebra(), m.base());
    if a.carrier() != b.carrier() || (0..a.signature().len()).any(|s| a.table(s) != b.table(s)) {
        return Err(Error::SignatureMismatch(format!("module is over {}, not {}", b.name(), a.name())));
    }
    m.check_totally_in(env.variety())
}

/// `u^M_{⟨b⟩}` as a map `_bM → _{u(b)}M`.
fn unary_hom(m: &AModule, u: &Term, b: usize) -> ZHom {
    let (a, mut parts) = m.term_parts(u, &[b]);
    ZHom {
        matrix: parts.pop().expect("unary"),
        domain: m.fiber(b).clone(),
        codomain: m.fiber(a).clone(),
    }
}

/// `M` as a left `ℤ[A, V]`-module: `(ℓ)_b` acts as `ℓ^M_{⟨b⟩}`.
pub fn functor_g(env: &Envelope, m: &AModule) -> Result<RingoidModule> {
    same_base(env, m)?;
    let k = env.size();
    let mut actions = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            actions.push(env.generators(a, b).into_iter().map(|l| unary_hom(m, l, b)).collect());
        }
    }
    RingoidModule::new(env.ringoid(), m.fibers().to_vec(), actions)
}

/// The `A`-module of a left `ℤ[A, V]`-module: `ω_{a,i}` acts as
/// `(ω(a_1, …, x, …, a_n))_{a_i}`.
pub fn functor_h(env: &Envelope, n: &RingoidModule) -> Result<AModule> {
    let alg = env.algebra().clone();
    let k = env.size();
    let sig = alg.signature().clone();
    if n.fibers.len() != k {
        return Err(Error::Invalid(format!("{} fibers over {} objects", n.fibers.len(), k)));
    }
    let mut parts = Vec::with_capacity(sig.len());
    for s in 0..sig.len() {
        let mut per = Vec::new();
        for a in all_tuples(k, sig.arity(s)) {
            let target = alg.op(s, &a);
            let mut ps = Vec::with_capacity(a.len());
            for i in 0..a.len() {
                let children = (0..a.len()).map(|j| if j == i { Term::Var(0) } else { Term::Const(a[j]) }).collect();
                let (c, z) = env.class_of(&Term::App(s, children), a[i])?;
                debug_assert_eq!(c, target);
                ps.push(n.action(target, a[i], &z).matrix);
            }
            per.push(ps);
        }
        parts.push(per);
    }
    let m = AModule::new(alg, n.fibers.clone(), parts)?;
    m.check_totally_in(env.variety())?;
    Ok(m)
}

/// `f_M : ℤ[A, V] → Z_M`, `(ℓ)_b ↦ ℓ^M_{⟨b⟩}`, checked to kill every
/// relation, to send each `(ω(a_1, …, x, …, a_n))_{a_i}` to `ω^M_{a,i}`
/// and to be onto.
pub fn canonical_map(env: &Envelope, zm: &ZModule, m: &AModule) -> Result<RingoidHom> {
    same_base(env, m)?;
    let k = env.size();
    let z = env.ringoid();
    let mut maps = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let mut cols = Vec::new();
            for l in env.generators(a, b) {
                let h = unary_hom(m, l, b);
                let c = zm.coords(a, b, &h.matrix).ok_or_else(|| {
                    Error::NotWellDefined(format!("image of a generator of hom({a},{b}) is not in Z_M"))
                })?;
                cols.push(c);
            }
            let target = zm.ringoid().hom(a, b).clone();
            let mat = crate::zlinalg::IntMatrix::from_columns(target.rank(), &cols);
            let f = ZHom::new(mat, z.hom(a, b).clone(), target)
                .map_err(|e| Error::NotWellDefined(format!("f_M on hom({a},{b}): {e}")))?;
            maps.push(f);
        }
    }
    let f = RingoidHom { maps };
    f.check(z, zm.ringoid())?;
    let alg = env.algebra();
    let sig = alg.signature();
    for s in 0..sig.len() {
        for a in all_tuples(k, sig.arity(s)) {
            let target = alg.op(s, &a);
            for i in 0..a.len() {
                let children = (0..a.len()).map(|j| if j == i { Term::Var(0) } else { Term::Const(a[j]) }).collect();
                let (_, cls) = env.class_of(&Term::App(s, children), a[i])?;
                let image = f.map(k, target, a[i]).apply(&cls);
                let part = zm
                    .coords(target, a[i], m.part_matrix(s, &a, i))
                    .ok_or_else(|| Error::Invalid("a part of M is not in Z_M".into()))?;
                if !zm.ringoid().hom(target, a[i]).elem_eq(&image, &part) {
                    return Err(Error::NotWellDefined(format!(
                        "f_M misses part {} of `{}` at {:?}",
                        i + 1,
                        sig.name(s),
                        a
                    )));
                }
            }
        }
    }
    if !f.is_onto() {
        return Err(Error::NotWellDefined("f_M is not onto Z_M".into()));
    }
    Ok(f)
}

/// Outcome of one law of the action battery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ActionLawReport {
    pub checks: Vec<LawCheck>,
}

impl ActionLawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, law: &str, r: std::result::Result<(), String>) {
        let (passed, detail) = match r {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        self.checks.push(LawCheck {
            law: law.to_string(),
            passed,
            detail,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Elements to test a fiber on: all of them when finite, else the generators.
fn probe(g: &FGAbGroup) -> Vec<Vec<Int>> {
    g.elements()
        .unwrap_or_else(|_| (0..g.rank()).map(|i| crate::zlinalg::matrix::unit_vec(g.rank(), i)).collect())
}

fn first_err<T>(it: impl IntoIterator<Item = std::result::Result<(), T>>) -> std::result::Result<(), T> {
    for r in it {
        r?;
    }
    Ok(())
}

/// Laws of the ringoid itself: units, bilinearity and associativity of
/// composition on generators, `(v)_{u(b)} (u)_b = (vu)_b` for unary
/// polynomials of size `≤ sample_size`, and `(a)_b = 0`.
pub fn check_ringoid_laws(env: &Envelope, sample_size: usize) -> Result<ActionLawReport> {
    let z = env.ringoid();
    let k = env.size();
    let alg = env.algebra();
    let mut rep = ActionLawReport::default();

    rep.push(
        "units are neutral",
        first_err((0..k * k).flat_map(|ab| {
            let (a, b) = (ab / k, ab % k);
            (0..z.hom(a, b).rank()).map(move |i| {
                let g = z.generator(a, b, i);
                let ok = z.hom(a, b).elem_eq(&z.compose(a, b, b, &g, z.unit(b)), &g)
                    && z.hom(a, b).elem_eq(&z.compose(a, a, b, z.unit(a), &g), &g);
                if ok {
                    Ok(())
                } else {
                    Err(format!("at {}", z.labels(a, b)[i]))
                }
            })
        })),
    );

    let mut bilinear = Ok(());
    'outer: for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let (r1, r2) = (z.hom(a, b).rank(), z.hom(b, c).rank());
                for i in 0..r1 {
                    for i2 in 0..r1 {
                        let s: Vec<Int> = z.generator(a, b, i).iter().zip(z.generator(a, b, i2)).map(|(x, y)| x + y).collect();
                        for j in 0..r2 {
                            let w = z.generator(b, c, j);
                            let lhs = z.compose(a, b, c, &s, &w);
                            let rhs: Vec<Int> = z
                                .compose_raw(a, b, c, &z.generator(a, b, i), &w)
                                .iter()
                                .zip(z.compose_raw(a, b, c, &z.generator(a, b, i2), &w))
                                .map(|(x, y)| x + y)
                                .collect();
                            if !z.hom(a, c).elem_eq(&lhs, &rhs) {
                                bilinear = Err(format!("({} + {}) {}", z.labels(a, b)[i], z.labels(a, b)[i2], z.labels(b, c)[j]));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push("composition is bilinear", bilinear);

    let sig = alg.signature();
    let names = alg.carrier();
    let samples: Vec<Term> = enumerate_terms_with_constants(sig, 1, k, sample_size)
        .into_iter()
        .filter(|t| t.var_bound() == 1)
        .collect();
    let mut classes = Vec::with_capacity(samples.len());
    for u in &samples {
        let per: Vec<(usize, Vec<Int>)> = (0..k).map(|b| env.class_of(u, b)).collect::<Result<_>>()?;
        classes.push(per);
    }
    let mut prod_law = Ok(());
    'prod: for (iu, u) in samples.iter().enumerate() {
        for (iv, v) in samples.iter().enumerate() {
            let vu = v.substitute(&[u.clone()]);
            for b in 0..k {
                let (ub, zu) = &classes[iu][b];
                let (vub, zv) = &classes[iv][*ub];
                let (a, zvu) = env.class_of(&vu, b)?;
                debug_assert_eq!(a, *vub);
                if !z.hom(a, b).elem_eq(&z.compose(a, *ub, b, zv, zu), &zvu) {
                    prod_law = Err(format!(
                        "v = {}, u = {}, b = {}",
                        v.display(sig, Some(names)),
                        u.display(sig, Some(names)),
                        names[b]
                    ));
                    break 'prod;
                }
            }
        }
    }
    rep.push("(v)_{u(b)} (u)_b = (vu)_b", prod_law);
    rep.push("composition is associative", z.check_associative().map_err(|e| e.to_string()));
    rep.push(
        "(a)_b is zero",
        first_err((0..k * k).map(|ab| {
            let (a, b) = (ab / k, ab % k);
            let (c, v) = env.class_of(&Term::Const(a), b)?;
            if c == a && z.hom(a, b).is_zero_elem(&v) {
                Ok(())
            } else {
                Err(Error::Invalid(format!("({})_{}", names[a], names[b])))
            }
        }))
        .map_err(|e| e.to_string()),
    );
    Ok(rep)
}

/// Laws of the action on one module: `(x)_b m = m`, bilinearity,
/// `(u)_b m = u^M_{⟨b⟩}(m)` for unary polynomials of size `≤ sample_size`,
/// `(z'z)m = z'(zm)`, zeros act as zero, the module axioms, and
/// naturality along each given module homomorphism out of `m`.
pub fn check_action_laws(
    env: &Envelope,
    m: &AModule,
    homs: &[(&AModule, &ModuleHom)],
    sample_size: usize,
) -> Result<ActionLawReport> {
    let mut rep = ActionLawReport::default();
    let g = match functor_g(env, m) {
        Ok(g) => g,
        Err(e) => {
            rep.push("the action is well defined", Err(e.to_string()));
            return Ok(rep);
        }
    };
    rep.push("the action is well defined", Ok(()));
    let z = env.ringoid();
    let k = env.size();
    let alg = env.algebra();
    let (sig, names) = (alg.signature(), alg.carrier());
    let elems: Vec<Vec<Vec<Int>>> = m.fibers().iter().map(probe).collect();

    rep.push(
        "(x)_b m = m",
        first_err((0..k).flat_map(|b| {
            let act = g.action(b, b, z.unit(b));
            let fb = m.fiber(b);
            elems[b]
                .iter()
                .map(move |x| if fb.elem_eq(&act.apply(x), x) { Ok(()) } else { Err(format!("b = {b}, m = {x:?}")) })
                .collect::<Vec<_>>()
        })),
    );

    let mut bilinear = Ok(());
    'bil: for a in 0..k {
        for b in 0..k {
            let acts = &g.actions[a * k + b];
            for (i, h) in acts.iter().enumerate() {
                for (i2, h2) in acts.iter().enumerate() {
                    let mut s = z.generator(a, b, i);
                    s[i2] += 1;
                    let hs = g.action(a, b, &s);
                    for x in &elems[b] {
                        let sum: Vec<Int> = h.apply(x).iter().zip(h2.apply(x)).map(|(p, q)| p + q).collect();
                        if !m.fiber(a).elem_eq(&hs.apply(x), &sum) {
                            bilinear = Err(format!("({} + {}) m at m = {x:?}", z.labels(a, b)[i], z.labels(a, b)[i2]));
                            break 'bil;
                        }
                    }
                    for x in &elems[b] {
                        for y in &elems[b] {
                            let xy: Vec<Int> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                            let lhs = h.apply(&xy);
                            let rhs: Vec<Int> = h.apply(x).iter().zip(h.apply(y)).map(|(p, q)| p + q).collect();
                            if !m.fiber(a).elem_eq(&lhs, &rhs) {
                                bilinear = Err(format!("{} (m + m') at {x:?}, {y:?}", z.labels(a, b)[i]));
                                break 'bil;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push("the action is bilinear", bilinear);

    let mut poly_law = Ok(());
    'poly: for u in enumerate_terms_with_constants(sig, 1, k, sample_size) {
        if u.var_bound() != 1 {
            continue;
        }
        for b in 0..k {
            let (a, cls) = env.class_of(&u, b)?;
            let act = g.action(a, b, &cls);
            for x in &elems[b] {
                let (t, direct) = m.t_action(&u, &[b], &[x.clone()])?;
                if t != a || !m.fiber(a).elem_eq(&act.apply(x), &direct) {
                    poly_law = Err(format!("u = {}, b = {}, m = {x:?}", u.display(sig, Some(names)), names[b]));
                    break 'poly;
                }
            }
        }
    }
    rep.push("(u)_b m = u^M(m)", poly_law);

    let mut assoc = Ok(());
    'assoc: for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for i in 0..z.hom(a, b).rank() {
                    for j in 0..z.hom(b, c).rank() {
                        let zz = g.action(a, c, z.gen_product(a, b, c, i, j));
                        let (hi, hj) = (&g.actions[a * k + b][i], &g.actions[b * k + c][j]);
                        for x in &elems[c] {
                            if !m.fiber(a).elem_eq(&zz.apply(x), &hi.apply(&hj.apply(x))) {
                                assoc = Err(format!("({} {}) m at m = {x:?}", z.labels(a, b)[i], z.labels(b, c)[j]));
                                break 'assoc;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push("(z'z)m = z'(zm)", assoc);

    rep.push(
        "zeros act as zero",
        first_err((0..k * k).map(|ab| {
            let (a, b) = (ab / k, ab % k);
            if g.action(a, b, &z.zero(a, b)).is_zero() {
                Ok(())
            } else {
                Err(format!("hom({a},{b})"))
            }
        })),
    );
    rep.push("M is a left module", g.check(z).map_err(|e| e.to_string()));

    let mut natural = Ok(());
    'nat: for (idx, (dst, phi)) in homs.iter().enumerate() {
        let gd = functor_g(env, dst)?;
        for a in 0..k {
            for b in 0..k {
                for i in 0..z.hom(a, b).rank() {
                    for x in &elems[b] {
                        let lhs = gd.actions[a * k + b][i].apply(&phi.maps[b].apply(x));
                        let rhs = phi.maps[a].apply(&g.actions[a * k + b][i].apply(x));
                        if !dst.fiber(a).elem_eq(&lhs, &rhs) {
                            natural = Err(format!("hom #{idx}, {} at m = {x:?}", z.labels(a, b)[i]));
                            break 'nat;
                        }
                    }
                }
            }
        }
    }
    rep.push("z phi(m) = phi(z m)", natural);
    Ok(rep)
}
