//! Consequences of congruence modularity, checked for groups: every
//! element of a hom-group is a single generator, the difference term is
//! linear, and the `_aZ_a` are isomorphic through unit conjugation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::terms::{enumerate_terms_with_constants, Term};
use crate::variety::{groups, VarietyKind};
use crate::zlinalg::{Int, IntMatrix, ZHom};

use super::Envelope;

fn require_groups(env: &Envelope) -> Result<()> {
    if env.variety().kind() == VarietyKind::Groups {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{} is not the variety of groups", env.variety().name())))
    }
}

fn mul(x: Term, y: Term) -> Term {
    Term::App(groups::MUL, vec![x, y])
}

fn inv(x: Term) -> Term {
    Term::App(groups::INV, vec![x])
}

/// `d(x, y, z) = x y⁻¹ z`.
pub fn difference_term(x: Term, y: Term, z: Term) -> Term {
    mul(mul(x, inv(y)), z)
}

/// A unary polynomial `u` with `(u)_b = z` for `z ∈ _aZ_b`, built from
/// `(u)_b + (w)_b = (d(u, a, w))_b` and `−(u)_b = (a u⁻¹ a)_b`.
pub fn lift_to_generator(env: &Envelope, a: usize, b: usize, z: &[Int]) -> Result<Term> {
    require_groups(env)?;
    let (alg, var) = (env.algebra(), env.variety());
    let ca = Term::Const(a);
    let mut u = ca.clone();
    for (i, c) in z.iter().enumerate() {
        if c.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let mut g = env.generator_term(a, b, i).clone();
        if c.sign() == num_bigint::Sign::Minus {
            g = var.canon(alg, &mul(mul(ca.clone(), inv(g)), ca.clone()))?;
        }
        let n: u64 = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(c))
            .ok_or_else(|| Error::Invalid("coefficient too large".into()))?;
        for _ in 0..n {
            u = var.canon(alg, &difference_term(u, ca.clone(), g.clone()))?;
        }
    }
    Ok(u)
}

/// Every sampled element of every `_aZ_b` (generators, their negatives and
/// `samples` seeded random combinations) is a single `(u)_b`.
pub fn check_single_generators(env: &Envelope, samples: usize, seed: u64) -> Result<usize> {
    require_groups(env)?;
    let k = env.size();
    let z = env.ringoid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for a in 0..k {
        for b in 0..k {
            let r = z.hom(a, b).rank();
            let mut elems = vec![z.zero(a, b)];
            for i in 0..r {
                elems.push(z.generator(a, b, i));
                let mut neg = z.generator(a, b, i);
                neg[i] = Int::from(-1);
                elems.push(neg);
            }
            for _ in 0..samples {
                elems.push((0..r).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect());
            }
            for e in elems {
                let u = lift_to_generator(env, a, b, &e)?;
                let (c, cls) = env.class_of(&u, b)?;
                if c != a || !z.hom(a, b).elem_eq(&cls, &e) {
                    return Err(Error::Invalid(format!("lift of {e:?} in hom({a},{b}) has the wrong class")));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// `(d(u, u', u''))_b = (u)_b − (u')_b + (u'')_b` on `samples` seeded triples
/// of unary polynomials of size `≤ max_size` with a common value at `b`.
pub fn check_difference_term(env: &Envelope, samples: usize, max_size: usize, seed: u64) -> Result<usize> {
    require_groups(env)?;
    let k = env.size();
    let alg = env.algebra();
    let z = env.ringoid();
    let polys: Vec<Term> = enumerate_terms_with_constants(alg.signature(), 1, k, max_size)
        .into_iter()
        .filter(|t| t.var_bound() == 1)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < samples {
        let b = rng.gen_range(0..k);
        let u = &polys[rng.gen_range(0..polys.len())];
        let a = alg.eval(u, &[b])?;
        let same: Vec<&Term> = polys.iter().filter(|t| alg.eval(t, &[b]).ok() == Some(a)).collect();
        let u1 = same[rng.gen_range(0..same.len())];
        let u2 = same[rng.gen_range(0..same.len())];
        let (_, lhs) = env.class_of(&difference_term(u.clone(), u1.clone(), u2.clone()), b)?;
        let (_, x) = env.class_of(u, b)?;
        let (_, y) = env.class_of(u1, b)?;
        let (_, w) = env.class_of(u2, b)?;
        let rhs: Vec<Int> = x.iter().zip(&y).zip(&w).map(|((p, q), r)| p - q + r).collect();
        if !z.hom(a, b).elem_eq(&lhs, &rhs) {
            let (sig, names) = (alg.signature(), alg.carrier());
            return Err(Error::Invalid(format!(
                "d({}, {}, {}) at {}",
                u.display(sig, Some(names)),
                u1.display(sig, Some(names)),
                u2.display(sig, Some(names)),
                names[b]
            )));
        }
        done += 1;
    }
    Ok(done)
}

/// For every `a`, `b`: with `u = x a⁻¹ b` and `v = x b⁻¹ a`, the map
/// `z ↦ (u)_a z (v)_b` is a ring isomorphism `_aZ_a → _bZ_b` with inverse
/// `w ↦ (v)_b w (u)_a`.
pub fn check_unit_conjugation(env: &Envelope) -> Result<()> {
    require_groups(env)?;
    let k = env.size();
    let alg = env.algebra();
    let z = env.ringoid();
    let inverse = |g: usize| alg.op(groups::INV, &[g]);
    for a in 0..k {
        for b in 0..k {
            let u = mul(mul(Term::Var(0), Term::Const(inverse(a))), Term::Const(b));
            let v = mul(mul(Term::Var(0), Term::Const(inverse(b))), Term::Const(a));
            let (ua, zu) = env.class_of(&u, a)?;
            let (vb, zv) = env.class_of(&v, b)?;
            if ua != b || vb != a {
                return Err(Error::Invalid("unit polynomials land in the wrong hom-groups".into()));
            }
            let (vu, zvu) = env.class_of(&v.substitute(&[u.clone()]), a)?;
            if vu != a || !z.hom(a, a).elem_eq(&zvu, z.unit(a)) {
                return Err(Error::Invalid(format!("(v)(u) is not the unit at {}", alg.element_name(a))));
            }
            let conj = |x: usize, y: usize, left: &[Int], right: &[Int]| -> ZHom {
                // w ∈ _xZ_x ↦ left w right ∈ _yZ_y
                let cols: Vec<Vec<Int>> = (0..z.hom(x, x).rank())
                    .map(|i| z.compose_raw(y, x, y, left, &z.compose_raw(x, x, y, &z.generator(x, x, i), right)))
                    .collect();
                ZHom {
                    matrix: IntMatrix::from_columns(z.hom(y, y).rank(), &cols),
                    domain: z.hom(x, x).clone(),
                    codomain: z.hom(y, y).clone(),
                }
            };
            let phi = conj(a, b, &zu, &zv);
            let psi = conj(b, a, &zv, &zu);
            ZHom::new(phi.matrix.clone(), phi.domain.clone(), phi.codomain.clone())?;
            ZHom::new(psi.matrix.clone(), psi.domain.clone(), psi.codomain.clone())?;
            if !psi.after(&phi).same_map(&ZHom::identity(z.hom(a, a)))
                || !phi.after(&psi).same_map(&ZHom::identity(z.hom(b, b)))
            {
                return Err(Error::Invalid(format!(
                    "conjugation between {} and {} is not invertible",
                    alg.element_name(a),
                    alg.element_name(b)
                )));
            }
            if !z.hom(b, b).elem_eq(&phi.apply(z.unit(a)), z.unit(b)) {
                return Err(Error::Invalid("conjugation does not preserve the unit".into()));
            }
            let r = z.hom(a, a).rank();
            for i in 0..r {
                for j in 0..r {
                    let p = z.gen_product(a, a, a, i, j);
                    let lhs = phi.apply(p);
                    let rhs = z.compose(b, b, b, &phi.matrix.column(i), &phi.matrix.column(j));
                    if !z.hom(b, b).elem_eq(&lhs, &rhs) {
                        return Err(Error::Invalid(format!(
                            "conjugation from {} to {} is not multiplicative at {} {}",
                            alg.element_name(a),
                            alg.element_name(b),
                            z.labels(a, a)[i],
                            z.labels(a, a)[j]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
