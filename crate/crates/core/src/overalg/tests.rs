use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fleet::{ab_module, cyclic_ab, cyclic_group, group_module, s3};
use crate::terms::{enumerate_terms, enumerate_terms_with_constants, Congruence, Term};
use crate::variety::{ab, groups, Variety};
use crate::zlinalg::{FGAbGroup, Int, IntMatrix};

fn c2() -> Arc<crate::terms::FinAlgebra> {
    Arc::new(cyclic_group(2))
}

#[test]
fn beta_star_total_algebra_is_the_square() {
    let a = c2();
    let p = beta_star(a.clone(), &Congruence::top(2)).unwrap();
    assert_eq!(p.fiber_size(0), 2);
    assert_eq!(p.fiber_size(1), 2);
    let total = p.total_algebra();
    assert_eq!(total.algebra.size(), 4);
    assert!(Variety::groups().in_variety(&total.algebra));
    // oracle: C2 × C2 built directly, element (a, a') at a * 2 + a'
    let sq = a.square();
    let to_pair = |k: usize| {
        let (x, i) = total.pairs[k];
        let name = &p.fibers()[x].names[i];
        (0..4).find(|&j| sq.element_name(j) == name).unwrap()
    };
    for x in 0..4 {
        for y in 0..4 {
            let z = total.algebra.op(groups::MUL, &[x, y]);
            assert_eq!(to_pair(z), sq.op(groups::MUL, &[to_pair(x), to_pair(y)]));
        }
    }
    for x in 0..2 {
        assert_eq!(total.pi[total.iota[x]], x);
    }
    assert!(p.is_totally_in(&Variety::groups()));
}

#[test]
fn trivial_total_algebra_is_the_base() {
    let a = Arc::new(s3());
    let p = PointedOveralg::trivial(a.clone());
    let total = p.total_algebra();
    assert_eq!(total.algebra.size(), 6);
    assert!(total.algebra.is_hom_to(&a, &total.pi));
    assert!(p.is_totally_in(&Variety::groups()));
    let not_abelian = Variety::custom("commutative", groups::signature(), &["x1 * x2 = x2 * x1"]).unwrap();
    assert!(!p.is_totally_in(&not_abelian));
}

#[test]
fn p_alpha_beta_fibers() {
    let a = Arc::new(s3());
    let parity = Congruence::from_classes((0..6).map(|g| usize::from(g >= 3)).collect());
    let bottom = Congruence::bottom(6);
    let p = p_alpha_beta(a.clone(), &bottom, &parity).unwrap();
    for x in 0..6 {
        assert_eq!(p.fiber_size(x), 3);
    }
    let q = p_alpha_beta(a.clone(), &parity, &parity).unwrap();
    for x in 0..6 {
        assert_eq!(q.fiber_size(x), 1);
    }
    assert!(p.is_totally_in(&Variety::groups()));
    assert!(matches!(p_alpha_beta(a, &parity, &bottom), Err(crate::Error::Invalid(_))));
}

#[test]
fn split_requires_section() {
    let a = c2();
    let id = vec![0, 1];
    let p = overalg_from_split(a.clone(), &a, &id, &id).unwrap();
    assert_eq!(p.ops(), PointedOveralg::trivial(a.clone()).ops());
    assert_eq!(p.total_size(), 2);
    let bad = vec![0, 0];
    assert!(matches!(
        overalg_from_split(a.clone(), &a, &id, &bad),
        Err(crate::Error::NotHom(_)) | Err(crate::Error::NotSplit(_))
    ));
}

#[test]
fn non_bilinear_module_is_not_totally_abelian() {
    let a = Arc::new(cyclic_ab(2));
    let m = AModule::from_fn(a, vec![FGAbGroup::cyclic(2); 2], |s, _, i| {
        // ⟨a,m⟩ + ⟨b,n⟩ = ⟨a+b, m⟩ forgets the second summand
        if s == ab::ADD && i == 1 {
            IntMatrix::zeros(1, 1)
        } else if s == ab::NEG {
            IntMatrix::scalar(1, -1)
        } else {
            IntMatrix::identity(1)
        }
    })
    .unwrap();
    let err = m.check_totally_in(&Variety::ab()).unwrap_err();
    assert!(matches!(err, crate::Error::NotTotallyInV { .. }));
    let total = m.total_algebra().unwrap();
    assert!(!Variety::ab().in_variety(&total.algebra));
}

#[test]
fn t_action_matches_total_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = Arc::new(s3());
    let sign = |g: usize| IntMatrix::scalar(1, crate::fleet::s3_sign(g));
    let m = group_module(a.clone(), &FGAbGroup::cyclic(3), sign);
    let total = m.total_algebra().unwrap();
    let elems = m.fiber_elements().unwrap();
    let terms = enumerate_terms(a.signature(), 3, 5);
    for _ in 0..100 {
        let t = &terms[rng.gen_range(0..terms.len())];
        let aa: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
        let xs: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
        let ms: Vec<Vec<Int>> = aa.iter().zip(&xs).map(|(&x, &i)| elems[x][i].clone()).collect();
        let (target, v) = m.t_action(t, &aa, &ms).unwrap();
        let args: Vec<usize> = aa
            .iter()
            .zip(&xs)
            .map(|(&x, &i)| total.pairs.iter().position(|&p| p == (x, i)).unwrap())
            .collect();
        let k = total.algebra.eval(t, &args).unwrap();
        let (ta, ti) = total.pairs[k];
        assert_eq!(ta, target);
        assert_eq!(elems[ta][ti], v);
    }
    // the same for a pointed overalgebra
    let parity = Congruence::from_classes((0..6).map(|g| usize::from(g >= 3)).collect());
    let p = beta_star(a, &parity).unwrap();
    let total = p.total_algebra();
    for _ in 0..100 {
        let t = &terms[rng.gen_range(0..terms.len())];
        let aa: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
        let xs: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
        let args: Vec<usize> = aa.iter().zip(&xs).map(|(&x, &i)| total.index_of(x, i)).collect();
        let got = p.t_action(t, &aa, &xs).unwrap();
        assert_eq!(total.pairs[total.algebra.eval(t, &args).unwrap()], got);
    }
}

#[test]
fn action_of_basic_terms() {
    let a = c2();
    let m = group_module(a.clone(), &FGAbGroup::cyclic(4), |g| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 }));
    let one = vec![Int::from(1)];
    assert_eq!(m.t_action(&Term::Var(0), &[1], &[one.clone()]).unwrap(), (1, one.clone()));
    let t = Term::App(groups::MUL, vec![Term::Var(0), Term::Var(1)]);
    let got = m.t_action(&t, &[1, 0], &[one.clone(), one.clone()]).unwrap();
    assert_eq!(got, (1, m.apply(groups::MUL, &[1, 0], &[one.clone(), one.clone()])));
    assert!(matches!(m.t_action(&t, &[1], &[one]), Err(crate::Error::ArityMismatch { .. })));
}

#[test]
fn module_homs_preserve_derived_operations() {
    let a = c2();
    let sign = |g: usize| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 });
    let src = group_module(a.clone(), &FGAbGroup::cyclic(4), sign);
    let dst = group_module(a.clone(), &FGAbGroup::cyclic(2), |_| IntMatrix::identity(1));
    let homs = module_homs(&src, &dst).unwrap();
    // the first part of `*` is the identity, so all fibers carry the same map: reduction mod 2 or zero
    assert_eq!(homs.len(), 2);
    let terms = enumerate_terms(a.signature(), 2, 5);
    let elems = src.fiber_elements().unwrap();
    for phi in &homs {
        phi.check(&src, &dst).unwrap();
        for t in &terms {
            for aa in crate::terms::all_tuples(2, 2) {
                for m0 in &elems[aa[0]] {
                    for m1 in &elems[aa[1]] {
                        let (b, v) = src.t_action(t, &aa, &[m0.clone(), m1.clone()]).unwrap();
                        let img = [phi.maps[aa[0]].apply(m0), phi.maps[aa[1]].apply(m1)];
                        let (b2, w) = dst.t_action(t, &aa, &img).unwrap();
                        assert_eq!(b, b2);
                        assert!(dst.fiber(b).elem_eq(&phi.maps[b].apply(&v), &w));
                    }
                }
            }
        }
    }
}

#[test]
fn module_quotients_and_images() {
    let a = c2();
    let m = group_module(a.clone(), &FGAbGroup::cyclic(4), |g| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 }));
    let subs = m.submodules().unwrap();
    // the first part of `*` ties the fibers together: 0, 2Z/4, Z/4 in both
    assert_eq!(subs.len(), 3);
    let two = m.generated_submodule(&[(0, vec![Int::from(2)])]);
    assert_eq!(two[0].basis(), &[vec![Int::from(2)]]);
    assert_eq!(two[1].basis(), &[vec![Int::from(2)]]);
    let (q, nat) = m.quotient(&two).unwrap();
    nat.check(&m, &q).unwrap();
    assert_eq!(q.fiber(0).order(), Some(Int::from(2)));
    let (img, onto, mono) = nat.image_factorization(&m).unwrap();
    assert!(onto.after(&ModuleHom::identity(&m)).maps.iter().all(|f| f.is_surjective()));
    assert!(mono.maps.iter().all(|f| f.is_injective()));
    assert_eq!(img.fiber(1).order(), Some(Int::from(2)));
    assert!(mono.after(&onto).same_map(&nat));
    let zero = ModuleHom::zero(&m, &q);
    let (img0, _, _) = zero.image_factorization(&m).unwrap();
    assert!(img0.fibers().iter().all(|g| g.is_trivial()));
    let not_closed = vec![crate::zlinalg::Lattice::full(1), m.fiber(1).relations().clone()];
    assert!(!m.is_submodule(&not_closed));
    let odd = crate::zlinalg::Lattice::from_generators(1, [vec![Int::from(3)]]);
    assert!(matches!(m.quotient(&[odd.clone(), odd]), Err(crate::Error::NotCongruence(_))));
}

#[test]
fn lattice_correspondences_on_small_examples() {
    let a = c2();
    let p = beta_star(a.clone(), &Congruence::top(2)).unwrap();
    assert!(lattices::check_con_interval_pointed(&p));
    assert!(lattices::check_con_interval_pointed(&PointedOveralg::trivial(a.clone())));
    let m = group_module(a.clone(), &FGAbGroup::cyclic(2), |_| IntMatrix::identity(1));
    assert!(lattices::check_con_interval_module(&m).unwrap());
    assert!(lattices::check_sub_interval_module(&m).unwrap());
    let m3 = group_module(a.clone(), &FGAbGroup::cyclic(3), |g| IntMatrix::scalar(1, if g == 0 { 1 } else { -1 }));
    assert!(lattices::check_con_interval_module(&m3).unwrap());
    assert!(lattices::check_sub_interval_module(&m3).unwrap());
    let z2 = Arc::new(cyclic_ab(2));
    let n = ab_module(z2, &FGAbGroup::cyclic(3));
    assert!(lattices::check_sub_interval_module(&n).unwrap());
}

#[test]
fn pointed_quotients() {
    let a = c2();
    let p = beta_star(a.clone(), &Congruence::top(2)).unwrap();
    let bottom: Vec<Congruence> = (0..2).map(|_| Congruence::bottom(2)).collect();
    let top: Vec<Congruence> = (0..2).map(|_| Congruence::top(2)).collect();
    let (q, nat) = p.quotient(&bottom).unwrap();
    assert_eq!(q.total_size(), 4);
    nat.check(&p, &q).unwrap();
    let (t, nat) = p.quotient(&top).unwrap();
    assert_eq!(t.total_size(), 2);
    nat.check(&p, &t).unwrap();
    let (img, onto, incl) = nat.image_factorization(&p, &t).unwrap();
    assert_eq!(img.total_size(), 2);
    assert_eq!(incl.after(&onto), nat);
    let mixed = vec![Congruence::top(2), Congruence::bottom(2)];
    assert!(matches!(p.quotient(&mixed), Err(crate::Error::NotCongruence(_))));
}

#[test]
fn free_on_one_generator() {
    let a = c2();
    let v = Variety::groups();
    let u = FreePointed::on_one(&v, a.clone(), 0).unwrap();
    let x = Term::Var(0);
    let g = Term::Const(1);
    let xg = u.apply(groups::MUL, &[x.clone(), g.clone()]).unwrap();
    assert_eq!(u.fiber_of(&xg), 1);
    assert_eq!(u.apply(groups::MUL, &[xg.clone(), g]).unwrap(), x);
    // the basepoint of each fiber is the constant
    assert_eq!(u.basepoint(1).unwrap(), Term::Const(1));
    assert_eq!(u.basepoint(0).unwrap(), Term::Const(0));
    let elems = u.enumerate(3).unwrap();
    assert!(elems.contains(&x) && elems.contains(&xg));
    assert!(matches!(u.materialize(3), Err(crate::Error::NotClosed(3))));
    let custom = Variety::custom("magmas", groups::signature(), &[]).unwrap();
    assert!(matches!(FreePointed::on_one(&custom, a, 0), Err(crate::Error::NoCanonicalizer(_))));
}

#[test]
fn free_on_nothing_is_trivial() {
    let a = c2();
    let v = Variety::groups();
    let f = FreePointed::new(&v, a.clone(), &[vec![], vec![]]).unwrap();
    let (p, members) = f.materialize(5).unwrap();
    // every constant polynomial evaluates inside A: one element per fiber
    assert_eq!(members, vec![vec![Term::Const(0)], vec![Term::Const(1)]]);
    assert_eq!(p.ops(), PointedOveralg::trivial(a.clone()).ops());
    for t in enumerate_terms_with_constants(a.signature(), 0, 2, 4) {
        let c = f.element(&t).unwrap();
        assert_eq!(c, Term::Const(a.eval_mapped(&t, &[], &[0, 1])));
    }
}

#[test]
fn free_extension_is_a_homomorphism() {
    // U_e over C2 into β*: x ↦ (e, g); extension must commute with the operations
    let a = c2();
    let v = Variety::groups();
    let u = FreePointed::on_one(&v, a.clone(), 0).unwrap();
    let target = beta_star(a.clone(), &Congruence::top(2)).unwrap();
    let img = (0..target.fiber_size(0)).find(|&i| i != target.basepoint(0)).unwrap();
    let elems = u.enumerate(4).unwrap();
    for s in elems.iter() {
        for t in elems.iter() {
            let st = u.apply(groups::MUL, &[s.clone(), t.clone()]).unwrap();
            let (fs, vs) = u.extend(&target, &[img], s).unwrap();
            let (ft, vt) = u.extend(&target, &[img], t).unwrap();
            let (fst, vst) = u.extend(&target, &[img], &st).unwrap();
            assert_eq!(fst, a.op(groups::MUL, &[fs, ft]));
            assert_eq!(vst, target.apply(groups::MUL, &[fs, ft], &[vs, vt]));
            // the representative does not matter
            let raw = Term::App(groups::MUL, vec![s.clone(), t.clone()]);
            assert_eq!(u.extend(&target, &[img], &raw).unwrap(), (fst, vst));
        }
    }
    assert_eq!(u.extend(&target, &[img], &Term::Var(0)).unwrap(), (0, img));
}
