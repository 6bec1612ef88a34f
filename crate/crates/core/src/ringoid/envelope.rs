use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyContext;
use crate::terms::{all_tuples, FinAlgebra, Term, TermTable};
use crate::variety::Variety;
use crate::zlinalg::{matrix::unit_vec, subgroup_saturate, ComponentMap, FGAbGroup, Int, IntMatrix, IsoType, Lattice};

use super::Ringoid;

/// Unary closures larger than this are rejected.
const MAX_TRANSLATIONS: usize = 20_000;

/// One round of the stabilization loop: the relation subgroups saturated
/// with seeds of size at most `depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationStep {
    pub depth: usize,
    pub seeds: usize,
    pub iso_types: Vec<IsoType>,
}

/// The enveloping ringoid `ℤ[A, V]` presented on the translations of `A`.
///
/// Generators of `_aẐ_b` are the classes `(ℓ)_b` of the nonconstant
/// unary polynomials `ℓ` reachable from `x` by elementary translations
/// `y ↦ ω(c_1, …, y, …, c_n)`, with `ℓ(b) = a`. Any unary polynomial is
/// reduced onto them by splitting its occurrences of `x` (each split is a
/// relation `R_{Π,b}`), and constants vanish. The relation subgroups are
/// the projected `R_{Π,b}` for `Π` of arity and size at most `depth`,
/// closed under composition with translations on either side.
#[derive(Clone, Debug)]
pub struct Envelope {
    ctx: PolyContext,
    translations: Vec<Term>,
    index: HashMap<Term, usize>,
    /// `values[ℓ][b] = ℓ(b)`.
    values: Vec<Vec<usize>>,
    /// Translations with `ℓ(b) = a`, per `a*k+b`.
    gens: Vec<Vec<usize>>,
    /// Position of `ℓ` among the generators of its hom-group at `b`.
    pos: Vec<Vec<usize>>,
    elementary: Vec<usize>,
    depth: usize,
    stabilized: bool,
    history: Vec<StabilizationStep>,
    ringoid: Ringoid,
}

impl Envelope {
    /// The truncation at `depth`, without checking stabilization.
    pub fn at_depth(variety: &Variety, algebra: Arc<FinAlgebra>, depth: usize) -> Result<Envelope> {
        let mut b = Builder::new(variety, algebra)?;
        let (lat, seeds) = b.saturate_to(depth, None);
        b.history.push(b.step(depth, seeds, &lat));
        b.finish(depth, false, lat)
    }

    pub fn context(&self) -> &PolyContext {
        &self.ctx
    }

    pub fn algebra(&self) -> &Arc<FinAlgebra> {
        self.ctx.algebra()
    }

    pub fn variety(&self) -> &Variety {
        self.ctx.variety()
    }

    pub fn ringoid(&self) -> &Ringoid {
        &self.ringoid
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn history(&self) -> &[StabilizationStep] {
        &self.history
    }

    pub fn size(&self) -> usize {
        self.algebra().size()
    }

    /// All translations, in discovery order.
    pub fn translations(&self) -> &[Term] {
        &self.translations
    }

    /// The generating translations of `_aẐ_b`.
    pub fn generators(&self, a: usize, b: usize) -> Vec<&Term> {
        self.gens[a * self.size() + b].iter().map(|&l| &self.translations[l]).collect()
    }

    /// The elementary translations `ω(c_1, …, x, …, c_n)`.
    pub fn elementary(&self) -> Vec<&Term> {
        self.elementary.iter().map(|&l| &self.translations[l]).collect()
    }

    /// `(u)_b` for a unary polynomial `u`, with its object `u(b)`.
    pub fn class_of(&self, u: &Term, b: usize) -> Result<(usize, Vec<Int>)> {
        u.validate(self.algebra().signature(), 1)?;
        let a = self.algebra().eval(u, &[b])?;
        let v = split(&self.ctx, &self.index, &self.pos, &self.gens, self.size(), u, b)?;
        Ok((a, v))
    }

    /// The same class reduced in the presentation.
    pub fn reduced_class(&self, u: &Term, b: usize) -> Result<(usize, Vec<Int>)> {
        let (a, v) = self.class_of(u, b)?;
        Ok((a, self.ringoid.hom(a, b).reduce(&v)))
    }

    /// The generator `(ℓ)_b` as a translation term.
    pub fn generator_term(&self, a: usize, b: usize, i: usize) -> &Term {
        &self.translations[self.gens[a * self.size() + b][i]]
    }

    /// `R_{Π,b}` before projection: the formal combination
    /// `Π(x, …, x) − Σ_j Π(b, …, x, …, b)` over canonical unary polynomials,
    /// with constants dropped, and `Π(b, …, b)`.
    pub fn raw_relation(&self, pi: &Term, arity: usize, b: usize) -> Result<(usize, BTreeMap<Term, Int>)> {
        raw_relation(&self.ctx, pi, arity, b)
    }

    /// `R_{Π,b}` projected onto the generators of `_aẐ_b`.
    pub fn relation_vector(&self, pi: &Term, arity: usize, b: usize) -> Result<(usize, Vec<Int>)> {
        let (a, raw) = self.raw_relation(pi, arity, b)?;
        let mut v = vec![Int::from(0); self.gens[a * self.size() + b].len()];
        for (t, c) in raw {
            let w = split(&self.ctx, &self.index, &self.pos, &self.gens, self.size(), &t, b)?;
            crate::zlinalg::matrix::add_scaled(&mut v, &w, &c);
        }
        Ok((a, v))
    }

    /// All nonzero projected `R_{Π,b}` with `Π` of arity and size at most
    /// `depth`, deduplicated, per hom-group index `a*k+b`.
    pub fn relation_vectors(&self, depth: usize) -> Result<Vec<(usize, Vec<Int>)>> {
        let k = self.size();
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for size in 1..=depth {
            for (pi, n) in relation_terms(&self.ctx, size) {
                for b in 0..k {
                    let (a, v) = self.relation_vector(&pi, n, b)?;
                    if v.iter().any(|x| x.sign() != num_bigint::Sign::NoSign) && seen.insert((a * k + b, v.clone())) {
                        out.push((a * k + b, v));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Composition with an elementary translation on the left, then on the
    /// right: the saturation maps of the relation subgroups.
    pub fn translation_maps(&self) -> (Vec<ComponentMap>, Vec<ComponentMap>) {
        translation_maps(&self.ctx, &self.translations, &self.index, &self.values, &self.gens, &self.pos, &self.elementary)
            .expect("translations are closed")
    }

    /// `(ℓ)_b` projected, for a unary polynomial `u` whose value at `b` is already known.
    pub(crate) fn split_at(&self, u: &Term, b: usize) -> Result<Vec<Int>> {
        split(&self.ctx, &self.index, &self.pos, &self.gens, self.size(), u, b)
    }

    /// The subgroups `_aR_b` of the presentation.
    pub fn relations(&self) -> Vec<Lattice> {
        self.ringoid.homs().iter().map(|h| h.relations().clone()).collect()
    }
}

/// Smallest window that contains a whole side of every defining identity;
/// below it the relations cannot see the identities and two equal
/// truncations say nothing.
pub fn minimum_depth(variety: &Variety) -> usize {
    variety
        .identities()
        .iter()
        .map(|id| id.lhs.size().min(id.rhs.size()))
        .max()
        .unwrap_or(1)
}

/// `ℤ[A, V]` at the least depth `D` with `max(depth, minimum_depth) ≤ D ≤
/// max_depth` and `R_D = R_{D+1}`.
pub fn enveloping_ringoid(variety: &Variety, algebra: Arc<FinAlgebra>, depth: usize, max_depth: usize) -> Result<Envelope> {
    if depth > max_depth {
        return Err(Error::Invalid(format!("depth {depth} exceeds the maximum {max_depth}")));
    }
    let start = depth.max(minimum_depth(variety));
    if start > max_depth {
        return Err(Error::NotStabilized {
            max_depth,
            detail: format!("{} needs a window of depth at least {start}", variety.name()),
        });
    }
    let mut b = Builder::new(variety, algebra)?;
    let (mut lat, mut seeds) = b.saturate_to(start, None);
    b.history.push(b.step(start, seeds, &lat));
    for d in start..=max_depth {
        let (next, more) = b.saturate_to(d + 1, Some((d, lat.clone())));
        seeds += more;
        b.history.push(b.step(d + 1, seeds, &next));
        if next == lat {
            return b.finish(d, true, lat);
        }
        lat = next;
    }
    let detail = b
        .history
        .iter()
        .map(|s| {
            let types: Vec<String> = s.iso_types.iter().map(ToString::to_string).collect();
            format!("D={}: {}", s.depth, types.join(" "))
        })
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::NotStabilized { max_depth, detail })
}

struct Builder {
    ctx: PolyContext,
    translations: Vec<Term>,
    index: HashMap<Term, usize>,
    values: Vec<Vec<usize>>,
    gens: Vec<Vec<usize>>,
    pos: Vec<Vec<usize>>,
    elementary: Vec<usize>,
    maps: Vec<ComponentMap>,
    history: Vec<StabilizationStep>,
}

impl Builder {
    fn new(variety: &Variety, algebra: Arc<FinAlgebra>) -> Result<Builder> {
        let ctx = PolyContext::new(variety, algebra)?;
        let alg = ctx.algebra().clone();
        let k = alg.size();
        let (translations, elementary) = unary_closure(&ctx)?;
        let index: HashMap<Term, usize> = translations.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let values: Vec<Vec<usize>> = translations
            .iter()
            .map(|t| (0..k).map(|b| alg.eval(t, &[b])).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut gens = vec![Vec::new(); k * k];
        let mut pos = vec![vec![0; k]; translations.len()];
        for (l, vals) in values.iter().enumerate() {
            for (b, &a) in vals.iter().enumerate() {
                pos[l][b] = gens[a * k + b].len();
                gens[a * k + b].push(l);
            }
        }
        let (mut maps, right) = translation_maps(&ctx, &translations, &index, &values, &gens, &pos, &elementary)?;
        maps.extend(right);
        Ok(Builder {
            ctx,
            translations,
            index,
            values,
            gens,
            pos,
            elementary,
            maps,
            history: Vec::new(),
        })
    }

    fn k(&self) -> usize {
        self.ctx.algebra().size()
    }

    /// Saturated relation subgroups with seeds of size `≤ depth`, starting
    /// from `prev = (d, R_d)` if given. Also returns the number of seeds used.
    fn saturate_to(&self, depth: usize, prev: Option<(usize, Vec<Lattice>)>) -> (Vec<Lattice>, usize) {
        let k = self.k();
        let (from, start) = match prev {
            Some((d, lat)) => (d + 1, lat),
            None => (1, self.gens.iter().map(|g| Lattice::zero(g.len())).collect()),
        };
        let mut seeds = Vec::new();
        let mut seen = HashSet::new();
        for size in from..=depth {
            for (pi, n) in relation_terms(&self.ctx, size) {
                for b in 0..k {
                    let (a, raw) = raw_relation(&self.ctx, &pi, n, b).expect("enumerated terms are valid");
                    let mut v = vec![Int::from(0); self.gens[a * k + b].len()];
                    for (t, c) in raw {
                        let w = split(&self.ctx, &self.index, &self.pos, &self.gens, k, &t, b)
                            .expect("splits of polynomials are translations");
                        crate::zlinalg::matrix::add_scaled(&mut v, &w, &c);
                    }
                    if v.iter().any(|x| x.sign() != num_bigint::Sign::NoSign) && seen.insert((a * k + b, v.clone())) {
                        seeds.push((a * k + b, v));
                    }
                }
            }
        }
        let n = seeds.len();
        (subgroup_saturate(start, &seeds, &self.maps), n)
    }

    fn step(&self, depth: usize, seeds: usize, lat: &[Lattice]) -> StabilizationStep {
        StabilizationStep {
            depth,
            seeds,
            iso_types: self
                .gens
                .iter()
                .zip(lat)
                .map(|(g, l)| FGAbGroup::new(g.len(), l.clone()).iso_type())
                .collect(),
        }
    }

    fn finish(self, depth: usize, stabilized: bool, lat: Vec<Lattice>) -> Result<Envelope> {
        let k = self.k();
        let alg = self.ctx.algebra().clone();
        let sig = alg.signature().clone();
        let names = alg.carrier().to_vec();
        let homs: Vec<FGAbGroup> = self.gens.iter().zip(lat).map(|(g, l)| FGAbGroup::new(g.len(), l)).collect();
        let labels: Vec<Vec<String>> = (0..k * k)
            .map(|ab| {
                self.gens[ab]
                    .iter()
                    .map(|&l| format!("({})_{}", self.translations[l].display(&sig, Some(&names)), names[ab % k]))
                    .collect()
            })
            .collect();
        // products of translations, by index
        let n = self.translations.len();
        let mut prod: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (i, li) in self.translations.iter().enumerate() {
            for (j, lj) in self.translations.iter().enumerate() {
                let c = self.ctx.variety().canon(&alg, &li.substitute(&[lj.clone()]))?;
                prod[i][j] = match c.var_bound() {
                    0 => None,
                    _ => Some(*self.index.get(&c).ok_or_else(|| {
                        Error::MissingGenerator(format!("composite {} is not a translation", c.display(&sig, Some(&names))))
                    })?),
                };
            }
        }
        let mut comp = Vec::with_capacity(k * k * k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let dim = self.gens[a * k + c].len();
                    let table: Vec<Vec<Vec<Int>>> = self.gens[a * k + b]
                        .iter()
                        .map(|&i| {
                            self.gens[b * k + c]
                                .iter()
                                .map(|&j| match prod[i][j] {
                                    Some(p) => unit_vec(dim, self.pos[p][c]),
                                    None => vec![Int::from(0); dim],
                                })
                                .collect()
                        })
                        .collect();
                    comp.push(table);
                }
            }
        }
        let x = self.index[&Term::Var(0)];
        let units = (0..k).map(|b| unit_vec(self.gens[b * k + b].len(), self.pos[x][b])).collect();
        let ringoid = Ringoid::new(names, homs, labels, comp, units)?;
        Ok(Envelope {
            ctx: self.ctx,
            translations: self.translations,
            index: self.index,
            values: self.values,
            gens: self.gens,
            pos: self.pos,
            elementary: self.elementary,
            depth,
            stabilized,
            history: self.history,
            ringoid,
        })
    }
}

/// Closure of `x` under the elementary translations, and the indices of
/// the elementary translations themselves.
fn unary_closure(ctx: &PolyContext) -> Result<(Vec<Term>, Vec<usize>)> {
    let alg = ctx.algebra();
    let k = alg.size();
    let sig = alg.signature();
    let mut elementary_terms = Vec::new();
    for s in 0..sig.len() {
        let n = sig.arity(s);
        for i in 0..n {
            for cs in all_tuples(k, n - 1) {
                let mut children: Vec<Term> = cs.into_iter().map(Term::Const).collect();
                children.insert(i, Term::Var(0));
                elementary_terms.push(Term::App(s, children));
            }
        }
    }
    let mut out = vec![ctx.variety().canon(alg, &Term::Var(0))?];
    let mut index: HashMap<Term, usize> = HashMap::from([(out[0].clone(), 0)]);
    let mut elementary = Vec::new();
    let mut next = 0;
    while next < out.len() {
        let l = out[next].clone();
        for e in &elementary_terms {
            let t = ctx.variety().canon(alg, &e.substitute(&[l.clone()]))?;
            if t.var_bound() == 0 {
                continue;
            }
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if out.len() >= MAX_TRANSLATIONS {
                        return Err(Error::Invalid(format!("more than {MAX_TRANSLATIONS} unary translations")));
                    }
                    index.insert(t.clone(), out.len());
                    out.push(t);
                    out.len() - 1
                }
            };
            if next == 0 && id != 0 && !elementary.contains(&id) {
                elementary.push(id);
            }
        }
        next += 1;
    }
    Ok((out, elementary))
}

/// Projection of a unary polynomial at `b` onto translations: one summand
/// per occurrence of `x` in its normal form, with the other occurrences
/// replaced by `b`.
fn split(
    ctx: &PolyContext,
    index: &HashMap<Term, usize>,
    pos: &[Vec<usize>],
    gens: &[Vec<usize>],
    k: usize,
    u: &Term,
    b: usize,
) -> Result<Vec<Int>> {
    let alg = ctx.algebra();
    let a = alg.eval(u, &[b])?;
    let mut v = vec![Int::from(0); gens[a * k + b].len()];
    let c = ctx.variety().canon(alg, u)?;
    let occ = c.occurrences_of(0);
    for o in 0..occ {
        let t = c.substitute_occurrences(&mut |idx, _| if idx == o { Term::Var(0) } else { Term::Const(b) });
        let t = ctx.variety().canon(alg, &t)?;
        if t.var_bound() == 0 {
            continue;
        }
        let l = *index.get(&t).ok_or_else(|| {
            Error::MissingGenerator(format!(
                "{} is not a translation",
                t.display(alg.signature(), Some(alg.carrier()))
            ))
        })?;
        v[pos[l][b]] += 1;
    }
    Ok(v)
}

fn raw_relation(ctx: &PolyContext, pi: &Term, arity: usize, b: usize) -> Result<(usize, BTreeMap<Term, Int>)> {
    let alg = ctx.algebra();
    pi.validate(alg.signature(), arity)?;
    let a = alg.eval(pi, &vec![b; arity])?;
    let mut out: BTreeMap<Term, Int> = BTreeMap::new();
    let mut add = |t: Term, c: i64| -> Result<()> {
        let t = ctx.variety().canon(alg, &t)?;
        if t.var_bound() > 0 {
            *out.entry(t).or_insert_with(|| Int::from(0)) += c;
        }
        Ok(())
    };
    add(pi.substitute(&vec![Term::Var(0); arity]), 1)?;
    for j in 0..arity {
        let subs: Vec<Term> = (0..arity).map(|i| if i == j { Term::Var(0) } else { Term::Const(b) }).collect();
        add(pi.substitute(&subs), -1)?;
    }
    out.retain(|_, c| c.sign() != num_bigint::Sign::NoSign);
    Ok((a, out))
}

/// Polynomials `Π` of exactly this size whose variables first occur in
/// the order `x_1, …, x_n` and are all used, with their arity.
fn relation_terms(ctx: &PolyContext, size: usize) -> Vec<(Term, usize)> {
    let alg = ctx.algebra();
    let mut out = Vec::new();
    for n in 0..=size {
        let mut table = TermTable::new(alg.signature(), n, alg.size());
        for t in table.of_size(size) {
            let mut next = 0;
            let ok = t.var_occurrences().into_iter().all(|v| {
                if v == next {
                    next += 1;
                    true
                } else {
                    v < next
                }
            });
            if ok && next == n {
                out.push((t.clone(), n));
            }
        }
    }
    out
}

fn translation_maps(
    ctx: &PolyContext,
    translations: &[Term],
    index: &HashMap<Term, usize>,
    values: &[Vec<usize>],
    gens: &[Vec<usize>],
    pos: &[Vec<usize>],
    elementary: &[usize],
) -> Result<(Vec<ComponentMap>, Vec<ComponentMap>)> {
    let alg = ctx.algebra();
    let k = alg.size();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &e in elementary {
        let et = &translations[e];
        for a in 0..k {
            for b in 0..k {
                let src = &gens[a * k + b];
                // left: ℓ ↦ e ∘ ℓ, from (a, b) to (e(a), b)
                let ea = values[e][a];
                let mut cols = Vec::with_capacity(src.len());
                for &l in src {
                    cols.push(split(ctx, index, pos, gens, k, &et.substitute(&[translations[l].clone()]), b)?);
                }
                left.push(ComponentMap {
                    from: a * k + b,
                    to: ea * k + b,
                    matrix: IntMatrix::from_columns(gens[ea * k + b].len(), &cols),
                });
                // right: ℓ ↦ ℓ ∘ e, from (a, e(b')) to (a, b')
                for b2 in (0..k).filter(|&b2| values[e][b2] == b) {
                    let mut cols = Vec::with_capacity(src.len());
                    for &l in src {
                        cols.push(split(ctx, index, pos, gens, k, &translations[l].substitute(&[et.clone()]), b2)?);
                    }
                    right.push(ComponentMap {
                        from: a * k + b,
                        to: a * k + b2,
                        matrix: IntMatrix::from_columns(gens[a * k + b2].len(), &cols),
                    });
                }
            }
        }
    }
    Ok((left, right))
}
