//! JSON formats for algebras, varieties, pointed overalgebras and modules.
//!
//! Wherever an algebra is expected, a string `"builtin:NAME"` names an
//! algebra of the default fleet (`C2`, `S3`, `Z2ring`, …) and any other string
//! is a path, resolved against the directory of the file that mentions it.
//! Fleet modules and overalgebras are `"builtin:NAME/label"`.
//!
//! Operation tables are nested arrays with the first argument outermost.
//! Elements may be given by index or by name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fleet;
use crate::overalg::{mixed_tuples, AModule, Fiber, PointedOveralg};
use crate::terms::{all_tuples, FinAlgebra, OpSymbol, Signature};
use crate::variety::Variety;
use crate::zlinalg::{matrix::json_int, FGAbGroup, IntMatrix};

const BUILTIN: &str = "builtin:";

/// Read and parse a JSON file.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_err(what: &str) -> Error {
    Error::Parse(what.to_string())
}

fn resolve(reference: &str, dir: Option<&Path>) -> PathBuf {
    match dir {
        Some(d) => d.join(reference),
        None => PathBuf::from(reference),
    }
}

fn builtin_entry(name: &str) -> Result<fleet::FleetEntry> {
    fleet::entry(name).ok_or_else(|| Error::Invalid(format!("no builtin algebra `{name}`")))
}

/// An algebra reference (`builtin:NAME`, a path, or an inline object), with
/// the variety of the builtin when there is one.
pub fn algebra_from_ref(v: &Value, dir: Option<&Path>) -> Result<(Arc<FinAlgebra>, Option<Variety>)> {
    match v {
        Value::String(s) => load_algebra_in(s, dir),
        Value::Object(_) => Ok((Arc::new(algebra_from_value(v)?), None)),
        _ => Err(parse_err("an algebra reference is a string or an object")),
    }
}

/// Load an algebra from `builtin:NAME` or a JSON file.
pub fn load_algebra(reference: &str) -> Result<(Arc<FinAlgebra>, Option<Variety>)> {
    load_algebra_in(reference, None)
}

fn load_algebra_in(reference: &str, dir: Option<&Path>) -> Result<(Arc<FinAlgebra>, Option<Variety>)> {
    if let Some(name) = reference.strip_prefix(BUILTIN) {
        let e = builtin_entry(name)?;
        return Ok((e.algebra, Some(e.variety)));
    }
    let v = read_json(&resolve(reference, dir))?;
    Ok((Arc::new(algebra_from_value(&v)?), None))
}

/// An element given by index or by name.
fn element(names: &[String], v: &Value) -> Result<usize> {
    match v {
        Value::Number(n) => {
            let i = n.as_u64().ok_or_else(|| parse_err("element index must be a natural number"))? as usize;
            if i < names.len() {
                Ok(i)
            } else {
                Err(Error::Invalid(format!("element index {i} out of range")))
            }
        }
        Value::String(s) => names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::Invalid(format!("no element `{s}`"))),
        _ => Err(parse_err("an element is an index or a name")),
    }
}

/// Leaves of a nested array of the given shape, first index outermost.
fn flatten<'a>(v: &'a Value, dims: &[usize], what: &str) -> Result<Vec<&'a Value>> {
    let Some((&n, rest)) = dims.split_first() else {
        return Ok(vec![v]);
    };
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a nested array")))?;
    if items.len() != n {
        return Err(Error::Invalid(format!("{what}: expected {n} entries, found {}", items.len())));
    }
    let mut out = Vec::new();
    for x in items {
        out.extend(flatten(x, rest, what)?);
    }
    Ok(out)
}

/// Inverse of `flatten`.
fn nest(leaves: &[Value], dims: &[usize]) -> Value {
    match dims.split_first() {
        None => leaves[0].clone(),
        Some((&n, rest)) => {
            let step = rest.iter().product::<usize>();
            Value::Array((0..n).map(|i| nest(&leaves[i * step..(i + 1) * step], rest)).collect())
        }
    }
}

#[derive(Deserialize)]
struct AlgebraJson {
    name: String,
    signature: Vec<OpSymbol>,
    carrier: Vec<String>,
    tables: BTreeMap<String, Value>,
}

pub fn algebra_from_value(v: &Value) -> Result<FinAlgebra> {
    let aj = AlgebraJson::deserialize(v).map_err(|e| Error::Parse(format!("algebra: {e}")))?;
    let sig = Signature::new(aj.signature)?;
    let k = aj.carrier.len();
    let mut tables = Vec::with_capacity(sig.len());
    for s in 0..sig.len() {
        let name = sig.name(s);
        let t = aj
            .tables
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("no table for `{name}`")))?;
        let leaves = flatten(t, &vec![k; sig.arity(s)], name)?;
        tables.push(leaves.into_iter().map(|x| element(&aj.carrier, x)).collect::<Result<Vec<_>>>()?);
    }
    if let Some(extra) = aj.tables.keys().find(|n| sig.lookup(n).is_err()) {
        return Err(Error::UnknownSymbol(extra.clone()));
    }
    FinAlgebra::new(&aj.name, sig, aj.carrier, tables)
}

pub fn algebra_to_value(a: &FinAlgebra) -> Value {
    let sig = a.signature();
    let mut tables = Map::new();
    for s in 0..sig.len() {
        let leaves: Vec<Value> = a.table(s).iter().map(|&x| json!(a.element_name(x))).collect();
        tables.insert(sig.name(s).to_string(), nest(&leaves, &vec![a.size(); sig.arity(s)]));
    }
    json!({
        "name": a.name(),
        "signature": sig.symbols(),
        "carrier": a.carrier(),
        "tables": tables,
    })
}

#[derive(Deserialize)]
struct VarietyJson {
    name: String,
    signature: Vec<OpSymbol>,
    identities: Vec<String>,
}

/// A shipped variety by name, or a JSON file `{name, signature, identities}`
/// describing a variety without normal forms.
pub fn load_variety(name: &str) -> Result<Variety> {
    if let Ok(v) = Variety::by_name(name) {
        return Ok(v);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Error::Invalid(format!("unknown variety `{name}`")));
    }
    let vj = VarietyJson::deserialize(&read_json(path)?).map_err(|e| Error::Parse(format!("variety: {e}")))?;
    let ids: Vec<&str> = vj.identities.iter().map(String::as_str).collect();
    Variety::custom(&vj.name, Signature::new(vj.signature)?, &ids)
}

fn tuple_key(a: &FinAlgebra, t: &[usize]) -> String {
    t.iter().map(|&x| a.element_name(x)).collect::<Vec<_>>().join(",")
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.get(field)
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse(format!("`{field}` must be an object")))
}

fn entry<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::Invalid(format!("{what}: missing `{key}`")))
}

/// `builtin:NAME/label`: one of the fleet's modules or overalgebras.
fn builtin_member(reference: &str) -> Option<(fleet::FleetEntry, String)> {
    let rest = reference.strip_prefix(BUILTIN)?;
    let (name, label) = rest.split_once('/')?;
    Some((fleet::entry(name)?, label.to_string()))
}

/// Load a pointed overalgebra from `builtin:NAME/label` or a JSON file.
pub fn load_overalg(reference: &str) -> Result<(PointedOveralg, Option<Variety>)> {
    if reference.starts_with(BUILTIN) {
        let (e, label) =
            builtin_member(reference).ok_or_else(|| Error::Invalid(format!("no builtin overalgebra `{reference}`")))?;
        let p = e
            .overalgebras
            .iter()
            .find(|(n, _)| *n == label)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| Error::Invalid(format!("no builtin overalgebra `{reference}`")))?;
        return Ok((p, Some(e.variety)));
    }
    let path = Path::new(reference);
    overalg_from_value(&read_json(path)?, path.parent())
}

pub fn overalg_from_value(v: &Value, dir: Option<&Path>) -> Result<(PointedOveralg, Option<Variety>)> {
    let (base, variety) = algebra_from_ref(v.get("base").ok_or_else(|| parse_err("overalgebra needs `base`"))?, dir)?;
    let fj = object(v, "fibers")?;
    let mut fibers = Vec::with_capacity(base.size());
    for a in 0..base.size() {
        let f = entry(fj, base.element_name(a), "fibers")?;
        let names: Vec<String> = f
            .get("names")
            .and_then(|n| serde_json::from_value(n.clone()).ok())
            .ok_or_else(|| parse_err("a fiber lists its `names`"))?;
        let mut fiber = Fiber { names, basepoint: 0 };
        fiber.basepoint = element(&fiber.names, f.get("basepoint").ok_or_else(|| parse_err("a fiber needs a `basepoint`"))?)?;
        fibers.push(fiber);
    }
    let oj = object(v, "ops")?;
    let sig = base.signature().clone();
    let k = base.size();
    let mut ops = Vec::with_capacity(sig.len());
    for s in 0..sig.len() {
        let per = oj
            .get(sig.name(s))
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Invalid(format!("no ops for `{}`", sig.name(s))))?;
        let mut tables = Vec::new();
        for t in all_tuples(k, sig.arity(s)) {
            let key = tuple_key(&base, &t);
            let what = format!("`{}` at ({key})", sig.name(s));
            let sizes: Vec<usize> = t.iter().map(|&x| fibers[x].len()).collect();
            let target = &fibers[base.op(s, &t)];
            let leaves = flatten(entry(per, &key, &what)?, &sizes, &what)?;
            tables.push(leaves.into_iter().map(|x| element(&target.names, x)).collect::<Result<Vec<_>>>()?);
        }
        ops.push(tables);
    }
    Ok((PointedOveralg::new(base, fibers, ops)?, variety))
}

pub fn overalg_to_value(p: &PointedOveralg) -> Value {
    let base = p.base();
    let sig = base.signature();
    let mut fibers = Map::new();
    for (a, f) in p.fibers().iter().enumerate() {
        fibers.insert(
            base.element_name(a).to_string(),
            json!({"names": f.names, "basepoint": f.names[f.basepoint]}),
        );
    }
    let mut ops = Map::new();
    for s in 0..sig.len() {
        let mut per = Map::new();
        for t in all_tuples(base.size(), sig.arity(s)) {
            let sizes: Vec<usize> = t.iter().map(|&x| p.fiber_size(x)).collect();
            let target = &p.fibers()[base.op(s, &t)];
            let leaves: Vec<Value> = mixed_tuples(&sizes)
                .iter()
                .map(|q| json!(target.names[p.apply(s, &t, q)]))
                .collect();
            per.insert(tuple_key(base, &t), nest(&leaves, &sizes));
        }
        ops.insert(sig.name(s).to_string(), Value::Object(per));
    }
    json!({"base": algebra_to_value(base), "fibers": fibers, "ops": ops})
}

/// Load a module from `builtin:NAME/label` or a JSON file.
pub fn load_module(reference: &str) -> Result<(AModule, Option<Variety>)> {
    if reference.starts_with(BUILTIN) {
        let (e, label) =
            builtin_member(reference).ok_or_else(|| Error::Invalid(format!("no builtin module `{reference}`")))?;
        let m = e
            .modules
            .iter()
            .find(|(n, _)| *n == label)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::Invalid(format!("no builtin module `{reference}`")))?;
        return Ok((m, Some(e.variety)));
    }
    let path = Path::new(reference);
    module_from_value(&read_json(path)?, path.parent())
}

fn group_from_value(v: &Value) -> Result<FGAbGroup> {
    if let Some(orders) = v.get("orders") {
        let orders = json_int::vec_from_value(orders).ok_or_else(|| parse_err("`orders` is a list of integers"))?;
        let n = orders.len();
        let rels: Vec<Vec<_>> = orders
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut col = vec![0.into(); n];
                col[i] = d.clone();
                col
            })
            .collect();
        return Ok(FGAbGroup::from_relation_columns(n, &rels));
    }
    let rank = v
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("a fiber gives `orders` or `rank` and `relations`"))? as usize;
    let rels = match v.get("relations") {
        None => Vec::new(),
        Some(r) => r
            .as_array()
            .ok_or_else(|| parse_err("`relations` is a list of vectors"))?
            .iter()
            .map(|x| json_int::vec_from_value(x).ok_or_else(|| parse_err("bad relation vector")))
            .collect::<Result<Vec<_>>>()?,
    };
    if rels.iter().any(|r| r.len() != rank) {
        return Err(Error::Invalid(format!("relation vectors must have length {rank}")));
    }
    Ok(FGAbGroup::from_relation_columns(rank, &rels))
}

fn group_to_value(g: &FGAbGroup) -> Value {
    json!({"rank": g.rank(), "relations": g.relations().basis().iter().map(|v| json_int::vec_to_value(v)).collect::<Vec<_>>()})
}

pub fn module_from_value(v: &Value, dir: Option<&Path>) -> Result<(AModule, Option<Variety>)> {
    let (base, variety) = algebra_from_ref(v.get("base").ok_or_else(|| parse_err("module needs `base`"))?, dir)?;
    let fj = object(v, "fibers")?;
    let fibers = (0..base.size())
        .map(|a| group_from_value(entry(fj, base.element_name(a), "fibers")?))
        .collect::<Result<Vec<_>>>()?;
    let oj = object(v, "ops")?;
    let sig = base.signature().clone();
    let mut parts = Vec::with_capacity(sig.len());
    for s in 0..sig.len() {
        let n = sig.arity(s);
        let per = oj.get(sig.name(s)).and_then(Value::as_object);
        let mut tables = Vec::new();
        for t in all_tuples(base.size(), n) {
            if n == 0 {
                tables.push(Vec::new());
                continue;
            }
            let key = tuple_key(&base, &t);
            let what = format!("`{}` at ({key})", sig.name(s));
            let per = per.ok_or_else(|| Error::Invalid(format!("no ops for `{}`", sig.name(s))))?;
            let ms: Vec<IntMatrix> = serde_json::from_value(entry(per, &key, &what)?.clone())
                .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            if ms.len() != n {
                return Err(Error::Invalid(format!("{what}: expected {n} matrices")));
            }
            let target = fibers[base.op(s, &t)].rank();
            let ms = ms
                .into_iter()
                .zip(&t)
                .map(|(m, &x)| {
                    // an empty list of rows stands for any matrix with no rows
                    if m.rows() == 0 {
                        IntMatrix::zeros(target, fibers[x].rank())
                    } else {
                        m
                    }
                })
                .collect();
            tables.push(ms);
        }
        parts.push(tables);
    }
    Ok((AModule::new(base, fibers, parts)?, variety))
}

pub fn module_to_value(m: &AModule) -> Value {
    let base = m.base();
    let sig = base.signature();
    let mut fibers = Map::new();
    for (a, g) in m.fibers().iter().enumerate() {
        fibers.insert(base.element_name(a).to_string(), group_to_value(g));
    }
    let mut ops = Map::new();
    for s in 0..sig.len() {
        if sig.arity(s) == 0 {
            continue;
        }
        let mut per = Map::new();
        for t in all_tuples(base.size(), sig.arity(s)) {
            let ms: Vec<&IntMatrix> = (0..t.len()).map(|i| m.part_matrix(s, &t, i)).collect();
            per.insert(tuple_key(base, &t), serde_json::to_value(ms).expect("matrices serialize"));
        }
        ops.insert(sig.name(s).to_string(), Value::Object(per));
    }
    json!({"base": algebra_to_value(base), "fibers": fibers, "ops": ops})
}
