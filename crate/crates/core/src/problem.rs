//! Problem files: a finite group, a normal subgroup and a unitary representation of it.
//!
//! ```json
//! {
//!   "name": "quaternion over its center",
//!   "group": {"kind": "catalog", "name": "quaternion"},
//!   "subgroup": ["1", "-1"],
//!   "rep": {"images": {"-1": [[[-1, 0]]]}},
//!   "tol": 1e-9, "seed": 7, "tasks": ["all"]
//! }
//! ```
//!
//! Elements are referenced by index (a JSON number), by label (a string), or, for
//! permutation groups, by their image list. Object keys are matched against labels
//! first and read as indices otherwise.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::catalog;
use crate::error::{Error, Result};
use crate::groups::{perm_label, FiniteGroup, NormalSubgroup, DEFAULT_SIZE_CAP};
use crate::interchange::matrix_from_json;
use crate::matrices::{ComplexMatrix, DEFAULT_TOL};
use crate::reps::{rep_validate, UnitaryRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Analyze,
    Extend,
    Stabilize,
    Crosscheck,
}

impl Task {
    pub const ALL: [Task; 4] = [Task::Analyze, Task::Extend, Task::Stabilize, Task::Crosscheck];

    /// Parses `analyze | extend | stabilize | crosscheck | all`.
    pub fn parse_list(name: &str) -> Option<Vec<Task>> {
        Some(match name {
            "analyze" => vec![Task::Analyze],
            "extend" => vec![Task::Extend],
            "stabilize" => vec![Task::Stabilize],
            "crosscheck" => vec![Task::Crosscheck],
            "all" => Task::ALL.to_vec(),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub subgroup: NormalSubgroup,
    pub pi: UnitaryRep,
    pub tol: f64,
    pub seed: u64,
    pub transversal_seed: Option<u64>,
    pub tasks: BTreeSet<Task>,
}

fn input(path: &str, msg: impl Into<String>) -> Error {
    Error::Input {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| input(path, format!("missing field `{key}`")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| input(path, "expected a non-negative integer"))
}

fn usize_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| input(path, "expected a list of integers"))?
        .iter()
        .enumerate()
        .map(|(k, x)| as_usize(x, &format!("{path}[{k}]")))
        .collect()
}

fn parse_group(v: &Value, path: &str) -> Result<FiniteGroup> {
    let obj = v
        .as_object()
        .ok_or_else(|| input(path, "expected an object"))?;
    let kind_path = format!("{path}.kind");
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| input(&kind_path, "expected a string"))?;
    let located = |e: Error| match e {
        Error::InvalidGroup(msg) => input(path, msg),
        other => other,
    };
    match kind {
        "table" => {
            let tpath = format!("{path}.table");
            let rows = field(obj, "table", path)?
                .as_array()
                .ok_or_else(|| input(&tpath, "expected a list of rows"))?;
            let table = rows
                .iter()
                .enumerate()
                .map(|(i, r)| usize_list(r, &format!("{tpath}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let labels = match obj.get("labels") {
                None => None,
                Some(l) => Some(
                    l.as_array()
                        .ok_or_else(|| input(&format!("{path}.labels"), "expected a list of strings"))?
                        .iter()
                        .enumerate()
                        .map(|(k, s)| {
                            s.as_str()
                                .map(str::to_string)
                                .ok_or_else(|| input(&format!("{path}.labels[{k}]"), "expected a string"))
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            FiniteGroup::from_table(table, labels).map_err(located)
        }
        "perm" => {
            let degree = as_usize(field(obj, "degree", path)?, &format!("{path}.degree"))?;
            let gpath = format!("{path}.generators");
            let gens = field(obj, "generators", path)?
                .as_array()
                .ok_or_else(|| input(&gpath, "expected a list of permutations"))?
                .iter()
                .enumerate()
                .map(|(k, p)| usize_list(p, &format!("{gpath}[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let cap = match obj.get("size_cap") {
                Some(c) => as_usize(c, &format!("{path}.size_cap"))?,
                None => DEFAULT_SIZE_CAP,
            };
            FiniteGroup::from_generators(degree, &gens, cap).map_err(located)
        }
        "catalog" => {
            let npath = format!("{path}.name");
            let name = field(obj, "name", path)?
                .as_str()
                .ok_or_else(|| input(&npath, "expected a string"))?;
            let param = |key: &str| -> Result<usize> {
                let p = format!("{path}.{key}");
                let n = as_usize(field(obj, key, path)?, &p)?;
                if n == 0 || n > 64 {
                    return Err(input(&p, "expected an integer in 1..=64"));
                }
                Ok(n)
            };
            Ok(match name {
                "cyclic" => catalog::cyclic(param("n")?),
                "dihedral" => {
                    let n = param("n")?;
                    if n < 2 {
                        return Err(input(&format!("{path}.n"), "dihedral groups need n >= 2"));
                    }
                    catalog::dihedral(n)
                }
                "dicyclic" => catalog::dicyclic(param("n")?),
                "quaternion" => catalog::quaternion_table(),
                "heisenberg" => {
                    let p = param("p")?;
                    if p > 7 {
                        return Err(input(&format!("{path}.p"), "expected p <= 7"));
                    }
                    catalog::heisenberg(p)
                }
                "alternating4" => catalog::alternating4(),
                "pauli" => catalog::pauli(),
                "abelian" => {
                    let fpath = format!("{path}.factors");
                    let factors = usize_list(field(obj, "factors", path)?, &fpath)?;
                    if factors.iter().any(|&f| f == 0) || factors.iter().product::<usize>() > DEFAULT_SIZE_CAP {
                        return Err(input(&fpath, "factors must be positive with product within the size cap"));
                    }
                    catalog::abelian(&factors)
                }
                other => return Err(input(&npath, format!("unknown catalog group `{other}`"))),
            })
        }
        other => Err(input(&kind_path, format!("unknown group kind `{other}`"))),
    }
}

fn element_ref(g: &FiniteGroup, v: &Value, path: &str) -> Result<usize> {
    let found = match v {
        Value::Number(_) => {
            let k = as_usize(v, path)?;
            (k < g.order()).then_some(k)
        }
        Value::String(s) => g.element(s),
        Value::Array(_) => g.element(&perm_label(&usize_list(v, path)?)),
        _ => return Err(input(path, "expected an element index, label or permutation")),
    };
    found.ok_or_else(|| input(path, format!("no such group element: {v}")))
}

fn key_ref(g: &FiniteGroup, key: &str, path: &str) -> Result<usize> {
    if let Some(k) = g.element(key) {
        return Ok(k);
    }
    match key.parse::<usize>() {
        Ok(k) if k < g.order() => Ok(k),
        _ => Err(input(path, format!("no such group element: {key:?}"))),
    }
}

fn parse_subgroup(g: &Arc<FiniteGroup>, v: &Value, path: &str) -> Result<NormalSubgroup> {
    let refs = |list: &Value, p: &str| -> Result<Vec<usize>> {
        list.as_array()
            .ok_or_else(|| input(p, "expected a list of elements"))?
            .iter()
            .enumerate()
            .map(|(k, e)| element_ref(g, e, &format!("{p}[{k}]")))
            .collect()
    };
    let members = match v {
        Value::String(s) if s == "center" => g.center(),
        Value::String(s) if s == "whole" => (0..g.order()).collect(),
        Value::String(s) if s == "trivial" => vec![0],
        Value::Array(_) => {
            let members = refs(v, path)?;
            let closed = g.subgroup_generated(&members);
            let mut sorted = members.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if closed != sorted {
                return Err(input(path, "listed elements do not form a subgroup"));
            }
            sorted
        }
        Value::Object(obj) => {
            if let Some(gens) = obj.get("generators") {
                g.subgroup_generated(&refs(gens, &format!("{path}.generators"))?)
            } else {
                let elems = field(obj, "elements", path)?;
                return parse_subgroup(g, elems, &format!("{path}.elements"));
            }
        }
        _ => return Err(input(path, "expected a list of elements, an object, or \"center\"")),
    };
    NormalSubgroup::new(g.clone(), &members).map_err(|e| match e {
        Error::NotNormal { s, n } => input(
            path,
            format!("subgroup is not normal: conjugating {} by {} leaves it", g.label(n), g.label(s)),
        ),
        other => other,
    })
}

fn parse_rep(g: &Arc<FiniteGroup>, n: &NormalSubgroup, v: &Value, path: &str, tol: f64) -> Result<UnitaryRep> {
    let obj = v
        .as_object()
        .ok_or_else(|| input(path, "expected an object"))?;
    let ipath = format!("{path}.images");
    let images = field(obj, "images", path)?;
    let mut given: Vec<(usize, ComplexMatrix)> = Vec::new();
    match images {
        Value::Object(map) => {
            for (key, m) in map {
                let p = format!("{ipath}.{key}");
                given.push((key_ref(g, key, &p)?, matrix_from_json(m, &p)?));
            }
        }
        Value::Array(list) => {
            for (k, pair) in list.iter().enumerate() {
                let p = format!("{ipath}[{k}]");
                let items = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| input(&p, "expected [element, matrix]"))?;
                given.push((element_ref(g, &items[0], &format!("{p}[0]"))?, matrix_from_json(&items[1], &format!("{p}[1]"))?));
            }
        }
        _ => return Err(input(&ipath, "expected an object or a list of [element, matrix] pairs")),
    }
    if given.is_empty() {
        let dim = match obj.get("dim") {
            Some(d) => as_usize(d, &format!("{path}.dim"))?,
            None => return Err(input(&ipath, "no images given and no `dim` for the trivial representation")),
        };
        if dim == 0 {
            return Err(input(&format!("{path}.dim"), "dimension must be positive"));
        }
        return Ok(UnitaryRep::trivial(g.clone(), n.members().to_vec(), dim, tol));
    }
    let dim = given[0].1.nrows();
    for (k, (_, m)) in given.iter().enumerate() {
        if m.nrows() != dim {
            return Err(input(&ipath, format!("image {k} has dimension {} (expected {dim})", m.nrows())));
        }
    }
    let rep = UnitaryRep::from_partial(g.clone(), n.members(), &given, tol).map_err(|e| match e {
        Error::Shape(msg) => input(&ipath, msg),
        other => other,
    })?;
    let check = rep_validate(&rep);
    if !check.pass {
        return Err(input(
            &ipath,
            format!(
                "images do not define a unitary representation (homomorphism {:.3e}, unitarity {:.3e})",
                check.homomorphism, check.unitarity
            ),
        ));
    }
    Ok(rep)
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        input(&format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| input("$", "expected a JSON object"))?;
    let name = match obj.get("name") {
        Some(v) => v
            .as_str()
            .ok_or_else(|| input("name", "expected a string"))?
            .to_string(),
        None => "unnamed".to_string(),
    };
    let tol = match obj.get("tol") {
        Some(v) => v
            .as_f64()
            .filter(|t| *t > 0.0 && *t < 1e-2)
            .ok_or_else(|| input("tol", "expected a number in (0, 0.01)"))?,
        None => DEFAULT_TOL,
    };
    let seed = match obj.get("seed") {
        Some(v) => v.as_u64().ok_or_else(|| input("seed", "expected a non-negative integer"))?,
        None => 0,
    };
    let transversal_seed = match obj.get("transversal_seed") {
        Some(Value::Null) | None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| input("transversal_seed", "expected a non-negative integer"))?,
        ),
    };
    let tasks = match obj.get("tasks") {
        None => Task::ALL.into_iter().collect(),
        Some(v) => {
            let list = v.as_array().ok_or_else(|| input("tasks", "expected a list"))?;
            let mut out = BTreeSet::new();
            for (k, t) in list.iter().enumerate() {
                let p = format!("tasks[{k}]");
                let name = t.as_str().ok_or_else(|| input(&p, "expected a string"))?;
                out.extend(Task::parse_list(name).ok_or_else(|| input(&p, format!("unknown task `{name}`")))?);
            }
            out
        }
    };
    let group = Arc::new(parse_group(field(obj, "group", "$")?, "group")?);
    let subgroup = parse_subgroup(&group, field(obj, "subgroup", "$")?, "subgroup")?;
    let pi = parse_rep(&group, &subgroup, field(obj, "rep", "$")?, "rep", tol)?;
    Ok(Problem {
        name,
        group,
        subgroup,
        pi,
        tol,
        seed,
        transversal_seed,
        tasks,
    })
}
