//! JSON formats for models and relations.
//!
//! Models:
//!
//! ```json
//! {"functor": "kripke", "atoms": ["p"], "states": ["x", "y"],
//!  "transition": {"x": {"props": ["p"], "succ": ["y"]}, "y": {"props": [], "succ": []}}}
//! ```
//!
//! Multiset values map states to naturals or `"inf"`, distribution values
//! map states to `"n/d"` strings, neighbourhood values are
//! `{"minimals": [[...], ...]}`. Relations are `{"pairs": [[l, r], ...]}`.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::coalgebra::{Coalgebra, FunctorKind, FunctorValue, KindTag, State, StateSet};
use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Rational, Weight};
use crate::relation::Relation;

fn model_err(msg: impl Into<String>) -> Error {
    Error::Model(msg.into())
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| model_err(format!("{what} must be an array")))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| model_err(format!("{what} must contain strings")))
        })
        .collect()
}

pub fn parse_model(text: &str) -> Result<Coalgebra> {
    model_from_json(&serde_json::from_str(text)?)
}

pub fn model_from_json(v: &Value) -> Result<Coalgebra> {
    let obj = v
        .as_object()
        .ok_or_else(|| model_err("model must be a JSON object"))?;
    let functor = obj
        .get("functor")
        .and_then(Value::as_str)
        .ok_or_else(|| model_err("missing \"functor\""))?;
    let tag = KindTag::from_name(functor)
        .ok_or_else(|| model_err(format!("unknown functor {functor:?}")))?;
    let atoms = match obj.get("atoms") {
        Some(a) => string_list(a, "\"atoms\"")?,
        None => Vec::new(),
    };
    let kind = match tag {
        KindTag::Kripke => FunctorKind::Kripke { atoms },
        _ if !atoms.is_empty() => {
            return Err(model_err("\"atoms\" is only meaningful for kripke models"))
        }
        KindTag::Multiset => FunctorKind::Multiset,
        KindTag::Distribution => FunctorKind::Distribution,
        KindTag::Neighborhood => FunctorKind::Neighborhood,
    };
    let states = string_list(
        obj.get("states")
            .ok_or_else(|| model_err("missing \"states\""))?,
        "\"states\"",
    )?;
    let index = |name: &str| -> Result<State> {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    };
    let transition = obj
        .get("transition")
        .and_then(Value::as_object)
        .ok_or_else(|| model_err("missing \"transition\" object"))?;
    for key in transition.keys() {
        index(key)?;
    }
    let mut values = Vec::with_capacity(states.len());
    for s in &states {
        let raw = transition
            .get(s)
            .ok_or_else(|| model_err(format!("no transition for state {s:?}")))?;
        values.push(
            value_from_json(tag, raw, &index).map_err(|e| model_err(format!("state {s}: {e}")))?,
        );
    }
    Ok(Coalgebra::new(kind, states, values)?)
}

fn state_set(v: &Value, index: &dyn Fn(&str) -> Result<State>) -> Result<StateSet> {
    string_list(v, "state list")?
        .iter()
        .map(|s| index(s))
        .collect()
}

fn value_from_json(
    tag: KindTag,
    v: &Value,
    index: &dyn Fn(&str) -> Result<State>,
) -> Result<FunctorValue> {
    let obj = v
        .as_object()
        .ok_or_else(|| model_err("transition value must be an object"))?;
    Ok(match tag {
        KindTag::Kripke => {
            let props = match obj.get("props") {
                Some(p) => string_list(p, "\"props\"")?,
                None => Vec::new(),
            };
            let succ = match obj.get("succ") {
                Some(s) => state_set(s, index)?,
                None => StateSet::new(),
            };
            FunctorValue::kripke(props, succ)
        }
        KindTag::Multiset => {
            let mut weights = Vec::new();
            for (s, w) in obj {
                let weight = match w {
                    Value::Number(n) => Weight::Finite(
                        n.as_u64()
                            .ok_or_else(|| model_err(format!("weight {n} is not a natural")))?,
                    ),
                    Value::String(t) => t.parse().map_err(model_err)?,
                    _ => return Err(model_err("weight must be a natural or \"inf\"")),
                };
                weights.push((index(s)?, weight));
            }
            FunctorValue::multiset(weights)
        }
        KindTag::Distribution => {
            let mut masses = Vec::new();
            for (s, m) in obj {
                let mass: Rational = match m {
                    Value::String(t) => parse_rational(t).map_err(model_err)?,
                    Value::Number(n) if n.is_i64() => {
                        Rational::from_integer(n.as_i64().expect("checked") as i128)
                    }
                    _ => return Err(model_err("mass must be a string \"n/d\"")),
                };
                masses.push((index(s)?, mass));
            }
            FunctorValue::distribution(masses)
        }
        KindTag::Neighborhood => {
            let mins = obj
                .get("minimals")
                .and_then(Value::as_array)
                .ok_or_else(|| model_err("neighborhood value needs \"minimals\""))?;
            // kept verbatim so that validation can report non-antichains
            FunctorValue::Neighborhood(
                mins.iter()
                    .map(|m| state_set(m, index))
                    .collect::<Result<_>>()?,
            )
        }
    })
}

/// A functor value as JSON with states named by `name`.
pub fn value_to_json(v: &FunctorValue, name: &dyn Fn(State) -> String) -> Value {
    match v {
        FunctorValue::Kripke { props, succ } => json!({
            "props": props.iter().collect::<Vec<_>>(),
            "succ": succ.iter().map(|&s| name(s)).collect::<Vec<_>>(),
        }),
        FunctorValue::Multiset(w) => Value::Object(
            w.iter()
                .map(|(&s, w)| {
                    let w = match w {
                        Weight::Finite(n) => json!(n),
                        Weight::Infinite => json!("inf"),
                    };
                    (name(s), w)
                })
                .collect(),
        ),
        FunctorValue::Distribution(m) => Value::Object(
            m.iter()
                .map(|(&s, m)| (name(s), json!(format_rational(m))))
                .collect(),
        ),
        FunctorValue::Neighborhood(mins) => json!({
            "minimals": mins
                .iter()
                .map(|m| m.iter().map(|&s| name(s)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn model_to_json(c: &Coalgebra) -> Value {
    let mut obj = Map::new();
    obj.insert("functor".into(), json!(c.tag().name()));
    if let FunctorKind::Kripke { atoms } = c.kind() {
        obj.insert("atoms".into(), json!(atoms));
    }
    obj.insert("states".into(), json!(c.states()));
    let name = |s: State| c.name(s);
    obj.insert(
        "transition".into(),
        Value::Object(
            c.carrier()
                .map(|s| (c.name(s), value_to_json(c.transition(s), &name)))
                .collect(),
        ),
    );
    Value::Object(obj)
}

fn raw_pairs(v: &Value) -> Result<Vec<(String, String)>> {
    let pairs = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| model_err("relation needs a \"pairs\" array"))?;
    pairs
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([Value::String(l), Value::String(r)]) => Ok((l.clone(), r.clone())),
            _ => Err(model_err("each pair must be [left, right] state names")),
        })
        .collect()
}

/// Reads `{"pairs": [[l, r], ...]}` against the carriers of `c` and `d`.
pub fn parse_relation(text: &str, c: &Coalgebra, d: &Coalgebra) -> Result<Relation> {
    relation_from_json(&serde_json::from_str(text)?, c, d)
}

pub fn relation_from_json(v: &Value, c: &Coalgebra, d: &Coalgebra) -> Result<Relation> {
    let mut pairs = Vec::new();
    for (l, r) in raw_pairs(v)? {
        let x = c.state(&l).ok_or(Error::UnknownState(l))?;
        let y = d.state(&r).ok_or(Error::UnknownState(r))?;
        pairs.push((x, y));
    }
    Ok(Relation::new(c.len(), d.len(), pairs))
}

pub fn relation_to_json(s: &Relation, c: &Coalgebra, d: &Coalgebra) -> Value {
    json!({
        "pairs": s.iter().map(|(x, y)| [c.name(x), d.name(y)]).collect::<Vec<_>>(),
    })
}

/// A relation read without models: left and right names are numbered in
/// order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedRelation {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub relation: Relation,
}

impl NamedRelation {
    pub fn to_json(&self) -> Value {
        json!({
            "pairs": self
                .relation
                .iter()
                .map(|(x, y)| [&self.left[x], &self.right[y]])
                .collect::<Vec<_>>(),
        })
    }

    pub fn with_relation(&self, relation: Relation) -> NamedRelation {
        NamedRelation {
            left: self.left.clone(),
            right: self.right.clone(),
            relation,
        }
    }
}

pub fn parse_named_relation(text: &str) -> Result<NamedRelation> {
    let raw = raw_pairs(&serde_json::from_str(text)?)?;
    let mut left: Vec<String> = Vec::new();
    let mut right: Vec<String> = Vec::new();
    let intern = |names: &mut Vec<String>, n: &str| match names.iter().position(|m| m == n) {
        Some(i) => i,
        None => {
            names.push(n.to_string());
            names.len() - 1
        }
    };
    let pairs: BTreeSet<(State, State)> = raw
        .iter()
        .map(|(l, r)| (intern(&mut left, l), intern(&mut right, r)))
        .collect();
    let relation = Relation::new(left.len(), right.len(), pairs);
    Ok(NamedRelation {
        left,
        right,
        relation,
    })
}
