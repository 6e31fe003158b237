//! Browser bindings. Every function takes JSON text in the model format and
//! returns JSON text; errors come back as a string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use coalsim::behavioural::n_step_partition;
use coalsim::io::{parse_model, relation_to_json};
use coalsim::logic::{extension, parse_formula};
use coalsim::simulation::greatest_bisimulation;
use coalsim::{Coalgebra, LambdaSignature, SignatureSpec};

fn signature(lit: &str, models: &[&Coalgebra]) -> Result<LambdaSignature, String> {
    let spec = if lit.trim().is_empty() {
        SignatureSpec::default_for(models[0].tag())
    } else {
        lit.parse::<SignatureSpec>().map_err(|e| e.to_string())?
    };
    spec.resolve(models).map_err(|e| e.to_string())
}

fn model(text: &str, which: &str) -> Result<Coalgebra, String> {
    parse_model(text).map_err(|e| format!("{which} model: {e}"))
}

/// States of `model` satisfying `formula`.
pub fn eval_json(model_text: &str, formula: &str, sig: &str) -> Result<String, String> {
    let c = model(model_text, "the")?;
    let sig = signature(sig, &[&c])?;
    let f = parse_formula(formula, &sig).map_err(|e| e.to_string())?;
    let ext = extension(&f, &c).map_err(|e| e.to_string())?;
    let states: Vec<Value> = c
        .carrier()
        .map(|x| json!({ "state": c.name(x), "holds": ext.contains(&x) }))
        .collect();
    Ok(json!({ "formula": f.to_string(), "rank": f.rank(), "states": states }).to_string())
}

pub fn bisimulation_json(left: &str, right: &str, sig: &str) -> Result<String, String> {
    let (c, d) = (model(left, "left")?, model(right, "right")?);
    let sig = signature(sig, &[&c, &d])?;
    let s = greatest_bisimulation(&c, &d, &sig).map_err(|e| e.to_string())?;
    let mut out = relation_to_json(&s, &c, &d);
    out["separating"] = sig.is_separating().into();
    out["signature"] = sig
        .modalities()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .into();
    Ok(out.to_string())
}

/// Partitions of the disjoint union for every depth `0..=n`.
pub fn partitions_json(left: &str, right: &str, n: usize) -> Result<String, String> {
    let (c, d) = (model(left, "left")?, model(right, "right")?);
    let mut levels = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let p = n_step_partition(&c, &d, k).map_err(|e| e.to_string())?;
        let blocks: Vec<Value> = p
            .members()
            .iter()
            .map(|m| {
                json!({
                    "left": m.iter().filter(|s| !s.0).map(|s| c.name(s.1)).collect::<Vec<_>>(),
                    "right": m.iter().filter(|s| s.0).map(|s| d.name(s.1)).collect::<Vec<_>>(),
                })
            })
            .collect();
        levels.push(json!({ "n": k, "blocks": blocks }));
    }
    Ok(Value::from(levels).to_string())
}

#[wasm_bindgen]
pub fn eval_formula(model: &str, formula: &str, sig: &str) -> Result<String, JsValue> {
    eval_json(model, formula, sig).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn greatest_bisim(left: &str, right: &str, sig: &str) -> Result<String, JsValue> {
    bisimulation_json(left, right, sig).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn n_step_partitions(left: &str, right: &str, n: usize) -> Result<String, JsValue> {
    partitions_json(left, right, n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLE: &str = r#"{"functor":"kripke","atoms":["p"],"states":["a","b"],
      "transition":{"a":{"props":["p"],"succ":["b"]},"b":{"props":[],"succ":["a"]}}}"#;

    #[test]
    fn eval_reports_every_state() {
        let v: Value = serde_json::from_str(&eval_json(CYCLE, "<> p", "").unwrap()).unwrap();
        assert_eq!(v["states"][0], json!({ "state": "a", "holds": false }));
        assert_eq!(v["states"][1], json!({ "state": "b", "holds": true }));
    }

    #[test]
    fn partitions_refine() {
        let v: Value = serde_json::from_str(&partitions_json(CYCLE, CYCLE, 2).unwrap()).unwrap();
        let sizes: Vec<usize> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|l| l["blocks"].as_array().unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 2]);
    }

    #[test]
    fn errors_are_strings() {
        assert!(bisimulation_json("{}", CYCLE, "")
            .unwrap_err()
            .starts_with("left model"));
        assert!(eval_json(CYCLE, "L(1/2) p", "").is_err());
    }
}
