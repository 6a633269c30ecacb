//! Browser bindings: each export takes plain strings or numbers and returns
//! a JSON document, or throws a string describing the error.

use std::sync::Arc;

use arbordim::aut::{aut_order_formula, enumerate_aut};
use arbordim::dimension::{estimate, DegreeTable};
use arbordim::dynamics::{is_exceptional, is_periodic, parse_map, parse_point, tree_shape, DEFAULT_BIT_CAP};
use arbordim::quad_tower::{galois_degree_sequence, TowerOptions};
use arbordim::tree::FiniteTree;
use serde_json::json;
use wasm_bindgen::prelude::*;

const ENUMERATION_LIMIT: u32 = 1 << 16;

pub fn aut_order_json(d: u32, n: u32) -> Result<String, String> {
    let order = aut_order_formula(d, n).map_err(|e| e.to_string())?;
    let cross = if order <= ENUMERATION_LIMIT.into() {
        let tree = FiniteTree::complete(d as usize, n as usize).map_err(|e| e.to_string())?;
        let g = enumerate_aut(Arc::new(tree), ENUMERATION_LIMIT as usize).map_err(|e| e.to_string())?;
        if order == g.order().into() { "match" } else { "mismatch" }
    } else {
        "skipped: cap"
    };
    let text = order.to_string();
    Ok(json!({"order": text, "digits": text.len(), "cross_check": cross}).to_string())
}

pub fn dimension_json(map: &str, alpha: &str, depth: usize) -> Result<String, String> {
    let f = parse_map(map).map_err(|e| e.to_string())?;
    let a = parse_point(alpha).map_err(|e| e.to_string())?;
    let opts = TowerOptions::default();
    let run = galois_degree_sequence(&f, &a, depth, &opts).map_err(|e| e.to_string())?;
    let seq = run.sequence().map_err(|e| e.to_string())?;
    let table = DegreeTable::new(&seq, &estimate(&seq, 12), Vec::new());
    let mut flags = Vec::new();
    if is_exceptional(&f, &a, DEFAULT_BIT_CAP).map_err(|e| e.to_string())? {
        flags.push("exceptional".to_string());
    }
    if let Some(m) = is_periodic(&f, &a, depth + 8, DEFAULT_BIT_CAP).map_err(|e| e.to_string())? {
        flags.push(format!("periodic m={m}"));
    }
    Ok(json!({
        "map": f.to_string(),
        "alpha": a.to_string(),
        "rows": table.rows,
        "flags": flags,
        "truncated": run.truncated,
    })
    .to_string())
}

pub fn tree_json(map: &str, alpha: &str, depth: usize) -> Result<String, String> {
    let f = parse_map(map).map_err(|e| e.to_string())?;
    let a = parse_point(alpha).map_err(|e| e.to_string())?;
    let shape = tree_shape(&f, &a, depth, DEFAULT_BIT_CAP).map_err(|e| e.to_string())?;
    let dot = match &shape.tree {
        Some(t) => t.to_dot().ok(),
        None => None,
    };
    Ok(json!({
        "level_sizes": shape.level_sizes,
        "incomplete": shape.incomplete,
        "undeterminable": shape.undeterminable,
        "dot": dot,
    })
    .to_string())
}

#[wasm_bindgen(js_name = autOrder)]
pub fn aut_order(d: u32, n: u32) -> Result<String, JsValue> {
    aut_order_json(d, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dimension(map: &str, alpha: &str, depth: usize) -> Result<String, JsValue> {
    dimension_json(map, alpha, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = preimageTree)]
pub fn preimage_tree(map: &str, alpha: &str, depth: usize) -> Result<String, JsValue> {
    tree_json(map, alpha, depth).map_err(|e| JsValue::from_str(&e))
}
