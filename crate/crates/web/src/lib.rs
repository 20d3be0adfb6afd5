//! Browser bindings. Each export takes a model file as JSON text and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use pinkey::packing::SteinerMode;
use pinkey::report::{self, SimulateOptions};
use pinkey::{PinModel, TerminalSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn load(model: &str, set: &str) -> Result<(PinModel, TerminalSet), String> {
    let model = pinkey::io::parse_model(model).map_err(|e| e.to_string())?;
    let set = if set.trim().is_empty() {
        TerminalSet::full(model.m())
    } else {
        let members = set
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad terminal {t:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TerminalSet::new(model.m(), members)
    }
    .map_err(|e| e.to_string())?;
    Ok((model, set))
}

fn parse(text: &str) -> Value {
    serde_json::from_str(text).expect("reports are valid JSON")
}

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn mode(name: &str) -> Result<SteinerMode, String> {
    name.parse().map_err(|e: pinkey::Error| e.to_string())
}

fn scale(n: u32) -> Option<u64> {
    (n > 0).then_some(n as u64)
}

/// Capacity, partition bound and base scale of a model.
pub fn analyze_json(model: &str, set: &str) -> Result<Value, String> {
    let (model, set) = load(model, set)?;
    let c = report::capacity(&model, &set).map_err(|e| e.to_string())?;
    let b = report::upper_bound(&model, &set).map_err(|e| e.to_string())?;
    let v = report::validate(&model).map_err(|e| e.to_string())?;
    Ok(json!({
        "capacity": parse(c.structured()),
        "upper_bound": parse(b.structured()),
        "model": parse(v.structured()),
    }))
}

/// Multigraph multiplicities and a tree packing; `scale` 0 means the base scale.
pub fn pack_json(model: &str, set: &str, n: u32, mode_name: &str) -> Result<Value, String> {
    let (model, set) = load(model, set)?;
    let p = report::pack(&model, &set, scale(n), mode(mode_name)?).map_err(|e| e.to_string())?;
    let p = parse(p.structured());
    let scale = p["scale"].as_u64().expect("scale");
    let g = model.realize_multigraph(scale).map_err(|e| e.to_string())?;
    let edges: Vec<Value> = pinkey::model::pairs(model.m())
        .map(|(i, j)| json!([i, j, g.multiplicity(i, j)]))
        .collect();
    Ok(json!({ "packing": p, "multiplicities": edges }))
}

/// Runs and audits the protocol on seeded edge keys.
pub fn simulate_json(
    model: &str,
    set: &str,
    n: u32,
    mode_name: &str,
    seed: u32,
) -> Result<Value, String> {
    let (model, set) = load(model, set)?;
    let opts = SimulateOptions {
        scale: scale(n),
        mode: mode(mode_name)?,
        seed: seed as u64,
        ..SimulateOptions::default()
    };
    let (r, _) = report::simulate(&model, &set, &opts).map_err(|e| e.to_string())?;
    Ok(parse(r.structured()))
}

#[wasm_bindgen]
pub fn analyze(model: &str, set: &str) -> String {
    finish(analyze_json(model, set))
}

#[wasm_bindgen]
pub fn pack(model: &str, set: &str, scale: u32, mode: &str) -> String {
    finish(pack_json(model, set, scale, mode))
}

#[wasm_bindgen]
pub fn simulate(model: &str, set: &str, scale: u32, mode: &str, seed: u32) -> String {
    finish(simulate_json(model, set, scale, mode, seed))
}
