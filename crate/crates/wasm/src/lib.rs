//! wasm-bindgen entry points for the static demo in `www/`.
//!
//! Every function takes and returns JSON strings so the page needs no
//! generated type definitions.

use nefsphere::geometry::{fmt_q, parse_q, qvec, Polytope, Rational, Role};
use nefsphere::pipeline::{self, InputSpec, Options, Stage, Verify};
use nefsphere::subdivision::is_central;
use nefsphere::tropical::{LiftedSupport, SceneCell};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

fn heights(values: &[String]) -> Result<Vec<Rational>, String> {
    values.iter().map(|s| parse_q(s).ok_or_else(|| format!("not a rational: {s:?}"))).collect()
}

/// Lattice points of the convex hull of the given integer vertices.
pub fn lattice_points_json(vertices: &str) -> Result<String, String> {
    let vs: Vec<Vec<i64>> = parse(vertices)?;
    let p = Polytope::from_integer_points(&vs, Role::M).map_err(|e| e.to_string())?;
    Ok(json!({ "points": p.lattice_points(), "vertices": p.integer_vertices() }).to_string())
}

/// All cells of the regular subdivision of `points` lifted by `heights`.
pub fn subdivision_json(points: &str, heights_text: &str) -> Result<String, String> {
    let pts: Vec<Vec<i64>> = parse(points)?;
    let hs = heights(&parse::<Vec<String>>(heights_text)?)?;
    if hs.len() != pts.len() {
        return Err("one height per point is required".into());
    }
    let support = LiftedSupport::from_points(pts.clone(), hs, Role::M).map_err(|e| e.to_string())?;
    let top = support.cell_dims.iter().copied().max().unwrap_or(0);
    let maximal: Vec<&Vec<usize>> =
        support.cells.iter().zip(&support.cell_dims).filter(|(_, &d)| d == top).map(|(c, _)| c).collect();
    let hull = Polytope::hull(&pts.iter().map(|p| qvec(p)).collect::<Vec<_>>(), Role::M).map_err(|e| e.to_string())?;
    let maximal_owned: Vec<Vec<usize>> = maximal.iter().map(|c| c.to_vec()).collect();
    let central = hull.contains_origin_in_interior() && is_central(&hull, &pts, &maximal_owned);
    let cells: Vec<Value> =
        support.cells.iter().zip(&support.cell_dims).map(|(c, d)| json!({ "dim": d, "vertices": c })).collect();
    Ok(json!({ "points": support.points, "cells": cells, "maximal": maximal, "central": central }).to_string())
}

/// Cells of the tropical hypersurface: vertices, rays and generating cell.
pub fn amoeba_json(points: &str, heights_text: &str) -> Result<String, String> {
    let pts: Vec<Vec<i64>> = parse(points)?;
    let hs = heights(&parse::<Vec<String>>(heights_text)?)?;
    if hs.len() != pts.len() {
        return Err("one height per point is required".into());
    }
    let support = LiftedSupport::from_points(pts, hs, Role::M).map_err(|e| e.to_string())?;
    let cells = support.amoeba().map_err(|e| e.to_string())?;
    let scene: Vec<SceneCell> = cells.iter().map(|c| SceneCell::new(&support, c)).collect();
    let points_out: Vec<Vec<i64>> = support.points.clone();
    let h: Vec<String> = support.heights.iter().map(fmt_q).collect();
    Ok(json!({ "points": points_out, "heights": h, "cells": scene }).to_string())
}

/// Runs the pipeline through the sphere complex and discriminant.
pub fn sphere_json(input: &str) -> Result<String, String> {
    let spec = InputSpec::from_json(input).map_err(|e| e.to_string())?;
    let opts = Options { verify: Verify::Fast, dual: false, require_irreducible: false };
    let (report, _) = pipeline::run(&spec, opts, Stage::Monodromy).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

#[wasm_bindgen]
pub fn lattice_points(vertices: &str) -> Result<String, JsValue> {
    lattice_points_json(vertices).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn subdivision(points: &str, heights: &str) -> Result<String, JsValue> {
    subdivision_json(points, heights).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn amoeba(points: &str, heights: &str) -> Result<String, JsValue> {
    amoeba_json(points, heights).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sphere(input: &str) -> Result<String, JsValue> {
    sphere_json(input).map_err(|e| JsValue::from_str(&e))
}
