//! Browser bindings: a defect decay curve, an odometer tower and a
//! recurrence histogram, each returned as a JSON string.

use ergoflow_core::config::parse_rational;
use ergoflow_core::odometer::{adic_digits, odometer_step, recurrence_stats, tower, OdometerSpec};
use ergoflow_core::product_spaces::SequenceSpec;
use ergoflow_core::residue::defect_profile;
use ergoflow_core::suite::decimal;
use ergoflow_core::{Error, Rational};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_CURVE: usize = 2000;

fn to_js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn max_of(values: impl Iterator<Item = Rational>) -> Rational {
    values.fold(Rational::default(), |a, b| if b > a { b } else { a })
}

/// Worst defect over the six class pairs and the product bound, for ranges
/// `1..=m` of the constant spec `(l, λ)`.
pub fn defect_curve_json(l: u32, lambda: &str, length: usize) -> Result<String, Error> {
    if length == 0 || length > MAX_CURVE {
        return Err(Error::Validation {
            field: "length".into(),
            message: format!("must lie in 1..={MAX_CURVE}"),
        });
    }
    let lambda = parse_rational(lambda)?;
    let spec = SequenceSpec::constant(l, lambda, length + 1)?;
    let rows = defect_profile(&spec, 1, length + 1)?;
    let points: Vec<_> = rows
        .into_iter()
        .map(|row| {
            let bound = row.defects[0].bound.clone();
            let worst = max_of(row.defects.iter().map(|d| d.value.clone()));
            let pairs: Vec<_> = row
                .defects
                .iter()
                .map(|d| json!({"pair": d.pair.to_string(), "value": decimal(&d.value)}))
                .collect();
            json!({
                "span": row.m - 1,
                "worst": decimal(&worst),
                "bound": decimal(&bound),
                "bound_exact": bound.to_string(),
                "pairs": pairs,
            })
        })
        .collect();
    Ok(json!({"l": l, "points": points}).to_string())
}

/// Cells of the level-`n` tower with their adic codes and `S`-images.
pub fn tower_json(k: u32, n: u32) -> Result<String, Error> {
    if n > 4 {
        return Err(Error::Validation {
            field: "n".into(),
            message: "levels above 4 are too large to draw".into(),
        });
    }
    let spec = OdometerSpec::new(2, k)?;
    let level = tower(&spec, n)?;
    let cells: Vec<_> = level
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let image = odometer_step(&spec, c).map(|s| s.to_string()).unwrap_or_default();
            json!({
                "index": i,
                "digits": c.digits(),
                "adic": adic_digits(&spec, n, i),
                "label": c.to_string(),
                "image": image,
                "measure": c.measure(&spec).to_string(),
            })
        })
        .collect();
    let coarse = if n > 0 { spec.tower_size(n - 1).to_string() } else { "1".into() };
    Ok(json!({"k": k, "n": n, "period": level.period(), "parent_period": coarse, "cells": cells}).to_string())
}

/// Histogram of hit counts for seeded `μ×μ` pairs.
pub fn recurrence_json(k: u32, samples: u32, horizon: u32, seed: u64) -> Result<String, Error> {
    if samples > 200_000 || horizon > 5_000 {
        return Err(Error::Validation {
            field: "samples".into(),
            message: "keep samples <= 200000 and horizon <= 5000".into(),
        });
    }
    let spec = OdometerSpec::new(2, k)?;
    let r = recurrence_stats(&spec, samples as u64, horizon, seed)?;
    Ok(json!({
        "k": k,
        "samples": r.samples,
        "horizon": r.horizon,
        "histogram": r.histogram,
        "min": r.min_hits,
        "max": r.max_hits,
        "mean": r.mean_hits,
        "first_frequency": r.frequency_at(1),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn defect_curve(l: u32, lambda: &str, length: usize) -> Result<String, JsValue> {
    defect_curve_json(l, lambda, length).map_err(to_js)
}

#[wasm_bindgen]
pub fn odometer_tower(k: u32, n: u32) -> Result<String, JsValue> {
    tower_json(k, n).map_err(to_js)
}

#[wasm_bindgen]
pub fn recurrence_histogram(k: u32, samples: u32, horizon: u32, seed: u64) -> Result<String, JsValue> {
    recurrence_json(k, samples, horizon, seed).map_err(to_js)
}
