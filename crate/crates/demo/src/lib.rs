//! Browser bindings: three small entry points returning JSON strings.

use nodal::config;
use nodal::nodes;
use nodal::normality::{self, VerdictOptions};
use nodal::scalar::seeded_rng;
use nodal::{FieldSpec, PointSet, ProjectivePoint};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn error_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

/// Generate `x0*g + x1*f` of degree `n` and report its verdict, optionally
/// after dropping the first `drop` nodes.
#[wasm_bindgen]
pub fn example11_verdict(n: u32, seed: u32, drop: u32) -> String {
    let run = || -> nodal::Result<String> {
        let mut inst =
            nodes::example11(n, FieldSpec::default_prime(), &mut seeded_rng(seed as u64))?;
        let labels: Vec<String> = inst
            .nodes
            .labels()
            .iter()
            .take(drop as usize)
            .cloned()
            .collect();
        for l in &labels {
            inst = inst.without_node(l)?;
        }
        let verdict = normality::h4_rank(&inst, VerdictOptions::default())?;
        let report = normality::independent_conditions(&inst.nodes, verdict.degree)?;
        let nodes: Vec<_> = inst
            .nodes
            .iter()
            .map(|(l, p)| json!({ "label": l, "coords": p, "separable": report.is_separable(l) }))
            .collect();
        Ok(json!({
            "n": n,
            "seed": seed,
            "dropped": labels,
            "verdict": verdict,
            "nodes": nodes,
        })
        .to_string())
    };
    run().unwrap_or_else(error_json)
}

/// Thresholds `k(d+3-k) - 1` and the size bound for the plane criterion.
#[wasm_bindgen]
pub fn bese_table(d: u32) -> String {
    if d < 3 {
        return error_json("degree must be at least 3");
    }
    json!({
        "degree": d,
        "m": config::bese_m(d),
        "thresholds": config::bese_thresholds(d),
        "size_bound": config::bese_size_bound(d),
    })
    .to_string()
}

/// Parse one point per line (integer or `a/b` coordinates, all lines the
/// same length) over `F_65521` and report normality at degree `d`.
#[wasm_bindgen]
pub fn normality_of_points(text: &str, d: u32) -> String {
    let run = || -> nodal::Result<String> {
        let field = FieldSpec::default_prime();
        let mut points = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let coords = line
                .split(|c: char| c.is_whitespace() || c == ',' || c == ':')
                .filter(|t| !t.is_empty())
                .map(|t| field.parse_scalar(t))
                .collect::<nodal::Result<Vec<_>>>()?;
            points.push(ProjectivePoint::new(coords)?);
        }
        let dim = points.first().ok_or(nodal::Error::EmptySet)?.dim();
        let set = PointSet::from_points(field, dim, points)?;
        let report = normality::independent_conditions(&set, d)?;
        Ok(serde_json::to_string(&report).expect("report serializes"))
    };
    run().unwrap_or_else(error_json)
}
