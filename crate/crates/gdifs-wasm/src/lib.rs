//! Browser bindings for the static demo page under `www/`: thin
//! JSON-in/JSON-out wrappers so the page needs no framework. Every export
//! returns a JSON object; failures come back as `{ "error": "..." }`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use gdifs::rational::to_f64;
use gdifs::{
    certify, check_cssc, classify_attractor, decimal10, format_rational, gap_lengths,
    render_svg, solve_dimension, CertificationStatus, GraphIfs, IfsDocument, RenderSpec,
    DEFAULT_TOLERANCE,
};

fn error_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn build(doc: &str) -> Result<GraphIfs, String> {
    let parsed = IfsDocument::parse(doc).map_err(error_json)?;
    parsed.build().map_err(error_json)
}

fn certification_json(ifs: &GraphIfs) -> Value {
    let report = match certify(ifs) {
        Ok(report) => report,
        Err(_) => return Value::Null,
    };
    let status = match report.status {
        CertificationStatus::Certified => "certified".to_owned(),
        CertificationStatus::FailedCondition(k) => format!("failed condition ({k})"),
        CertificationStatus::Inconclusive => "inconclusive".to_owned(),
    };
    json!({
        "status": status,
        "eigenvector_ratio": decimal10(report.conditions.eigenvector_ratio),
        "cond3_value": decimal10(report.conditions.cond3_value),
        "measures": report.measures.map(|(u, v)| json!([decimal10(u), decimal10(v)])),
    })
}

fn classification_json(ifs: &GraphIfs) -> Value {
    let cert = match classify_attractor(ifs, 0) {
        Ok(cert) => cert,
        Err(_) => return Value::Null,
    };
    let independence = cert.independence.as_ref().map(|evidence| {
        let values: Vec<String> = evidence
            .names
            .iter()
            .zip(&evidence.values)
            .map(|(name, value)| format!("{name} = {}", format_rational(value)))
            .collect();
        json!({
            "values": values,
            "independent": evidence.report.independent,
            "relation": evidence.relation(),
        })
    });
    json!({
        "verdict": cert.verdict.to_string(),
        "rule": cert.rule.map(|r| r.tag()),
        "independence": independence,
        "reason": cert.reason,
    })
}

/// Full report for a document: dimension, separation, measure
/// certification, and the one-vertex exclusion certificate.
#[wasm_bindgen]
pub fn analyze(doc: &str) -> String {
    let ifs = match build(doc) {
        Ok(ifs) => ifs,
        Err(e) => return e,
    };
    let result = match solve_dimension(&ifs, DEFAULT_TOLERANCE) {
        Ok(result) => result,
        Err(e) => return error_json(e),
    };
    let cssc = check_cssc(&ifs);
    json!({
        "vertices": ifs.vertex_count(),
        "edges": ifs.edges().len(),
        "s": result.s,
        "s_decimal10": decimal10(result.s),
        "h": result.h.iter().map(|x| decimal10(*x)).collect::<Vec<_>>(),
        "cssc": cssc.holds,
        "certification": certification_json(&ifs),
        "classification": classification_json(&ifs),
    })
    .to_string()
}

/// Gap lengths at `vertex` after `depth` refinements, smallest first.
#[wasm_bindgen]
pub fn gaps_table(doc: &str, vertex: usize, depth: u32) -> String {
    let ifs = match build(doc) {
        Ok(ifs) => ifs,
        Err(e) => return e,
    };
    match gap_lengths(&ifs, vertex, depth) {
        Err(e) => error_json(e),
        Ok(multiset) => {
            let gaps: Vec<Value> = multiset
                .iter()
                .map(|(length, count)| {
                    json!({
                        "length": format_rational(length),
                        "decimal10": decimal10(to_f64(length)),
                        "count": count,
                    })
                })
                .collect();
            json!({ "vertex": vertex, "depth": depth, "gaps": gaps }).to_string()
        }
    }
}

/// Level-interval figure as `{ "svg": ... }`.
#[wasm_bindgen]
pub fn render_levels(doc: &str, levels: u32) -> String {
    let ifs = match build(doc) {
        Ok(ifs) => ifs,
        Err(e) => return e,
    };
    match render_svg(&ifs, &RenderSpec { levels, ..RenderSpec::default() }) {
        Ok(svg) => json!({ "svg": svg }).to_string(),
        Err(e) => error_json(e),
    }
}
