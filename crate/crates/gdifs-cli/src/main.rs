//! Command-line front end: parse an IFS document, run the requested
//! pipeline, and print either a human-readable report or a single JSON
//! document. Exit codes: 0 success, 2 invalid input, 3 the computation
//! ran but certification / classification was not achieved, 1 internal
//! error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gdifs::rational::{pow_exact, to_f64};
use gdifs::{
    certify, check_cssc, classify_attractor, compare_gap_sets, compute_hulls, decimal10, density,
    enumerate_coset_union, format_rational, gap_lengths, one_vertex_gap_expression,
    parse_rational, rat_int, render_svg, solve_dimension, two_vertex_gap_expression,
    CanonicalFamily, CertificationStatus, CompareMode, ConditionReport, ConditionStatus,
    CosetUnion, GapMultiset, GapSetComparison, GraphIfs, IfsDocument, Rational, RenderSpec,
    Verdict, DEFAULT_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "gdifs",
    version,
    about = "Dimension, measure, gap and classification reports for graph-directed \
             systems of contracting similarities on the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output style: a human-readable report or one JSON document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document: structure, hulls, and the separation condition.
    Validate { file: PathBuf },
    /// Solve for the Hausdorff dimension and the Perron eigenvector.
    Dimension {
        file: PathBuf,
        /// Bisection tolerance on the spectral radius.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Certify the exact Hausdorff measures of a two-vertex family.
    Measure { file: PathBuf },
    /// List gap lengths at a vertex and cross-check the coset expression.
    Gaps {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Refinement depth.
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Smallest length the cross-check enumerates, as a rational "p/q".
        #[arg(long)]
        cutoff: Option<String>,
    },
    /// Bound the normalized density of an interval at a vertex.
    Density {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Interval endpoints, two rationals "lo" "hi".
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        interval: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Certify whether the attractor at a vertex can be the attractor of a
    /// single-vertex system.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
    },
    /// Draw the level-k intervals as an SVG figure.
    Render {
        file: PathBuf,
        /// Deepest level to draw (level 0 is the hull row).
        #[arg(long, default_value_t = 4)]
        levels: u32,
        /// Output path; omit to print the SVG to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

enum Failure {
    /// Unreadable, malformed, or out-of-domain input.
    Invalid(String),
    /// A library inconsistency or an OS-level fault.
    Internal(String),
}

impl Failure {
    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn success(stdout: String) -> Outcome {
        Outcome { stdout, code: 0 }
    }

    fn unresolved(stdout: String) -> Outcome {
        Outcome { stdout, code: 3 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Validate { file } => validate(&file, format),
        Command::Dimension { file, tol } => dimension(&file, tol, format),
        Command::Measure { file } => measure(&file, format),
        Command::Gaps { file, vertex, depth, cutoff } => {
            gaps(&file, vertex, depth, cutoff.as_deref(), format)
        }
        Command::Density { file, vertex, interval, depth } => {
            density_report(&file, vertex, &interval, depth, format)
        }
        Command::Classify { file, vertex } => classify(&file, vertex, format),
        Command::Render { file, levels, out } => render(&file, levels, out.as_deref(), format),
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn load(file: &Path) -> Result<(IfsDocument, GraphIfs), Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", file.display())))?;
    let doc = IfsDocument::parse(&text).map_err(invalid)?;
    let ifs = doc.build().map_err(invalid)?;
    Ok((doc, ifs))
}

/// "p/q (0.1234567890)" — the exact value first, its decimal for reading.
fn both(r: &Rational) -> String {
    format!("{} ({})", format_rational(r), decimal10(to_f64(r)))
}

fn emit_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

fn condition_word(status: ConditionStatus) -> &'static str {
    match status {
        ConditionStatus::Holds => "holds",
        ConditionStatus::Boundary => "boundary",
        ConditionStatus::Fails => "fails",
    }
}

fn certification_phrase(status: CertificationStatus) -> String {
    match status {
        CertificationStatus::Certified => "certified".to_owned(),
        CertificationStatus::FailedCondition(k) => format!("failed condition ({k})"),
        CertificationStatus::Inconclusive => {
            "inconclusive (a condition sits within numerical clearance of its boundary)"
                .to_owned()
        }
    }
}

fn certification_json(status: CertificationStatus) -> Value {
    match status {
        CertificationStatus::Certified => json!("certified"),
        CertificationStatus::FailedCondition(k) => json!(format!("failed_condition_{k}")),
        CertificationStatus::Inconclusive => json!("inconclusive"),
    }
}

fn condition_lines(out: &mut String, c: &ConditionReport) {
    let _ = writeln!(
        out,
        "  condition 1 (hull lengths equal): {}",
        if c.hull_lengths_equal { "holds" } else { "fails" }
    );
    let _ = writeln!(
        out,
        "  condition 2 (h_v/h_u < 1): {} — value {}",
        condition_word(c.cond2),
        decimal10(c.eigenvector_ratio)
    );
    let _ = writeln!(
        out,
        "  condition 3 (left-gap growth bound >= 1): {} — value {}",
        condition_word(c.cond3),
        decimal10(c.cond3_value)
    );
    let _ = writeln!(out, "  comparison clearance band: {:.3e}", c.clearance);
}

fn condition_json(c: &ConditionReport) -> Value {
    json!({
        "hull_lengths_equal": c.hull_lengths_equal,
        "eigenvector_ratio": c.eigenvector_ratio,
        "eigenvector_ratio_decimal10": decimal10(c.eigenvector_ratio),
        "cond2": condition_word(c.cond2),
        "cond3": condition_word(c.cond3),
        "cond3_value": c.cond3_value,
        "cond3_value_decimal10": decimal10(c.cond3_value),
        "clearance": c.clearance,
    })
}

fn validate(file: &Path, format: Format) -> Result<Outcome, Failure> {
    let (doc, ifs) = load(file)?;
    let hulls = compute_hulls(&ifs);
    let cssc = check_cssc(&ifs);
    let form = match doc {
        IfsDocument::Family { .. } => "canonical two-vertex family",
        IfsDocument::Graph { .. } => "general graph",
    };

    if format == Format::Machine {
        let hull_list: Vec<Value> = (0..ifs.vertex_count())
            .map(|u| {
                let (lo, hi) = hulls.interval(u);
                json!({
                    "vertex": u,
                    "lo": format_rational(lo),
                    "hi": format_rational(hi),
                })
            })
            .collect();
        let violations: Vec<Value> = cssc
            .violations
            .iter()
            .map(|v| json!({ "vertex": v.vertex, "first": v.first, "second": v.second }))
            .collect();
        let report = json!({
            "command": "validate",
            "file": file.display().to_string(),
            "form": form,
            "vertices": ifs.vertex_count(),
            "edges": ifs.edges().len(),
            "hulls": hull_list,
            "hulls_exact": hulls.exact,
            "cssc": cssc.holds,
            "cssc_violations": violations,
        });
        return Ok(Outcome::success(emit_json(&report)));
    }

    let mut out = String::new();
    let _ = writeln!(out, "validation report for {}", file.display());
    let _ = writeln!(out, "  form: {form}");
    let _ = writeln!(out, "  vertices: {}", ifs.vertex_count());
    let _ = writeln!(out, "  edges: {}", ifs.edges().len());
    let _ = writeln!(out, "  structural checks (contractions, connectivity, branching): ok");
    for u in 0..ifs.vertex_count() {
        let (lo, hi) = hulls.interval(u);
        let _ = writeln!(out, "  hull[{u}]: [{}, {}]", both(lo), both(hi));
    }
    let _ = writeln!(
        out,
        "  hull endpoints: {}",
        if hulls.exact {
            format!("exact (fixed point after {} iterations)", hulls.iterations)
        } else {
            "approximate (endpoint iteration truncated)".to_owned()
        }
    );
    if cssc.holds {
        let _ = writeln!(out, "  separation (disjoint sibling images): satisfied");
    } else {
        for v in &cssc.violations {
            let _ = writeln!(
                out,
                "  separation violated at vertex {} between edges {} and {}",
                v.vertex, v.first, v.second
            );
        }
    }
    Ok(Outcome::success(out))
}

fn dimension(file: &Path, tol: f64, format: Format) -> Result<Outcome, Failure> {
    if !(tol > 0.0) {
        return Err(Failure::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let (_, ifs) = load(file)?;
    let result = solve_dimension(&ifs, tol)
        .map_err(|e| Failure::Internal(format!("dimension solve failed: {e}")))?;

    if format == Format::Machine {
        let report = json!({
            "command": "dimension",
            "file": file.display().to_string(),
            "s": result.s,
            "s_decimal10": decimal10(result.s),
            "rho_residual": result.rho_residual,
            "h": result.h,
            "bisection_iterations": result.bisection_iterations,
        });
        return Ok(Outcome::success(emit_json(&report)));
    }

    let mut out = String::new();
    let _ = writeln!(out, "dimension report for {}", file.display());
    let _ = writeln!(out, "  vertices: {}", ifs.vertex_count());
    let _ = writeln!(out, "  edges: {}", ifs.edges().len());
    let _ = writeln!(out, "  s: {}", decimal10(result.s));
    let _ = writeln!(out, "  spectral-radius residual: {:.3e}", result.rho_residual);
    let _ = writeln!(out, "  bisection iterations: {}", result.bisection_iterations);
    for (u, value) in result.h.iter().enumerate() {
        let _ = writeln!(out, "  h[{u}]: {}", decimal10(*value));
    }
    Ok(Outcome::success(out))
}

fn measure(file: &Path, format: Format) -> Result<Outcome, Failure> {
    let (_, ifs) = load(file)?;
    let report = certify(&ifs).map_err(invalid)?;
    let certified = report.status == CertificationStatus::Certified;

    if format == Format::Machine {
        let machine = json!({
            "command": "measure",
            "file": file.display().to_string(),
            "family": family_json(&report.family),
            "s": report.s,
            "s_decimal10": decimal10(report.s),
            "conditions": condition_json(&report.conditions),
            "status": certification_json(report.status),
            "measures": report.measures.map(|(u, v)| json!({
                "u": u,
                "u_decimal10": decimal10(u),
                "v": v,
                "v_decimal10": decimal10(v),
            })),
        });
        let text = emit_json(&machine);
        return Ok(if certified { Outcome::success(text) } else { Outcome::unresolved(text) });
    }

    let mut out = String::new();
    let _ = writeln!(out, "measure report for {}", file.display());
    let _ = writeln!(out, "  family: {}", family_line(&report.family));
    let _ = writeln!(out, "  s: {}", decimal10(report.s));
    condition_lines(&mut out, &report.conditions);
    let _ = writeln!(out, "  status: {}", certification_phrase(report.status));
    if let Some((m_u, m_v)) = report.measures {
        let _ = writeln!(
            out,
            "  exact measures: H^s at u = {}, H^s at v = {}",
            decimal10(m_u),
            decimal10(m_v)
        );
    }
    Ok(if certified { Outcome::success(out) } else { Outcome::unresolved(out) })
}

fn family_line(family: &CanonicalFamily) -> String {
    family
        .parameters()
        .into_iter()
        .map(|(name, value)| format!("{name} = {}", format_rational(value)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn family_json(family: &CanonicalFamily) -> Value {
    let mut map = serde_json::Map::new();
    for (name, value) in family.parameters() {
        map.insert(name.to_string(), json!(format_rational(value)));
    }
    Value::Object(map)
}

/// Default enumeration floor: twice the largest depth-`k` shrink of the
/// largest first-level gap, so everything the cross-check can still owe is
/// strictly below it.
fn default_cutoff(ifs: &GraphIfs, depth: u32) -> Result<Rational, Failure> {
    let max_ratio = ifs
        .edges()
        .iter()
        .map(|e| e.map.ratio.clone())
        .max()
        .expect("validated systems have edges");
    let mut max_gap: Option<Rational> = None;
    for u in 0..ifs.vertex_count() {
        for length in gap_lengths(ifs, u, 1).map_err(invalid)?.into_keys() {
            if max_gap.as_ref().is_none_or(|g| length > *g) {
                max_gap = Some(length);
            }
        }
    }
    let max_gap = max_gap
        .ok_or_else(|| Failure::Invalid("the system has no first-level gaps".to_owned()))?;
    Ok(rat_int(2) * pow_exact(&max_ratio, depth as i32) * max_gap)
}

fn coset_expression(ifs: &GraphIfs, vertex: usize) -> Result<Option<CosetUnion>, Failure> {
    if let Some(family) = CanonicalFamily::from_ifs(ifs) {
        let oriented = if vertex == 0 { family } else { family.swapped() };
        let expression =
            two_vertex_gap_expression(&oriented, oriented.equal_cross_ratios())
                .map_err(invalid)?;
        return Ok(Some(expression));
    }
    if ifs.vertex_count() == 1 {
        return Ok(Some(one_vertex_gap_expression(ifs).map_err(invalid)?));
    }
    Ok(None)
}

fn gaps(
    file: &Path,
    vertex: usize,
    depth: u32,
    cutoff: Option<&str>,
    format: Format,
) -> Result<Outcome, Failure> {
    let (_, ifs) = load(file)?;
    let multiset = gap_lengths(&ifs, vertex, depth).map_err(invalid)?;
    let cutoff = match cutoff {
        Some(text) => {
            let value = parse_rational(text).map_err(invalid)?;
            if value <= rat_int(0) {
                return Err(Failure::Invalid(format!(
                    "cutoff must be positive, got {text}"
                )));
            }
            value
        }
        None => default_cutoff(&ifs, depth)?,
    };

    let expression = coset_expression(&ifs, vertex)?;
    let cross_check = match &expression {
        Some(expression) => {
            let enumerated = enumerate_coset_union(expression, &cutoff).map_err(invalid)?;
            let direct: GapMultiset = multiset
                .iter()
                .filter(|(length, _)| **length >= cutoff)
                .map(|(length, count)| (length.clone(), *count))
                .collect();
            let comparison = compare_gap_sets(&enumerated, &direct, CompareMode::Set);
            if let GapSetComparison::Differ { witness } = &comparison {
                return Err(Failure::Internal(format!(
                    "coset expression disagrees with enumerated gaps at length {}",
                    format_rational(witness)
                )));
            }
            Some((expression, enumerated.len()))
        }
        None => None,
    };

    if format == Format::Machine {
        let gap_list: Vec<Value> = multiset
            .iter()
            .map(|(length, count)| {
                json!({
                    "length": format_rational(length),
                    "decimal10": decimal10(to_f64(length)),
                    "count": count,
                })
            })
            .collect();
        let report = json!({
            "command": "gaps",
            "file": file.display().to_string(),
            "vertex": vertex,
            "depth": depth,
            "gaps": gap_list,
            "cross_check": cross_check.as_ref().map(|(expression, matched)| json!({
                "cutoff": format_rational(&cutoff),
                "cosets": expression.cosets.len(),
                "lengths_compared": matched,
                "equal_as_sets": true,
            })),
        });
        return Ok(Outcome::success(emit_json(&report)));
    }

    let mut out = String::new();
    let _ = writeln!(out, "gap report for {}", file.display());
    let _ = writeln!(out, "  vertex: {vertex}");
    let _ = writeln!(out, "  depth: {depth}");
    let total: usize = multiset.values().sum();
    let _ = writeln!(out, "  gaps ({} distinct lengths, {} gaps):", multiset.len(), total);
    for (length, count) in &multiset {
        let _ = writeln!(out, "    {} x {count}", both(length));
    }
    match cross_check {
        Some((expression, matched)) => {
            let _ = writeln!(out, "  coset cross-check:");
            let _ = writeln!(out, "    cutoff: {}", both(&cutoff));
            for coset in &expression.cosets {
                let generators = coset
                    .generators
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    out,
                    "    coset: {} * <{generators}>*",
                    format_rational(&coset.scale)
                );
            }
            let _ = writeln!(
                out,
                "    agreement: equal as sets ({matched} lengths at or above the cutoff)"
            );
        }
        None => {
            let _ = writeln!(
                out,
                "  coset cross-check: not available for this graph shape"
            );
        }
    }
    Ok(Outcome::success(out))
}

fn density_report(
    file: &Path,
    vertex: usize,
    interval: &[String],
    depth: u32,
    format: Format,
) -> Result<Outcome, Failure> {
    let (_, ifs) = load(file)?;
    let lo = parse_rational(&interval[0]).map_err(invalid)?;
    let hi = parse_rational(&interval[1]).map_err(invalid)?;
    if lo >= hi {
        return Err(Failure::Invalid(format!(
            "interval endpoints must satisfy lo < hi, got [{}, {}]",
            format_rational(&lo),
            format_rational(&hi)
        )));
    }
    let result = solve_dimension(&ifs, DEFAULT_TOLERANCE)
        .map_err(|e| Failure::Internal(format!("dimension solve failed: {e}")))?;
    let bounds =
        density(&ifs, result.s, &result.h, vertex, &lo, &hi, depth).map_err(invalid)?;

    if format == Format::Machine {
        let report = json!({
            "command": "density",
            "file": file.display().to_string(),
            "vertex": vertex,
            "depth": depth,
            "interval": [format_rational(&lo), format_rational(&hi)],
            "s": result.s,
            "s_decimal10": decimal10(result.s),
            "density_lower": bounds.lower,
            "density_lower_decimal10": decimal10(bounds.lower),
            "density_upper": bounds.upper,
            "density_upper_decimal10": decimal10(bounds.upper),
        });
        return Ok(Outcome::success(emit_json(&report)));
    }

    let length = &hi - &lo;
    let mut out = String::new();
    let _ = writeln!(out, "density report for {}", file.display());
    let _ = writeln!(out, "  vertex: {vertex}");
    let _ = writeln!(
        out,
        "  interval: [{}, {}], length {}",
        format_rational(&lo),
        format_rational(&hi),
        both(&length)
    );
    let _ = writeln!(out, "  depth: {depth}");
    let _ = writeln!(out, "  s: {}", decimal10(result.s));
    let _ = writeln!(
        out,
        "  normalized density mu(J)/|J|^s in [{}, {}]",
        decimal10(bounds.lower),
        decimal10(bounds.upper)
    );
    Ok(Outcome::success(out))
}

fn verdict_token(verdict: &Verdict) -> &'static str {
    match verdict {
        Verdict::NotOneVertexAttractor(_) => "NotOneVertexAttractor",
        Verdict::Inconclusive => "Inconclusive",
        Verdict::NotApplicable => "NotApplicable",
    }
}

fn classify(file: &Path, vertex: usize, format: Format) -> Result<Outcome, Failure> {
    let (_, ifs) = load(file)?;
    let cert = classify_attractor(&ifs, vertex).map_err(invalid)?;
    let conclusive = matches!(cert.verdict, Verdict::NotOneVertexAttractor(_));

    if format == Format::Machine {
        let independence = cert.independence.as_ref().map(|evidence| {
            let values: Vec<Value> = evidence
                .names
                .iter()
                .zip(&evidence.values)
                .map(|(name, value)| json!({ "name": name, "value": format_rational(value) }))
                .collect();
            json!({
                "values": values,
                "independent": evidence.report.independent,
                "relation": evidence.relation(),
            })
        });
        let structure = cert.structure.as_ref().map(|report| {
            json!({
                "found": report.found,
                "cycles": report.cycles.as_ref().map(|(c1, c2, c3)| {
                    json!([c1.edges, c2.edges, c3.edges])
                }),
            })
        });
        let report = json!({
            "command": "classify",
            "file": file.display().to_string(),
            "vertex": cert.vertex,
            "verdict": verdict_token(&cert.verdict),
            "verdict_text": cert.verdict.to_string(),
            "rule": cert.rule.map(|r| r.tag()),
            "scope": cert.rule.map(|r| r.scope().to_string()),
            "s": cert.dimension,
            "s_decimal10": cert.dimension.map(decimal10),
            "conditions": cert.conditions.as_ref().map(condition_json),
            "independence": independence,
            "structure": structure,
            "reason": cert.reason,
        });
        let text = emit_json(&report);
        return Ok(if conclusive { Outcome::success(text) } else { Outcome::unresolved(text) });
    }

    let mut out = String::new();
    let _ = writeln!(out, "certificate for {}", file.display());
    let _ = writeln!(out, "  vertex: {}", cert.vertex);
    let _ = writeln!(out, "  verdict: {}", cert.verdict);
    if let Some(rule) = cert.rule {
        let _ = writeln!(out, "  rule: {} (excludes {})", rule.tag(), rule.scope());
    }
    if let Some(s) = cert.dimension {
        let _ = writeln!(out, "  dimension s: {}", decimal10(s));
    }
    if let Some(conditions) = &cert.conditions {
        condition_lines(&mut out, conditions);
    }
    if let Some(evidence) = &cert.independence {
        let listed = evidence
            .names
            .iter()
            .zip(&evidence.values)
            .map(|(name, value)| format!("{name} = {}", format_rational(value)))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "  independence values: {listed}");
        match evidence.relation() {
            None => {
                let _ = writeln!(
                    out,
                    "  independence: verified, no integer-exponent relation exists"
                );
            }
            Some(relation) => {
                let _ = writeln!(out, "  independence: fails, witness {relation}");
            }
        }
    }
    if let Some(structure) = &cert.structure {
        match &structure.cycles {
            Some((c1, c2, c3)) => {
                let _ = writeln!(
                    out,
                    "  cycle triple: edges {:?}, {:?}, {:?}",
                    c1.edges, c2.edges, c3.edges
                );
            }
            None => {
                let _ = writeln!(out, "  cycle triple: not found");
            }
        }
    }
    let _ = writeln!(out, "  reason: {}", cert.reason);
    Ok(if conclusive { Outcome::success(out) } else { Outcome::unresolved(out) })
}

fn render(
    file: &Path,
    levels: u32,
    out_path: Option<&Path>,
    format: Format,
) -> Result<Outcome, Failure> {
    let (_, ifs) = load(file)?;
    let spec = RenderSpec { levels, ..RenderSpec::default() };
    let svg = render_svg(&ifs, &spec).map_err(invalid)?;
    match out_path {
        None => Ok(Outcome::success(svg)),
        Some(path) => {
            fs::write(path, &svg).map_err(|e| {
                Failure::Internal(format!("cannot write {}: {e}", path.display()))
            })?;
            let rectangles = svg.matches("<rect").count();
            if format == Format::Machine {
                let report = json!({
                    "command": "render",
                    "file": file.display().to_string(),
                    "out": path.display().to_string(),
                    "levels": levels,
                    "bytes": svg.len(),
                    "rectangles": rectangles,
                });
                return Ok(Outcome::success(emit_json(&report)));
            }
            Ok(Outcome::success(format!(
                "wrote {} ({} bytes, {rectangles} rectangles, levels 0..={levels})\n",
                path.display(),
                svg.len()
            )))
        }
    }
}
