//! Versioned reports for the command-line tool and the browser demo.
//!
//! Every report renders both as plain text and as pretty-printed JSON. The
//! JSON carries `"version"`; exact quantities are `"p/q"` strings.

use serde::Serialize;

use crate::audit::{audit_with_limit, AuditFailure, AuditReport, AUDIT_BRUTEFORCE_EDGES};
use crate::capacity::solve_capacity;
use crate::error::{Error, Result};
use crate::model::{
    format_rational, pairs, rational_to_f64, Mode, PinModel, Rational, TerminalSet,
    WEIGHT_MATCH_TOLERANCE,
};
use crate::packing::{steiner_packing, SteinerMode, TreePacking};
use crate::partition;
use crate::protocol::{bits_to_hex, draw_edge_keys, run_protocol};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    text: String,
    structured: String,
    audit_failure: Option<String>,
}

impl Report {
    fn new<T: Serialize>(text: String, body: &T) -> Self {
        let structured = serde_json::to_string_pretty(body).expect("report serializes");
        Report {
            text,
            structured,
            audit_failure: None,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Pretty JSON without a trailing newline.
    pub fn structured(&self) -> &str {
        &self.structured
    }

    /// Why the audit failed, for simulation reports that failed it.
    pub fn audit_failed(&self) -> Option<&str> {
        self.audit_failure.as_deref()
    }
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

/// Exact as `"p/q"`; in float mode the value was computed exactly from the
/// float weights and is shown as a number.
fn value_out(model: &PinModel, x: &Rational) -> WeightOut {
    match model.mode() {
        Mode::Exact => WeightOut::Exact(r(x)),
        Mode::Float => WeightOut::Float(rational_to_f64(x)),
    }
}

fn value_text(v: &WeightOut) -> String {
    match v {
        WeightOut::Exact(s) => s.clone(),
        WeightOut::Float(x) => format!("{x} (float weights, tolerance {WEIGHT_MATCH_TOLERANCE:e})"),
    }
}

fn mode_name(model: &PinModel) -> &'static str {
    match model.mode() {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

#[derive(Serialize)]
struct LambdaOut {
    subset: Vec<usize>,
    weight: String,
}

#[derive(Serialize)]
struct PairValue {
    i: usize,
    j: usize,
    value: String,
}

#[derive(Serialize)]
struct CapacityOut<'a> {
    version: u32,
    command: &'static str,
    terminals: usize,
    set: &'a [usize],
    mode: &'static str,
    capacity: WeightOut,
    lambda: Vec<LambdaOut>,
    coefficients: Vec<PairValue>,
}

pub fn capacity(model: &PinModel, set: &TerminalSet) -> Result<Report> {
    let c = solve_capacity(&model.to_exact(), set)?;
    let value = value_out(model, &c.value);
    let lambda: Vec<LambdaOut> = c
        .lambda
        .support()
        .into_iter()
        .map(|(subset, w)| LambdaOut {
            subset,
            weight: r(&w),
        })
        .collect();
    let coefficients: Vec<PairValue> = c
        .coefficients
        .iter()
        .map(|((i, j), v)| PairValue {
            i: *i,
            j: *j,
            value: r(v),
        })
        .collect();
    let mut text = format!("set {set}\ncapacity {}\nweights\n", value_text(&value));
    for l in &lambda {
        text += &format!("  {} {}\n", subset_text(&l.subset), l.weight);
    }
    let body = CapacityOut {
        version: REPORT_VERSION,
        command: "capacity",
        terminals: model.m(),
        set: set.members(),
        mode: mode_name(model),
        capacity: value,
        lambda,
        coefficients,
    };
    Ok(Report::new(text, &body))
}

fn subset_text(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Serialize)]
struct BoundOut<'a> {
    version: u32,
    command: &'static str,
    terminals: usize,
    set: &'a [usize],
    mode: &'static str,
    upper_bound: WeightOut,
    partition: Vec<Vec<usize>>,
}

pub fn upper_bound(model: &PinModel, set: &TerminalSet) -> Result<Report> {
    let b = partition::upper_bound(&model.to_exact(), set)?;
    let value = value_out(model, &b.value);
    let text = format!(
        "set {set}\nupper bound {} at partition {}\n",
        value_text(&value),
        b.partition
    );
    let body = BoundOut {
        version: REPORT_VERSION,
        command: "upper-bound",
        terminals: model.m(),
        set: set.members(),
        mode: mode_name(model),
        upper_bound: value,
        partition: b.partition.atoms(),
    };
    Ok(Report::new(text, &body))
}

fn resolve_scale(model: &PinModel, scale: Option<u64>) -> Result<u64> {
    match scale {
        Some(s) => Ok(s),
        None => model.base_scale(),
    }
}

fn method_name(m: usize, set: &TerminalSet, mode: SteinerMode) -> &'static str {
    if set.len() == 2 {
        "paths"
    } else if set.is_full(m) {
        "spanning"
    } else {
        match mode {
            SteinerMode::Exact => "exact",
            SteinerMode::Greedy => "greedy",
        }
    }
}

type TreeOut = Vec<(usize, usize, u64)>;

fn trees_out(p: &TreePacking) -> Vec<TreeOut> {
    p.trees()
        .iter()
        .map(|t| t.edges().iter().map(|e| (e.i, e.j, e.copy)).collect())
        .collect()
}

fn trees_text(p: &TreePacking) -> String {
    let mut out = String::new();
    for (k, t) in p.trees().iter().enumerate() {
        let edges: Vec<String> = t.edges().iter().map(|e| e.to_string()).collect();
        out += &format!("  tree {k}: {}\n", edges.join(" "));
    }
    out
}

#[derive(Serialize)]
struct PackOut<'a> {
    version: u32,
    command: &'static str,
    terminals: usize,
    set: &'a [usize],
    scale: u64,
    method: &'static str,
    edges: u64,
    count: usize,
    rate: String,
    trees: Vec<TreeOut>,
}

pub fn pack(
    model: &PinModel,
    set: &TerminalSet,
    scale: Option<u64>,
    mode: SteinerMode,
) -> Result<Report> {
    let scale = resolve_scale(model, scale)?;
    let g = model.realize_multigraph(scale)?;
    let p = steiner_packing(&g, set, mode)?;
    let rate = Rational::new((p.len() as u64).into(), scale.into());
    let method = method_name(model.m(), set, mode);
    let text = format!(
        "set {set}\nscale {scale}\nmethod {method}\nedges {}\ntrees {}\nrate {}\n{}",
        g.edge_count(),
        p.len(),
        r(&rate),
        trees_text(&p)
    );
    let body = PackOut {
        version: REPORT_VERSION,
        command: "pack",
        terminals: model.m(),
        set: set.members(),
        scale,
        method,
        edges: g.edge_count(),
        count: p.len(),
        rate: r(&rate),
        trees: trees_out(&p),
    };
    Ok(Report::new(text, &body))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    FlipBroadcast,
    KeyFromBroadcast,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulateOptions {
    pub scale: Option<u64>,
    pub mode: SteinerMode,
    pub seed: u64,
    /// Adds the enumeration cross-check when the run is small enough.
    pub bruteforce: bool,
    pub fault: Option<Fault>,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            scale: None,
            mode: SteinerMode::Exact,
            seed: 0,
            bruteforce: true,
            fault: None,
        }
    }
}

#[derive(Serialize)]
struct Bits {
    bits: usize,
    hex: String,
}

impl Bits {
    fn of(b: &[bool]) -> Self {
        Bits {
            bits: b.len(),
            hex: bits_to_hex(b),
        }
    }
}

#[derive(Serialize)]
struct BroadcastOut {
    tree: usize,
    terminal: usize,
    bit: u8,
    support: [usize; 2],
}

#[derive(Serialize)]
struct Counts {
    edges: usize,
    key: usize,
    transcript: usize,
    residual: usize,
}

#[derive(Serialize)]
struct Recovery {
    terminal: usize,
    recovered: bool,
}

#[derive(Serialize)]
struct AuditOut {
    method: &'static str,
    s: String,
    h_k_given_f: String,
    uniformity_deficit: String,
    recoverability: Vec<Recovery>,
    passed: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SimulateOut<'a> {
    version: u32,
    command: &'static str,
    terminals: usize,
    set: &'a [usize],
    scale: u64,
    method: &'static str,
    seed: u64,
    counts: Counts,
    rate: String,
    key: Bits,
    residual: Bits,
    trees: Vec<TreeOut>,
    transcript: Vec<BroadcastOut>,
    audit: AuditOut,
}

fn failure_text(f: &AuditFailure) -> String {
    match f {
        AuditFailure::RecoveryMismatch { terminal } => {
            format!("terminal {terminal} did not recover the key")
        }
        AuditFailure::Leakage { s } => format!("security index {} is positive", r(s)),
        AuditFailure::MethodDisagreement => "rank and enumeration disagree".into(),
    }
}

fn audit_out(a: &AuditReport) -> AuditOut {
    AuditOut {
        method: match a.method() {
            crate::audit::Method::Bruteforce => "bruteforce",
            crate::audit::Method::Rank => "rank",
        },
        s: r(&a.security.s),
        h_k_given_f: r(&a.security.h_k_given_f),
        uniformity_deficit: r(&a.security.uniformity_deficit),
        recoverability: a
            .recoverability
            .iter()
            .map(|&(terminal, recovered)| Recovery {
                terminal,
                recovered,
            })
            .collect(),
        passed: a.passed(),
        failures: a.failures.iter().map(failure_text).collect(),
    }
}

/// Returns the report and the transcript export, one line per broadcast.
pub fn simulate(
    model: &PinModel,
    set: &TerminalSet,
    opts: &SimulateOptions,
) -> Result<(Report, String)> {
    let scale = resolve_scale(model, opts.scale)?;
    let g = model.realize_multigraph(scale)?;
    let p = steiner_packing(&g, set, opts.mode)?;
    let keys = draw_edge_keys(&g, opts.seed);
    let mut run = run_protocol(&g, &p, &keys)?;
    if let Some(fault) = opts.fault {
        if run.transcript().is_empty() {
            return Err(Error::InvalidPacking(
                "the run has no broadcast to corrupt".into(),
            ));
        }
        run = match fault {
            Fault::FlipBroadcast => run.with_flipped_broadcast(0),
            Fault::KeyFromBroadcast => run.with_key_from_broadcast(0, 0),
        };
    }
    let limit = if opts.bruteforce {
        AUDIT_BRUTEFORCE_EDGES
    } else {
        0
    };
    let a = audit_with_limit(&run, limit)?;
    let audit = audit_out(&a);
    let lines = run.transcript_lines();
    let mut export = lines.join("\n");
    if !export.is_empty() {
        export.push('\n');
    }
    let counts = Counts {
        edges: run.edge_count(),
        key: run.key().len(),
        transcript: run.transcript().len(),
        residual: run.residual().len(),
    };
    let rate = Rational::new((p.len() as u64).into(), scale.into());
    let method = method_name(model.m(), set, opts.mode);
    let key = Bits::of(run.key());
    let residual = Bits::of(&run.residual_bits());

    let mut text = format!(
        "set {set}\nscale {scale}\nmethod {method}\nseed {}\nedges {} = key {} + transcript {} + residual {}\n",
        opts.seed, counts.edges, counts.key, counts.transcript, counts.residual
    );
    text += &format!("rate {}\n", r(&rate));
    text += &format!("key {} bits 0x{}\n", key.bits, key.hex);
    text += &format!("residual {} bits 0x{}\n", residual.bits, residual.hex);
    text += &trees_text(&p);
    text += "transcript (tree terminal bit support)\n";
    for l in &lines {
        text += &format!("  {l}\n");
    }
    text += &format!(
        "audit {} s = {} H(K|F) = {} deficit = {}\n",
        audit.method, audit.s, audit.h_k_given_f, audit.uniformity_deficit
    );
    for rec in &audit.recoverability {
        text += &format!(
            "  terminal {} {}\n",
            rec.terminal,
            if rec.recovered { "recovers" } else { "FAILS" }
        );
    }
    text += if audit.passed {
        "audit passed\n"
    } else {
        "audit FAILED\n"
    };

    let failure = (!audit.passed).then(|| audit.failures.join("; "));
    let body = SimulateOut {
        version: REPORT_VERSION,
        command: "simulate",
        terminals: model.m(),
        set: set.members(),
        scale,
        method,
        seed: opts.seed,
        counts,
        rate: r(&rate),
        key,
        residual,
        trees: trees_out(&p),
        transcript: run
            .transcript()
            .iter()
            .map(|b| BroadcastOut {
                tree: b.tree,
                terminal: b.terminal,
                bit: b.bit as u8,
                support: b.support,
            })
            .collect(),
        audit,
    };
    let mut report = Report::new(text, &body);
    report.audit_failure = failure;
    Ok((report, export))
}

#[derive(Serialize)]
#[serde(untagged)]
enum WeightOut {
    Exact(String),
    Float(f64),
}

#[derive(Serialize)]
struct WeightEntry {
    i: usize,
    j: usize,
    value: WeightOut,
}

#[derive(Serialize)]
struct ValidateOut {
    version: u32,
    command: &'static str,
    terminals: usize,
    mode: &'static str,
    base_scale: Option<u64>,
    pmfs: usize,
    weights: Vec<WeightEntry>,
}

pub fn validate(model: &PinModel) -> Result<Report> {
    let m = model.m();
    let (mode, base_scale) = match model.mode() {
        Mode::Exact => ("exact", Some(model.base_scale()?)),
        Mode::Float => ("float", None),
    };
    let weights: Vec<WeightEntry> = pairs(m)
        .map(|(i, j)| WeightEntry {
            i,
            j,
            value: match model.weight(i, j) {
                Some(w) => WeightOut::Exact(r(w)),
                None => WeightOut::Float(model.weight_f64(i, j)),
            },
        })
        .collect();
    let pmfs = pairs(m).filter(|&(i, j)| model.pmf(i, j).is_some()).count();
    let mut text = format!("valid {mode} model on {m} terminals\n");
    if let Some(b) = base_scale {
        text += &format!("base scale {b}\n");
    }
    text += &format!("pmfs {pmfs}\n");
    for w in &weights {
        let v = match &w.value {
            WeightOut::Exact(s) => s.clone(),
            WeightOut::Float(x) => format!("{x}"),
        };
        text += &format!("  I({},{}) = {v}\n", w.i, w.j);
    }
    let body = ValidateOut {
        version: REPORT_VERSION,
        command: "validate",
        terminals: m,
        mode,
        base_scale,
        pmfs,
        weights,
    };
    Ok(Report::new(text, &body))
}
