use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use mstiff::diophantine::{fundamental_unit, pell_representatives};
use mstiff::exact::{newton_polygon, BigInt, Valuation};
use mstiff::search::{degree_plan, n_upper_bound, plan_parity, verify_theorem, BoundMethod, DegreeOptions, Parity};
use mstiff::stiffness::{bd_coefficients, integer_form, screen_coefficients, stiff_exists, Special};
use mstiff::{BdParams, Dim, Error, StiffVerdict};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checkpoint::{self, Appender, Cell};
use crate::render;
use crate::{ClassifyArgs, Cli, Command, Common, Format, Which, EXIT_EXISTS, EXIT_FAILURE, EXIT_NOT_EXISTS};

/// Invalid combination of otherwise well-formed arguments.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const CHUNK: usize = 64;

pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    let c = &cli.common;
    match &cli.command {
        Command::Exists { m, d } => exists(c, *m, *d),
        Command::Classify(args) => classify(c, args),
        Command::Tables { which, limit } => tables(c, *which, *limit),
        Command::Pell { big_d, big_m, count } => pell(c, *big_d, *big_m, *count),
        Command::Newton { m, d, coeffs, p } => newton(c, *m, *d, coeffs.as_deref(), *p),
        Command::Bounds { d, max_d } => bounds(c, *d, max_d.unwrap_or(*d)),
        Command::Verify { tag, scale } => verify(c, tag, *scale),
    }
}

fn out(s: &str) -> anyhow::Result<()> {
    let mut o = std::io::stdout().lock();
    o.write_all(s.as_bytes())?;
    o.flush()?;
    Ok(())
}

/// Renders rows in a tabular format; JSON is handled by callers.
fn table(format: Format, headers: &[&str], rows: &[Vec<String>]) -> anyhow::Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
            w.write_record(headers)?;
            for r in rows {
                w.write_record(r)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Markdown => {
            let mut s = format!("| {} |\n|{}\n", headers.join(" | "), "---|".repeat(headers.len()));
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                writeln!(s, "| {} |", cells.join(" | "))?;
            }
            Ok(s)
        }
        Format::Text | Format::Json => {
            let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let mut s = String::new();
                for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
                    if i + 1 == cells.len() {
                        s.push_str(c);
                    } else {
                        s.push_str(c);
                        s.push_str(&" ".repeat(w - c.chars().count() + 2));
                    }
                }
                s.push('\n');
                s
            };
            let mut s = line(headers.to_vec());
            for r in rows {
                s.push_str(&line(r.iter().map(String::as_str).collect()));
            }
            Ok(s)
        }
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn json_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn decide(m: u64, d: Dim) -> anyhow::Result<StiffVerdict> {
    let v = stiff_exists(m, d)?;
    v.verify()?;
    Ok(v)
}

fn exists(c: &Common, m: u64, d: Dim) -> anyhow::Result<u8> {
    let v = decide(m, d)?;
    let code = if v.exists() { EXIT_EXISTS } else { EXIT_NOT_EXISTS };
    let s = match c.format {
        Format::Json => json_pretty(&render::verdict_json(&v)),
        Format::Text => exists_text(&v, c.precision as usize),
        Format::Csv | Format::Markdown => {
            let (roots, lambdas, witness) = match v.certificate() {
                Some(cert) => (render::rat_list(&cert.roots).join(";"), render::rat_list(&cert.lambdas).join(";"), String::new()),
                None => (String::new(), String::new(), v.witness().map(|w| w.to_string()).unwrap_or_default()),
            };
            let row = vec![m.to_string(), d.to_string(), render::verdict_word(&v).into(), roots, lambdas, witness];
            table(c.format, &["m", "d", "verdict", "roots", "lambdas", "witness"], &[row])?
        }
    };
    out(&s)?;
    Ok(code)
}

fn exists_text(v: &StiffVerdict, precision: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "m = {}, D = {}: {}", v.m, v.dim, if v.exists() { "exists" } else { "does not exist" });
    match v.certificate() {
        Some(cert) => {
            let odd = v.m % 2 == 1;
            if cert.special == Some(Special::Circle) {
                let _ = writeln!(s, "configuration: regular {}-gon", 2 * v.m);
                let _ = writeln!(s, "zeros: {}", render::circle_zeros(v.m).join(", "));
            } else {
                if !cert.roots.is_empty() {
                    let _ = writeln!(s, "roots of S_m: {}", render::rat_list(&cert.roots).join(", "));
                }
                let _ = writeln!(s, "zeros: {}", render::zeros(&cert.node_sq, odd).join(", "));
                for sq in &cert.node_sq {
                    let x = mstiff::exact::rational::sqrt_approx(sq, precision as u32);
                    let _ = writeln!(s, "  {} ≈ {}", render::node(sq), render::decimal(&x, precision));
                }
            }
            let _ = writeln!(s, "lambda: {}", render::rat_list(&cert.lambdas).join(", "));
        }
        None => {
            let _ = writeln!(s, "witness: {}", v.witness().expect("not exists carries a witness"));
        }
    }
    s
}

enum CellOutcome {
    Decided(Cell),
    Undecided(String),
    Skipped,
}

impl CellOutcome {
    fn verdict(&self) -> &str {
        match self {
            CellOutcome::Decided(c) => &c.verdict,
            CellOutcome::Undecided(_) => "undecided",
            CellOutcome::Skipped => "skipped",
        }
    }

    fn digest(&self) -> &str {
        match self {
            CellOutcome::Decided(c) => &c.digest,
            CellOutcome::Undecided(r) => r,
            CellOutcome::Skipped => "",
        }
    }
}

struct Sweep {
    results: BTreeMap<(Dim, u64), CellOutcome>,
    evaluated: u64,
    resumed: u64,
    skipped: u64,
    undecided: u64,
}

fn evaluate_cell(m: u64, d: Dim) -> CellOutcome {
    match stiff_exists(m, d).and_then(|v| v.verify().map(|_| v)) {
        Ok(v) => CellOutcome::Decided(Cell { m, d, verdict: render::verdict_word(&v).into(), digest: render::digest(&v) }),
        Err(e) => CellOutcome::Undecided(e.to_string()),
    }
}

/// Decides every `(m, D)` cell, reusing and extending the checkpoint.
fn sweep(cells: &[(u64, Dim)], args: &ClassifyArgs) -> anyhow::Result<Sweep> {
    let known = match &args.checkpoint {
        Some(p) => checkpoint::load(p)?,
        None => BTreeMap::new(),
    };
    let mut appender = match &args.checkpoint {
        Some(p) => Some(Appender::open(p).with_context(|| format!("opening {}", p.display()))?),
        None => None,
    };
    let mut sw = Sweep { results: BTreeMap::new(), evaluated: 0, resumed: 0, skipped: 0, undecided: 0 };
    let mut pending = Vec::new();
    for &(m, d) in cells {
        match known.get(&(m, d)) {
            Some(cell) => {
                sw.resumed += 1;
                sw.results.insert((d, m), CellOutcome::Decided(cell.clone()));
            }
            None => pending.push((m, d)),
        }
    }
    let start = Instant::now();
    let deadline = args.budget_seconds.map(Duration::from_secs_f64);
    let cap = args.budget.map(|b| b.min(u64::MAX as u128) as u64).unwrap_or(u64::MAX);
    let mut iter = pending.into_iter().peekable();
    while iter.peek().is_some() {
        let left = cap - sw.evaluated;
        let out_of_time = deadline.is_some_and(|t| start.elapsed() >= t);
        if left == 0 || out_of_time {
            for (m, d) in iter.by_ref() {
                sw.skipped += 1;
                sw.results.insert((d, m), CellOutcome::Skipped);
            }
            break;
        }
        let chunk: Vec<(u64, Dim)> = iter.by_ref().take(CHUNK.min(left as usize)).collect();
        let outcomes: Vec<CellOutcome> = chunk.par_iter().map(|&(m, d)| evaluate_cell(m, d)).collect();
        sw.evaluated += chunk.len() as u64;
        let decided: Vec<Cell> = outcomes
            .iter()
            .filter_map(|o| match o {
                CellOutcome::Decided(c) => Some(c.clone()),
                _ => None,
            })
            .collect();
        if let Some(a) = appender.as_mut() {
            a.append(&decided)?;
        }
        for ((m, d), o) in chunk.into_iter().zip(outcomes) {
            if matches!(o, CellOutcome::Undecided(_)) {
                sw.undecided += 1;
            }
            sw.results.insert((d, m), o);
        }
    }
    Ok(sw)
}

fn cell_rows(sw: &Sweep) -> Vec<Vec<String>> {
    sw.results
        .iter()
        .map(|((d, m), o)| vec![m.to_string(), d.to_string(), o.verdict().to_string(), o.digest().to_string()])
        .collect()
}

fn budget_json(args: &ClassifyArgs) -> Value {
    json!({ "cells": args.budget.map(|b| b.to_string()), "seconds": args.budget_seconds })
}

fn classify(c: &Common, args: &ClassifyArgs) -> anyhow::Result<u8> {
    match (args.dim, args.deg) {
        (Some(dim), None) => classify_dims(c, args, dim, args.max_d.unwrap_or(dim)),
        (None, Some(m)) => classify_deg(c, args, m, args.max_d.expect("required by clap")),
        _ => Err(usage("give exactly one of --dim and --deg")),
    }
}

fn classify_dims(c: &Common, args: &ClassifyArgs, from: Dim, to: Dim) -> anyhow::Result<u8> {
    if from < 2 {
        return Err(usage(format!("dimension must be at least 2, got {from}")));
    }
    if to < from {
        return Err(usage(format!("empty range [{from}, {to}]")));
    }
    let mut cells = Vec::new();
    let mut truncated: BTreeMap<Dim, bool> = BTreeMap::new();
    let mut bounds: BTreeMap<Dim, Vec<Value>> = BTreeMap::new();
    for d in from.max(3)..=to {
        let mut cut = false;
        for parity in [Parity::Even, Parity::Odd] {
            let plan = plan_parity(d, parity)?;
            cut |= !plan.oversized.is_empty();
            cells.extend(plan.degrees.into_iter().filter(|&m| args.max_m.is_none_or(|mm| m <= mm)).map(|m| (m, d)));
            bounds.entry(d).or_default().push(json!({
                "parity": parity.to_string(),
                "first_excluded_n": plan.bound.first_excluded.to_string(),
                "method": format!("{:?}", plan.bound.method).to_lowercase(),
                "tag": plan.bound.tag,
                "conservative": plan.bound.conservative,
            }));
        }
        truncated.insert(d, cut);
    }
    cells.sort_by_key(|&(m, d)| (d, m));
    let sw = sweep(&cells, args)?;
    let mut per_dim: BTreeMap<Dim, (Vec<u64>, bool)> = BTreeMap::new();
    for d in from.max(3)..=to {
        per_dim.insert(d, (Vec::new(), !truncated[&d]));
    }
    for ((d, m), o) in &sw.results {
        let e = per_dim.get_mut(d).expect("planned dimension");
        match o {
            CellOutcome::Decided(cell) if cell.exists() => e.0.push(*m),
            CellOutcome::Decided(_) => {}
            _ => e.1 = false,
        }
    }
    let all_complete = per_dim.values().all(|v| v.1);
    let summary_dims: Vec<Value> = per_dim
        .iter()
        .map(|(d, (ms, complete))| json!({ "d": d, "degrees": ms, "complete": complete, "bounds": bounds[d] }))
        .collect();
    let circle = from == 2;
    let s = match c.format {
        Format::Json => {
            let mut s = String::new();
            if circle {
                s.push_str(&json_line(&json!({ "d": 2, "all_m": true })));
            }
            for r in cell_rows(&sw) {
                s.push_str(&json_line(&json!({ "m": r[0].parse::<u64>()?, "d": r[1].parse::<Dim>()?, "verdict": r[2], "digest": r[3] })));
            }
            s.push_str(&json_line(&json!({ "summary": {
                "axis": "dim",
                "from": from,
                "to": to,
                "max_m": args.max_m,
                "all_m_at_d2": circle,
                "dimensions": summary_dims,
                "complete": all_complete,
                "cells": cells.len(),
                "evaluated": sw.evaluated,
                "resumed": sw.resumed,
                "undecided": sw.undecided,
                "skipped": sw.skipped,
                "budget": budget_json(args),
            }})));
            s
        }
        Format::Csv | Format::Markdown => {
            let mut rows = Vec::new();
            if circle {
                rows.push(vec!["all".into(), "2".into(), "exists".into(), "regular 2m-gon".into()]);
            }
            rows.extend(cell_rows(&sw));
            let mut s = table(c.format, &["m", "d", "verdict", "digest"], &rows)?;
            if c.format == Format::Markdown {
                for (d, (ms, complete)) in &per_dim {
                    writeln!(s, "\nD = {d}: m in {{{}}}, complete: {complete}", join(ms))?;
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if circle {
                s.push_str("D = 2: all m (regular 2m-gon)\n");
            }
            for (d, (ms, complete)) in &per_dim {
                writeln!(s, "D = {d}: m in {{{}}}{}", join(ms), if *complete { "" } else { " (incomplete)" })?;
                for m in ms {
                    if let Some(CellOutcome::Decided(cell)) = sw.results.get(&(*d, *m)) {
                        writeln!(s, "  m = {m}: {}", cell.digest)?;
                    }
                }
            }
            writeln!(
                s,
                "complete: {all_complete}; cells {}, evaluated {}, resumed {}, undecided {}, skipped {}",
                cells.len(),
                sw.evaluated,
                sw.resumed,
                sw.undecided,
                sw.skipped
            )?;
            s
        }
    };
    if c.format == Format::Csv {
        eprintln!("complete: {all_complete}; evaluated {}, resumed {}, skipped {}", sw.evaluated, sw.resumed, sw.skipped);
    }
    out(&s)?;
    Ok(if all_complete { EXIT_EXISTS } else { EXIT_FAILURE })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn classify_deg(c: &Common, args: &ClassifyArgs, m: u64, max_d: Dim) -> anyhow::Result<u8> {
    if m == 0 {
        return Err(usage("degree must be at least 1"));
    }
    let x_bound = u64::try_from(args.x_bound).map_err(|_| usage("--x-bound too large"))?;
    let opts = DegreeOptions { x_bound, direct_limit: args.direct_limit };
    let plan = degree_plan(m, max_d, &opts)?;
    let cells: Vec<(u64, Dim)> = plan.cells.iter().map(|&d| (m, d)).collect();
    let sw = sweep(&cells, args)?;
    let dims: Vec<Dim> = sw
        .results
        .iter()
        .filter_map(|((d, _), o)| matches!(o, CellOutcome::Decided(cell) if cell.exists()).then_some(*d))
        .collect();
    let complete = sw.skipped == 0 && sw.undecided == 0;
    let circle = max_d >= 2;
    let s = match c.format {
        Format::Json => {
            let mut s = String::new();
            if circle {
                s.push_str(&json_line(&json!({ "m": m, "d": 2, "verdict": "exists", "digest": format!("regular {}-gon", 2 * m) })));
            }
            for r in cell_rows(&sw) {
                s.push_str(&json_line(&json!({ "m": m, "d": r[1].parse::<Dim>()?, "verdict": r[2], "digest": r[3] })));
            }
            s.push_str(&json_line(&json!({ "summary": {
                "axis": "deg",
                "m": m,
                "max_d": max_d,
                "all_d": plan.all,
                "dims": if plan.all { Value::String(format!("all D in [3, {max_d}]")) } else { json!(dims) },
                "special": if circle { json!([2]) } else { json!([]) },
                "complete": complete,
                "heuristic": plan.heuristic,
                "screened_candidates": plan.screened_candidates,
                "cells": cells.len(),
                "evaluated": sw.evaluated,
                "resumed": sw.resumed,
                "undecided": sw.undecided,
                "skipped": sw.skipped,
                "budget": budget_json(args),
            }})));
            s
        }
        Format::Csv | Format::Markdown => {
            let mut rows = Vec::new();
            if circle {
                rows.push(vec![m.to_string(), "2".into(), "exists".into(), format!("regular {}-gon", 2 * m)]);
            }
            if plan.all {
                rows.push(vec![m.to_string(), format!("3..={max_d}"), "exists".into(), "all dimensions".into()]);
            }
            rows.extend(cell_rows(&sw));
            let mut s = table(c.format, &["m", "d", "verdict", "digest"], &rows)?;
            if c.format == Format::Markdown {
                writeln!(s, "\ncomplete: {complete}, heuristic: {}", plan.heuristic)?;
            }
            s
        }
        Format::Text => {
            let mut s = format!("m = {m}, D <= {max_d}\n");
            if circle {
                writeln!(s, "D = 2: regular {}-gon", 2 * m)?;
            }
            if plan.all {
                writeln!(s, "D in [3, {max_d}]: all dimensions")?;
            } else {
                for d in &dims {
                    if let Some(CellOutcome::Decided(cell)) = sw.results.get(&(*d, m)) {
                        writeln!(s, "D = {d}: {}", cell.digest)?;
                    }
                }
                writeln!(s, "dimensions: {{{}}}", join(&dims))?;
            }
            writeln!(
                s,
                "complete: {complete}; heuristic: {}; cells {}, evaluated {}, resumed {}, undecided {}, skipped {}",
                plan.heuristic,
                cells.len(),
                sw.evaluated,
                sw.resumed,
                sw.undecided,
                sw.skipped
            )?;
            s
        }
    };
    out(&s)?;
    Ok(if complete { EXIT_EXISTS } else { EXIT_FAILURE })
}

fn tables(c: &Common, which: Which, limit: u128) -> anyhow::Result<u8> {
    if limit < 1 {
        return Err(usage("--limit must be at least 1"));
    }
    let m: u64 = match which {
        Which::M4 => 4,
        Which::M5 => 5,
    };
    let stream = match which {
        Which::M4 => mstiff::diophantine::dims_for_m4_up_to(limit)?,
        Which::M5 => mstiff::diophantine::dims_for_m5_up_to(limit)?,
    };
    let half = m.div_ceil(2) as usize;
    let mut dims = Vec::new();
    if limit >= 2 {
        dims.push(2);
    }
    dims.extend(stream);
    let verdicts: Vec<anyhow::Result<StiffVerdict>> = dims.par_iter().map(|&d| decide(m, d)).collect();
    let mut rows = Vec::new();
    for v in verdicts {
        let v = v?;
        let Some(cert) = v.certificate() else { bail!("D = {} is in the stream but has no configuration", v.dim) };
        let zeros = if cert.special == Some(Special::Circle) {
            render::circle_zeros(m)
        } else {
            render::zeros(&cert.node_sq, m % 2 == 1)
        };
        let mut row = vec![v.dim.to_string(), zeros.join(", ")];
        row.extend(render::rat_list(&cert.lambdas[..half]));
        rows.push(row);
    }
    let headers: Vec<&str> = match which {
        Which::M4 => vec!["d", "zeros", "lambda_1=lambda_4", "lambda_2=lambda_3"],
        Which::M5 => vec!["d", "zeros", "lambda_1=lambda_5", "lambda_2=lambda_4", "lambda_3"],
    };
    let s = match c.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "d": r[0].parse::<Dim>().unwrap_or_default(), "zeros": r[1].split(", ").collect::<Vec<_>>(), "lambdas": &r[2..] }))
                .collect();
            json_pretty(&json!({ "m": m, "limit": limit.to_string(), "rows": items }))
        }
        f => table(f, &headers, &rows)?,
    };
    out(&s)?;
    Ok(EXIT_EXISTS)
}

fn pell(c: &Common, d: u64, m: i64, count: u32) -> anyhow::Result<u8> {
    let unit = fundamental_unit(d)?;
    let u0 = unit.positive_norm_unit();
    let reps = pell_representatives(d, m)?;
    let orbits: Vec<Vec<mstiff::diophantine::QuadInt>> =
        reps.iter().map(|r| (0..count).map(|l| r.as_quad().mul(&u0.pow(l))).collect()).collect();
    let s = match c.format {
        Format::Json => json_pretty(&json!({
            "d": d,
            "m": m,
            "fundamental_unit": unit.as_quad().to_string(),
            "norm": unit.norm,
            "orbit_unit": u0.to_string(),
            "classes": reps.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "orbits": orbits.iter().map(|o| o.iter().map(|q| json!({ "element": q.to_string(), "x": q.a.to_string(), "y": q.b.to_string() })).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("x^2 - {d}*y^2 = {m}\n");
            writeln!(s, "fundamental unit: {} (norm {})", unit.as_quad(), unit.norm)?;
            if unit.norm == -1 {
                writeln!(s, "orbit unit: {u0} (square of the fundamental unit)")?;
            }
            let names: Vec<String> = reps.iter().map(|r| r.to_string()).collect();
            writeln!(s, "classes: {}", if names.is_empty() { "none".to_string() } else { names.join(", ") })?;
            for (r, o) in reps.iter().zip(&orbits) {
                writeln!(s, "orbit of {r}: {}", o.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", "))?;
            }
            s
        }
        f => {
            let mut rows = Vec::new();
            for (r, o) in reps.iter().zip(&orbits) {
                for (l, q) in o.iter().enumerate() {
                    rows.push(vec![r.to_string(), l.to_string(), q.to_string(), q.a.to_string(), q.b.to_string()]);
                }
            }
            table(f, &["class", "l", "element", "x", "y"], &rows)?
        }
    };
    out(&s)?;
    Ok(EXIT_EXISTS)
}

fn newton(c: &Common, m: Option<u64>, d: Option<Dim>, coeffs: Option<&[i64]>, p: u64) -> anyhow::Result<u8> {
    let (label, poly): (String, Vec<BigInt>) = match (m, d, coeffs) {
        (Some(m), Some(d), None) => {
            let params = BdParams::new(m, d)?;
            let u = bd_coefficients(&params);
            match integer_form(&params, &u) {
                Some(ints) => (format!("integer form of S_{m} for D = {d}"), ints),
                None => {
                    let w = screen_coefficients(&params).map(|w| w.to_string()).unwrap_or_else(|| "non-integral coefficient".into());
                    let s = match c.format {
                        Format::Json => json_pretty(&json!({ "m": m, "d": d, "integral": false, "witness": w })),
                        _ => format!("S_{m} for D = {d} has no integer form: {w}\n"),
                    };
                    out(&s)?;
                    return Ok(EXIT_NOT_EXISTS);
                }
            }
        }
        (None, None, Some(cs)) => ("given polynomial".into(), cs.iter().map(|&x| BigInt::from(x)).collect()),
        _ => return Err(usage("give either --m and --d, or --coeffs")),
    };
    let np = newton_polygon(&poly, p)?;
    let points: Vec<String> = np
        .points
        .iter()
        .map(|(x, v)| match v {
            Valuation::Finite(y) => format!("({x},{y})"),
            Valuation::Infinite => format!("({x},inf)"),
        })
        .collect();
    let vertices: Vec<String> = np.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let slopes = render::rat_list(&np.slopes);
    let bad = render::rat_list(&np.non_integer_slopes());
    let s = match c.format {
        Format::Json => json_pretty(&json!({
            "polynomial": label,
            "coefficients": poly.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "prime": p,
            "points": points,
            "vertices": np.vertices.iter().map(|(x, y)| [x, y]).collect::<Vec<_>>(),
            "slopes": slopes,
            "all_integer": np.all_slopes_integer(),
            "non_integer_slopes": bad,
        })),
        Format::Text => {
            let mut s = format!("{label}: {}\n", poly.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
            writeln!(s, "prime: {p}")?;
            writeln!(s, "points: {}", points.join(" "))?;
            writeln!(s, "vertices: {}", vertices.join(" "))?;
            writeln!(s, "slopes: {}", slopes.join(", "))?;
            match np.first_non_integer_edge() {
                Some((a, b, sl)) => writeln!(s, "non-integer slope {} on ({},{})-({},{})", render::rat(&sl), a.0, a.1, b.0, b.1)?,
                None => writeln!(s, "all slopes integer")?,
            }
            s
        }
        f => {
            let rows: Vec<Vec<String>> = np
                .vertices
                .windows(2)
                .zip(&np.slopes)
                .map(|(w, sl)| {
                    vec![format!("({},{})", w[0].0, w[0].1), format!("({},{})", w[1].0, w[1].1), render::rat(sl), sl.is_integer().to_string()]
                })
                .collect();
            table(f, &["from", "to", "slope", "integer"], &rows)?
        }
    };
    out(&s)?;
    Ok(EXIT_EXISTS)
}

fn bounds(c: &Common, from: Dim, to: Dim) -> anyhow::Result<u8> {
    if from < 3 {
        return Err(usage(format!("dimension must be at least 3, got {from}")));
    }
    if to < from {
        return Err(usage(format!("empty range [{from}, {to}]")));
    }
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for d in from..=to {
        for parity in [Parity::Even, Parity::Odd] {
            let b = n_upper_bound(d, parity)?;
            let threshold = &b.first_excluded - 1u32;
            let method = match b.method {
                BoundMethod::Sweep => "sweep",
                BoundMethod::Candidates => "candidates",
                BoundMethod::Theorem => "structural",
            };
            let formula = b.formula_value.as_ref().map(|f| f.to_string()).unwrap_or_default();
            rows.push(vec![
                d.to_string(),
                parity.to_string(),
                threshold.to_string(),
                method.into(),
                b.tag.clone(),
                b.conservative.to_string(),
                formula.clone(),
            ]);
            items.push(json!({
                "d": d,
                "parity": parity.to_string(),
                "threshold": threshold.to_string(),
                "first_excluded": b.first_excluded.to_string(),
                "method": method,
                "tag": b.tag,
                "conservative": b.conservative,
                "formula_value": b.formula_value.map(|f| f.to_string()),
            }));
        }
    }
    let s = match c.format {
        Format::Json => json_pretty(&Value::Array(items)),
        f => table(f, &["d", "parity", "n_above", "method", "tag", "conservative", "formula"], &rows)?,
    };
    out(&s)?;
    Ok(EXIT_EXISTS)
}

fn verify(c: &Common, tag: &str, scale: Option<u128>) -> anyhow::Result<u8> {
    let scale = scale.map(|s| u64::try_from(s).map_err(|_| usage("--scale too large"))).transpose()?;
    let r = match verify_theorem(tag, scale) {
        Err(Error::UnknownTag(t)) => return Err(usage(format!("unknown tag {t:?}"))),
        other => other?,
    };
    let s = match c.format {
        Format::Json => json_pretty(&json!({
            "tag": r.tag,
            "statement": r.statement,
            "scale": r.scale,
            "cases": r.cases,
            "agrees": r.agrees,
            "complete": r.complete,
            "mismatches": r.mismatches,
        })),
        Format::Text => {
            let mut s = format!("{}: {}\n", r.tag, r.statement);
            writeln!(s, "cases: {}, agrees: {}, complete: {}", r.cases, r.agrees, r.complete)?;
            for mm in &r.mismatches {
                writeln!(s, "  mismatch: {mm}")?;
            }
            s
        }
        f => table(
            f,
            &["tag", "scale", "cases", "agrees", "complete", "statement"],
            &[vec![r.tag.clone(), r.scale.to_string(), r.cases.to_string(), r.agrees.to_string(), r.complete.to_string(), r.statement.clone()]],
        )?,
    };
    out(&s)?;
    Ok(if r.agrees { EXIT_EXISTS } else { EXIT_FAILURE })
}
