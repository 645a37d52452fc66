// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;
use xbar::circuits::{
    build_adder_tree_rank_circuit, build_encoder, build_max_circuit, build_min_circuit, build_priority_encoder,
    build_rank_circuit_threshold, build_select_rank_circuit, max_index, min_index, rank_at_least_probabilistic,
    rank_via_adder_tree, search, select_rank, threshold_ranks,
};
use xbar::sim::{comparison_count, detect_write_conflicts, duplicate_comparisons, phase_count};
use xbar::{cycle_decomposition, depth, partition_q, power, sort, validate, ComparisonMatrix, FaninLimit, Netlist};

use crate::args::{CircuitKind, DataArgs, Format};
use crate::error::CliError;
use crate::input::{default_layout, read_layout, resolve_keys};

pub struct Report {
    pub body: String,
    pub status: u8,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, status: 0 }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn decimal(keys: &[BigInt]) -> Vec<String> {
    keys.iter().map(ToString::to_string).collect()
}

fn bit_string(row: &[u8]) -> String {
    row.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn sorted_matrix(keys: &[BigInt]) -> Result<ComparisonMatrix, CliError> {
    let layout = default_layout(keys.len())?;
    Ok(sort(&layout, keys).map_err(|e| CliError::usage("--input", e))?.t)
}

pub fn build(n: usize, format: Format) -> Result<Report, CliError> {
    let layout = xbar::build(n).map_err(|e| CliError::usage("--n", e))?;
    let body = match format {
        Format::Text => format!("{layout}\nPE count: {}\n", layout.len()),
        Format::Json => to_json(&json!({
            "n": layout.n,
            "slots": layout.slots,
            "provenance": layout.provenance,
            "pe_count": layout.len(),
        })),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                slot: usize,
                class: usize,
                replicate: usize,
            }
            to_csv((0..layout.len()).map(|k| Row { slot: k, class: layout.slots[k], replicate: layout.replicate_index(k) }))?
        }
    };
    Ok(Report::ok(body))
}

pub fn validate_cmd(n: Option<usize>, layout_path: Option<&Path>, format: Format) -> Result<Report, CliError> {
    let layout = match (layout_path, n) {
        (Some(p), _) => read_layout(p, n)?,
        (None, Some(n)) => default_layout(n)?,
        (None, None) => return Err(CliError::usage("--n", "give --n or --layout")),
    };
    let report = validate(&layout);
    let body = match format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n: {}", report.n);
            let _ = writeln!(s, "PE count: {}", report.pe_count);
            if let Some(m) = report.min_pe_count {
                let _ = writeln!(s, "minimum PE count: {m}");
            }
            let _ = writeln!(s, "pairs covered: {}", report.pair_coverage.len());
            let pairs: Vec<String> = report.redundant_pairs.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            let _ = writeln!(s, "redundant pairs: {}", if pairs.is_empty() { "none".into() } else { pairs.join(" ") });
            let _ = writeln!(s, "replicate counts: {:?}", report.replicate_counts);
            if report.violations.is_empty() {
                s.push_str("valid\n");
            }
            for v in &report.violations {
                let _ = writeln!(s, "violation: {v}");
            }
            s
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                a: usize,
                b: usize,
                count: usize,
            }
            to_csv(report.pair_coverage.iter().map(|p| Row { a: p.pair[0], b: p.pair[1], count: p.count }))?
        }
    };
    Ok(Report { body, status: u8::from(!report.is_valid()) })
}

pub fn sort_cmd(data: &DataArgs, layout_path: Option<&Path>, trace: Option<&Path>, format: Format) -> Result<Report, CliError> {
    let keys = resolve_keys(data)?;
    let layout = match layout_path {
        Some(p) => read_layout(p, Some(keys.len()))?,
        None => default_layout(keys.len())?,
    };
    let out = sort(&layout, &keys).map_err(|e| CliError::usage("--layout", e))?;
    if let Some(path) = trace {
        let text = if path.extension().is_some_and(|e| e == "csv") {
            out.trace.to_csv()
        } else {
            out.trace.to_json_lines()
        };
        fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    let phases = phase_count(&out.trace);
    let conflicts = detect_write_conflicts(&out.trace);
    let duplicates = duplicate_comparisons(&out.trace);
    let body = match format {
        Format::Json => to_json(&json!({
            "n": keys.len(),
            "input": decimal(&keys),
            "t": out.t.rows(),
            "ranks": out.ranks,
            "phase_count": phases,
            "comparisons": comparison_count(&out.trace),
            "write_conflicts": conflicts,
            "duplicate_comparisons": duplicates,
            "key_bits": out.trace.key_bits,
        })),
        Format::Text => {
            let mut s = String::from("T:\n");
            s.push_str(&out.t.to_grid());
            let ranks: Vec<String> = out.ranks.0.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "R: {}", ranks.join(" "));
            let _ = writeln!(s, "phases: {phases}");
            let _ = writeln!(s, "comparisons: {}", comparison_count(&out.trace));
            if conflicts.is_empty() {
                s.push_str("write conflicts: none\n");
            }
            for c in &conflicts {
                let _ = writeln!(s, "write conflict: {c}");
            }
            let dup: Vec<String> = duplicates.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            let _ = writeln!(s, "duplicate comparisons: {}", if dup.is_empty() { "none".into() } else { dup.join(" ") });
            s
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                class: usize,
                value: String,
                rank: usize,
                t_row: String,
            }
            to_csv((0..keys.len()).map(|i| Row {
                class: i,
                value: keys[i].to_string(),
                rank: out.ranks.0[i],
                t_row: bit_string(out.t.row(i)),
            }))?
        }
    };
    Ok(Report::ok(body))
}

fn index_report(format: Format, index: Option<usize>, keys: &[BigInt]) -> Result<String, CliError> {
    let value = index.map(|i| keys[i].to_string());
    Ok(match format {
        Format::Json => to_json(&json!({ "index": index, "value": value })),
        Format::Text => match (index, value) {
            (Some(i), Some(v)) => format!("index {i}\nvalue {v}\n"),
            _ => "not found\n".into(),
        },
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                index: Option<usize>,
                value: Option<String>,
            }
            to_csv([Row { index, value }])?
        }
    })
}

pub fn extreme(data: &DataArgs, want_max: bool, format: Format) -> Result<Report, CliError> {
    let keys = resolve_keys(data)?;
    let t = sorted_matrix(&keys)?;
    let index = if want_max { max_index(&t) } else { min_index(&t) }.map_err(|e| CliError::usage("--n", e))?;
    Ok(Report::ok(index_report(format, Some(index), &keys)?))
}

pub fn search_cmd(data: &DataArgs, key: &str, format: Format) -> Result<Report, CliError> {
    let keys = resolve_keys(data)?;
    let key = BigInt::from_str(key.trim()).map_err(|_| CliError::usage("--key", format!("not an integer: `{key}`")))?;
    let layout = default_layout(keys.len())?;
    let found = search(&layout, &keys, &key).map_err(|e| CliError::usage("--input", e))?;
    Ok(Report::ok(index_report(format, found.index, &keys)?))
}

pub struct RankQuery {
    pub r: Option<usize>,
    pub at_least: Option<usize>,
    pub chunk: usize,
    pub row: Option<usize>,
}

pub fn rank_cmd(data: &DataArgs, q: &RankQuery, format: Format) -> Result<Report, CliError> {
    let keys = resolve_keys(data)?;
    let n = keys.len();
    let t = sorted_matrix(&keys)?;
    if let Some(r) = q.r {
        let found = select_rank(&t, r).map_err(|e| CliError::usage("--r", e))?;
        return Ok(Report::ok(index_report(format, found.index, &keys)?));
    }
    if let Some(j) = q.at_least {
        let row = q.row.ok_or_else(|| CliError::usage("--row", "required with --at-least"))?;
        if row >= n {
            return Err(CliError::usage("--row", format!("row {row} out of range for n = {n}")));
        }
        let bits: Vec<bool> = t.row(row).iter().map(|&b| b == 1).collect();
        let (verdict, p) = rank_at_least_probabilistic(&bits, j, q.chunk).map_err(|e| CliError::usage("--at-least", e))?;
        let approx = p.to_f64().unwrap_or(f64::NAN);
        let rank = t.row_sum(row);
        let body = match format {
            Format::Json => to_json(&json!({
                "row": row,
                "at_least": j,
                "chunk": q.chunk,
                "verdict": verdict,
                "exact": false,
                "miss_probability": p.to_string(),
                "miss_probability_approx": approx,
                "rank": rank,
            })),
            Format::Text => format!("row {row} rank >= {j}: {verdict}\nmiss probability: {p} ({approx:.6})\nrank: {rank}\n"),
            Format::Csv => {
                #[derive(Serialize)]
                struct Row {
                    row: usize,
                    at_least: usize,
                    chunk: usize,
                    verdict: bool,
                    miss_probability: String,
                    rank: usize,
                }
                to_csv([Row { row, at_least: j, chunk: q.chunk, verdict, miss_probability: p.to_string(), rank }])?
            }
        };
        return Ok(Report::ok(body));
    }
    let by_threshold = threshold_ranks(&t).map_err(|e| CliError::usage("--n", e))?;
    let (by_adder, report) = rank_via_adder_tree(&t).map_err(|e| CliError::usage("--n", e))?;
    let body = match format {
        Format::Json => to_json(&json!({
            "ranks": by_threshold,
            "adder_tree_ranks": by_adder,
            "adder_tree_depth": report.depth,
        })),
        Format::Text => {
            let r: Vec<String> = by_threshold.0.iter().map(ToString::to_string).collect();
            format!("R: {}\nadder tree agrees: {}\nadder tree depth (fan-in 2): {}\n", r.join(" "), by_adder == by_threshold, report.depth)
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                class: usize,
                value: String,
                rank: usize,
            }
            to_csv((0..n).map(|i| Row { class: i, value: keys[i].to_string(), rank: by_threshold.0[i] }))?
        }
    };
    Ok(Report::ok(body))
}

fn circuit_for(kind: CircuitKind, n: usize) -> xbar::Result<Netlist> {
    match kind {
        CircuitKind::Encoder => build_encoder(n),
        CircuitKind::Priority => build_priority_encoder(n),
        CircuitKind::Min => build_min_circuit(n),
        CircuitKind::Max => build_max_circuit(n),
        CircuitKind::Threshold => build_rank_circuit_threshold(n),
        CircuitKind::Adder => build_adder_tree_rank_circuit(n),
        CircuitKind::Select => build_select_rank_circuit(n),
    }
}

pub fn depth_cmd(
    n: usize,
    kind: CircuitKind,
    fanin: FaninLimit,
    emit: Option<&Path>,
    format: Format,
) -> Result<Report, CliError> {
    let circuit = circuit_for(kind, n).map_err(|e| CliError::usage("--n", e))?;
    let report = depth(&circuit, fanin);
    let mut body = String::new();
    if let Some(path) = emit {
        if path == Path::new("-") {
            body.push_str(&circuit.to_text());
        } else {
            fs::write(path, circuit.to_text()).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        }
    }
    let name = format!("{kind:?}").to_lowercase();
    body.push_str(&match format {
        Format::Json => to_json(&json!({ "circuit": name, "n": n, "report": report })),
        Format::Text => format!(
            "circuit: {name}\nn: {n}\nfan-in: {}\ndepth: {}\ngates: {}\nthreshold gates: {} (widest {})\n",
            report.fanin_limit, report.depth, report.gate_count, report.threshold_gates, report.max_threshold_fanin
        ),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                circuit: &'a str,
                n: usize,
                fanin: String,
                depth: usize,
                gates: usize,
                threshold_gates: usize,
                max_threshold_fanin: usize,
            }
            to_csv([Row {
                circuit: &name,
                n,
                fanin: report.fanin_limit.to_string(),
                depth: report.depth,
                gates: report.gate_count,
                threshold_gates: report.threshold_gates,
                max_threshold_fanin: report.max_threshold_fanin,
            }])?
        }
    });
    Ok(Report::ok(body))
}

pub fn perm_cmd(n: usize, j: Option<usize>, format: Format) -> Result<Report, CliError> {
    let body = match j {
        Some(j) => {
            let p = power(n, j).map_err(|e| CliError::usage("--j", e))?;
            let cycles = cycle_decomposition(&p);
            match format {
                Format::Json => to_json(&json!({
                    "n": n,
                    "j": j,
                    "cycles": cycles.iter().map(|c| &c.elements).collect::<Vec<_>>(),
                })),
                Format::Text => {
                    let parts: Vec<String> = cycles.iter().map(ToString::to_string).collect();
                    format!("p^{j} = {}\ncycles: {}\n", parts.join(" "), cycles.len())
                }
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        cycle: usize,
                        position: usize,
                        class: usize,
                    }
                    to_csv(cycles.iter().enumerate().flat_map(|(c, cy)| {
                        cy.elements.iter().enumerate().map(move |(k, &e)| Row { cycle: c, position: k, class: e })
                    }))?
                }
            }
        }
        None => {
            let q = partition_q(n).map_err(|e| CliError::usage("--n", e))?;
            match format {
                Format::Json => to_json(&json!({
                    "n": n,
                    "q": q.sets.iter().map(|s| s.iter().map(|c| &c.elements).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
                Format::Text => {
                    let mut s = String::new();
                    for (i, set) in q.sets.iter().enumerate() {
                        let parts: Vec<String> = set.iter().map(ToString::to_string).collect();
                        let _ = writeln!(s, "Q_{i} = {{{}}}", parts.join(", "));
                    }
                    s
                }
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        q: usize,
                        exponent: usize,
                        elements: String,
                    }
                    to_csv(q.sets.iter().enumerate().flat_map(|(i, set)| {
                        set.iter().map(move |c| Row { q: i, exponent: c.exponent, elements: c.to_string() })
                    }))?
                }
            }
        }
    };
    Ok(Report::ok(body))
}
