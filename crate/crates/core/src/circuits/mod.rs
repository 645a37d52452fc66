// SPDX-License-Identifier: Apache-2.0

//! Gate-level query circuits over the comparison matrix `T`.
//!
//! Every circuit that reads `T` takes all `n * n` bits row-major as inputs
//! named `t{i}_{k}`; diagonal wires are present but never used.
//!
//! - min: one NOR per row, feeding an index encoder.
//! - max: one AND per row over the off-diagonal bits.
//! - exact rank: threshold-gate ones counters (`threshold`) or Brent-Kung
//!   adder trees (`adder`).
//! - rank selection: adder tree, subtract `r`, zero-detect, encoder.
//! - search: equality match vector into a priority encoder.
//! - probabilistic rank test: chunked threshold detection (`threshold`).

mod adder;
mod threshold;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::netlist::{Netlist, NetlistBuilder, Sig};
use crate::sim::{match_phase, ComparisonMatrix, Key};

pub use adder::{
    adder_tree, adder_tree_depth_bound, brent_kung_add, build_adder_tree_rank_circuit, build_select_rank_circuit,
    rank_via_adder_tree, select_rank, BRENT_KUNG_CELL_CONSTANT,
};
pub use threshold::{
    build_ones_counter, build_rank_at_least_circuit, build_rank_circuit_threshold, miss_probability,
    ones_counter, rank_at_least_probabilistic, threshold_ranks,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankQueryResult {
    pub index: Option<usize>,
    /// False for answers that may be wrong with some probability.
    pub exact: bool,
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Bits needed to encode an index among `lines` one-hot lines.
pub(crate) fn index_width(lines: usize) -> usize {
    ceil_log2(lines).max(1)
}

/// OR-plane encoder: bit `b` of the output is the OR of every line whose
/// index has bit `b` set. Exact only when at most one line is hot.
pub(crate) fn encode(b: &mut NetlistBuilder, lines: &[Sig]) -> Vec<Sig> {
    (0..index_width(lines.len()))
        .map(|bit| {
            let taps: Vec<Sig> = lines
                .iter()
                .enumerate()
                .filter(|(i, _)| i >> bit & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            b.or(&taps)
        })
        .collect()
}

pub(crate) fn emit_word(b: &mut NetlistBuilder, prefix: &str, bits: &[Sig]) {
    for (k, &s) in bits.iter().enumerate() {
        b.output(format!("{prefix}{k}"), s);
    }
}

pub(crate) fn t_inputs(b: &mut NetlistBuilder, n: usize) -> Vec<Vec<Sig>> {
    (0..n)
        .map(|i| (0..n).map(|k| b.input(format!("t{i}_{k}"))).collect())
        .collect()
}

pub(crate) fn off_diagonal(row: &[Sig], i: usize) -> Vec<Sig> {
    row.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &s)| s).collect()
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewClasses(n, 2));
    }
    Ok(())
}

/// `n`-input, `ceil(lg n)`-output encoder with a companion `valid` wire.
/// Inputs are `x0..x{n-1}`; outputs `idx0..` (LSB first) and `valid`.
pub fn build_encoder(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let mut b = NetlistBuilder::new();
    let lines: Vec<Sig> = (0..n).map(|i| b.input(format!("x{i}"))).collect();
    let idx = encode(&mut b, &lines);
    let valid = b.or(&lines);
    emit_word(&mut b, "idx", &idx);
    b.output("valid", valid);
    Ok(b.finish())
}

/// Smallest-index-wins front stage followed by an encoder with `valid`.
pub fn build_priority_encoder(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let mut b = NetlistBuilder::new();
    let lines: Vec<Sig> = (0..n).map(|i| b.input(format!("x{i}"))).collect();
    let mut winners = Vec::with_capacity(n);
    for i in 0..n {
        let none_before = b.nor(&lines[..i]);
        winners.push(b.and(&[lines[i], none_before]));
    }
    let idx = encode(&mut b, &winners);
    let valid = b.or(&lines);
    emit_word(&mut b, "idx", &idx);
    b.output("valid", valid);
    Ok(b.finish())
}

/// NOR of each row's off-diagonal bits, then an encoder. Output `idx*` is
/// the index of the all-zero row.
pub fn build_min_circuit(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let mut b = NetlistBuilder::new();
    let t = t_inputs(&mut b, n);
    let lines: Vec<Sig> = (0..n).map(|i| b.nor(&off_diagonal(&t[i], i))).collect();
    let idx = encode(&mut b, &lines);
    emit_word(&mut b, "idx", &idx);
    Ok(b.finish())
}

/// AND of each row's off-diagonal bits (the complemented diagonal is a
/// constant 1), then an encoder. Output `idx*` is the index of the all-ones row.
pub fn build_max_circuit(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let mut b = NetlistBuilder::new();
    let t = t_inputs(&mut b, n);
    let lines: Vec<Sig> = (0..n).map(|i| b.and(&off_diagonal(&t[i], i))).collect();
    let idx = encode(&mut b, &lines);
    emit_word(&mut b, "idx", &idx);
    Ok(b.finish())
}

fn run_index_circuit(circuit: &Netlist, t: &ComparisonMatrix) -> Result<usize> {
    Ok(circuit.evaluate_named(&t.bits())?.word("idx"))
}

pub fn min_index(t: &ComparisonMatrix) -> Result<usize> {
    run_index_circuit(&build_min_circuit(t.n())?, t)
}

pub fn max_index(t: &ComparisonMatrix) -> Result<usize> {
    run_index_circuit(&build_max_circuit(t.n())?, t)
}

/// Equality-only pass over one replicate per class, then the priority
/// encoder. Returns the smallest class holding `key`.
pub fn search<K: Key>(layout: &Layout, a: &[K], key: &K) -> Result<RankQueryResult> {
    let matches = match_phase(layout, a, key)?;
    if matches.len() == 1 {
        return Ok(RankQueryResult { index: matches[0].then_some(0), exact: true });
    }
    let circuit = build_priority_encoder(matches.len())?;
    let out = circuit.evaluate_named(&matches)?;
    let index = out.get("valid").unwrap_or(false).then(|| out.word("idx"));
    Ok(RankQueryResult { index, exact: true })
}
