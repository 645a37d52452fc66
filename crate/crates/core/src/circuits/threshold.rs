// SPDX-License-Identifier: Apache-2.0

//! Threshold-logic rank circuits.
//!
//! `Delta(m) = AND(NOT(THRESHOLD(m+1)), THRESHOLD(m))` is 1 exactly when `m`
//! of its inputs are 1. A bank of them over a row is a ones counter whose
//! outputs are one-hot, so a plain OR encoder turns them into a binary rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{check_n, emit_word, encode, off_diagonal, t_inputs};
use crate::error::{Error, Result};
use crate::netlist::{Netlist, NetlistBuilder, Sig};
use crate::sim::{ComparisonMatrix, RankVector};

/// `e_0 ..= e_w` for `w = bits.len()`.
pub fn ones_counter(b: &mut NetlistBuilder, bits: &[Sig]) -> Vec<Sig> {
    (0..=bits.len())
        .map(|m| {
            let upper = b.threshold(m + 1, bits);
            let fewer_than_next = b.not(upper);
            let at_least = b.threshold(m, bits);
            b.and(&[fewer_than_next, at_least])
        })
        .collect()
}

/// Standalone counter on `width` bits `b0..`: outputs `e0..e{width}` and the
/// encoded count `c0..` (LSB first).
pub fn build_ones_counter(width: usize) -> Result<Netlist> {
    if width == 0 {
        return Err(Error::TooFewClasses(0, 1));
    }
    let mut b = NetlistBuilder::new();
    let bits: Vec<Sig> = (0..width).map(|k| b.input(format!("b{k}"))).collect();
    let e = ones_counter(&mut b, &bits);
    let count = encode(&mut b, &e);
    emit_word(&mut b, "c", &count);
    for (m, &s) in e.iter().enumerate() {
        b.output(format!("e{m}"), s);
    }
    Ok(b.finish())
}

/// One ones counter per row of `T` over its `n - 1` off-diagonal bits, each
/// followed by an `n`-input encoder. Outputs `r{i}_{bit}` and `e{i}_{m}`.
pub fn build_rank_circuit_threshold(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let mut b = NetlistBuilder::new();
    let t = t_inputs(&mut b, n);
    let mut ranks = Vec::with_capacity(n);
    let mut hot = Vec::with_capacity(n);
    for (i, row) in t.iter().enumerate() {
        let e = ones_counter(&mut b, &off_diagonal(row, i));
        ranks.push(encode(&mut b, &e));
        hot.push(e);
    }
    for (i, bits) in ranks.iter().enumerate() {
        emit_word(&mut b, &format!("r{i}_"), bits);
    }
    for (i, e) in hot.iter().enumerate() {
        for (m, &s) in e.iter().enumerate() {
            b.output(format!("e{i}_{m}"), s);
        }
    }
    Ok(b.finish())
}

pub fn threshold_ranks(t: &ComparisonMatrix) -> Result<RankVector> {
    let n = t.n();
    let circuit = build_rank_circuit_threshold(n)?;
    let out = circuit.evaluate_named(&t.bits())?;
    Ok(RankVector((0..n).map(|i| out.word(&format!("r{i}_"))).collect()))
}

fn check_chunk(j: usize, k: usize) -> Result<()> {
    if k == 0 || j == 0 || j > k {
        return Err(Error::InvalidChunk { j, k });
    }
    Ok(())
}

/// Splits an `n`-bit row into `k`-bit chunks (zero padded) and ORs one
/// at-least-`j` detector per chunk. Inputs `b0..`, output `verdict`.
pub fn build_rank_at_least_circuit(n: usize, j: usize, k: usize) -> Result<Netlist> {
    check_chunk(j, k)?;
    let mut b = NetlistBuilder::new();
    let mut bits: Vec<Sig> = (0..n).map(|i| b.input(format!("b{i}"))).collect();
    bits.resize(n.div_ceil(k) * k, Sig::Const(false));
    let detectors: Vec<Sig> = bits
        .chunks(k)
        .map(|chunk| {
            let live: Vec<Sig> = chunk.iter().copied().filter(|s| matches!(s, Sig::Wire(_))).collect();
            if j > live.len() {
                Sig::Const(false)
            } else if j == live.len() {
                b.and(&live)
            } else if j == 1 {
                b.or(&live)
            } else {
                b.threshold(j, &live)
            }
        })
        .collect();
    let verdict = b.or(&detectors);
    b.output("verdict", verdict);
    Ok(b.finish())
}

fn binomial(k: usize, i: usize) -> BigInt {
    (0..i).fold(BigInt::one(), |acc, x| acc * (k - x) / (x + 1))
}

/// Probability that a uniformly random `n`-bit row has no `k`-bit chunk
/// with `j` or more ones: `(sum_{i<j} C(k,i))^(n'/k) / 2^n'`, where `n'` is
/// `n` rounded up to a multiple of `k`.
pub fn miss_probability(n: usize, j: usize, k: usize) -> Result<BigRational> {
    check_chunk(j, k)?;
    let padded = n.div_ceil(k) * k;
    let per_chunk: BigInt = (0..j).map(|i| binomial(k, i)).sum();
    let numerator = Pow::pow(per_chunk, padded / k);
    let denominator = Pow::pow(BigInt::from(2), padded);
    Ok(BigRational::new(numerator, denominator))
}

/// Chunked test for "row has `j` or more ones". A `true` verdict is always
/// right; `false` may be a miss.
pub fn rank_at_least_probabilistic(row: &[bool], j: usize, k: usize) -> Result<(bool, BigRational)> {
    let circuit = build_rank_at_least_circuit(row.len(), j, k)?;
    let verdict = circuit.evaluate_named(row)?.get("verdict").unwrap_or(false);
    Ok((verdict, miss_probability(row.len(), j, k)?))
}
