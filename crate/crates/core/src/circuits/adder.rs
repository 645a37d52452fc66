// SPDX-License-Identifier: Apache-2.0

//! Constant fan-in arithmetic: Brent-Kung parallel-prefix adders arranged
//! as a binary tree to sum each row of `T`.
//!
//! The only XOR in the cell library is a half adder's sum output, so every
//! `(propagate, generate)` pair comes from one `HALF_ADD` cell. A prefix
//! operator `(g, p) o (g', p') = (g | p & g', p & p')` costs two gate levels.

use super::{check_n, emit_word, encode, t_inputs, RankQueryResult};
use crate::error::{Error, Result};
use crate::netlist::{depth, DepthReport, FaninLimit, Netlist, NetlistBuilder, Sig, ZERO};
use crate::sim::{ComparisonMatrix, RankVector};

/// Additive constant in the per-level depth bound of the row-sum tree:
/// one level for the half-adder `(p, g)` cells and one for the sum cells.
pub const BRENT_KUNG_CELL_CONSTANT: usize = 2;

/// `ceil(lg n) * (2 * ceil(lg ceil(lg n)) + c)`.
pub fn adder_tree_depth_bound(n: usize) -> usize {
    let levels = super::ceil_log2(n);
    levels * (2 * super::ceil_log2(levels) + BRENT_KUNG_CELL_CONSTANT)
}

fn combine(b: &mut NetlistBuilder, hi: (Sig, Sig), lo: (Sig, Sig)) -> (Sig, Sig) {
    let (g_hi, p_hi) = hi;
    let (g_lo, p_lo) = lo;
    let carried = b.and(&[p_hi, g_lo]);
    let g = b.or(&[g_hi, carried]);
    let p = b.and(&[p_hi, p_lo]);
    (g, p)
}

/// `x + y + cin`, little-endian, `max(|x|, |y|) + 1` bits. Missing high bits
/// are zero.
pub fn brent_kung_add(b: &mut NetlistBuilder, x: &[Sig], y: &[Sig], cin: Sig) -> Vec<Sig> {
    let w = x.len().max(y.len());
    if w == 0 {
        return vec![cin];
    }
    let bit = |v: &[Sig], i: usize| v.get(i).copied().unwrap_or(ZERO);
    let (mut prop, mut gen) = (Vec::with_capacity(w), Vec::with_capacity(w));
    for i in 0..w {
        let (p, g) = b.half_add(bit(x, i), bit(y, i));
        prop.push(p);
        gen.push(g);
    }

    // prefix[i] = (G, P) of bits i..=lo for a span that grows to 0..=i.
    let mut prefix: Vec<(Sig, Sig)> = gen.iter().copied().zip(prop.iter().copied()).collect();
    let carry_in_0 = b.and(&[prop[0], cin]);
    prefix[0].0 = b.or(&[gen[0], carry_in_0]);

    let mut d = 1;
    while d < w {
        for i in (2 * d - 1..w).step_by(2 * d) {
            prefix[i] = combine(b, prefix[i], prefix[i - d]);
        }
        d *= 2;
    }
    d /= 2;
    while d >= 1 {
        for i in (3 * d - 1..w).step_by(2 * d) {
            prefix[i] = combine(b, prefix[i], prefix[i - d]);
        }
        d /= 2;
    }

    let mut sum = Vec::with_capacity(w + 1);
    for i in 0..w {
        let carry = if i == 0 { cin } else { prefix[i - 1].0 };
        sum.push(b.xor(prop[i], carry));
    }
    sum.push(prefix[w - 1].0);
    sum
}

/// Binary tree of adders over single bits; `ceil(lg n)` levels.
pub fn adder_tree(b: &mut NetlistBuilder, bits: &[Sig]) -> Vec<Sig> {
    let mut level: Vec<Vec<Sig>> = bits.iter().map(|&s| vec![s]).collect();
    if level.is_empty() {
        return vec![ZERO];
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.chunks(2);
        for pair in &mut it {
            match pair {
                [x, y] => next.push(brent_kung_add(b, x, y, ZERO)),
                [x] => next.push(x.clone()),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    level.pop().unwrap_or_default()
}

/// One adder tree per row of `T`. Outputs `r{i}_{bit}`.
pub fn build_adder_tree_rank_circuit(n: usize) -> Result<Netlist> {
    if n == 0 {
        return Err(Error::TooFewClasses(0, 1));
    }
    let mut b = NetlistBuilder::new();
    let t = t_inputs(&mut b, n);
    let sums: Vec<Vec<Sig>> = t.iter().map(|row| adder_tree(&mut b, row)).collect();
    for (i, s) in sums.iter().enumerate() {
        emit_word(&mut b, &format!("r{i}_"), s);
    }
    Ok(b.finish())
}

/// Exact row sums of `T` through the adder-tree netlist, with its depth
/// under fan-in 2.
pub fn rank_via_adder_tree(t: &ComparisonMatrix) -> Result<(RankVector, DepthReport)> {
    let n = t.n();
    let circuit = build_adder_tree_rank_circuit(n)?;
    let out = circuit.evaluate_named(&t.bits())?;
    let ranks = RankVector((0..n).map(|i| out.word(&format!("r{i}_"))).collect());
    Ok((ranks, depth(&circuit, FaninLimit::Bounded(2))))
}

/// Row sums minus `r` (two's complement over `ceil(lg n) + 1` bits), a
/// zero detector per row, and an encoder with `valid`.
///
/// Inputs are `t{i}_{k}` then `q0..` (the requested rank, LSB first).
pub fn build_select_rank_circuit(n: usize) -> Result<Netlist> {
    check_n(n)?;
    let width = super::ceil_log2(n) + 1;
    let mut b = NetlistBuilder::new();
    let t = t_inputs(&mut b, n);
    let target: Vec<Sig> = (0..width).map(|k| b.input(format!("q{k}"))).collect();
    let negated: Vec<Sig> = target.iter().map(|&s| b.not(s)).collect();
    let mut hits = Vec::with_capacity(n);
    for row in &t {
        let sum = adder_tree(&mut b, row);
        let mut diff = brent_kung_add(&mut b, &sum, &negated, Sig::Const(true));
        diff.truncate(width);
        hits.push(b.nor(&diff));
    }
    let idx = encode(&mut b, &hits);
    let valid = b.or(&hits);
    emit_word(&mut b, "idx", &idx);
    b.output("valid", valid);
    Ok(b.finish())
}

/// Index of the element with exactly `r` smaller elements.
pub fn select_rank(t: &ComparisonMatrix, r: usize) -> Result<RankQueryResult> {
    let n = t.n();
    if r >= n {
        return Err(Error::RankOutOfRange { r, n });
    }
    let circuit = build_select_rank_circuit(n)?;
    let width = super::ceil_log2(n) + 1;
    let mut inputs = t.bits();
    inputs.extend((0..width).map(|k| r >> k & 1 == 1));
    let out = circuit.evaluate_named(&inputs)?;
    let index = out.get("valid").unwrap_or(false).then(|| out.word("idx"));
    Ok(RankQueryResult { index, exact: true })
}
