// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("class count n = {0} is too small (need n >= {1})")]
    TooFewClasses(usize, usize),
    #[error("exponent j = {j} outside 1..={n}")]
    ExponentOutOfRange { n: usize, j: usize },
    #[error("n = {0} must be even")]
    ExpectedEven(usize),
    #[error("n = {0} must be odd")]
    ExpectedOdd(usize),
    #[error("input has {got} values but the layout has {expected} classes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("slot index {index} out of range for a layout of {len} slots")]
    SlotOutOfRange { index: usize, len: usize },
    #[error("class id {class} out of range for n = {n}")]
    ClassOutOfRange { class: usize, n: usize },
    #[error("rank {r} out of range for n = {n}")]
    RankOutOfRange { r: usize, n: usize },
    #[error("invalid chunk parameters j = {j}, k = {k} (need 1 <= j <= k)")]
    InvalidChunk { j: usize, k: usize },
    #[error("fan-in limit must be at least 2, got {0}")]
    InvalidFanin(usize),
    #[error("netlist expects {expected} input bits, got {got}")]
    InputWidth { expected: usize, got: usize },
    #[error("comparison matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
