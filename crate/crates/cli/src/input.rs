// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xbar::{build, Layout};

use crate::args::DataArgs;
use crate::error::CliError;

/// Inline list unless `spec` names an existing file.
pub fn read_keys(spec: &str) -> Result<Vec<BigInt>, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        let mut out = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = BigInt::from_str(line)
                .map_err(|_| CliError::Data(format!("{}:{}: not an integer: `{line}`", path.display(), k + 1)))?;
            out.push(v);
        }
        return Ok(out);
    }
    spec.split(',')
        .enumerate()
        .map(|(k, item)| {
            let item = item.trim();
            BigInt::from_str(item)
                .map_err(|_| CliError::usage("--input", format!("item {} is not an integer: `{item}`", k + 1)))
        })
        .collect()
}

/// Uniform keys in `0..2n`, so duplicates are common.
pub fn random_keys(n: usize, seed: u64) -> Vec<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| BigInt::from(rng.gen_range(0..2 * n as u64))).collect()
}

pub fn resolve_keys(data: &DataArgs) -> Result<Vec<BigInt>, CliError> {
    let keys = match (&data.input, data.n) {
        (Some(spec), _) => read_keys(spec)?,
        (None, Some(n)) => random_keys(n, data.seed.unwrap_or(0)),
        (None, None) => return Err(CliError::usage("--input", "give --input, or --n for a seeded random array")),
    };
    if let Some(n) = data.n {
        if n != keys.len() {
            return Err(CliError::usage("--n", format!("n = {n} but the input has {} values", keys.len())));
        }
    }
    if keys.len() < 2 {
        return Err(CliError::usage("--input", "need at least 2 values"));
    }
    Ok(keys)
}

pub fn default_layout(n: usize) -> Result<Layout, CliError> {
    build(n).map_err(|e| CliError::usage("--n", e))
}

/// JSON layout document, or a bare slot list. `n` defaults to the largest
/// class id plus one for bare lists.
pub fn read_layout(path: &Path, n: Option<usize>) -> Result<Layout, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let layout: Layout = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Data(format!("{}:{}: {e}", path.display(), e.line())))?;
        if let Some(n) = n.filter(|&n| n != layout.n) {
            return Err(CliError::usage("--n", format!("n = {n} but the layout has n = {}", layout.n)));
        }
        return Ok(layout);
    }
    let mut slots = Vec::new();
    for (k, line) in text.lines().enumerate() {
        for tok in line.split(|c: char| c == '-' || c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v = tok
                .parse::<usize>()
                .map_err(|_| CliError::Data(format!("{}:{}: not a class id: `{tok}`", path.display(), k + 1)))?;
            slots.push(v);
        }
    }
    if slots.is_empty() {
        return Err(CliError::Data(format!("{}: empty layout", path.display())));
    }
    let n = n.unwrap_or_else(|| slots.iter().max().map_or(0, |m| m + 1));
    Layout::from_slots(n, slots).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
