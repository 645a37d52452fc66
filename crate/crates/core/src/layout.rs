// SPDX-License-Identifier: Apache-2.0

//! 1D crosspoint array layouts.
//!
//! A layout is a left-to-right sequence of PE class ids. A crosspoint sits
//! between every pair of physically adjacent slots, so the crosspoints are
//! never stored: slot `k` and slot `k + 1` share crosspoint `k`.
//!
//! Even `n` lays out the cycles of every `Q_i` back to back. Odd `n` lays
//! out the `n - 1` array with one empty slot between consecutive `Q_i`
//! blocks, fills those slots with class `n - 1`, and appends `n - 1, 0`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{partition_q, partition_unchecked, QPartition};

/// Where a slot's class id came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Cycle { q_set: usize, cycle: usize, element: usize },
    OddFill,
    OddTail,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n: usize,
    pub slots: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

impl Layout {
    /// A user-supplied layout. Only class ids are checked here; structural
    /// problems are reported by [`validate`].
    pub fn from_slots(n: usize, slots: Vec<usize>) -> Result<Self> {
        if let Some(&class) = slots.iter().find(|&&c| c >= n) {
            return Err(Error::ClassOutOfRange { class, n });
        }
        let provenance = vec![Provenance::External; slots.len()];
        Ok(Layout { n, slots, provenance })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn crosspoint_count(&self) -> usize {
        self.slots.len().saturating_sub(1)
    }

    /// Unordered class pairs of every crosspoint, left to right.
    pub fn adjacencies(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.slots.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// Slot index of `C_{class,0}`, the leftmost replicate of `class`.
    pub fn first_replicate(&self, class: usize) -> Option<usize> {
        self.slots.iter().position(|&c| c == class)
    }

    /// Replicate index `j` of the PE at `slot`, i.e. the `j` in `C_{i,j}`.
    pub fn replicate_index(&self, slot: usize) -> usize {
        let class = self.slots[slot];
        self.slots[..slot].iter().filter(|&&c| c == class).count()
    }

    pub fn replicate_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for &c in &self.slots {
            if c < self.n {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layout serializes")
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.slots.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Fewest PEs any pair-covering 1D array on `n` classes can use.
pub fn min_pe_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::TooFewClasses(n, 2));
    }
    Ok(if n.is_multiple_of(2) { n * n / 2 } else { n * (n - 1) / 2 + 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndPlacement {
    /// Class does not sit at either end of the array.
    Interior,
    /// Class occupies both end slots.
    SameClassBothEnds,
    /// Class occupies exactly one end slot and another class the other.
    DistinctClassAtEnd,
}

/// Fewest PEs a class needs to be adjacent to all `n - 1` other classes.
pub fn replicate_lower_bound(n: usize, at_end: EndPlacement) -> usize {
    match at_end {
        EndPlacement::Interior => n / 2,
        EndPlacement::SameClassBothEnds => (n + 2) / 2,
        EndPlacement::DistinctClassAtEnd => n.div_ceil(2),
    }
}

fn lay_blocks(q: &QPartition, skip_between_blocks: bool) -> Layout {
    let mut slots = Vec::new();
    let mut provenance = Vec::new();
    // Only the odd builder skips slots; class q.n is then the extra class n - 1.
    let fill = q.n;
    for (q_set, cycles) in q.sets.iter().enumerate() {
        if skip_between_blocks && q_set > 0 {
            slots.push(fill);
            provenance.push(Provenance::OddFill);
        }
        for (cycle, c) in cycles.iter().enumerate() {
            for (element, &class) in c.elements.iter().enumerate() {
                slots.push(class);
                provenance.push(Provenance::Cycle { q_set, cycle, element });
            }
        }
    }
    Layout { n: q.n, slots, provenance }
}

/// Optimal array for even `n >= 4`, `n^2 / 2` slots.
pub fn build_even(n: usize) -> Result<Layout> {
    let q = partition_q(n)?;
    Ok(lay_blocks(&q, false))
}

/// Optimal array for odd `n >= 3`, `n(n-1)/2 + 1` slots.
pub fn build_odd(n: usize) -> Result<Layout> {
    if n.is_multiple_of(2) {
        return Err(Error::ExpectedOdd(n));
    }
    if n < 3 {
        return Err(Error::TooFewClasses(n, 3));
    }
    let q = partition_unchecked(n - 1);
    let mut layout = lay_blocks(&q, true);
    let last = n - 1;
    layout.slots.extend([last, 0]);
    layout.provenance.extend([Provenance::OddTail, Provenance::OddTail]);
    layout.n = n;
    Ok(layout)
}

/// Optimal array for any `n >= 2`. `n = 2` is the lone pair `0-1`.
pub fn build(n: usize) -> Result<Layout> {
    match n {
        0 | 1 => Err(Error::TooFewClasses(n, 2)),
        2 => Ok(lay_blocks(&partition_unchecked(2), false)),
        _ if n.is_multiple_of(2) => build_even(n),
        _ => build_odd(n),
    }
}

/// Classes of the physically adjacent slots (`i_l`, `i_r`).
pub fn neighbors(layout: &Layout, slot: usize) -> Result<(Option<usize>, Option<usize>)> {
    let len = layout.slots.len();
    if slot >= len {
        return Err(Error::SlotOutOfRange { index: slot, len });
    }
    let left = slot.checked_sub(1).map(|k| layout.slots[k]);
    let right = layout.slots.get(slot + 1).copied();
    Ok((left, right))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub pair: [usize; 2],
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub pe_count: usize,
    pub min_pe_count: Option<usize>,
    pub pair_coverage: Vec<PairCount>,
    pub redundant_pairs: Vec<[usize; 2]>,
    pub missing_pairs: Vec<[usize; 2]>,
    pub replicate_counts: Vec<usize>,
    pub end_classes: Option<(usize, usize)>,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn coverage_of(&self, a: usize, b: usize) -> usize {
        let pair = [a.min(b), a.max(b)];
        self.pair_coverage
            .iter()
            .find(|p| p.pair == pair)
            .map_or(0, |p| p.count)
    }
}

/// Checks every structural property an optimal layout must have. Bad
/// layouts produce violations, never an error.
pub fn validate(layout: &Layout) -> ValidationReport {
    let n = layout.n;
    let mut violations = Vec::new();

    if layout.provenance.len() != layout.slots.len() {
        violations.push(format!(
            "provenance has {} entries for {} slots",
            layout.provenance.len(),
            layout.slots.len()
        ));
    }
    for (k, &c) in layout.slots.iter().enumerate() {
        if c >= n {
            violations.push(format!("slot {k} holds class {c}, outside 0..{n}"));
        }
    }
    for (k, w) in layout.slots.windows(2).enumerate() {
        if w[0] == w[1] {
            violations.push(format!("adjacent same-class slots {k} and {} (class {})", k + 1, w[0]));
        }
    }

    let mut coverage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (a, b) in layout.adjacencies() {
        if a != b && b < n {
            *coverage.entry((a, b)).or_default() += 1;
        }
    }
    let mut missing_pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !coverage.contains_key(&(a, b)) {
                missing_pairs.push([a, b]);
            }
        }
    }
    if !missing_pairs.is_empty() {
        violations.push(format!("{} class pairs are never adjacent", missing_pairs.len()));
    }
    let redundant_pairs: Vec<[usize; 2]> = coverage
        .iter()
        .filter(|(_, &c)| c >= 2)
        .map(|(&(a, b), _)| [a, b])
        .collect();
    let expected_redundant = if n.is_multiple_of(2) { n / 2 - 1 } else { 0 };
    if n >= 2 && redundant_pairs.len() != expected_redundant {
        violations.push(format!(
            "{} pairs are adjacent more than once, expected {expected_redundant}",
            redundant_pairs.len()
        ));
    }
    if let Some((&(a, b), &c)) = coverage.iter().find(|(_, &c)| c > 2) {
        violations.push(format!("pair {{{a},{b}}} is adjacent {c} times"));
    }

    let pe_count = layout.slots.len();
    let min_pe = min_pe_count(n).ok();
    match min_pe {
        Some(m) if m != pe_count => {
            violations.push(format!("{pe_count} PEs, optimal count is {m}"));
        }
        None => violations.push(format!("n = {n} is below the two-class minimum")),
        _ => {}
    }

    let replicate_counts = layout.replicate_counts();
    let end_classes = match (layout.slots.first(), layout.slots.last()) {
        (Some(&l), Some(&r)) => Some((l, r)),
        _ => None,
    };
    for (class, &count) in replicate_counts.iter().enumerate() {
        let placement = match end_classes {
            Some((l, r)) if l == class && r == class => EndPlacement::SameClassBothEnds,
            Some((l, r)) if l == class || r == class => EndPlacement::DistinctClassAtEnd,
            _ => EndPlacement::Interior,
        };
        let bound = replicate_lower_bound(n, placement);
        if count < bound {
            violations.push(format!("class {class} has {count} PEs, needs at least {bound}"));
        }
    }

    ValidationReport {
        n,
        pe_count,
        min_pe_count: min_pe,
        pair_coverage: coverage
            .into_iter()
            .map(|((a, b), count)| PairCount { pair: [a, b], count })
            .collect(),
        redundant_pairs,
        missing_pairs,
        replicate_counts,
        end_classes,
        violations,
    }
}
