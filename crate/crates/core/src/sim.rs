// SPDX-License-Identifier: Apache-2.0

//! Phase-synchronous simulation of parallel enumeration sort on a 1D
//! crosspoint array.
//!
//! The machine runs a fixed schedule of seven phases regardless of `n`:
//!
//! | # | phase          | work                                             |
//! |---|----------------|--------------------------------------------------|
//! | 0 | clear          | `C_{i,0}` master-clears row `i` of `T`           |
//! | 1 | load           | `A[i]` is broadcast to every replicate of class `i` |
//! | 2 | left exchange  | crosspoints `(s-1, s)` for even `s`: larger class sends its key |
//! | 3 | left reply     | smaller class compares, writes or signals         |
//! | 4 | right exchange | crosspoints `(s, s+1)` for even `s`               |
//! | 5 | right reply    | as phase 3                                       |
//! | 6 | rank           | `C_{i,0}` sums row `i` of `T`                     |
//!
//! The two exchange groups partition the crosspoints and each group is a
//! matching, so every crosspoint is used for exactly one comparison and no PE
//! talks to both neighbours in the same phase. Within a phase every PE reads
//! pre-phase state; received values and `T` writes commit at phase end.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::Layout;

/// Sort key. Comparisons are unit cost; the width is only reported.
pub trait Key: Ord + Clone + Display {
    fn bit_width(&self) -> u64;
}

macro_rules! signed_key {
    ($($t:ty),*) => {$(
        impl Key for $t {
            fn bit_width(&self) -> u64 {
                let magnitude = self.unsigned_abs();
                u64::from(<$t>::BITS - magnitude.leading_zeros()) + u64::from(*self < 0)
            }
        }
    )*};
}

macro_rules! unsigned_key {
    ($($t:ty),*) => {$(
        impl Key for $t {
            fn bit_width(&self) -> u64 {
                u64::from(<$t>::BITS - self.leading_zeros())
            }
        }
    )*};
}

signed_key!(i8, i16, i32, i64, i128, isize);
unsigned_key!(u8, u16, u32, u64, u128, usize);

impl Key for BigInt {
    fn bit_width(&self) -> u64 {
        self.bits() + u64::from(self.sign() == num_bigint::Sign::Minus)
    }
}

/// The n x n matrix `T`; `T[i][k] = 1` records that `A[k]` lost to `A[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    rows: Vec<Vec<u8>>,
}

impl ComparisonMatrix {
    pub fn zeros(n: usize) -> Self {
        ComparisonMatrix { rows: vec![vec![0; n]; n] }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: r.len() });
        }
        Ok(ComparisonMatrix {
            rows: rows.into_iter().map(|r| r.into_iter().map(|b| u8::from(b != 0)).collect()).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row][col] != 0
    }

    fn set(&mut self, row: usize, col: usize) {
        self.rows[row][col] = 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.rows[i].iter().map(|&b| usize::from(b)).sum()
    }

    /// Row-major bits, the input order every query circuit expects.
    pub fn bits(&self) -> Vec<bool> {
        self.rows.iter().flatten().map(|&b| b != 0).collect()
    }

    /// One row per line, `0`/`1` characters.
    pub fn to_grid(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            for &b in r {
                out.push(if b != 0 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankVector(pub Vec<usize>);

impl RankVector {
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &r in &self.0 {
            if r >= seen.len() || seen[r] {
                return false;
            }
            seen[r] = true;
        }
        true
    }

    /// Places `values[i]` at position `ranks[i]`.
    pub fn apply<T: Clone>(&self, values: &[T]) -> Option<Vec<T>> {
        if !self.is_permutation() || values.len() != self.0.len() {
            return None;
        }
        let mut out: Vec<Option<T>> = vec![None; values.len()];
        for (v, &r) in values.iter().zip(&self.0) {
            out[r] = Some(v.clone());
        }
        out.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseName {
    Clear,
    Load,
    LeftExchange,
    LeftReply,
    RightExchange,
    RightReply,
    Rank,
}

impl PhaseName {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseName::Clear => "clear",
            PhaseName::Load => "load",
            PhaseName::LeftExchange => "left_exchange",
            PhaseName::LeftReply => "left_reply",
            PhaseName::RightExchange => "right_exchange",
            PhaseName::RightReply => "right_reply",
            PhaseName::Rank => "rank",
        }
    }
}

/// What one PE did in one phase. Keys are kept in decimal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", content = "payload", rename_all = "snake_case")]
pub enum Action {
    ClearRow { row: usize },
    Load { value: String },
    SendValue { to: Direction, value: String },
    ReceiveValue { from: Direction, from_class: usize, value: String },
    SendSignal { to: Direction, bit: u8 },
    ReceiveSignal { from: Direction, bit: u8 },
    WriteT { row: usize, col: usize, value: u8 },
    RankSum { row: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub slot: usize,
    pub class: usize,
    #[serde(flatten)]
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub index: usize,
    pub name: PhaseName,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortTrace {
    pub n: usize,
    pub slot_count: usize,
    /// Widest key in the input, in bits (sign bit included).
    pub key_bits: u64,
    pub phases: Vec<Phase>,
}

#[derive(Serialize)]
struct EventLine<'a> {
    phase: usize,
    name: PhaseName,
    #[serde(flatten)]
    event: &'a Event,
}

#[derive(Serialize)]
struct CsvRow {
    phase: usize,
    name: &'static str,
    slot: usize,
    class: usize,
    action: &'static str,
    direction: Option<Direction>,
    peer_class: Option<usize>,
    value: Option<String>,
    row: Option<usize>,
    col: Option<usize>,
    bit: Option<u8>,
}

impl SortTrace {
    fn push(&mut self, name: PhaseName, events: Vec<Event>) {
        let index = self.phases.len();
        self.phases.push(Phase { index, name, events });
    }

    pub fn events(&self) -> impl Iterator<Item = (&Phase, &Event)> {
        self.phases.iter().flat_map(|p| p.events.iter().map(move |e| (p, e)))
    }

    /// One JSON object per event: phase, phase name, slot, class, action, payload.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (phase, event) in self.events() {
            let line = EventLine { phase: phase.index, name: phase.name, event };
            out.push_str(&serde_json::to_string(&line).expect("trace event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (phase, e) in self.events() {
            let mut row = CsvRow {
                phase: phase.index,
                name: phase.name.as_str(),
                slot: e.slot,
                class: e.class,
                action: "",
                direction: None,
                peer_class: None,
                value: None,
                row: None,
                col: None,
                bit: None,
            };
            match &e.action {
                Action::ClearRow { row: r } => {
                    row.action = "clear_row";
                    row.row = Some(*r);
                }
                Action::Load { value } => {
                    row.action = "load";
                    row.value = Some(value.clone());
                }
                Action::SendValue { to, value } => {
                    row.action = "send_value";
                    row.direction = Some(*to);
                    row.value = Some(value.clone());
                }
                Action::ReceiveValue { from, from_class, value } => {
                    row.action = "receive_value";
                    row.direction = Some(*from);
                    row.peer_class = Some(*from_class);
                    row.value = Some(value.clone());
                }
                Action::SendSignal { to, bit } => {
                    row.action = "send_signal";
                    row.direction = Some(*to);
                    row.bit = Some(*bit);
                }
                Action::ReceiveSignal { from, bit } => {
                    row.action = "receive_signal";
                    row.direction = Some(*from);
                    row.bit = Some(*bit);
                }
                Action::WriteT { row: r, col, value } => {
                    row.action = "write_t";
                    row.row = Some(*r);
                    row.col = Some(*col);
                    row.bit = Some(*value);
                }
                Action::RankSum { row: r, rank } => {
                    row.action = "rank_sum";
                    row.row = Some(*r);
                    row.value = Some(rank.to_string());
                }
            }
            w.serialize(row).expect("csv row serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

pub struct SimulatorState<'a, K> {
    layout: &'a Layout,
    held: Vec<K>,
    t: ComparisonMatrix,
    trace: SortTrace,
}

impl<K: Key> SimulatorState<'_, K> {
    pub fn matrix(&self) -> &ComparisonMatrix {
        &self.t
    }

    /// Key held by every slot after loading.
    pub fn held(&self) -> &[K] {
        &self.held
    }
}

/// Clears `T` and broadcasts `A[i]` to every replicate of class `i`.
pub fn load_phase<'a, K: Key>(layout: &'a Layout, a: &[K]) -> Result<SimulatorState<'a, K>> {
    let n = layout.n;
    if a.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: a.len() });
    }
    if let Some(&class) = layout.slots.iter().find(|&&c| c >= n) {
        return Err(Error::ClassOutOfRange { class, n });
    }
    let mut trace = SortTrace {
        n,
        slot_count: layout.len(),
        key_bits: a.iter().map(Key::bit_width).max().unwrap_or(0),
        phases: Vec::new(),
    };

    let clear = (0..n)
        .filter_map(|class| {
            layout
                .first_replicate(class)
                .map(|slot| Event { slot, class, action: Action::ClearRow { row: class } })
        })
        .collect();
    trace.push(PhaseName::Clear, clear);

    let held: Vec<K> = layout.slots.iter().map(|&c| a[c].clone()).collect();
    let load = layout
        .slots
        .iter()
        .enumerate()
        .map(|(slot, &class)| Event { slot, class, action: Action::Load { value: held[slot].to_string() } })
        .collect();
    trace.push(PhaseName::Load, load);

    Ok(SimulatorState { layout, held, t: ComparisonMatrix::zeros(n), trace })
}

/// Crosspoints `(left_slot, left_slot + 1)` handled by one exchange group.
fn crosspoint_group(len: usize, side: Direction) -> impl Iterator<Item = usize> {
    // Even slots own the group: their left crosspoint starts at an odd
    // slot, their right crosspoint at an even one.
    let start = match side {
        Direction::Left => 1,
        Direction::Right => 0,
    };
    (start..len.saturating_sub(1)).step_by(2)
}

fn exchange_and_reply<K: Key>(state: &mut SimulatorState<'_, K>, side: Direction) {
    let slots = &state.layout.slots;
    let (exchange_name, reply_name) = match side {
        Direction::Left => (PhaseName::LeftExchange, PhaseName::LeftReply),
        Direction::Right => (PhaseName::RightExchange, PhaseName::RightReply),
    };

    // Exchange: the larger class sends its key over the crosspoint.
    // inbox[slot] = (sender slot, direction the key came from)
    let mut inbox: BTreeMap<usize, (usize, Direction)> = BTreeMap::new();
    let mut events = Vec::new();
    for left in crosspoint_group(slots.len(), side) {
        let right = left + 1;
        let (cl, cr) = (slots[left], slots[right]);
        if cl == cr {
            continue;
        }
        let (sender, receiver, to, from) = if cr > cl {
            (right, left, Direction::Left, Direction::Right)
        } else {
            (left, right, Direction::Right, Direction::Left)
        };
        let value = state.held[sender].to_string();
        events.push(Event {
            slot: sender,
            class: slots[sender],
            action: Action::SendValue { to, value: value.clone() },
        });
        events.push(Event {
            slot: receiver,
            class: slots[receiver],
            action: Action::ReceiveValue { from, from_class: slots[sender], value },
        });
        let previous = inbox.insert(receiver, (sender, from));
        debug_assert!(previous.is_none(), "slot {receiver} received two keys in one phase");
    }
    state.trace.push(exchange_name, events);

    // Reply: the receiver compares, then writes its own row or signals the
    // sender to write. Writes are collected and committed together.
    let mut writes = Vec::new();
    let mut events = Vec::new();
    for (&receiver, &(sender, from)) in &inbox {
        let (i, other) = (slots[receiver], slots[sender]);
        let mine = &state.held[receiver];
        let theirs = &state.held[sender];
        let receiver_wins = theirs < mine || (theirs == mine && other < i);
        let back = match from {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        };
        if receiver_wins {
            events.push(Event { slot: receiver, class: i, action: Action::WriteT { row: i, col: other, value: 1 } });
            writes.push((i, other));
        }
        let bit = u8::from(!receiver_wins);
        events.push(Event { slot: receiver, class: i, action: Action::SendSignal { to: from, bit } });
        events.push(Event { slot: sender, class: other, action: Action::ReceiveSignal { from: back, bit } });
        if bit == 1 {
            events.push(Event { slot: sender, class: other, action: Action::WriteT { row: other, col: i, value: 1 } });
            writes.push((other, i));
        }
    }
    for (row, col) in writes {
        state.t.set(row, col);
    }
    state.trace.push(reply_name, events);
}

/// Runs both exchange groups; returns the completed `T` and the trace so far.
pub fn compare_phase<K: Key>(mut state: SimulatorState<'_, K>) -> (ComparisonMatrix, SortTrace) {
    exchange_and_reply(&mut state, Direction::Left);
    exchange_and_reply(&mut state, Direction::Right);
    (state.t, state.trace)
}

/// `R[i]` is the number of ones in row `i` of `T`.
pub fn rank_phase(t: &ComparisonMatrix) -> RankVector {
    RankVector((0..t.n()).map(|i| t.row_sum(i)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortOutcome {
    pub t: ComparisonMatrix,
    pub ranks: RankVector,
    pub trace: SortTrace,
}

pub fn sort<K: Key>(layout: &Layout, a: &[K]) -> Result<SortOutcome> {
    let state = load_phase(layout, a)?;
    let (t, mut trace) = compare_phase(state);
    let ranks = rank_phase(&t);
    let events = (0..layout.n)
        .filter_map(|class| {
            layout.first_replicate(class).map(|slot| Event {
                slot,
                class,
                action: Action::RankSum { row: class, rank: ranks.0[class] },
            })
        })
        .collect();
    trace.push(PhaseName::Rank, events);
    Ok(SortOutcome { t, ranks, trace })
}

pub fn phase_count(trace: &SortTrace) -> usize {
    trace.phases.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteConflict {
    pub phase: usize,
    pub row: usize,
    pub col: usize,
    pub writers: Vec<usize>,
}

impl Display for WriteConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}][{}] written by slots {:?} in phase {}", self.row, self.col, self.writers, self.phase)
    }
}

/// `T` cells written by more than one slot within the same phase.
pub fn detect_write_conflicts(trace: &SortTrace) -> Vec<WriteConflict> {
    let mut out = Vec::new();
    for phase in &trace.phases {
        let mut writers: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
        for e in &phase.events {
            if let Action::WriteT { row, col, .. } = e.action {
                writers.entry((row, col)).or_default().insert(e.slot);
            }
        }
        out.extend(writers.into_iter().filter(|(_, w)| w.len() > 1).map(|((row, col), w)| WriteConflict {
            phase: phase.index,
            row,
            col,
            writers: w.into_iter().collect(),
        }));
    }
    out
}

/// Number of key comparisons performed during the run.
pub fn comparison_count(trace: &SortTrace) -> usize {
    trace
        .events()
        .filter(|(_, e)| matches!(e.action, Action::ReceiveValue { .. }))
        .count()
}

/// Class pairs compared more than once, across all phases.
pub fn duplicate_comparisons(trace: &SortTrace) -> Vec<[usize; 2]> {
    let mut seen: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for (_, e) in trace.events() {
        if let Action::ReceiveValue { from_class, .. } = e.action {
            *seen.entry([e.class.min(from_class), e.class.max(from_class)]).or_default() += 1;
        }
    }
    seen.into_iter().filter(|&(_, c)| c > 1).map(|(p, _)| p).collect()
}

/// Equality-only pass used by search: `C_{i,0}` of each class compares its
/// key with `key`. One replicate per class suffices.
pub fn match_phase<K: Key>(layout: &Layout, a: &[K], key: &K) -> Result<Vec<bool>> {
    if a.len() != layout.n {
        return Err(Error::LengthMismatch { expected: layout.n, got: a.len() });
    }
    Ok((0..layout.n)
        .map(|class| layout.first_replicate(class).is_some() && a[class] == *key)
        .collect())
}
