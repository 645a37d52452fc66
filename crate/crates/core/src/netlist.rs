// SPDX-License-Identifier: Apache-2.0

//! Combinational gate netlists.
//!
//! Wires are dense integer ids. Primary inputs take ids `0..inputs.len()`,
//! and each gate allocates fresh ids for its outputs, so the gate list is
//! always in topological order and evaluation is a single forward pass.
//!
//! Depth is the number of gate instances on the longest input-to-output
//! path. With a finite fan-in limit `b`, wide AND/OR/NOR gates are first
//! rewritten as balanced trees of at most `b` inputs per gate. Threshold
//! gates keep unit delay at any fan-in and are reported separately.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type WireId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    And,
    Or,
    Nor,
    Not,
    /// Output is 1 iff at least `m` inputs are 1.
    Threshold(usize),
    /// Outputs `(sum, carry)`.
    HalfAdd,
    /// Outputs `(sum, carry)`.
    FullAdd,
}

impl GateKind {
    pub fn output_count(&self) -> usize {
        match self {
            GateKind::HalfAdd | GateKind::FullAdd => 2,
            _ => 1,
        }
    }

    fn eval(&self, ins: &[bool], out: &mut [bool]) {
        match *self {
            GateKind::And => out[0] = ins.iter().all(|&b| b),
            GateKind::Or => out[0] = ins.iter().any(|&b| b),
            GateKind::Nor => out[0] = !ins.iter().any(|&b| b),
            GateKind::Not => out[0] = !ins[0],
            GateKind::Threshold(m) => out[0] = ins.iter().filter(|&&b| b).count() >= m,
            GateKind::HalfAdd | GateKind::FullAdd => {
                let ones = ins.iter().filter(|&&b| b).count();
                out[0] = ones % 2 == 1;
                out[1] = ones >= 2;
            }
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => f.write_str("AND"),
            GateKind::Or => f.write_str("OR"),
            GateKind::Nor => f.write_str("NOR"),
            GateKind::Not => f.write_str("NOT"),
            GateKind::Threshold(m) => write!(f, "THRESHOLD[{m}]"),
            GateKind::HalfAdd => f.write_str("HALF_ADD"),
            GateKind::FullAdd => f.write_str("FULL_ADD"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

/// A signal that is either a wire or a constant folded away at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sig {
    Const(bool),
    Wire(WireId),
}

pub const ZERO: Sig = Sig::Const(false);
pub const ONE: Sig = Sig::Const(true);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netlist {
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub outputs: Vec<(String, Sig)>,
    pub wire_count: usize,
}

impl Netlist {
    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output(&self, name: &str) -> Option<Sig> {
        self.outputs.iter().find(|(n, _)| n == name).map(|&(_, s)| s)
    }

    /// Values of every wire for the given primary inputs.
    pub fn evaluate_wires(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::InputWidth { expected: self.inputs.len(), got: inputs.len() });
        }
        let mut wires = vec![false; self.wire_count];
        wires[..inputs.len()].copy_from_slice(inputs);
        let mut ins = Vec::new();
        let mut outs = [false; 2];
        for g in &self.gates {
            ins.clear();
            ins.extend(g.inputs.iter().map(|&w| wires[w]));
            g.kind.eval(&ins, &mut outs);
            for (k, &w) in g.outputs.iter().enumerate() {
                wires[w] = outs[k];
            }
        }
        Ok(wires)
    }

    /// Primary output values, in declaration order.
    pub fn evaluate(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        let wires = self.evaluate_wires(inputs)?;
        Ok(self.outputs.iter().map(|(_, s)| read(&wires, *s)).collect())
    }

    /// Primary outputs by name.
    pub fn evaluate_named(&self, inputs: &[bool]) -> Result<Evaluation<'_>> {
        let values = self.evaluate(inputs)?;
        Ok(Evaluation { netlist: self, values })
    }

    /// Structural text, one gate per line: `gN KIND[param] <- wire,wire,...`.
    ///
    /// Input wires print as `iK`. A single-output gate's wire prints as its
    /// gate id; two-output cells expose `gN.s` and `gN.c`.
    pub fn to_text(&self) -> String {
        let names = self.wire_names();
        let mut out = String::new();
        for (k, name) in self.inputs.iter().enumerate() {
            let _ = writeln!(out, "input i{k} {name}");
        }
        for (g, gate) in self.gates.iter().enumerate() {
            let ins: Vec<&str> = gate.inputs.iter().map(|&w| names[w].as_str()).collect();
            let _ = writeln!(out, "g{g} {} <- {}", gate.kind, ins.join(","));
        }
        for (name, sig) in &self.outputs {
            let src = match sig {
                Sig::Const(b) => u8::from(*b).to_string(),
                Sig::Wire(w) => names[*w].clone(),
            };
            let _ = writeln!(out, "output {name} <- {src}");
        }
        out
    }

    fn wire_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.wire_count];
        for (k, name) in names.iter_mut().take(self.inputs.len()).enumerate() {
            *name = format!("i{k}");
        }
        for (g, gate) in self.gates.iter().enumerate() {
            match gate.outputs.as_slice() {
                [w] => names[*w] = format!("g{g}"),
                [s, c] => {
                    names[*s] = format!("g{g}.s");
                    names[*c] = format!("g{g}.c");
                }
                _ => unreachable!("gates have one or two outputs"),
            }
        }
        names
    }
}

fn read(wires: &[bool], s: Sig) -> bool {
    match s {
        Sig::Const(b) => b,
        Sig::Wire(w) => wires[w],
    }
}

pub struct Evaluation<'a> {
    netlist: &'a Netlist,
    values: Vec<bool>,
}

impl Evaluation<'_> {
    pub fn get(&self, name: &str) -> Option<bool> {
        self.netlist.outputs.iter().position(|(n, _)| n == name).map(|k| self.values[k])
    }

    /// Little-endian integer from outputs `{prefix}0`, `{prefix}1`, ...
    pub fn word(&self, prefix: &str) -> usize {
        let mut value = 0;
        for ((name, _), &b) in self.netlist.outputs.iter().zip(&self.values) {
            let bit = name.strip_prefix(prefix).and_then(|rest| rest.parse::<usize>().ok());
            if let (Some(bit), true) = (bit, b) {
                value |= 1 << bit;
            }
        }
        value
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Incremental netlist construction with constant folding on [`Sig`]s.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<(String, Sig)>,
    next_wire: WireId,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// All inputs must be declared before the first gate.
    pub fn input(&mut self, name: impl Into<String>) -> Sig {
        assert!(self.gates.is_empty(), "inputs must precede gates");
        self.inputs.push(name.into());
        let w = self.next_wire;
        self.next_wire += 1;
        Sig::Wire(w)
    }

    pub fn output(&mut self, name: impl Into<String>, s: Sig) {
        self.outputs.push((name.into(), s));
    }

    /// Adds a gate verbatim, with no folding.
    pub fn raw_gate(&mut self, kind: GateKind, inputs: Vec<WireId>) -> Vec<WireId> {
        debug_assert!(inputs.iter().all(|&w| w < self.next_wire));
        let outputs: Vec<WireId> = (0..kind.output_count()).map(|k| self.next_wire + k).collect();
        self.next_wire += outputs.len();
        self.gates.push(Gate { kind, inputs, outputs: outputs.clone() });
        outputs
    }

    fn single(&mut self, kind: GateKind, inputs: Vec<WireId>) -> Sig {
        Sig::Wire(self.raw_gate(kind, inputs)[0])
    }

    pub fn not(&mut self, a: Sig) -> Sig {
        match a {
            Sig::Const(b) => Sig::Const(!b),
            Sig::Wire(w) => self.single(GateKind::Not, vec![w]),
        }
    }

    pub fn and(&mut self, ins: &[Sig]) -> Sig {
        if ins.contains(&ZERO) {
            return ZERO;
        }
        let wires = wires_of(ins);
        match wires.len() {
            0 => ONE,
            1 => Sig::Wire(wires[0]),
            _ => self.single(GateKind::And, wires),
        }
    }

    pub fn or(&mut self, ins: &[Sig]) -> Sig {
        if ins.contains(&ONE) {
            return ONE;
        }
        let wires = wires_of(ins);
        match wires.len() {
            0 => ZERO,
            1 => Sig::Wire(wires[0]),
            _ => self.single(GateKind::Or, wires),
        }
    }

    pub fn nor(&mut self, ins: &[Sig]) -> Sig {
        if ins.contains(&ONE) {
            return ZERO;
        }
        let wires = wires_of(ins);
        if wires.is_empty() {
            return ONE;
        }
        self.single(GateKind::Nor, wires)
    }

    pub fn threshold(&mut self, m: usize, ins: &[Sig]) -> Sig {
        let const_ones = ins.iter().filter(|&&s| s == ONE).count();
        let wires = wires_of(ins);
        let need = m.saturating_sub(const_ones);
        if need == 0 {
            ONE
        } else if need > wires.len() {
            ZERO
        } else {
            self.single(GateKind::Threshold(need), wires)
        }
    }

    /// `(sum, carry)` of two bits.
    pub fn half_add(&mut self, a: Sig, b: Sig) -> (Sig, Sig) {
        match (a, b) {
            (Sig::Const(x), Sig::Const(y)) => (Sig::Const(x ^ y), Sig::Const(x & y)),
            (Sig::Const(false), w) | (w, Sig::Const(false)) => (w, ZERO),
            (Sig::Const(true), w) | (w, Sig::Const(true)) => (self.not(w), w),
            (Sig::Wire(x), Sig::Wire(y)) => {
                let out = self.raw_gate(GateKind::HalfAdd, vec![x, y]);
                (Sig::Wire(out[0]), Sig::Wire(out[1]))
            }
        }
    }

    pub fn xor(&mut self, a: Sig, b: Sig) -> Sig {
        self.half_add(a, b).0
    }

    /// `(sum, carry)` of three bits.
    pub fn full_add(&mut self, a: Sig, b: Sig, c: Sig) -> (Sig, Sig) {
        match (a, b, c) {
            (Sig::Wire(x), Sig::Wire(y), Sig::Wire(z)) => {
                let out = self.raw_gate(GateKind::FullAdd, vec![x, y, z]);
                (Sig::Wire(out[0]), Sig::Wire(out[1]))
            }
            _ => {
                let (s1, c1) = self.half_add(a, b);
                let (s, c2) = self.half_add(s1, c);
                let carry = self.or(&[c1, c2]);
                (s, carry)
            }
        }
    }

    pub fn finish(self) -> Netlist {
        Netlist { inputs: self.inputs, gates: self.gates, outputs: self.outputs, wire_count: self.next_wire }
    }
}

fn wires_of(ins: &[Sig]) -> Vec<WireId> {
    ins.iter()
        .filter_map(|s| match s {
            Sig::Wire(w) => Some(*w),
            Sig::Const(_) => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaninLimit {
    Unbounded,
    Bounded(usize),
}

impl FaninLimit {
    pub fn bounded(b: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidFanin(b));
        }
        Ok(FaninLimit::Bounded(b))
    }
}

impl fmt::Display for FaninLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaninLimit::Unbounded => f.write_str("unbounded"),
            FaninLimit::Bounded(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for FaninLimit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("unbounded") {
            return Ok(FaninLimit::Unbounded);
        }
        let b: usize = s.parse().map_err(|_| format!("expected `unbounded` or an integer >= 2, got `{s}`"))?;
        FaninLimit::bounded(b).map_err(|e| e.to_string())
    }
}

impl Serialize for FaninLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FaninLimit::Unbounded => s.serialize_str("unbounded"),
            FaninLimit::Bounded(b) => s.serialize_u64(*b as u64),
        }
    }
}

impl<'de> Deserialize<'de> for FaninLimit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(b) => FaninLimit::bounded(b).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub fanin_limit: FaninLimit,
    /// Gate levels on the critical path after legalization.
    pub depth: usize,
    pub gate_count: usize,
    pub threshold_gates: usize,
    /// Widest threshold gate; these keep unit delay at any fan-in.
    pub max_threshold_fanin: usize,
    /// Gates left wider than the limit (threshold gates and full adders).
    pub exempt_gates: usize,
}

/// Rewrites every AND/OR/NOR wider than `b` as a balanced tree of gates with
/// at most `b` inputs. NOR becomes an OR tree under a NOR root.
pub fn legalize(netlist: &Netlist, b: usize) -> Netlist {
    assert!(b >= 2, "fan-in limit below 2");
    let mut out = NetlistBuilder::new();
    let mut map = vec![0; netlist.wire_count];
    for (k, name) in netlist.inputs.iter().enumerate() {
        map[k] = match out.input(name.clone()) {
            Sig::Wire(w) => w,
            Sig::Const(_) => unreachable!(),
        };
    }
    for g in &netlist.gates {
        let ins: Vec<WireId> = g.inputs.iter().map(|&w| map[w]).collect();
        let new_outs = match g.kind {
            GateKind::And | GateKind::Or | GateKind::Nor if ins.len() > b => {
                let inner = if g.kind == GateKind::And { GateKind::And } else { GateKind::Or };
                let mut level = ins;
                while level.len() > b {
                    level = level
                        .chunks(b)
                        .map(|c| if c.len() == 1 { c[0] } else { out.raw_gate(inner, c.to_vec())[0] })
                        .collect();
                }
                out.raw_gate(g.kind, level)
            }
            kind => out.raw_gate(kind, ins),
        };
        for (&old, &new) in g.outputs.iter().zip(&new_outs) {
            map[old] = new;
        }
    }
    for (name, s) in &netlist.outputs {
        let s = match *s {
            Sig::Wire(w) => Sig::Wire(map[w]),
            c => c,
        };
        out.output(name.clone(), s);
    }
    out.finish()
}

fn levels(netlist: &Netlist) -> Vec<usize> {
    let mut level = vec![0usize; netlist.wire_count];
    for g in &netlist.gates {
        let l = 1 + g.inputs.iter().map(|&w| level[w]).max().unwrap_or(0);
        for &w in &g.outputs {
            level[w] = l;
        }
    }
    level
}

/// Critical-path depth in gate levels under the given fan-in model.
pub fn depth(netlist: &Netlist, fanin_limit: FaninLimit) -> DepthReport {
    let legal;
    let (measured, limit) = match fanin_limit {
        FaninLimit::Unbounded => (netlist, usize::MAX),
        FaninLimit::Bounded(b) => {
            legal = legalize(netlist, b);
            (&legal, b)
        }
    };
    let level = levels(measured);
    let depth = measured
        .outputs
        .iter()
        .filter_map(|(_, s)| match s {
            Sig::Wire(w) => Some(level[*w]),
            Sig::Const(_) => None,
        })
        .max()
        .unwrap_or(0);
    let thresholds = measured.gates.iter().filter(|g| matches!(g.kind, GateKind::Threshold(_)));
    DepthReport {
        fanin_limit,
        depth,
        gate_count: measured.gates.len(),
        threshold_gates: thresholds.clone().count(),
        max_threshold_fanin: thresholds.map(|g| g.inputs.len()).max().unwrap_or(0),
        exempt_gates: measured.gates.iter().filter(|g| g.inputs.len() > limit).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_inputs(width: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << width).map(move |v| (0..width).map(|k| v >> k & 1 == 1).collect())
    }

    #[test]
    fn identity_wire_has_depth_zero() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x");
        b.output("y", x);
        let n = b.finish();
        assert_eq!(depth(&n, FaninLimit::Unbounded).depth, 0);
        assert_eq!(depth(&n, FaninLimit::Bounded(2)).depth, 0);
        assert_eq!(n.evaluate(&[true]).unwrap(), vec![true]);
    }

    #[test]
    fn gate_semantics() {
        let mut b = NetlistBuilder::new();
        let ins: Vec<Sig> = (0..3).map(|k| b.input(format!("x{k}"))).collect();
        let and = b.and(&ins);
        let or = b.or(&ins);
        let nor = b.nor(&ins);
        let th = b.threshold(2, &ins);
        let (s, c) = b.full_add(ins[0], ins[1], ins[2]);
        for (name, sig) in [("and", and), ("or", or), ("nor", nor), ("th2", th), ("s", s), ("c", c)] {
            b.output(name, sig);
        }
        let n = b.finish();
        for v in all_inputs(3) {
            let ones = v.iter().filter(|&&x| x).count();
            let e = n.evaluate_named(&v).unwrap();
            assert_eq!(e.get("and"), Some(ones == 3));
            assert_eq!(e.get("or"), Some(ones > 0));
            assert_eq!(e.get("nor"), Some(ones == 0));
            assert_eq!(e.get("th2"), Some(ones >= 2));
            assert_eq!(e.get("s"), Some(ones % 2 == 1));
            assert_eq!(e.get("c"), Some(ones >= 2));
        }
    }

    #[test]
    fn constant_folding() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x");
        assert_eq!(b.and(&[x, ZERO]), ZERO);
        assert_eq!(b.and(&[x, ONE]), x);
        assert_eq!(b.or(&[x, ONE]), ONE);
        assert_eq!(b.nor(&[ZERO]), ONE);
        assert_eq!(b.threshold(0, &[x]), ONE);
        assert_eq!(b.threshold(2, &[x]), ZERO);
        assert_eq!(b.half_add(x, ZERO), (x, ZERO));
    }

    #[test]
    fn legalized_trees_are_equivalent_and_balanced() {
        for width in [2, 3, 5, 8, 9] {
            let mut b = NetlistBuilder::new();
            let ins: Vec<Sig> = (0..width).map(|k| b.input(format!("x{k}"))).collect();
            let a = b.and(&ins);
            let o = b.or(&ins);
            let r = b.nor(&ins);
            b.output("and", a);
            b.output("or", o);
            b.output("nor", r);
            let n = b.finish();
            for fanin in [2, 3] {
                let legal = legalize(&n, fanin);
                assert!(legal.gates.iter().all(|g| g.inputs.len() <= fanin));
                for v in all_inputs(width) {
                    assert_eq!(n.evaluate(&v).unwrap(), legal.evaluate(&v).unwrap());
                }
                let expected = (width as f64).log(fanin as f64).ceil() as usize;
                assert_eq!(depth(&n, FaninLimit::Bounded(fanin)).depth, expected, "width {width} fanin {fanin}");
            }
            assert_eq!(depth(&n, FaninLimit::Unbounded).depth, 1);
        }
    }

    #[test]
    fn threshold_gates_are_exempt() {
        let mut b = NetlistBuilder::new();
        let ins: Vec<Sig> = (0..6).map(|k| b.input(format!("x{k}"))).collect();
        let t = b.threshold(3, &ins);
        b.output("t", t);
        let n = b.finish();
        let r = depth(&n, FaninLimit::Bounded(2));
        assert_eq!(r.depth, 1);
        assert_eq!(r.exempt_gates, 1);
        assert_eq!(r.max_threshold_fanin, 6);
    }

    #[test]
    fn text_format() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x");
        let y = b.input("y");
        let (s, c) = b.half_add(x, y);
        let t = b.threshold(1, &[s, c]);
        b.output("t", t);
        b.output("zero", ZERO);
        let text = b.finish().to_text();
        assert_eq!(
            text,
            "input i0 x\ninput i1 y\ng0 HALF_ADD <- i0,i1\ng1 THRESHOLD[1] <- g0.s,g0.c\noutput t <- g1\noutput zero <- 0\n"
        );
    }

    #[test]
    fn fanin_parsing_and_json() {
        assert_eq!("unbounded".parse::<FaninLimit>(), Ok(FaninLimit::Unbounded));
        assert_eq!("4".parse::<FaninLimit>(), Ok(FaninLimit::Bounded(4)));
        assert!("1".parse::<FaninLimit>().is_err());
        assert!("wide".parse::<FaninLimit>().is_err());
        assert_eq!(serde_json::to_string(&FaninLimit::Unbounded).unwrap(), "\"unbounded\"");
        assert_eq!(serde_json::to_string(&FaninLimit::Bounded(2)).unwrap(), "2");
        assert_eq!(serde_json::from_str::<FaninLimit>("3").unwrap(), FaninLimit::Bounded(3));
    }

    #[test]
    fn input_width_is_checked() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x");
        b.output("x", x);
        assert_eq!(b.finish().evaluate(&[]), Err(Error::InputWidth { expected: 1, got: 0 }));
    }
}
