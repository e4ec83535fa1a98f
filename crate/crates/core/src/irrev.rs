//! Irreversible boolean netlists over AND, OR, NOT and XOR.
//!
//! This is the compiler's source language. Gates are topologically ordered:
//! every argument refers to a circuit input or an earlier gate.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    And,
    Or,
    Not,
    Xor,
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::Not => 1,
            _ => 2,
        }
    }
}

/// A resolved signal reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ref {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrGate {
    pub id: String,
    pub op: Op,
    pub args: Vec<Ref>,
}

#[derive(Serialize, Deserialize)]
struct NetlistFile {
    inputs: Vec<String>,
    gates: Vec<GateFile>,
    outputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GateFile {
    id: String,
    op: Op,
    args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NetlistFile", into = "NetlistFile")]
pub struct IrreversibleCircuit {
    inputs: Vec<String>,
    gates: Vec<IrGate>,
    outputs: Vec<Ref>,
}

impl TryFrom<NetlistFile> for IrreversibleCircuit {
    type Error = Error;

    fn try_from(f: NetlistFile) -> Result<Self> {
        let mut names: HashMap<String, Ref> = HashMap::new();
        for (i, name) in f.inputs.iter().enumerate() {
            if names.insert(name.clone(), Ref::Input(i)).is_some() {
                return Err(Error::InvalidNetlist(format!("duplicate name `{name}`")));
            }
        }
        let resolve = |names: &HashMap<String, Ref>, r: &str| {
            names
                .get(r)
                .copied()
                .ok_or_else(|| Error::InvalidNetlist(format!("`{r}` is not an input or earlier gate")))
        };
        let mut gates = Vec::with_capacity(f.gates.len());
        for (i, g) in f.gates.iter().enumerate() {
            let args = g.args.iter().map(|a| resolve(&names, a)).collect::<Result<Vec<_>>>()?;
            gates.push(IrGate { id: g.id.clone(), op: g.op, args });
            if names.insert(g.id.clone(), Ref::Gate(i)).is_some() {
                return Err(Error::InvalidNetlist(format!("duplicate name `{}`", g.id)));
            }
        }
        let outputs = f.outputs.iter().map(|o| resolve(&names, o)).collect::<Result<Vec<_>>>()?;
        IrreversibleCircuit::new(f.inputs, gates, outputs)
    }
}

impl From<IrreversibleCircuit> for NetlistFile {
    fn from(c: IrreversibleCircuit) -> Self {
        let name = |r: &Ref| match *r {
            Ref::Input(i) => c.inputs[i].clone(),
            Ref::Gate(g) => c.gates[g].id.clone(),
        };
        NetlistFile {
            inputs: c.inputs.clone(),
            gates: c
                .gates
                .iter()
                .map(|g| GateFile { id: g.id.clone(), op: g.op, args: g.args.iter().map(name).collect() })
                .collect(),
            outputs: c.outputs.iter().map(name).collect(),
        }
    }
}

impl IrreversibleCircuit {
    pub fn new(inputs: Vec<String>, gates: Vec<IrGate>, outputs: Vec<Ref>) -> Result<Self> {
        let c = Self { inputs, gates, outputs };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let check = |r: &Ref, before: usize| match *r {
            Ref::Input(i) if i < self.inputs.len() => Ok(()),
            Ref::Gate(g) if g < before => Ok(()),
            other => Err(Error::InvalidNetlist(format!("dangling or forward reference {other:?}"))),
        };
        for (i, g) in self.gates.iter().enumerate() {
            if g.args.len() != g.op.arity() {
                return Err(Error::InvalidNetlist(format!(
                    "gate `{}`: {:?} takes {} argument(s), got {}",
                    g.id,
                    g.op,
                    g.op.arity(),
                    g.args.len()
                )));
            }
            for a in &g.args {
                check(a, i)?;
            }
        }
        for o in &self.outputs {
            check(o, self.gates.len())?;
        }
        Ok(())
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn gates(&self) -> &[IrGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Ref] {
        &self.outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Longest input-to-output path, counted in gates.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.gates.len()];
        let of = |depth: &[usize], r: &Ref| match *r {
            Ref::Input(_) => 0,
            Ref::Gate(g) => depth[g],
        };
        for (i, g) in self.gates.iter().enumerate() {
            depth[i] = 1 + g.args.iter().map(|a| of(&depth, a)).max().unwrap_or(0);
        }
        self.outputs.iter().map(|o| of(&depth, o)).max().unwrap_or(0)
    }

    pub fn evaluate(&self, input: &BitString) -> Result<BitString> {
        if input.len() != self.inputs.len() {
            return Err(Error::WidthMismatch { expected: self.inputs.len(), got: input.len() });
        }
        let mut values = Vec::with_capacity(self.gates.len());
        let get = |values: &[bool], r: &Ref| match *r {
            Ref::Input(i) => input.bit(i),
            Ref::Gate(g) => values[g],
        };
        for g in &self.gates {
            let a = get(&values, &g.args[0]);
            let v = match g.op {
                Op::Not => !a,
                Op::And => a & get(&values, &g.args[1]),
                Op::Or => a | get(&values, &g.args[1]),
                Op::Xor => a ^ get(&values, &g.args[1]),
            };
            values.push(v);
        }
        Ok(self.outputs.iter().map(|o| get(&values, o)).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("netlist serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidNetlist(e.to_string()))
    }
}

/// Incremental netlist construction with generated gate ids.
#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    inputs: Vec<String>,
    gates: Vec<IrGate>,
}

impl NetlistBuilder {
    pub fn new(num_inputs: usize) -> Self {
        Self { inputs: (0..num_inputs).map(|i| format!("x{i}")).collect(), gates: Vec::new() }
    }

    pub fn input(&self, i: usize) -> Ref {
        assert!(i < self.inputs.len());
        Ref::Input(i)
    }

    pub fn gate(&mut self, op: Op, args: &[Ref]) -> Ref {
        let id = format!("g{}", self.gates.len());
        self.gates.push(IrGate { id, op, args: args.to_vec() });
        Ref::Gate(self.gates.len() - 1)
    }

    pub fn and(&mut self, a: Ref, b: Ref) -> Ref {
        self.gate(Op::And, &[a, b])
    }

    pub fn or(&mut self, a: Ref, b: Ref) -> Ref {
        self.gate(Op::Or, &[a, b])
    }

    pub fn xor(&mut self, a: Ref, b: Ref) -> Ref {
        self.gate(Op::Xor, &[a, b])
    }

    pub fn not(&mut self, a: Ref) -> Ref {
        self.gate(Op::Not, &[a])
    }

    pub fn finish(self, outputs: Vec<Ref>) -> Result<IrreversibleCircuit> {
        IrreversibleCircuit::new(self.inputs, self.gates, outputs)
    }
}

/// Truth-table (ROM) synthesis of a partial function on `num_inputs` bits.
///
/// `entries` pairs an input value with its output value, both read most
/// significant bit first (input line 0 is the top bit). Unlisted inputs map to
/// zero. Minterms come from a shared prefix-decoder tree; since minterms are
/// disjoint, each output bit is the XOR of the minterms where it is set.
pub fn synthesize_rom(
    num_inputs: usize,
    num_outputs: usize,
    entries: &[(u64, u64)],
) -> Result<IrreversibleCircuit> {
    if num_inputs == 0 || num_inputs > 24 {
        return Err(Error::InvalidParameter(format!(
            "ROM synthesis needs between 1 and 24 inputs, got {num_inputs}"
        )));
    }
    if num_outputs > 64 {
        return Err(Error::InvalidParameter("ROM synthesis supports at most 64 outputs".into()));
    }
    let mut b = NetlistBuilder::new(num_inputs);
    let mut negated: HashMap<usize, Ref> = HashMap::new();
    let mut literal = |b: &mut NetlistBuilder, i: usize, bit: bool| {
        if bit {
            b.input(i)
        } else {
            *negated.entry(i).or_insert_with(|| {
                let x = b.input(i);
                b.not(x)
            })
        }
    };
    // (prefix length, prefix value) -> node
    let mut prefix: HashMap<(usize, u64), Ref> = HashMap::new();
    let mut per_output: Vec<Vec<Ref>> = vec![Vec::new(); num_outputs];
    let mut seen = std::collections::HashSet::new();
    for &(x, y) in entries {
        if x >> num_inputs != 0 || (num_outputs < 64 && y >> num_outputs != 0) {
            return Err(Error::InvalidParameter(format!("ROM entry ({x}, {y}) out of range")));
        }
        if !seen.insert(x) {
            return Err(Error::InvalidParameter(format!("duplicate ROM entry for input {x}")));
        }
        if y == 0 {
            continue;
        }
        let bit_at = |k: usize| (x >> (num_inputs - 1 - k)) & 1 == 1;
        let mut node = literal(&mut b, 0, bit_at(0));
        for k in 1..num_inputs {
            let key = (k + 1, x >> (num_inputs - 1 - k));
            node = match prefix.get(&key) {
                Some(&n) => n,
                None => {
                    let lit = literal(&mut b, k, bit_at(k));
                    let n = b.and(node, lit);
                    prefix.insert(key, n);
                    n
                }
            };
        }
        for (j, terms) in per_output.iter_mut().enumerate() {
            if (y >> (num_outputs - 1 - j)) & 1 == 1 {
                terms.push(node);
            }
        }
    }
    let mut zero = None;
    let mut outputs = Vec::with_capacity(num_outputs);
    for terms in per_output {
        let out = match terms.split_first() {
            None => *zero.get_or_insert_with(|| {
                let x = b.input(0);
                b.xor(x, x)
            }),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &t| b.xor(acc, t)),
        };
        outputs.push(out);
    }
    b.finish(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn single(op: Op) -> IrreversibleCircuit {
        let mut nb = NetlistBuilder::new(op.arity());
        let args: Vec<Ref> = (0..op.arity()).map(|i| nb.input(i)).collect();
        let g = nb.gate(op, &args);
        nb.finish(vec![g]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(single(Op::And).evaluate(&b("11")).unwrap(), b("1"));
        assert_eq!(single(Op::And).evaluate(&b("10")).unwrap(), b("0"));
        assert_eq!(single(Op::Xor).evaluate(&b("10")).unwrap(), b("1"));
        assert_eq!(single(Op::Or).evaluate(&b("00")).unwrap(), b("0"));
        assert_eq!(single(Op::Not).evaluate(&b("0")).unwrap(), b("1"));
        let nb = NetlistBuilder::new(4);
        let outs = (0..4).map(|i| nb.input(i)).collect();
        let wire = nb.finish(outs).unwrap();
        assert_eq!(wire.evaluate(&b("0110")).unwrap(), b("0110"));
        assert!(matches!(wire.evaluate(&b("01")), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn structure_counts() {
        // full adder: s = a^b^c, carry = (a&b) | (c&(a^b))
        let mut nb = NetlistBuilder::new(3);
        let (a, bb, c) = (nb.input(0), nb.input(1), nb.input(2));
        let ab = nb.xor(a, bb);
        let s = nb.xor(ab, c);
        let g1 = nb.and(a, bb);
        let g2 = nb.and(c, ab);
        let carry = nb.or(g1, g2);
        let adder = nb.finish(vec![s, carry]).unwrap();
        assert_eq!(adder.gate_count(), 5);
        assert_eq!(adder.depth(), 3);
        for x in 0..8u64 {
            let out = adder.evaluate(&BitString::from_u64(x, 3)).unwrap();
            let ones = x.count_ones();
            assert_eq!(out, BitString::from_bits(vec![ones % 2 == 1, ones >= 2]));
        }
    }

    #[test]
    fn rejects_malformed() {
        let forward = IrreversibleCircuit::new(
            vec!["a".into()],
            vec![IrGate { id: "g".into(), op: Op::Not, args: vec![Ref::Gate(0)] }],
            vec![],
        );
        assert!(forward.is_err());
        let arity = IrreversibleCircuit::new(
            vec!["a".into()],
            vec![IrGate { id: "g".into(), op: Op::And, args: vec![Ref::Input(0)] }],
            vec![],
        );
        assert!(arity.is_err());
        assert!(IrreversibleCircuit::new(vec![], vec![], vec![Ref::Input(0)]).is_err());
    }

    #[test]
    fn json_round_trip_and_names() {
        let text = r#"{"inputs":["a","b"],"gates":[{"id":"t","op":"and","args":["a","b"]},{"id":"u","op":"not","args":["t"]}],"outputs":["u","a"]}"#;
        let c = IrreversibleCircuit::from_json(text).unwrap();
        assert_eq!(c.to_json(), text);
        assert_eq!(c.evaluate(&b("11")).unwrap(), b("01"));
        let bad = text.replace(r#""args":["a","b"]"#, r#""args":["a","u"]"#);
        assert!(matches!(IrreversibleCircuit::from_json(&bad), Err(Error::InvalidNetlist(_))));
        let dup = text.replace(r#""id":"u""#, r#""id":"a""#);
        assert!(IrreversibleCircuit::from_json(&dup).is_err());
    }

    #[test]
    fn rom_matches_table() {
        let entries: Vec<(u64, u64)> = (0..32u64).filter(|x| x % 3 != 0).map(|x| (x, (x * 7) & 0x3f)).collect();
        let rom = synthesize_rom(5, 6, &entries).unwrap();
        let table: HashMap<u64, u64> = entries.iter().copied().collect();
        for x in 0..32u64 {
            let out = rom.evaluate(&BitString::from_u64(x, 5)).unwrap();
            assert_eq!(out.to_u64(), *table.get(&x).unwrap_or(&0));
        }
        assert!(synthesize_rom(0, 1, &[]).is_err());
        assert!(synthesize_rom(2, 1, &[(1, 1), (1, 0)]).is_err());
    }
}
