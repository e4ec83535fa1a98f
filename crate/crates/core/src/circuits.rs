//! Reversible circuit IR over Toffoli, CNOT, NOT and Fredkin gates.
//!
//! Every gate is an involution, so a circuit is a bijection on
//! `{0,1}^width` and its reverse is the same gate list read backwards.
//! Three simulators share the gate semantics: [`BitString`] states for the
//! public API, packed bitsets for single states, and 64-lane bit-sliced words
//! for exhaustive sweeps.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::compress::{estimate_complexity, Codec};
use crate::error::{Error, Result};

/// Default ceiling, in bits, for exhaustive `2^n` sweeps.
pub const DEFAULT_MAX_WIDTH: usize = 20;

/// Environment variable that overrides [`DEFAULT_MAX_WIDTH`].
pub const MAX_WIDTH_ENV: &str = "LANDAUER_MAX_WIDTH";

/// Current exhaustive-sweep ceiling.
pub fn max_exhaustive_width() -> usize {
    std::env::var(MAX_WIDTH_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WIDTH)
}

fn check_domain(width: usize, limit: usize) -> Result<()> {
    // Sweeps index inputs with u64.
    if width > limit || width >= 63 {
        return Err(Error::DomainTooLarge { width, limit });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineRole {
    Input,
    Helper,
    AncillaZero,
    ConstOne,
    OutputAlias,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    /// `target ^= controls[0] & controls[1]`
    Toffoli { controls: [usize; 2], target: usize },
    /// `target ^= controls[0]`
    Cnot { controls: [usize; 1], target: usize },
    Not { target: usize },
    /// Swap `targets` when `control` is set.
    Fredkin { control: usize, targets: [usize; 2] },
}

impl Gate {
    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Gate::Toffoli { controls: [c0, c1], target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { controls: [control], target }
    }

    pub fn not(target: usize) -> Self {
        Gate::Not { target }
    }

    pub fn fredkin(control: usize, a: usize, b: usize) -> Self {
        Gate::Fredkin { control, targets: [a, b] }
    }

    pub fn lines(&self) -> Vec<usize> {
        match *self {
            Gate::Toffoli { controls: [a, b], target } => vec![a, b, target],
            Gate::Cnot { controls: [a], target } => vec![a, target],
            Gate::Not { target } => vec![target],
            Gate::Fredkin { control, targets: [a, b] } => vec![control, a, b],
        }
    }

    /// Lines the gate may change.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::Toffoli { target, .. } | Gate::Cnot { target, .. } | Gate::Not { target } => {
                vec![target]
            }
            Gate::Fredkin { targets: [a, b], .. } => vec![a, b],
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let lines = self.lines();
        for (i, &l) in lines.iter().enumerate() {
            if l >= width {
                return Err(Error::InvalidGate(format!("{self:?}: line {l} outside width {width}")));
            }
            if lines[..i].contains(&l) {
                return Err(Error::InvalidGate(format!("{self:?}: line {l} used twice")));
            }
        }
        Ok(())
    }

    /// The same gate with every line index passed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Toffoli { controls: [a, b], target } => Gate::toffoli(map(a), map(b), map(target)),
            Gate::Cnot { controls: [a], target } => Gate::cnot(map(a), map(target)),
            Gate::Not { target } => Gate::not(map(target)),
            Gate::Fredkin { control, targets: [a, b] } => Gate::fredkin(map(control), map(a), map(b)),
        }
    }

    pub fn apply_bits(&self, s: &mut [bool]) {
        match *self {
            Gate::Toffoli { controls: [a, b], target } => s[target] ^= s[a] & s[b],
            Gate::Cnot { controls: [a], target } => s[target] ^= s[a],
            Gate::Not { target } => s[target] = !s[target],
            Gate::Fredkin { control, targets: [a, b] } => {
                if s[control] {
                    s.swap(a, b);
                }
            }
        }
    }

    /// Applies the gate to a packed state where line `i` is bit `i % 64` of
    /// word `i / 64`.
    #[inline]
    pub fn apply_packed(&self, w: &mut [u64]) {
        #[inline]
        fn get(w: &[u64], i: usize) -> u64 {
            (w[i >> 6] >> (i & 63)) & 1
        }
        #[inline]
        fn flip(w: &mut [u64], i: usize, bit: u64) {
            w[i >> 6] ^= bit << (i & 63);
        }
        match *self {
            Gate::Toffoli { controls: [a, b], target } => {
                let v = get(w, a) & get(w, b);
                flip(w, target, v);
            }
            Gate::Cnot { controls: [a], target } => {
                let v = get(w, a);
                flip(w, target, v);
            }
            Gate::Not { target } => flip(w, target, 1),
            Gate::Fredkin { control, targets: [a, b] } => {
                let m = get(w, control) & (get(w, a) ^ get(w, b));
                flip(w, a, m);
                flip(w, b, m);
            }
        }
    }

    /// Applies the gate to 64 independent states at once; `lanes[i]` holds
    /// line `i` of every lane.
    #[inline]
    pub fn apply_lanes(&self, lanes: &mut [u64]) {
        match *self {
            Gate::Toffoli { controls: [a, b], target } => lanes[target] ^= lanes[a] & lanes[b],
            Gate::Cnot { controls: [a], target } => lanes[target] ^= lanes[a],
            Gate::Not { target } => lanes[target] = !lanes[target],
            Gate::Fredkin { control, targets: [a, b] } => {
                let m = lanes[control] & (lanes[a] ^ lanes[b]);
                lanes[a] ^= m;
                lanes[b] ^= m;
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    version: u32,
    width: usize,
    line_roles: Vec<LineRole>,
    gates: Vec<Gate>,
}

/// A fixed-width reversible circuit. Gates apply strictly in list order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitFile", into = "CircuitFile")]
pub struct ReversibleCircuit {
    width: usize,
    line_roles: Vec<LineRole>,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitFile> for ReversibleCircuit {
    type Error = Error;

    fn try_from(f: CircuitFile) -> Result<Self> {
        if f.version != 1 {
            return Err(Error::InvalidParameter(format!("unsupported circuit version {}", f.version)));
        }
        ReversibleCircuit::with_roles(f.width, f.line_roles, f.gates)
    }
}

impl From<ReversibleCircuit> for CircuitFile {
    fn from(c: ReversibleCircuit) -> Self {
        CircuitFile { version: 1, width: c.width, line_roles: c.line_roles, gates: c.gates }
    }
}

impl ReversibleCircuit {
    /// A circuit whose lines are all inputs.
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::with_roles(width, vec![LineRole::Input; width], gates)
    }

    pub fn with_roles(width: usize, line_roles: Vec<LineRole>, gates: Vec<Gate>) -> Result<Self> {
        if line_roles.len() != width {
            return Err(Error::WidthMismatch { expected: width, got: line_roles.len() });
        }
        for g in &gates {
            g.validate(width)?;
        }
        Ok(Self { width, line_roles, gates })
    }

    pub fn identity(width: usize) -> Self {
        Self { width, line_roles: vec![LineRole::Input; width], gates: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn line_roles(&self) -> &[LineRole] {
        &self.line_roles
    }

    pub fn lines_with_role(&self, role: LineRole) -> Vec<usize> {
        (0..self.width).filter(|&i| self.line_roles[i] == role).collect()
    }

    pub fn with_line_roles(mut self, roles: Vec<LineRole>) -> Result<Self> {
        if roles.len() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, got: roles.len() });
        }
        self.line_roles = roles;
        Ok(self)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("circuit JSON: {e}")))
    }

    /// Checks the input against `CONST_ONE` / `ANCILLA_ZERO` roles, then runs
    /// every gate.
    pub fn simulate(&self, input: &BitString) -> Result<BitString> {
        self.check_input(input)?;
        Ok(self.apply(input))
    }

    pub fn check_input(&self, input: &BitString) -> Result<()> {
        if input.len() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, got: input.len() });
        }
        for (line, role) in self.line_roles.iter().enumerate() {
            match role {
                LineRole::ConstOne if !input.bit(line) => {
                    return Err(Error::BadConstantLine { line, role: "const_one" })
                }
                LineRole::AncillaZero if input.bit(line) => {
                    return Err(Error::BadConstantLine { line, role: "ancilla_zero" })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The raw permutation, without role checks. Panics on width mismatch.
    pub fn apply(&self, input: &BitString) -> BitString {
        assert_eq!(input.len(), self.width, "state width");
        let mut bits = input.clone().into_bits();
        for g in &self.gates {
            g.apply_bits(&mut bits);
        }
        BitString::from_bits(bits)
    }

    pub fn apply_packed(&self, words: &mut [u64]) {
        for g in &self.gates {
            g.apply_packed(words);
        }
    }

    pub fn apply_lanes(&self, lanes: &mut [u64]) {
        debug_assert_eq!(lanes.len(), self.width);
        for g in &self.gates {
            g.apply_lanes(lanes);
        }
    }

    /// The map on `width <= 64` lines with line `i` at bit `i` of the word.
    pub fn apply_word(&self, state: u64) -> u64 {
        assert!(self.width <= 64);
        let mut w = [state];
        self.apply_packed(&mut w);
        w[0]
    }

    /// States before and after every gate.
    pub fn trajectory(&self, input: &BitString) -> Result<StateTrajectory> {
        self.check_input(input)?;
        let mut bits = input.clone().into_bits();
        let mut states = vec![input.clone()];
        for g in &self.gates {
            g.apply_bits(&mut bits);
            states.push(BitString::from(bits.as_slice()));
        }
        Ok(StateTrajectory { states })
    }

    /// Gates in reverse order; each gate kind is self-inverse.
    pub fn reverse(&self) -> ReversibleCircuit {
        ReversibleCircuit {
            width: self.width,
            line_roles: self.line_roles.clone(),
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Places this circuit inside a wider frame; line `i` becomes `map[i]`.
    pub fn embed(&self, width: usize, map: &[usize]) -> Result<ReversibleCircuit> {
        if map.len() != self.width {
            return Err(Error::BadWiring(format!(
                "embedding map covers {} lines, circuit has {}",
                map.len(),
                self.width
            )));
        }
        let mut seen = vec![false; width];
        for &m in map {
            if m >= width || seen[m] {
                return Err(Error::BadWiring(format!("embedding target {m} invalid or repeated")));
            }
            seen[m] = true;
        }
        let gates = self.gates.iter().map(|g| g.relabel(|l| map[l])).collect();
        let mut roles = vec![LineRole::AncillaZero; width];
        for (i, &m) in map.iter().enumerate() {
            roles[m] = self.line_roles[i];
        }
        ReversibleCircuit::with_roles(width, roles, gates)
    }

    /// Rewrites NOT and CNOT as Toffoli gates with `CONST_ONE` controls and
    /// Fredkin as CNOT-Toffoli-CNOT. Appends `CONST_ONE` lines when fewer than
    /// two exist.
    pub fn to_toffoli_only(&self) -> ReversibleCircuit {
        let mut roles = self.line_roles.clone();
        let mut ones = self.lines_with_role(LineRole::ConstOne);
        let needs_ones = self.gates.iter().any(|g| !matches!(g, Gate::Toffoli { .. }));
        while needs_ones && ones.len() < 2 {
            ones.push(roles.len());
            roles.push(LineRole::ConstOne);
        }
        let width = roles.len();
        let mut gates = Vec::with_capacity(self.gates.len());
        let cnot = |c: usize, t: usize| {
            let one = if ones[0] == c { ones[1] } else { ones[0] };
            Gate::toffoli(c, one, t)
        };
        for g in &self.gates {
            match *g {
                Gate::Toffoli { .. } => gates.push(*g),
                Gate::Cnot { controls: [c], target } => gates.push(cnot(c, target)),
                Gate::Not { target } => gates.push(Gate::toffoli(ones[0], ones[1], target)),
                Gate::Fredkin { control, targets: [a, b] } => {
                    gates.push(cnot(b, a));
                    gates.push(Gate::toffoli(control, a, b));
                    gates.push(cnot(b, a));
                }
            }
        }
        ReversibleCircuit { width, line_roles: roles, gates }
    }

    pub fn is_toffoli_only(&self) -> bool {
        self.gates.iter().all(|g| matches!(g, Gate::Toffoli { .. }))
    }

    /// Exhaustive injectivity of the map restricted to inputs that agree with
    /// `base` outside `domain`. Bit-sliced, 64 inputs per pass.
    pub fn is_injective_on(&self, domain: &[usize], base: &BitString) -> Result<bool> {
        check_domain(domain.len(), max_exhaustive_width())?;
        if base.len() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, got: base.len() });
        }
        let total = 1u64 << domain.len();
        let mut seen: HashMap<u64, u64> = HashMap::with_capacity(total as usize);
        let mut lanes = vec![0u64; self.width];
        let mut start = 0u64;
        while start < total {
            let count = (total - start).min(64);
            self.load_lanes(&mut lanes, domain, base, start);
            self.apply_lanes(&mut lanes);
            for lane in 0..count {
                let out = read_lane(&lanes, lane);
                let mut h = DefaultHasher::new();
                out.hash(&mut h);
                let digest = h.finish();
                let x = start + lane;
                if let Some(&prev) = seen.get(&digest) {
                    let prev_out = self.apply_assignment(domain, base, prev);
                    if prev_out == out {
                        return Ok(false);
                    }
                    // Digest collision between distinct outputs: fall back to
                    // a full comparison against every earlier input.
                    return Ok(self.is_injective_slow(domain, base));
                }
                seen.insert(digest, x);
            }
            start += count;
        }
        Ok(true)
    }

    fn is_injective_slow(&self, domain: &[usize], base: &BitString) -> bool {
        let mut seen = std::collections::HashSet::new();
        (0..1u64 << domain.len()).all(|x| seen.insert(self.apply_assignment(domain, base, x)))
    }

    fn apply_assignment(&self, domain: &[usize], base: &BitString, x: u64) -> Vec<u64> {
        let mut words = pack(base);
        for (k, &line) in domain.iter().enumerate() {
            let bit = (x >> k) & 1;
            let w = &mut words[line >> 6];
            *w = (*w & !(1 << (line & 63))) | (bit << (line & 63));
        }
        self.apply_packed(&mut words);
        words
    }

    /// Loads lanes for inputs `start..start+64`: domain line `k` carries bit
    /// `k` of the input index, every other line copies `base`.
    pub(crate) fn load_lanes(&self, lanes: &mut [u64], domain: &[usize], base: &BitString, start: u64) {
        for (line, lane) in lanes.iter_mut().enumerate() {
            *lane = if base.bit(line) { !0 } else { 0 };
        }
        for (k, &line) in domain.iter().enumerate() {
            let mut w = 0u64;
            for lane in 0..64u64 {
                w |= (((start + lane) >> k) & 1) << lane;
            }
            lanes[line] = w;
        }
    }
}

pub(crate) fn pack(s: &BitString) -> Vec<u64> {
    let mut words = vec![0u64; s.len().div_ceil(64).max(1)];
    for (i, b) in s.iter().enumerate() {
        if b {
            words[i >> 6] |= 1 << (i & 63);
        }
    }
    words
}

pub(crate) fn read_lane(lanes: &[u64], lane: u64) -> Vec<u64> {
    let mut words = vec![0u64; lanes.len().div_ceil(64).max(1)];
    for (line, &w) in lanes.iter().enumerate() {
        words[line >> 6] |= ((w >> lane) & 1) << (line & 63);
    }
    words
}

pub(crate) fn lane_bits(lanes: &[u64], lines: &[usize], lane: u64) -> BitString {
    lines.iter().map(|&l| (lanes[l] >> lane) & 1 == 1).collect()
}

/// `simulate(second, permute(wiring, simulate(first, s)))` as one circuit:
/// output line `i` of `first` feeds input line `wiring[i]` of `second`. The
/// permutation is realized with CNOT swaps between the two gate lists.
pub fn compose(
    first: &ReversibleCircuit,
    second: &ReversibleCircuit,
    wiring: &[usize],
) -> Result<ReversibleCircuit> {
    let n = first.width;
    if second.width != n {
        return Err(Error::BadWiring(format!("widths differ: {} vs {}", n, second.width)));
    }
    if wiring.len() != n {
        return Err(Error::BadWiring(format!("wiring covers {} of {} lines", wiring.len(), n)));
    }
    // target[l] = first-circuit line whose value must end on line l
    let mut target = vec![usize::MAX; n];
    for (i, &w) in wiring.iter().enumerate() {
        if w >= n || target[w] != usize::MAX {
            return Err(Error::BadWiring(format!("wiring is not a bijection at line {i}")));
        }
        target[w] = i;
    }
    let mut gates = first.gates.clone();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    for l in 0..n {
        if cur[l] != target[l] {
            let m = pos[target[l]];
            gates.push(Gate::cnot(l, m));
            gates.push(Gate::cnot(m, l));
            gates.push(Gate::cnot(l, m));
            cur.swap(l, m);
            pos[cur[l]] = l;
            pos[cur[m]] = m;
        }
    }
    gates.extend_from_slice(&second.gates);
    ReversibleCircuit::with_roles(n, first.line_roles.clone(), gates)
}

/// `permute(wiring, s)[wiring[i]] = s[i]`.
pub fn permute(wiring: &[usize], s: &BitString) -> BitString {
    let mut out = BitString::zeros(s.len());
    for (i, &w) in wiring.iter().enumerate() {
        out.set(w, s.bit(i));
    }
    out
}

/// Exhaustive injectivity of a black-box map on `n`-bit inputs, input value
/// `x` presented most significant bit first. Outputs are compared exactly.
pub fn check_injective_bruteforce<F>(n: usize, f: F) -> Result<bool>
where
    F: Fn(&BitString) -> BitString,
{
    check_domain(n, max_exhaustive_width())?;
    let mut seen: HashMap<u64, Vec<u64>> = HashMap::new();
    for x in 0..1u64 << n {
        let y = f(&BitString::from_u64(x, n));
        let mut h = DefaultHasher::new();
        y.hash(&mut h);
        let bucket = seen.entry(h.finish()).or_default();
        for &prev in bucket.iter() {
            if f(&BitString::from_u64(prev, n)) == y {
                return Ok(false);
            }
        }
        bucket.push(x);
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConservativeMode {
    /// True when every gate is Fredkin.
    Structural,
    /// Checks Hamming weight on all `2^width` states.
    Exhaustive,
}

pub fn check_conservative(c: &ReversibleCircuit, mode: ConservativeMode) -> Result<bool> {
    match mode {
        ConservativeMode::Structural => {
            Ok(c.gates.iter().all(|g| matches!(g, Gate::Fredkin { .. })))
        }
        ConservativeMode::Exhaustive => {
            check_domain(c.width, max_exhaustive_width())?;
            Ok((0..1u64 << c.width).all(|s| c.apply_word(s).count_ones() == s.count_ones()))
        }
    }
}

/// Structural check first, exhaustive fallback for small widths.
pub fn is_conservative(c: &ReversibleCircuit) -> Result<bool> {
    if check_conservative(c, ConservativeMode::Structural)? {
        return Ok(true);
    }
    check_conservative(c, ConservativeMode::Exhaustive)
}

/// Uniformly random gates from {NOT, CNOT, Toffoli, Fredkin} on distinct lines.
pub fn random_circuit<R: Rng>(width: usize, gate_count: usize, rng: &mut R) -> ReversibleCircuit {
    assert!(width >= 3, "random circuits need at least three lines");
    let gates = (0..gate_count)
        .map(|_| {
            let lines = rand::seq::index::sample(rng, width, 3).into_vec();
            match rng.gen_range(0..4) {
                0 => Gate::not(lines[0]),
                1 => Gate::cnot(lines[0], lines[1]),
                2 => Gate::toffoli(lines[0], lines[1], lines[2]),
                _ => Gate::fredkin(lines[0], lines[1], lines[2]),
            }
        })
        .collect();
    ReversibleCircuit { width, line_roles: vec![LineRole::Input; width], gates }
}

/// Random Toffoli-family gates (NOT, CNOT, Toffoli).
pub fn random_toffoli_circuit<R: Rng>(width: usize, gate_count: usize, rng: &mut R) -> ReversibleCircuit {
    assert!(width >= 3, "random circuits need at least three lines");
    let gates = (0..gate_count)
        .map(|_| {
            let lines = rand::seq::index::sample(rng, width, 3).into_vec();
            match rng.gen_range(0..3) {
                0 => Gate::not(lines[0]),
                1 => Gate::cnot(lines[0], lines[1]),
                _ => Gate::toffoli(lines[0], lines[1], lines[2]),
            }
        })
        .collect();
    ReversibleCircuit { width, line_roles: vec![LineRole::Input; width], gates }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateTrajectory {
    pub states: Vec<BitString>,
}

/// Slack, in bits, standing in for the unspecified additive constant of the
/// drift bound. Arbitrary; configuration, not a claim.
pub const DEFAULT_DRIFT_SLACK: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DriftEntry {
    pub t: usize,
    /// Estimated complexity of the state at time `t` (upper bound on K).
    pub state_bits: usize,
    /// Estimated complexity of the binary encoding of `t`.
    pub time_bits: usize,
    /// `K̂(state_0) - K̂(state_t)`.
    pub drift: i64,
    /// `drift - time_bits > slack`. Informational only: every K̂ is an upper
    /// estimate, so a flag does not show the true inequality failing.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DriftReport {
    pub slack: i64,
    pub estimated: bool,
    pub entries: Vec<DriftEntry>,
}

impl DriftReport {
    pub fn any_flagged(&self) -> bool {
        self.entries.iter().any(|e| e.flagged)
    }
}

pub fn complexity_drift_report(
    trajectory: &StateTrajectory,
    family: &[&dyn Codec],
    slack: i64,
) -> Result<DriftReport> {
    let first = trajectory
        .states
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty trajectory".into()))?;
    let empty = BitString::new();
    let k0 = estimate_complexity(first, &empty, family)?.bits as i64;
    let entries = trajectory
        .states
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let state_bits = estimate_complexity(s, &empty, family)?.bits;
            let time_bits = estimate_complexity(&BitString::binary(t as u64), &empty, family)?.bits;
            let drift = k0 - state_bits as i64;
            Ok(DriftEntry {
                t,
                state_bits,
                time_bits,
                drift,
                flagged: drift - time_bits as i64 > slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DriftReport { slack, estimated: true, entries })
}
