//! Bennett compilation of irreversible netlists, and the reversible
//! compressor-with-helper built from two compiled ROMs.

use std::collections::HashSet;

use serde::Serialize;

use crate::bitstring::{decode_self_delimiting, encode_self_delimiting, BitString};
use crate::circuits::{
    compose, lane_bits, max_exhaustive_width, read_lane, Gate, LineRole, ReversibleCircuit,
};
use crate::compress::Codec;
use crate::error::{Error, Result};
use crate::irrev::{synthesize_rom, IrreversibleCircuit, Op, Ref};

/// Largest block the ROM-based compressor accepts.
pub const MAX_FIG1_BLOCK: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompiledReversible {
    pub circuit: ReversibleCircuit,
    pub input_lines: Vec<usize>,
    /// Where the result appears. May overlap `input_lines` for in-place maps.
    pub output_lines: Vec<usize>,
    pub helper_lines: Vec<usize>,
    pub ancilla_lines: Vec<usize>,
    pub const_one_lines: Vec<usize>,
    /// Value the helper lines must carry; the circuit is specialized to it.
    pub helper_value: BitString,
    pub junk_restored: bool,
}

impl CompiledReversible {
    /// Full-width input: `data` on the input lines, the helper value on the
    /// helper lines, ones on `CONST_ONE` lines, zeros elsewhere.
    pub fn layout_input(&self, data: &BitString) -> Result<BitString> {
        if data.len() != self.input_lines.len() {
            return Err(Error::WidthMismatch { expected: self.input_lines.len(), got: data.len() });
        }
        let mut s = self.base_state();
        for (k, &line) in self.input_lines.iter().enumerate() {
            s.set(line, data.bit(k));
        }
        Ok(s)
    }

    fn base_state(&self) -> BitString {
        let mut s = BitString::zeros(self.circuit.width());
        for (k, &line) in self.helper_lines.iter().enumerate() {
            s.set(line, self.helper_value.bit(k));
        }
        for &line in &self.const_one_lines {
            s.set(line, true);
        }
        s
    }

    /// Runs the circuit on `data` and reads the output lines.
    pub fn run(&self, data: &BitString) -> Result<BitString> {
        let out = self.circuit.simulate(&self.layout_input(data)?)?;
        Ok(self.output_lines.iter().map(|&l| out.bit(l)).collect())
    }

    /// Lines whose role requires a fixed value at input.
    fn domain_lines(&self) -> Vec<usize> {
        self.input_lines
            .iter()
            .copied()
            .filter(|&l| self.circuit.line_roles()[l] == LineRole::Input)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BennettConfig {
    /// Junk lines allowed per source gate.
    pub ancilla_factor: usize,
    /// Optional absolute cap on junk lines.
    pub max_lines: Option<usize>,
}

impl Default for BennettConfig {
    fn default() -> Self {
        Self { ancilla_factor: 4, max_lines: None }
    }
}

pub fn bennett_compile(src: &IrreversibleCircuit) -> Result<CompiledReversible> {
    bennett_compile_with(src, BennettConfig::default())
}

/// Lines `[inputs][one junk line per gate][outputs]`. Each gate is computed
/// into its fresh junk line, outputs are CNOT-copied to the output lines, and
/// the forward stage is run backwards so every junk line returns to zero.
/// Output lines are XOR targets, so the circuit maps `(x, 0, y)` to
/// `(x, 0, y ^ f(x))`.
pub fn bennett_compile_with(src: &IrreversibleCircuit, config: BennettConfig) -> Result<CompiledReversible> {
    let n = src.num_inputs();
    let g = src.gate_count();
    let m = src.outputs().len();
    let budget = config
        .max_lines
        .unwrap_or(usize::MAX)
        .min(config.ancilla_factor.saturating_mul(g));
    if g > budget {
        return Err(Error::TooManyLines { needed: g, budget });
    }
    let line = |r: &Ref| match *r {
        Ref::Input(i) => i,
        Ref::Gate(k) => n + k,
    };
    let mut forward = Vec::new();
    for (k, gate) in src.gates().iter().enumerate() {
        let t = n + k;
        let a = line(&gate.args[0]);
        match gate.op {
            Op::Not => {
                forward.push(Gate::cnot(a, t));
                forward.push(Gate::not(t));
            }
            Op::And | Op::Or | Op::Xor => {
                let b = line(&gate.args[1]);
                match (gate.op, a == b) {
                    (Op::Xor, true) => {}
                    (_, true) => forward.push(Gate::cnot(a, t)),
                    (Op::And, false) => forward.push(Gate::toffoli(a, b, t)),
                    (Op::Xor, false) => {
                        forward.push(Gate::cnot(a, t));
                        forward.push(Gate::cnot(b, t));
                    }
                    (_, false) => {
                        forward.push(Gate::cnot(a, t));
                        forward.push(Gate::cnot(b, t));
                        forward.push(Gate::toffoli(a, b, t));
                    }
                }
            }
        }
    }
    let mut gates = forward.clone();
    for (j, out) in src.outputs().iter().enumerate() {
        gates.push(Gate::cnot(line(out), n + g + j));
    }
    gates.extend(forward.iter().rev().copied());
    let mut roles = vec![LineRole::Input; n];
    roles.extend(std::iter::repeat_n(LineRole::AncillaZero, g));
    roles.extend(std::iter::repeat_n(LineRole::OutputAlias, m));
    let circuit = ReversibleCircuit::with_roles(n + g + m, roles, gates)?;
    Ok(CompiledReversible {
        circuit,
        input_lines: (0..n).collect(),
        output_lines: (n + g..n + g + m).collect(),
        helper_lines: vec![],
        ancilla_lines: (n..n + g).collect(),
        const_one_lines: vec![],
        helper_value: BitString::new(),
        junk_restored: true,
    })
}

/// Rewrites the compiled circuit with Toffoli gates only, adding `CONST_ONE`
/// lines as needed.
pub fn to_toffoli_only(c: &CompiledReversible) -> CompiledReversible {
    let circuit = c.circuit.to_toffoli_only();
    CompiledReversible {
        const_one_lines: circuit.lines_with_role(LineRole::ConstOne),
        circuit,
        ..c.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameMode {
    /// Strings whose code does not fit are stored raw with the escape bit set.
    Escape,
    /// Overflow is an error.
    Strict,
}

/// The `block + 1` bit frame of `s`:
/// `encode_self_delimiting(Z(s, helper)) || 0^pad || 0` when the coded form
/// fits in `block` bits, otherwise `s || 1` (or `CompressorOverflow` in strict
/// mode).
pub fn encode_block_frame(
    codec: &dyn Codec,
    s: &BitString,
    helper: &BitString,
    mode: FrameMode,
) -> Result<BitString> {
    let block = s.len();
    let coded = encode_self_delimiting(&codec.compress(s, helper));
    if coded.len() <= block {
        let mut f = coded.padded(block);
        f.push(false);
        Ok(f)
    } else {
        match mode {
            FrameMode::Escape => {
                let mut f = s.clone();
                f.push(true);
                Ok(f)
            }
            FrameMode::Strict => Err(Error::CompressorOverflow { coded: coded.len(), block }),
        }
    }
}

/// True when the frame holds a compressed code rather than raw data.
pub fn frame_is_compressed(frame: &BitString) -> bool {
    !frame.is_empty() && !frame.bit(frame.len() - 1)
}

pub fn decode_block_frame(codec: &dyn Codec, frame: &BitString, helper: &BitString) -> Result<BitString> {
    let block = frame
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::MalformedCode("empty frame".into()))?;
    let body = frame.slice(0..block);
    if !frame_is_compressed(frame) {
        return Ok(body);
    }
    let (code, used) = decode_self_delimiting(&body)?;
    if !body.slice(used..block).is_all_zero() {
        return Err(Error::MalformedCode("nonzero padding after code".into()));
    }
    let s = codec.decompress(&code, helper)?;
    if s.len() != block {
        return Err(Error::MalformedCode(format!("decoded {} bits, block is {block}", s.len())));
    }
    Ok(s)
}

/// Reversible compression with a fixed helper.
///
/// Lines: S-register (`block` data lines and one escape line), helper lines,
/// a second register R2 of `block + 1` lines, and a shared junk pool. `C_Z`
/// (the frame map as a ROM) is Bennett-compiled into R2, the two registers
/// are swapped, and `C_U` (frame back to data) is run in reverse, which
/// clears R2. The result maps `S || 0` to the frame of `S` in place, with
/// helper, R2 and junk unchanged. The circuit is normalized to Toffoli gates.
pub fn build_fig1_compressor(
    codec: &dyn Codec,
    block: usize,
    helper: &BitString,
    mode: FrameMode,
) -> Result<CompiledReversible> {
    if block == 0 || block > MAX_FIG1_BLOCK {
        return Err(Error::InvalidParameter(format!(
            "block must be between 1 and {MAX_FIG1_BLOCK} bits, got {block}"
        )));
    }
    let mut z_entries = Vec::with_capacity(1 << block);
    let mut u_entries = Vec::with_capacity(1 << block);
    let mut seen = HashSet::new();
    for x in 0..1u64 << block {
        let s = BitString::from_u64(x, block);
        let frame = encode_block_frame(codec, &s, helper, mode)?;
        match decode_block_frame(codec, &frame, helper) {
            Ok(back) if back == s => {}
            Ok(back) => {
                return Err(Error::CodecNotInjective {
                    codec: codec.name().into(),
                    detail: format!("{s} decodes back to {back}"),
                })
            }
            Err(e) => {
                return Err(Error::CodecNotInjective {
                    codec: codec.name().into(),
                    detail: format!("{s} does not decode: {e}"),
                })
            }
        }
        let f = frame.to_u64();
        if !seen.insert(f) {
            return Err(Error::CodecNotInjective {
                codec: codec.name().into(),
                detail: format!("frame {frame} is produced twice"),
            });
        }
        z_entries.push((x, f));
        u_entries.push((f, x));
    }
    let cz = bennett_compile(&synthesize_rom(block, block + 1, &z_entries)?)?;
    let cu = bennett_compile(&synthesize_rom(block + 1, block, &u_entries)?)?;

    let h = helper.len();
    let s_reg: Vec<usize> = (0..=block).collect();
    let helper_lines: Vec<usize> = (block + 1..block + 1 + h).collect();
    let r2: Vec<usize> = (block + 1 + h..2 * block + 2 + h).collect();
    let pool_start = 2 * block + 2 + h;
    let pool = cz.ancilla_lines.len().max(cu.ancilla_lines.len());
    let width = pool_start + pool;

    // C_Z: data lines -> S-register data lines, outputs -> R2.
    let mut z_map = vec![0; cz.circuit.width()];
    for (k, &l) in cz.input_lines.iter().enumerate() {
        z_map[l] = s_reg[k];
    }
    for (k, &l) in cz.ancilla_lines.iter().enumerate() {
        z_map[l] = pool_start + k;
    }
    for (k, &l) in cz.output_lines.iter().enumerate() {
        z_map[l] = r2[k];
    }
    // C_U reversed: frame on the S-register, data XORed out of R2.
    let mut u_map = vec![0; cu.circuit.width()];
    for (k, &l) in cu.input_lines.iter().enumerate() {
        u_map[l] = s_reg[k];
    }
    for (k, &l) in cu.ancilla_lines.iter().enumerate() {
        u_map[l] = pool_start + k;
    }
    for (k, &l) in cu.output_lines.iter().enumerate() {
        u_map[l] = r2[k];
    }
    let first = cz.circuit.embed(width, &z_map)?;
    let second = cu.circuit.reverse().embed(width, &u_map)?;
    let mut wiring: Vec<usize> = (0..width).collect();
    for (&a, &b) in s_reg.iter().zip(&r2) {
        wiring[a] = b;
        wiring[b] = a;
    }
    let mut roles = vec![LineRole::AncillaZero; width];
    for &l in &s_reg[..block] {
        roles[l] = LineRole::Input;
    }
    for &l in &helper_lines {
        roles[l] = LineRole::Helper;
    }
    let circuit = compose(&first, &second, &wiring)?.with_line_roles(roles)?;
    let mut ancilla_lines = r2;
    ancilla_lines.extend(pool_start..width);
    let compiled = CompiledReversible {
        circuit,
        input_lines: s_reg.clone(),
        output_lines: s_reg,
        helper_lines,
        ancilla_lines,
        const_one_lines: vec![],
        helper_value: helper.clone(),
        junk_restored: true,
    };
    Ok(to_toffoli_only(&compiled))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: BitString,
    pub expected: BitString,
    pub got: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AncillaViolation {
    pub input: BitString,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub inputs_checked: u64,
    pub mismatches: Vec<Mismatch>,
    pub ancilla_violations: Vec<AncillaViolation>,
    pub bijective_on_domain: bool,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.ancilla_violations.is_empty() && self.bijective_on_domain
    }
}

/// At most this many mismatches or violations are kept in a report.
const REPORT_LIMIT: usize = 32;

/// Sweeps every assignment of the `INPUT`-role lines among `input_lines`
/// (other lines at their required values) and compares the output lines with
/// `oracle`, which receives the swept bits in `input_lines` order. Every line
/// that is not an output line must come back unchanged.
pub fn verify_compiled<F>(c: &CompiledReversible, oracle: F, max_width: usize) -> Result<VerifyReport>
where
    F: Fn(&BitString) -> BitString,
{
    let domain = c.domain_lines();
    let limit = max_width.min(max_exhaustive_width());
    if domain.len() > limit || domain.len() >= 63 {
        return Err(Error::DomainTooLarge { width: domain.len(), limit });
    }
    let base = c.base_state();
    let width = c.circuit.width();
    let is_output: Vec<bool> = {
        let mut v = vec![false; width];
        for &l in &c.output_lines {
            v[l] = true;
        }
        v
    };
    let fixed: Vec<usize> = (0..width).filter(|&l| !is_output[l]).collect();
    let total = 1u64 << domain.len();
    let mut report = VerifyReport {
        inputs_checked: total,
        mismatches: vec![],
        ancilla_violations: vec![],
        bijective_on_domain: true,
    };
    let mut seen = HashSet::with_capacity(total as usize);
    let mut lanes = vec![0u64; width];
    let mut start = 0u64;
    while start < total {
        let count = (total - start).min(64);
        c.circuit.load_lanes(&mut lanes, &domain, &base, start);
        let before: Vec<u64> = fixed.iter().map(|&l| lanes[l]).collect();
        c.circuit.apply_lanes(&mut lanes);
        let valid = if count == 64 { !0u64 } else { (1u64 << count) - 1 };
        for (k, &l) in fixed.iter().enumerate() {
            let diff = (before[k] ^ lanes[l]) & valid;
            if diff != 0 && report.ancilla_violations.len() < REPORT_LIMIT {
                let lane = diff.trailing_zeros() as u64;
                report.ancilla_violations.push(AncillaViolation {
                    input: input_bits(c, &domain, &base, start + lane),
                    line: l,
                });
            }
        }
        for lane in 0..count {
            let input = input_bits(c, &domain, &base, start + lane);
            let got = lane_bits(&lanes, &c.output_lines, lane);
            let expected = oracle(&input);
            if got != expected && report.mismatches.len() < REPORT_LIMIT {
                report.mismatches.push(Mismatch { input, expected, got });
            }
            if !seen.insert(read_lane(&lanes, lane)) {
                report.bijective_on_domain = false;
            }
        }
        start += count;
    }
    Ok(report)
}

/// The input-line bits of assignment `x`, in `input_lines` order.
fn input_bits(c: &CompiledReversible, domain: &[usize], base: &BitString, x: u64) -> BitString {
    let mut s = base.clone();
    for (k, &l) in domain.iter().enumerate() {
        s.set(l, (x >> k) & 1 == 1);
    }
    c.input_lines.iter().map(|&l| s.bit(l)).collect()
}
