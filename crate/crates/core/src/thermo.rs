//! Work-value, erasure-cost and computation bounds in bit units.
//!
//! One bit unit is `kT ln 2` of free energy. All bit quantities are exact
//! integers; [`to_joules`] is the only place floating point enters.
//!
//! Sides computed from `K̂` are marked `estimated`. `K̂` is an upper estimate
//! of the true complexity, so an estimated lower bound on erasure cost may
//! exceed the true bound, and an estimated upper bound on work value may fall
//! below it.

use serde::Serialize;

use crate::bitstring::BitString;
use crate::compress::{coded_len, estimate_complexity, Codec, ComplexityEstimate};
use crate::error::{Error, Result};

/// Boltzmann's constant in J/K (exact SI value).
pub const BOLTZMANN_K: f64 = 1.380649e-23;
pub const DEFAULT_TEMPERATURE: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JouleConfig {
    pub temperature: f64,
    pub boltzmann_k: f64,
}

impl JouleConfig {
    pub fn new(temperature: f64) -> Result<Self> {
        if temperature.is_nan() || temperature <= 0.0 || !temperature.is_finite() {
            return Err(Error::NonPositiveTemperature(temperature));
        }
        Ok(Self { temperature, boltzmann_k: BOLTZMANN_K })
    }
}

impl Default for JouleConfig {
    fn default() -> Self {
        Self { temperature: DEFAULT_TEMPERATURE, boltzmann_k: BOLTZMANN_K }
    }
}

/// `bits * k * T * ln 2`.
pub fn to_joules(bits: i64, config: &JouleConfig) -> Result<f64> {
    if config.temperature.is_nan() || config.temperature <= 0.0 {
        return Err(Error::NonPositiveTemperature(config.temperature));
    }
    Ok(bits as f64 * config.boltzmann_k * config.temperature * std::f64::consts::LN_2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub label: String,
    /// Positive for work extracted, negative for work spent.
    pub bits: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLedger {
    pub entries: Vec<LedgerEntry>,
    pub temperature: f64,
    pub boltzmann_k: f64,
}

impl Default for EnergyLedger {
    fn default() -> Self {
        Self::new(JouleConfig::default())
    }
}

impl EnergyLedger {
    pub fn new(config: JouleConfig) -> Self {
        Self { entries: vec![], temperature: config.temperature, boltzmann_k: config.boltzmann_k }
    }

    pub fn credit(&mut self, label: &str, bits: i64) {
        self.entries.push(LedgerEntry { label: label.into(), bits });
    }

    pub fn debit(&mut self, label: &str, bits: i64) {
        self.entries.push(LedgerEntry { label: label.into(), bits: -bits });
    }

    pub fn total_bits(&self) -> i64 {
        self.entries.iter().map(|e| e.bits).sum()
    }

    pub fn config(&self) -> JouleConfig {
        JouleConfig { temperature: self.temperature, boltzmann_k: self.boltzmann_k }
    }

    pub fn total_joules(&self) -> Result<f64> {
        to_joules(self.total_bits(), &self.config())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WvLowerBound {
    /// `len(S) - len(encode_self_delimiting(Z(S, X)))`, possibly negative.
    pub bits: i64,
    /// `max(0, bits)`: doing nothing extracts nothing.
    pub effective_bits: i64,
    pub coded_len: usize,
    pub codec: &'static str,
}

pub fn wv_lower_bound(s: &BitString, x: &BitString, codec: &dyn Codec) -> WvLowerBound {
    let coded = coded_len(codec, s, x);
    let bits = s.len() as i64 - coded as i64;
    WvLowerBound { bits, effective_bits: bits.max(0), coded_len: coded, codec: codec.name() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimatedBits {
    pub bits: i64,
    /// Codec achieving the complexity estimate.
    pub codec: &'static str,
    pub estimated: bool,
}

/// `len(S) - K̂(S|X)`. Since `K̂ >= K` this may sit below the true bound.
pub fn wv_upper_bound(s: &BitString, x: &BitString, family: &[&dyn Codec]) -> Result<EstimatedBits> {
    let k = estimate_complexity(s, x, family)?;
    Ok(EstimatedBits { bits: s.len() as i64 - k.bits as i64, codec: k.codec, estimated: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Quantity {
    Wv,
    Ec,
    Cost,
    Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimatedSides {
    pub lower: bool,
    pub upper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub lower_bits: i64,
    pub upper_bits: i64,
    pub estimated: EstimatedSides,
    /// Codec achieving the estimate on the estimated side.
    pub codec: &'static str,
    /// Codec whose coded length gives the exact side.
    pub bound_codec: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JouleInterval {
    #[serde(rename = "T")]
    pub temperature: f64,
    pub lower: f64,
    pub upper: f64,
}

impl BoundReport {
    pub fn joules(&self, config: &JouleConfig) -> Result<JouleInterval> {
        Ok(JouleInterval {
            temperature: config.temperature,
            lower: to_joules(self.lower_bits, config)?,
            upper: to_joules(self.upper_bits, config)?,
        })
    }
}

/// Estimate over `family` with `codec` added when missing, so the estimate
/// never exceeds what `codec` alone achieves.
fn estimate_with(s: &BitString, x: &BitString, codec: &dyn Codec, family: &[&dyn Codec]) -> Result<ComplexityEstimate> {
    let mut fam: Vec<&dyn Codec> = family.to_vec();
    if !fam.iter().any(|c| c.name() == codec.name()) {
        fam.push(codec);
    }
    estimate_complexity(s, x, &fam)
}

/// Erasure cost interval: lower side `K̂(S|X)` (estimated), upper side the
/// self-delimited coded length under `codec` (exact).
pub fn erasure_cost_interval(
    s: &BitString,
    x: &BitString,
    codec: &dyn Codec,
    family: &[&dyn Codec],
) -> Result<BoundReport> {
    let k = estimate_with(s, x, codec, family)?;
    Ok(BoundReport {
        quantity: Quantity::Ec,
        lower_bits: k.bits as i64,
        upper_bits: coded_len(codec, s, x) as i64,
        estimated: EstimatedSides { lower: true, upper: false },
        codec: k.codec,
        bound_codec: codec.name(),
    })
}

/// Work value interval: lower side from `codec` (exact), upper side
/// `len(S) - K̂(S|X)` (estimated).
pub fn work_value_interval(
    s: &BitString,
    x: &BitString,
    codec: &dyn Codec,
    family: &[&dyn Codec],
) -> Result<BoundReport> {
    let k = estimate_with(s, x, codec, family)?;
    Ok(BoundReport {
        quantity: Quantity::Wv,
        lower_bits: wv_lower_bound(s, x, codec).bits,
        upper_bits: s.len() as i64 - k.bits as i64,
        estimated: EstimatedSides { lower: false, upper: true },
        codec: k.codec,
        bound_codec: codec.name(),
    })
}

/// `wv + ec == len(S)`.
pub fn wv_ec_identity_check(len_s: usize, wv_bits: i64, ec_bits: i64) -> bool {
    wv_bits + ec_bits == len_s as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComputationBound {
    pub quantity: Quantity,
    pub bits: i64,
    pub estimated: bool,
    /// Codec achieving the estimate on the leading complexity term.
    pub codec: &'static str,
    pub bound_codec: &'static str,
}

/// `K̂(A|X) - sum_i (len Z(C_i,X) - K̂(C_i|X)) - len Z(B,X)`, all lengths
/// self-delimited.
pub fn computation_cost_lower_bound(
    a: &BitString,
    b: &BitString,
    intermediates: &[BitString],
    x: &BitString,
    codec: &dyn Codec,
    family: &[&dyn Codec],
) -> Result<ComputationBound> {
    let ka = estimate_complexity(a, x, family)?;
    let mut slack = 0i64;
    for c in intermediates {
        let kc = estimate_complexity(c, x, family)?;
        slack += coded_len(codec, c, x) as i64 - kc.bits as i64;
    }
    Ok(ComputationBound {
        quantity: Quantity::Cost,
        bits: ka.bits as i64 - slack - coded_len(codec, b, x) as i64,
        estimated: true,
        codec: ka.codec,
        bound_codec: codec.name(),
    })
}

/// `K̂(B|X) - len Z(A,X)`, self-delimited.
pub fn computation_value_lower_bound(
    a: &BitString,
    b: &BitString,
    x: &BitString,
    codec: &dyn Codec,
    family: &[&dyn Codec],
) -> Result<ComputationBound> {
    let kb = estimate_complexity(b, x, family)?;
    Ok(ComputationBound {
        quantity: Quantity::Value,
        bits: kb.bits as i64 - coded_len(codec, a, x) as i64,
        estimated: true,
        codec: kb.codec,
        bound_codec: codec.name(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircularReport {
    /// Work gained computing `B` from `A`.
    pub gain_a_to_b: i64,
    /// Work cost of computing `A` from `B` with no intermediates.
    pub cost_b_to_a: i64,
    pub equal: bool,
    pub estimated: bool,
}

pub fn circular_combination_report(
    a: &BitString,
    b: &BitString,
    x: &BitString,
    codec: &dyn Codec,
    family: &[&dyn Codec],
) -> Result<CircularReport> {
    let gain = computation_value_lower_bound(a, b, x, codec, family)?.bits;
    let cost = computation_cost_lower_bound(b, a, &[], x, codec, family)?.bits;
    Ok(CircularReport { gain_a_to_b: gain, cost_b_to_a: cost, equal: gain == cost, estimated: true })
}
