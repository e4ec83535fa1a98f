//! Weight-couple imbalance under conservative bijections.
//!
//! A `2n`-bit string has a weight couple: the Hamming weights of its two
//! halves. Any injective, weight-preserving map sends at most `|to|` strings
//! of one class into the class `to`, so the fraction of a class whose
//! imbalance grows is bounded by an exact binomial ratio.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::circuits::{is_conservative, max_exhaustive_width, Gate, ReversibleCircuit};
use crate::error::{Error, Result};
use crate::seed::indexed_substream;

/// `C(n, k)` by the multiplicative formula; exact at every step.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// `p/q` in lowest terms, always with an explicit denominator.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeightCouple {
    pub n: usize,
    pub left: usize,
    pub right: usize,
}

impl WeightCouple {
    pub fn new(n: usize, left: usize, right: usize) -> Result<Self> {
        if left > n || right > n {
            return Err(Error::InvalidParameter(format!("weights ({left}, {right}) exceed half-width {n}")));
        }
        Ok(Self { n, left, right })
    }

    pub fn class_size(&self) -> BigUint {
        binomial(self.n as u64, self.left as u64) * binomial(self.n as u64, self.right as u64)
    }

    /// The couple of a `2n`-bit word; line `i` is bit `i`, lines `0..n` form
    /// the left half.
    pub fn of_word(n: usize, word: u64) -> Self {
        let mask = (1u64 << n) - 1;
        Self { n, left: (word & mask).count_ones() as usize, right: ((word >> n) & mask).count_ones() as usize }
    }
}

/// `w * n` as an integer, or `NonIntegralWeights`.
fn scaled(n: u64, w: &BigRational, what: &str) -> Result<u64> {
    let v = w * BigRational::from_integer(BigInt::from(n));
    if !v.is_integer() {
        return Err(Error::NonIntegralWeights(format!("{what} * n = {} is not an integer", ratio_string(&v))));
    }
    v.to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} * n is negative")))
}

struct Grid {
    k: u64,
    j: u64,
}

/// Validates `(n, w, delta)` and returns `wn` and `(w + delta) n`.
fn grid(n: u64, w: &BigRational, delta: &BigRational, allow_past_end: bool) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let one = BigRational::one();
    let k = scaled(n, w, "w")?;
    let j = scaled(n, &(w + delta), "w + delta")?;
    if *w < half || *w >= one {
        return Err(Error::InvalidParameter(format!("w = {} must lie in [1/2, 1)", ratio_string(w))));
    }
    if delta.is_negative() || (!allow_past_end && *delta > &one - w) {
        return Err(Error::InvalidParameter(format!(
            "delta = {} must lie in [0, 1 - w]",
            ratio_string(delta)
        )));
    }
    Ok(Grid { k, j })
}

/// `C(n,(w+Δ)n) C(n,(1-w-Δ)n) / (C(n,wn) C(n,(1-w)n))`.
pub fn imbalance_ratio_exact(n: u64, w: &BigRational, delta: &BigRational) -> Result<BigRational> {
    let g = grid(n, w, delta, false)?;
    let num = binomial(n, g.j) * binomial(n, n - g.j);
    let den = binomial(n, g.k) * binomial(n, n - g.k);
    Ok(BigRational::new(num.into(), den.into()))
}

/// The same ratio summed over every class at least as imbalanced:
/// `sum_{j >= (w+Δ)n} C(n,j) C(n,n-j) / (C(n,wn) C(n,(1-w)n))`. This is a
/// ratio of class sizes and can exceed 1; see [`tail_probability_ceiling`].
pub fn imbalance_tail_exact(n: u64, w: &BigRational, delta: &BigRational) -> Result<BigRational> {
    let g = grid(n, w, delta, true)?;
    let mut num = BigUint::zero();
    for j in g.j..=n {
        num += binomial(n, j) * binomial(n, n - j);
    }
    let den = binomial(n, g.k) * binomial(n, n - g.k);
    Ok(BigRational::new(num.into(), den.into()))
}

/// `min(1, tail)`: the bound on the probability that a uniformly drawn string
/// of the class lands in the tail.
pub fn tail_probability_ceiling(n: u64, w: &BigRational, delta: &BigRational) -> Result<BigRational> {
    Ok(imbalance_tail_exact(n, w, delta)?.min(BigRational::one()))
}

/// Words of `n` bits with weight `k`, ascending.
fn words_of_weight(n: usize, k: usize) -> impl Iterator<Item = u64> {
    (0..1u64 << n).filter(move |v| v.count_ones() as usize == k)
}

/// Number of strings of class `from` that `c` maps into class `to`.
pub fn count_class_transitions(c: &ReversibleCircuit, from: WeightCouple, to: WeightCouple) -> Result<u64> {
    let width = c.width();
    let limit = max_exhaustive_width();
    if width > limit || width >= 63 {
        return Err(Error::DomainTooLarge { width, limit });
    }
    if width != 2 * from.n || from.n != to.n {
        return Err(Error::WidthMismatch { expected: 2 * from.n, got: width });
    }
    if !is_conservative(c)? {
        return Err(Error::NotConservative);
    }
    let n = from.n;
    let rights: Vec<u64> = words_of_weight(n, from.right).collect();
    let mut count = 0u64;
    for l in words_of_weight(n, from.left) {
        for &r in &rights {
            if WeightCouple::of_word(n, c.apply_word(l | (r << n))) == to {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Random Fredkin gates on three distinct lines, deterministic in `seed`.
pub fn random_conservative_circuit(width: usize, gate_count: usize, seed: u64) -> Result<ReversibleCircuit> {
    let mut rng = indexed_substream(seed, "conservative-circuit", 0);
    random_conservative_circuit_with(width, gate_count, &mut rng)
}

pub fn random_conservative_circuit_with<R: Rng>(width: usize, gate_count: usize, rng: &mut R) -> Result<ReversibleCircuit> {
    if width < 3 {
        return Err(Error::WidthTooSmall { width, min: 3 });
    }
    let gates = (0..gate_count)
        .map(|_| {
            let l = rand::seq::index::sample(rng, width, 3).into_vec();
            Gate::fredkin(l[0], l[1], l[2])
        })
        .collect();
    ReversibleCircuit::new(width, gates)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClausiusConfig {
    pub n: usize,
    pub w: BigRational,
    pub delta: BigRational,
    pub circuits: usize,
    pub gates_per_circuit: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendPoint {
    pub n: usize,
    /// `log2` of the point ceiling; rendering only.
    pub log2_ceiling: f64,
    pub ceiling: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClausiusReport {
    pub n: usize,
    pub w: String,
    pub delta: String,
    pub from: WeightCouple,
    pub to: WeightCouple,
    pub class_size: String,
    /// Point ceiling: the injectivity bound on the fraction of `from` mapped
    /// exactly into `to`.
    pub ceiling: String,
    /// Tail ratio over `to` and every more imbalanced class; may exceed 1.
    pub tail_ratio: String,
    /// `min(1, tail_ratio)`.
    pub tail_ceiling: String,
    pub counts: Vec<u64>,
    pub max_fraction: String,
    /// Fraction for the identity circuit, included as a baseline.
    pub identity_fraction: String,
    pub ceiling_holds: bool,
    pub per_n_trend: Vec<TrendPoint>,
}

/// Largest half-width listed in the trend.
pub const TREND_MAX_N: usize = 32;

pub fn log2_ratio(r: &BigRational) -> f64 {
    let bits = |v: &BigInt| {
        let shift = v.bits().saturating_sub(60);
        (v >> shift).to_f64().unwrap_or(f64::NAN).log2() + shift as f64
    };
    bits(r.numer()) - bits(r.denom())
}

pub fn clausius_experiment(cfg: &ClausiusConfig) -> Result<ClausiusReport> {
    let n = cfg.n;
    let ceiling = imbalance_ratio_exact(n as u64, &cfg.w, &cfg.delta)?;
    let g = grid(n as u64, &cfg.w, &cfg.delta, false)?;
    let width = 2 * n;
    let limit = max_exhaustive_width();
    if width > limit {
        return Err(Error::DomainTooLarge { width, limit });
    }
    let from = WeightCouple::new(n, g.k as usize, n - g.k as usize)?;
    let to = WeightCouple::new(n, g.j as usize, n - g.j as usize)?;
    let class_size = from.class_size();
    let size = BigInt::from(class_size.clone());
    let mut counts = Vec::with_capacity(cfg.circuits);
    for i in 0..cfg.circuits {
        let mut rng = indexed_substream(cfg.seed, "conservative-circuit", i as u64);
        let c = random_conservative_circuit_with(width, cfg.gates_per_circuit, &mut rng)?;
        counts.push(count_class_transitions(&c, from, to)?);
    }
    let identity = count_class_transitions(&ReversibleCircuit::identity(width), from, to)?;
    let max_count = counts.iter().copied().max().unwrap_or(0).max(identity);
    let max_fraction = BigRational::new(BigInt::from(max_count), size.clone());
    let identity_fraction = BigRational::new(BigInt::from(identity), size);
    let tail = imbalance_tail_exact(n as u64, &cfg.w, &cfg.delta)?;
    let per_n_trend = (1..=TREND_MAX_N.max(n))
        .filter_map(|m| {
            let r = imbalance_ratio_exact(m as u64, &cfg.w, &cfg.delta).ok()?;
            Some(TrendPoint { n: m, log2_ceiling: log2_ratio(&r), ceiling: ratio_string(&r) })
        })
        .collect();
    Ok(ClausiusReport {
        n,
        w: ratio_string(&cfg.w),
        delta: ratio_string(&cfg.delta),
        from,
        to,
        class_size: class_size.to_string(),
        ceiling_holds: max_fraction <= ceiling,
        ceiling: ratio_string(&ceiling),
        tail_ceiling: ratio_string(&tail.clone().min(BigRational::one())),
        tail_ratio: ratio_string(&tail),
        counts,
        max_fraction: ratio_string(&max_fraction),
        identity_fraction: ratio_string(&identity_fraction),
        per_n_trend,
    })
}
