//! PR-box quadruples `(a, b, x, y)` with `x_i ^ y_i = a_i & b_i`, and
//! compression-rate proxies for their complexity conditions.
//!
//! Seeded pseudorandom bits stand in for incompressible strings. Rates come
//! from `K̂`, an upper estimate, so they bound the true complexity rates from
//! above and never certify a lower bound.

use num_rational::Ratio;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::bitstring::{encode_self_delimiting, BitString};
use crate::compress::{estimate_complexity, Codec};
use crate::error::{Error, Result};
use crate::seed::{digest_of, substream};

pub const MIN_RATE_LEN: usize = 64;
pub const MIN_REPORT_LEN: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationQuadruple {
    pub a: BitString,
    pub b: BitString,
    pub x: BitString,
    pub y: BitString,
}

impl CorrelationQuadruple {
    /// Completes `(a, b, x)` with `y_i = (a_i & b_i) ^ x_i`.
    pub fn from_inputs(a: BitString, b: BitString, x: BitString) -> Result<Self> {
        let n = a.len();
        if b.len() != n || x.len() != n {
            return Err(Error::WidthMismatch { expected: n, got: if b.len() != n { b.len() } else { x.len() } });
        }
        let y = (0..n).map(|i| (a.bit(i) & b.bit(i)) ^ x.bit(i)).collect();
        Ok(Self { a, b, x, y })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn digest(&self) -> String {
        digest_of(&[&self.a, &self.b, &self.x, &self.y])
    }
}

fn random_bits<R: Rng>(rng: &mut R, n: usize) -> BitString {
    (0..n).map(|_| rng.gen::<bool>()).collect()
}

/// `a`, `b` and `x` come from separate named sub-streams of `seed`.
pub fn generate_pr_quadruple(n: usize, seed: u64) -> Result<CorrelationQuadruple> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadruple length must be at least 1".into()));
    }
    let a = random_bits(&mut substream(seed, "prbox/a"), n);
    let b = random_bits(&mut substream(seed, "prbox/b"), n);
    let x = random_bits(&mut substream(seed, "prbox/x"), n);
    CorrelationQuadruple::from_inputs(a, b, x)
}

pub fn check_pr_condition(q: &CorrelationQuadruple) -> bool {
    let n = q.a.len();
    q.b.len() == n
        && q.x.len() == n
        && q.y.len() == n
        && (0..n).all(|i| q.x.bit(i) ^ q.y.bit(i) == (q.a.bit(i) & q.b.bit(i)))
}

/// `K̂(s | helper) / len(s)`.
pub fn complexity_rate(s: &BitString, helper: &BitString, family: &[&dyn Codec]) -> Result<Ratio<u64>> {
    if s.len() < MIN_RATE_LEN {
        return Err(Error::StringTooShort { len: s.len(), min: MIN_RATE_LEN });
    }
    let k = estimate_complexity(s, helper, family)?;
    Ok(Ratio::new(k.bits as u64, s.len() as u64))
}

fn ser_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Helper encoding the pair `(a, b)`: `encode_self_delimiting(a) || b`.
pub fn pair_helper(a: &BitString, b: &BitString) -> BitString {
    encode_self_delimiting(a).concat(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrReport {
    pub n: usize,
    pub pr_condition: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub rate_a: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub rate_b: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub rate_x: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub rate_y: Ratio<u64>,
    /// `K̂(a || b) / n`, compared with `rate_a + rate_b`.
    #[serde(serialize_with = "ser_ratio")]
    pub joint_rate_ab: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub rate_sum_ab: Ratio<u64>,
    /// `|K̂(x|a) - K̂(x|a,b)| / n`.
    #[serde(serialize_with = "ser_ratio")]
    pub no_signaling_gap_x: Ratio<u64>,
    /// `|K̂(y|b) - K̂(y|a,b)| / n`.
    #[serde(serialize_with = "ser_ratio")]
    pub no_signaling_gap_y: Ratio<u64>,
    /// `K̂(x|a) / n`.
    #[serde(serialize_with = "ser_ratio")]
    pub rate_x_given_a: Ratio<u64>,
    /// `K̂(y|b) / n`.
    #[serde(serialize_with = "ser_ratio")]
    pub rate_y_given_b: Ratio<u64>,
    pub estimated: bool,
    pub caveat: &'static str,
}

pub const PR_CAVEAT: &str = "rates are compressor upper estimates on pseudorandom inputs; they do not certify complexity lower bounds";

pub fn pr_report(q: &CorrelationQuadruple, family: &[&dyn Codec]) -> Result<PrReport> {
    let n = q.len();
    if n < MIN_REPORT_LEN {
        return Err(Error::StringTooShort { len: n, min: MIN_REPORT_LEN });
    }
    let empty = BitString::new();
    let k = |s: &BitString, h: &BitString| estimate_complexity(s, h, family).map(|e| e.bits as u64);
    let rate = |bits: u64| Ratio::new(bits, n as u64);
    let ab = pair_helper(&q.a, &q.b);
    let (ka, kb) = (k(&q.a, &empty)?, k(&q.b, &empty)?);
    let kx_a = k(&q.x, &q.a)?;
    let kx_ab = k(&q.x, &ab)?;
    let ky_b = k(&q.y, &q.b)?;
    let ky_ab = k(&q.y, &ab)?;
    Ok(PrReport {
        n,
        pr_condition: check_pr_condition(q),
        rate_a: rate(ka),
        rate_b: rate(kb),
        rate_x: rate(k(&q.x, &empty)?),
        rate_y: rate(k(&q.y, &empty)?),
        joint_rate_ab: rate(k(&q.a.concat(&q.b), &empty)?),
        rate_sum_ab: rate(ka + kb),
        no_signaling_gap_x: rate(kx_a.abs_diff(kx_ab)),
        no_signaling_gap_y: rate(ky_b.abs_diff(ky_ab)),
        rate_x_given_a: rate(kx_a),
        rate_y_given_b: rate(ky_b),
        estimated: true,
        caveat: PR_CAVEAT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::default_family;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn forced_outputs() {
        let q = CorrelationQuadruple::from_inputs(b("1111"), b("1111"), b("0000")).unwrap();
        assert_eq!(q.y, b("1111"));
        let q = CorrelationQuadruple::from_inputs(b("1010"), b("0101"), b("0110")).unwrap();
        assert_eq!(q.y, q.x);
        assert!(CorrelationQuadruple::from_inputs(b("1"), b("11"), b("1")).is_err());
    }

    #[test]
    fn condition_checks() {
        let q = generate_pr_quadruple(1000, 3).unwrap();
        assert!(check_pr_condition(&q));
        assert_eq!(q, generate_pr_quadruple(1000, 3).unwrap());
        assert_ne!(q, generate_pr_quadruple(1000, 4).unwrap());
        assert_eq!(q.digest(), generate_pr_quadruple(1000, 3).unwrap().digest());
        assert_ne!(q.digest(), generate_pr_quadruple(1000, 4).unwrap().digest());
        let mut bad = q.clone();
        let v = bad.y.bit(17);
        bad.y.set(17, !v);
        assert!(!check_pr_condition(&bad));
        let empty = CorrelationQuadruple::from_inputs(b(""), b(""), b("")).unwrap();
        assert!(check_pr_condition(&empty));
        assert!(generate_pr_quadruple(0, 1).is_err());
    }

    #[test]
    fn rates() {
        let fam = default_family();
        let e = BitString::new();
        assert_eq!(
            complexity_rate(&BitString::zeros(63), &e, &fam),
            Err(Error::StringTooShort { len: 63, min: 64 })
        );
        let z = complexity_rate(&BitString::zeros(1024), &e, &fam).unwrap();
        // xor branch: mode bit, first bit and the 21-bit gamma(1024), plus a 4-bit tag
        assert_eq!(z, Ratio::new(27, 1024));
        let q = generate_pr_quadruple(4096, 5).unwrap();
        let self_rate = complexity_rate(&q.a, &q.a, &fam).unwrap();
        assert!(self_rate < Ratio::new(1, 100));
        let r = complexity_rate(&q.a, &e, &fam).unwrap();
        assert_eq!(r, Ratio::new(4097, 4096));
        assert!(self_rate <= r);
    }

    #[test]
    fn report_pinned() {
        let fam = default_family();
        let q = generate_pr_quadruple(4096, 7).unwrap();
        let r = pr_report(&q, &fam).unwrap();
        assert!(r.pr_condition);
        let nine_tenths = Ratio::new(9, 10);
        for rate in [r.rate_a, r.rate_b, r.rate_x, r.rate_y] {
            assert!(rate >= nine_tenths);
            assert!(rate <= Ratio::new(105, 100));
        }
        assert!(r.no_signaling_gap_x <= Ratio::new(1, 10));
        assert!(r.no_signaling_gap_y <= Ratio::new(1, 10));
        assert_eq!(r, pr_report(&generate_pr_quadruple(4096, 7).unwrap(), &fam).unwrap());
        assert!(pr_report(&generate_pr_quadruple(255, 7).unwrap(), &fam).is_err());
    }

    #[test]
    fn zero_inputs_copy_x() {
        let fam = default_family();
        let n = 512;
        let x = generate_pr_quadruple(n, 8).unwrap().x;
        let q = CorrelationQuadruple::from_inputs(BitString::zeros(n), BitString::zeros(n), x).unwrap();
        assert_eq!(q.y, q.x);
        assert!(complexity_rate(&q.y, &q.x, &fam).unwrap() < Ratio::new(1, 20));
    }
}
