//! Channel parameters and regime classification.
//!
//! The channel is
//!
//! ```text
//! Y1 = X1 + √a12·X2 + S1 + √a12·S2 + Z1
//! Y2 = √a21·X1 + X2 + √a21·S1 + S2 + Z2
//! ```
//!
//! with `E|Xi|² ≤ Pi` per dimension, `Zi ~ N(0, Ni)` and states `Si` of
//! variance `Qi` known non-causally at both transmitters. The interesting
//! case is `Qi → ∞`, which is carried as [`StateVariance::Unbounded`] rather
//! than as a large number.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Variance of an additive interference state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateVariance {
    Finite(f64),
    Unbounded,
}

impl StateVariance {
    pub fn finite(self) -> Option<f64> {
        match self {
            StateVariance::Finite(q) => Some(q),
            StateVariance::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, StateVariance::Unbounded)
    }
}

impl fmt::Display for StateVariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateVariance::Finite(q) => write!(f, "{q}"),
            StateVariance::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for StateVariance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StateVariance::Finite(q) => s.serialize_f64(*q),
            StateVariance::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for StateVariance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(q) => Ok(StateVariance::Finite(q)),
            Raw::Int(q) => Ok(StateVariance::Finite(q as f64)),
            Raw::Text(t) if t == "unbounded" => Ok(StateVariance::Unbounded),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "state variance must be a number or \"unbounded\", got {t:?}"
            ))),
        }
    }
}

/// Which receiver a rate or scheme refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Decoder {
    One,
    Two,
}

impl Decoder {
    pub fn index(self) -> u8 {
        match self {
            Decoder::One => 1,
            Decoder::Two => 2,
        }
    }
}

impl From<Decoder> for u8 {
    fn from(d: Decoder) -> u8 {
        d.index()
    }
}

impl TryFrom<u8> for Decoder {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Decoder::One),
            2 => Ok(Decoder::Two),
            other => Err(format!("decoder must be 1 or 2, got {other}")),
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Unvalidated channel constants, as read from a scenario file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub p1: f64,
    pub p2: f64,
    pub n1: f64,
    pub n2: f64,
    pub a12: f64,
    pub a21: f64,
    pub q1: StateVariance,
    pub q2: StateVariance,
}

impl RawParams {
    pub fn new(p1: f64, p2: f64, n1: f64, n2: f64, a12: f64, a21: f64) -> Self {
        RawParams {
            p1,
            p2,
            n1,
            n2,
            a12,
            a21,
            q1: StateVariance::Unbounded,
            q2: StateVariance::Unbounded,
        }
    }

    pub fn with_states(mut self, q1: StateVariance, q2: StateVariance) -> Self {
        self.q1 = q1;
        self.q2 = q2;
        self
    }
}

/// Validated channel constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    raw: RawParams,
    strong_interference: bool,
}

/// Validates raw constants. Every power, noise variance and finite state
/// variance must be strictly positive; gains must be non-negative.
pub fn build_params(raw: RawParams) -> Result<ChannelParams> {
    validate(raw, false)?;
    Ok(ChannelParams::from_valid(raw))
}

fn validate(raw: RawParams, allow_zero_noise: bool) -> Result<()> {
    let finite = [
        ("p1", raw.p1),
        ("p2", raw.p2),
        ("n1", raw.n1),
        ("n2", raw.n2),
        ("a12", raw.a12),
        ("a21", raw.a21),
    ];
    for (field, value) in finite {
        if !value.is_finite() {
            return Err(Error::NonFinite { field, value });
        }
    }
    for (field, value) in [("p1", raw.p1), ("p2", raw.p2)] {
        if value <= 0.0 {
            return Err(Error::NonPositiveValue { field, value });
        }
    }
    for (field, value) in [("n1", raw.n1), ("n2", raw.n2)] {
        let bad = if allow_zero_noise { value < 0.0 } else { value <= 0.0 };
        if bad {
            return Err(Error::NonPositiveValue { field, value });
        }
    }
    for (field, q) in [("q1", raw.q1), ("q2", raw.q2)] {
        if let StateVariance::Finite(value) = q {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::NonPositiveValue { field, value });
            }
        }
    }
    for (field, value) in [("a12", raw.a12), ("a21", raw.a21)] {
        if value < 0.0 {
            return Err(Error::NegativeGain { field, value });
        }
    }
    Ok(())
}

impl ChannelParams {
    fn from_valid(raw: RawParams) -> Self {
        let strong_interference = at_least_ratio(raw.a12, raw.n1, raw.n2)
            && at_least_ratio(raw.a21, raw.n2, raw.n1);
        ChannelParams {
            raw,
            strong_interference,
        }
    }

    /// Like [`build_params`] but admits `Ni = 0`. Used to probe the
    /// noiseless limit of coefficient formulas and simulator chains.
    pub fn limit_case(raw: RawParams) -> Result<Self> {
        validate(raw, true)?;
        Ok(ChannelParams::from_valid(raw))
    }

    pub fn p1(&self) -> f64 {
        self.raw.p1
    }
    pub fn p2(&self) -> f64 {
        self.raw.p2
    }
    pub fn n1(&self) -> f64 {
        self.raw.n1
    }
    pub fn n2(&self) -> f64 {
        self.raw.n2
    }
    pub fn a12(&self) -> f64 {
        self.raw.a12
    }
    pub fn a21(&self) -> f64 {
        self.raw.a21
    }
    pub fn q1(&self) -> StateVariance {
        self.raw.q1
    }
    pub fn q2(&self) -> StateVariance {
        self.raw.q2
    }
    pub fn raw(&self) -> RawParams {
        self.raw
    }

    /// `a12 ≥ N1/N2` and `a21 ≥ N2/N1`.
    pub fn strong_interference(&self) -> bool {
        self.strong_interference
    }

    /// Swaps the roles of the two users, so that decoder 2 of `self` is
    /// decoder 1 of the result.
    pub fn mirrored(&self) -> ChannelParams {
        let r = self.raw;
        ChannelParams::from_valid(RawParams {
            p1: r.p2,
            p2: r.p1,
            n1: r.n2,
            n2: r.n1,
            a12: r.a21,
            a21: r.a12,
            q1: r.q2,
            q2: r.q1,
        })
    }

    /// Parameters seen from `decoder`: identity for decoder 1, mirrored for 2.
    pub fn oriented(&self, decoder: Decoder) -> ChannelParams {
        match decoder {
            Decoder::One => *self,
            Decoder::Two => self.mirrored(),
        }
    }
}

// gain ≥ num/den, with den = 0 handled for the noiseless limit case.
fn at_least_ratio(gain: f64, num: f64, den: f64) -> bool {
    if den > 0.0 {
        gain >= num / den
    } else {
        num <= 0.0 || gain.is_infinite()
    }
}

/// Per-decoder applicability of the imbalanced (capacity-achieving) and
/// nearly balanced lattice schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeFlags {
    pub imbalanced_dec1: bool,
    pub imbalanced_dec2: bool,
    pub balanced_dec1: bool,
    pub balanced_dec2: bool,
    pub notes: Vec<String>,
}

impl RegimeFlags {
    pub fn imbalanced(&self, decoder: Decoder) -> bool {
        match decoder {
            Decoder::One => self.imbalanced_dec1,
            Decoder::Two => self.imbalanced_dec2,
        }
    }

    pub fn balanced(&self, decoder: Decoder) -> bool {
        match decoder {
            Decoder::One => self.balanced_dec1,
            Decoder::Two => self.balanced_dec2,
        }
    }

    /// Compact `key=0/1` rendering used in CSV output.
    pub fn compact(&self) -> String {
        format!(
            "imb1={};imb2={};bal1={};bal2={}",
            self.imbalanced_dec1 as u8,
            self.imbalanced_dec2 as u8,
            self.balanced_dec1 as u8,
            self.balanced_dec2 as u8
        )
    }
}

/// Thresholds for one decoder, in that decoder's orientation: own power
/// `p_own`, interfering power seen through the cross gain `cross = a·p_other`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Thresholds {
    /// `√(cross·p_own) − cross`; imbalanced iff `N ≤ imbalanced`.
    pub imbalanced: f64,
    /// `√(cross·p_own) − min(cross, p_own)`; balanced iff `N ≥ balanced`.
    pub balanced: f64,
}

pub(crate) fn thresholds(p_own: f64, cross: f64, p_other: f64, gain: f64) -> Thresholds {
    let root = (gain * p_other * p_own).sqrt();
    Thresholds {
        imbalanced: root - cross,
        balanced: root - cross.min(p_own),
    }
}

/// `(imbalanced, balanced)` noise thresholds for `decoder`: the imbalanced
/// scheme applies when `N ≤ imbalanced`, the balanced one when `N ≥ balanced`.
pub fn noise_thresholds(params: &ChannelParams, decoder: Decoder) -> (f64, f64) {
    let p = params.oriented(decoder);
    let t = thresholds(p.p1(), p.a12() * p.p2(), p.p2(), p.a12());
    (t.imbalanced, t.balanced)
}

pub fn classify_regime(params: &ChannelParams) -> RegimeFlags {
    let (p1, p2, a12, a21) = (params.p1(), params.p2(), params.a12(), params.a21());
    let t1 = thresholds(p1, a12 * p2, p2, a12);
    let t2 = thresholds(p2, a21 * p1, p1, a21);

    let mut notes = Vec::new();
    let flags = RegimeFlags {
        imbalanced_dec1: params.n1() <= t1.imbalanced,
        imbalanced_dec2: params.n2() <= t2.imbalanced,
        balanced_dec1: params.n1() >= t1.balanced,
        balanced_dec2: params.n2() >= t2.balanced,
        notes: Vec::new(),
    };

    if !params.strong_interference() {
        notes.push("weak interference: a12 < N1/N2 or a21 < N2/N1".to_string());
    }
    if flags.imbalanced_dec1 && flags.imbalanced_dec2 {
        notes.push(
            "both imbalanced conditions hold; this requires a12*a21 < 1 unless at a boundary"
                .to_string(),
        );
    }
    if p1 == a12 * p2 {
        notes.push("decoder 1: P1 = a12*P2, balanced rate evaluated at its excluded equality".into());
    }
    if p2 == a21 * p1 {
        notes.push("decoder 2: P2 = a21*P1, balanced rate evaluated at its excluded equality".into());
    }
    for (d, imb, bal) in [
        (1, flags.imbalanced_dec1, flags.balanced_dec1),
        (2, flags.imbalanced_dec2, flags.balanced_dec2),
    ] {
        if !imb && !bal {
            notes.push(format!("decoder {d}: noise variance lies in the uncovered interval"));
        }
    }
    RegimeFlags { notes, ..flags }
}
