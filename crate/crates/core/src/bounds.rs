//! Closed-form sum-rate bounds, MMSE coefficients and gap functions.
//!
//! All rates are in bits per channel use.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::envelope::{uce_at_power, PowerGrid};
use crate::error::{Error, Result};
use crate::model::{classify_regime, ChannelParams, Decoder, RegimeFlags, StateVariance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Outer,
    Capacity,
    AchievableRaw,
    AchievableEnveloped,
}

impl BoundKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::Outer => "outer",
            BoundKind::Capacity => "capacity",
            BoundKind::AchievableRaw => "achievable-raw",
            BoundKind::AchievableEnveloped => "achievable-enveloped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRateBound {
    pub value: f64,
    pub kind: BoundKind,
    pub limiting_decoder: Decoder,
    pub conditions: RegimeFlags,
    pub warnings: Vec<String>,
}

impl SumRateBound {
    /// The two single-user corner points `(value, 0)` and `(0, value)`.
    pub fn corner_points(&self) -> [RatePoint; 2] {
        [
            RatePoint { r1: self.value, r2: 0.0 },
            RatePoint { r1: 0.0, r2: self.value },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    /// `λ·a + (1−λ)·b`.
    pub fn time_share(a: RatePoint, b: RatePoint, lambda: f64) -> RatePoint {
        RatePoint {
            r1: lambda * a.r1 + (1.0 - lambda) * b.r1,
            r2: lambda * a.r2 + (1.0 - lambda) * b.r2,
        }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }
}

/// Receiver scaling coefficients minimizing the effective-noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum MmseCoeffs {
    /// Single coefficient of the imbalanced scheme.
    Single { decoder: Decoder, alpha: f64 },
    /// `(α₁, α₂)` of the balanced scheme: α₁ scales the own signal, α₂ the
    /// interfering one.
    Pair { decoder: Decoder, alpha1: f64, alpha2: f64 },
}

impl MmseCoeffs {
    pub fn decoder(&self) -> Decoder {
        match *self {
            MmseCoeffs::Single { decoder, .. } | MmseCoeffs::Pair { decoder, .. } => decoder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinningBound {
    pub gamma: f64,
    pub entropy_term: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub x: f64,
    pub term_outer: f64,
    pub term_inner_raw: f64,
    pub term_inner_env: f64,
    pub gap: f64,
}

fn half_log2(v: f64) -> f64 {
    0.5 * v.log2()
}

/// `½log₂(1 + cross/N)`: the outer-bound branch of the decoder that sees
/// interference power `cross`.
pub fn outer_branch(params: &ChannelParams, decoder: Decoder) -> f64 {
    let p = params.oriented(decoder);
    half_log2(1.0 + p.a12() * p.p2() / p.n1())
}

pub fn outer_sum_rate(params: &ChannelParams) -> SumRateBound {
    let b1 = outer_branch(params, Decoder::One);
    let b2 = outer_branch(params, Decoder::Two);
    let (value, limiting_decoder) = if b1 <= b2 { (b1, Decoder::One) } else { (b2, Decoder::Two) };
    SumRateBound {
        value,
        kind: BoundKind::Outer,
        limiting_decoder,
        conditions: classify_regime(params),
        warnings: Vec::new(),
    }
}

/// Capacity of the imbalanced regime for one decoder. Fails with
/// `ConditionNotMet` when the decoder's imbalanced condition does not hold.
pub fn imbalanced_sum_rate(params: &ChannelParams, decoder: Decoder) -> Result<SumRateBound> {
    let conditions = classify_regime(params);
    if !conditions.imbalanced(decoder) {
        return Err(Error::ConditionNotMet(format!(
            "decoder {decoder}: noise variance exceeds the imbalanced threshold"
        )));
    }
    Ok(SumRateBound {
        value: outer_branch(params, decoder),
        kind: BoundKind::Capacity,
        limiting_decoder: decoder,
        conditions,
        warnings: Vec::new(),
    })
}

/// `[½log₂((p_own + cross + N)/(2N + (√p_own − √cross)²))]⁺`.
pub fn balanced_raw_value(p_own: f64, cross: f64, noise: f64) -> f64 {
    let d = p_own.sqrt() - cross.sqrt();
    half_log2((p_own + cross + noise) / (2.0 * noise + d * d)).max(0.0)
}

fn excluded_equality_warning(params: &ChannelParams, decoder: Decoder) -> Option<String> {
    let p = params.oriented(decoder);
    (p.p1() == p.a12() * p.p2()).then(|| {
        format!("decoder {decoder}: own power equals received interference power, an excluded equality")
    })
}

fn require_balanced(params: &ChannelParams, decoder: Decoder) -> Result<RegimeFlags> {
    let conditions = classify_regime(params);
    if !conditions.balanced(decoder) {
        return Err(Error::ConditionNotMet(format!(
            "decoder {decoder}: noise variance is below the balanced threshold"
        )));
    }
    Ok(conditions)
}

/// Balanced-regime rate before enveloping.
pub fn balanced_raw_rate(params: &ChannelParams, decoder: Decoder) -> Result<SumRateBound> {
    let conditions = require_balanced(params, decoder)?;
    let p = params.oriented(decoder);
    Ok(SumRateBound {
        value: balanced_raw_value(p.p1(), p.a12() * p.p2(), p.n1()),
        kind: BoundKind::AchievableRaw,
        limiting_decoder: decoder,
        conditions,
        warnings: excluded_equality_warning(params, decoder).into_iter().collect(),
    })
}

/// Envelope of the balanced rate over the decoder's two powers.
pub fn balanced_envelope_value(params: &ChannelParams, decoder: Decoder, grid: &PowerGrid) -> f64 {
    let p = params.oriented(decoder);
    let (a, n) = (p.a12(), p.n1());
    let raw = balanced_raw_value(p.p1(), a * p.p2(), n);
    uce_at_power(|q1, q2| balanced_raw_value(q1, a * q2, n), p.p1(), p.p2(), grid).max(raw)
}

/// Balanced-regime rate after time-sharing concavification.
pub fn balanced_enveloped_rate(
    params: &ChannelParams,
    decoder: Decoder,
    grid: &PowerGrid,
) -> Result<SumRateBound> {
    let conditions = require_balanced(params, decoder)?;
    Ok(SumRateBound {
        value: balanced_envelope_value(params, decoder, grid),
        kind: BoundKind::AchievableEnveloped,
        limiting_decoder: decoder,
        conditions,
        warnings: excluded_equality_warning(params, decoder).into_iter().collect(),
    })
}

/// `α = a12·P2/(a12·P2 + N1)` for decoder 1, mirrored for decoder 2.
pub fn mmse_alpha_imbalanced(params: &ChannelParams, decoder: Decoder) -> MmseCoeffs {
    let p = params.oriented(decoder);
    let cross = p.a12() * p.p2();
    MmseCoeffs::Single {
        decoder,
        alpha: cross / (cross + p.n1()),
    }
}

/// `α₁ = √P1(√P1 + √(a12P2))/(P1 + a12P2 + N1)` and
/// `α₂ = √(a12P2)(√P1 + √(a12P2))/(P1 + a12P2 + N1)` for decoder 1.
pub fn mmse_alphas_balanced(params: &ChannelParams, decoder: Decoder) -> MmseCoeffs {
    let p = params.oriented(decoder);
    let cross = p.a12() * p.p2();
    let (s_own, s_cross) = (p.p1().sqrt(), cross.sqrt());
    let denom = p.p1() + cross + p.n1();
    MmseCoeffs::Pair {
        decoder,
        alpha1: s_own * (s_own + s_cross) / denom,
        alpha2: s_cross * (s_own + s_cross) / denom,
    }
}

/// Achievable sum rate: per decoder, the capacity branch when its
/// imbalanced condition holds, otherwise the enveloped balanced rate; then
/// the minimum over decoders.
pub fn achievable_sum_rate(params: &ChannelParams, grid: &PowerGrid) -> Result<SumRateBound> {
    let conditions = classify_regime(params);
    let mut warnings = Vec::new();
    let mut enveloped = false;
    let mut per_decoder = [0.0; 2];
    for decoder in [Decoder::One, Decoder::Two] {
        per_decoder[decoder.index() as usize - 1] = if conditions.imbalanced(decoder) {
            outer_branch(params, decoder)
        } else if conditions.balanced(decoder) {
            enveloped = true;
            warnings.extend(excluded_equality_warning(params, decoder));
            balanced_envelope_value(params, decoder, grid)
        } else {
            return Err(Error::NoApplicableRegime { decoder: decoder.index() });
        };
    }
    let mixed = conditions.imbalanced_dec1 != conditions.imbalanced_dec2;
    if mixed && (params.p1() < 1.0 || params.p2() < 1.0) {
        warnings.push("mixed regime evaluated with a transmit power below 1".to_string());
    }
    let (value, limiting_decoder) = if per_decoder[0] <= per_decoder[1] {
        (per_decoder[0], Decoder::One)
    } else {
        (per_decoder[1], Decoder::Two)
    };
    Ok(SumRateBound {
        value,
        kind: if enveloped { BoundKind::AchievableEnveloped } else { BoundKind::Capacity },
        limiting_decoder,
        conditions,
        warnings,
    })
}

/// Outer bound minus enveloped achievable rate on the symmetric channel
/// `P1 = P2 = P`, `N1 = N2 = N`, `a12 = a21 = a`. Requires `a ≥ 1` and
/// `N ≥ (√a − 1)·P`.
pub fn gap_symmetric(p: f64, n: f64, a: f64, grid: &PowerGrid) -> Result<f64> {
    for (field, value) in [("P", p), ("N", n)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveValue { field, value });
        }
    }
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::ConditionNotMet(format!("symmetric gap needs a ≥ 1 (got {a})")));
    }
    if n < (a.sqrt() - 1.0) * p {
        return Err(Error::ConditionNotMet(format!(
            "symmetric gap needs N ≥ (√a − 1)·P (N = {n}, bound {})",
            (a.sqrt() - 1.0) * p
        )));
    }
    let outer = half_log2(1.0 + a * p / n);
    let raw = balanced_raw_value(p, a * p, n);
    let env = uce_at_power(|q1, q2| balanced_raw_value(q1, a * q2, n), p, p, grid).max(raw);
    Ok(outer - env)
}

/// Gap at `x = P/N` on the ray `N = 1`, `a = ((x+1)/x)²`, where the
/// balanced condition holds with equality.
pub fn gap_tilde(x: f64, grid: &PowerGrid) -> Result<GapRow> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::NonPositiveValue { field: "x", value: x });
    }
    let a = ((x + 1.0) / x).powi(2);
    let term_outer = half_log2(1.0 + (x + 1.0).powi(2) / x);
    let term_inner_raw = half_log2((2.0 * x * x + 3.0 * x + 1.0) / (2.0 * x + 1.0)).max(0.0);
    let env = uce_at_power(|q1, q2| balanced_raw_value(q1, a * q2, 1.0), x, x, grid);
    let term_inner_env = env.max(term_inner_raw);
    Ok(GapRow {
        x,
        term_outer,
        term_inner_raw,
        term_inner_env,
        gap: term_outer - term_inner_env,
    })
}

/// `Γ = ½log₂(2πe·P1·P2/N1)`.
pub fn binning_gamma(params: &ChannelParams) -> f64 {
    half_log2(2.0 * PI * E * params.p1() * params.p2() / params.n1())
}

/// Equal state variance `Q*` from which the binning bound is zero:
/// `½log₂(2/Q*) + Γ = 0`.
pub fn binning_zero_threshold(params: &ChannelParams) -> f64 {
    2.0 * 2.0 * PI * E * params.p1() * params.p2() / params.n1()
}

/// `[½log₂((Q1+Q2)/(Q1·Q2)) + Γ]⁺` for Gaussian states.
pub fn binning_sum_rate_bound(
    params: &ChannelParams,
    q1: StateVariance,
    q2: StateVariance,
) -> Result<BinningBound> {
    let (Some(q1), Some(q2)) = (q1.finite(), q2.finite()) else {
        return Err(Error::UnboundedState);
    };
    for (field, value) in [("q1", q1), ("q2", q2)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveValue { field, value });
        }
    }
    let gamma = binning_gamma(params);
    let entropy_term = half_log2((q1 + q2) / (q1 * q2));
    Ok(BinningBound {
        gamma,
        entropy_term,
        value: (entropy_term + gamma).max(0.0),
    })
}
