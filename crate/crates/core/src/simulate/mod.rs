//! Monte-Carlo execution of the dithered modulo-lattice transceiver chains.
//!
//! Every chain is simulated from decoder 1's point of view; a decoder-2
//! run mirrors the channel first. Trial `t` draws from its own ChaCha8
//! stream `(seed, t)`, trials are grouped into fixed chunks of
//! [`CHUNK_TRIALS`], and chunk partial sums are combined in chunk order, so
//! results do not depend on how many worker threads ran the chunks.

mod chain;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{mmse_alpha_imbalanced, mmse_alphas_balanced, MmseCoeffs};
use crate::error::{Error, Result};
use crate::lattice::{Family, Lattice};
use crate::model::{ChannelParams, Decoder};

use chain::{Chain, Work};

/// Trials per aggregation chunk.
pub const CHUNK_TRIALS: u64 = 4096;

/// Voronoi-uniform state scale used when the channel declares unbounded
/// state variance.
pub const DEFAULT_STATE_SCALE: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Decoder 1 decodes the interferer's message; imbalanced regime.
    #[serde(rename = "thm2-corner-R2")]
    ImbalancedCrossCorner,
    /// Decoder 1 decodes its own message; imbalanced regime.
    #[serde(rename = "thm2-corner-R1")]
    ImbalancedOwnCorner,
    /// Decoder 1 decodes the interferer's message; balanced regime.
    #[serde(rename = "thm3-corner-R2")]
    BalancedCrossCorner,
    /// Own-message corner, balanced regime, output on the own lattice.
    #[serde(rename = "thm3-corner-R1-appendix2")]
    BalancedOwnCorner,
    /// Own-message corner, balanced regime, output on the aligned lattice.
    #[serde(rename = "thm3-corner-R1-appendix2-variant2")]
    BalancedOwnCornerRescaled,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::ImbalancedCrossCorner,
        Scheme::ImbalancedOwnCorner,
        Scheme::BalancedCrossCorner,
        Scheme::BalancedOwnCorner,
        Scheme::BalancedOwnCornerRescaled,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::ImbalancedCrossCorner => "thm2-corner-R2",
            Scheme::ImbalancedOwnCorner => "thm2-corner-R1",
            Scheme::BalancedCrossCorner => "thm3-corner-R2",
            Scheme::BalancedOwnCorner => "thm3-corner-R1-appendix2",
            Scheme::BalancedOwnCornerRescaled => "thm3-corner-R1-appendix2-variant2",
        }
    }

    pub fn is_balanced(self) -> bool {
        !matches!(self, Scheme::ImbalancedCrossCorner | Scheme::ImbalancedOwnCorner)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scheme> {
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedScheme(s.to_string()))
    }
}

/// How the interference states are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum StateMode {
    /// iid N(0, Qi) per dimension.
    Gaussian { q1: f64, q2: f64 },
    /// Uniform over `scale·𝒱(Λi)` for user i.
    VoronoiUniform { scale: f64 },
}

impl StateMode {
    /// Gaussian with the channel's variances when both are finite,
    /// otherwise Voronoi-uniform at [`DEFAULT_STATE_SCALE`].
    pub fn for_params(params: &ChannelParams) -> StateMode {
        match (params.q1().finite(), params.q2().finite()) {
            (Some(q1), Some(q2)) => StateMode::Gaussian { q1, q2 },
            _ => StateMode::VoronoiUniform { scale: DEFAULT_STATE_SCALE },
        }
    }

    fn mirrored(self) -> StateMode {
        match self {
            StateMode::Gaussian { q1, q2 } => StateMode::Gaussian { q1: q2, q2: q1 },
            other => other,
        }
    }

    fn validate(&self) -> Result<()> {
        let vals: &[(&'static str, f64)] = match self {
            StateMode::Gaussian { q1, q2 } => &[("q1", *q1), ("q2", *q2)],
            StateMode::VoronoiUniform { scale } => &[("state scale", *scale)],
        };
        for &(field, value) in vals {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveValue { field, value });
            }
        }
        Ok(())
    }
}

/// Draws state `S_user` (user 1 or 2); `lat` is that user's shaping lattice.
pub fn sample_state<R: Rng>(mode: &StateMode, user: u8, lat: &Lattice, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; lat.dim()];
    sample_state_into(mode, user, lat, rng, &mut out);
    out
}

pub(crate) fn sample_state_into<R: Rng>(mode: &StateMode, user: u8, lat: &Lattice, rng: &mut R, out: &mut [f64]) {
    match *mode {
        StateMode::Gaussian { q1, q2 } => {
            let sd = if user == 1 { q1 } else { q2 }.sqrt();
            for v in out.iter_mut() {
                let e: f64 = rng.sample(StandardNormal);
                *v = sd * e;
            }
        }
        StateMode::VoronoiUniform { scale } => {
            lat.sample_dither_into(rng, out);
            for v in out.iter_mut() {
                *v *= scale;
            }
        }
    }
}

/// Receiver coefficient selection.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum AlphaChoice {
    /// Closed-form MMSE coefficients.
    #[default]
    Mmse,
    /// α for imbalanced schemes; α2 for balanced ones, with α1 slaved by
    /// `(α2/α1)² = a12·P2/P1`.
    Single(f64),
    /// Explicit `(α1, α2)`; balanced schemes only.
    Pair(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub decoder: Decoder,
    pub family: Family,
    pub dim: usize,
    /// Scale of the interferer's shaping lattice relative to the family's
    /// unit member. `None` sets its second moment to the interferer's power.
    pub lattice_scale: Option<f64>,
    pub alpha: AlphaChoice,
    pub trials: u64,
    pub seed: u64,
    pub state: StateMode,
}

impl SchemeSpec {
    pub fn new(scheme: Scheme, params: &ChannelParams) -> SchemeSpec {
        SchemeSpec {
            scheme,
            decoder: Decoder::One,
            family: Family::IntegerCubic,
            dim: 1,
            lattice_scale: None,
            alpha: AlphaChoice::Mmse,
            trials: 10_000,
            seed: 0,
            state: StateMode::for_params(params),
        }
    }
}

/// Every vector of one trial, in decoder 1's orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub v: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub z1: Vec<f64>,
    pub y1: Vec<f64>,
    pub yd1: Vec<f64>,
    pub zeff: Vec<f64>,
    pub reduced_form: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub x1_power: f64,
    pub x1_power_se: f64,
    pub x2_power: f64,
    pub x2_power_se: f64,
    /// Second moments of the two shaping lattices (expected powers).
    pub lattice1_sigma2: f64,
    pub lattice2_sigma2: f64,
    pub zeff_pre_var: f64,
    pub zeff_pre_se: f64,
    pub zeff_post_var: f64,
    pub zeff_post_se: f64,
    pub predicted_pre_var: f64,
    pub max_alignment_residual: f64,
    pub alpha: Vec<f64>,
    pub ser: Option<f64>,
    pub ser_se: Option<f64>,
    pub trials: u64,
    pub shaping_loss_bits: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveNoise {
    pub pre_mod_var: f64,
    pub pre_mod_se: f64,
    pub post_mod_var: f64,
    pub post_mod_se: f64,
    pub predicted_pre_mod: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweep {
    /// Swept coefficient: α, or α2 for balanced schemes.
    pub grid: Vec<f64>,
    pub pre_mod_var: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub argmin_index: usize,
    pub argmin: f64,
    /// The closed-form MMSE value of the swept coefficient.
    pub closed_form: f64,
}

impl AlphaSweep {
    /// Largest spacing between neighbouring grid points around the argmin.
    pub fn local_step(&self) -> f64 {
        let i = self.argmin_index;
        let left = if i > 0 { self.grid[i] - self.grid[i - 1] } else { 0.0 };
        let right = if i + 1 < self.grid.len() { self.grid[i + 1] - self.grid[i] } else { 0.0 };
        left.max(right)
    }
}

/// `count` evenly spaced points `hi·i/count`, `i = 1..=count`.
pub fn alpha_grid(count: usize, hi: f64) -> Vec<f64> {
    (1..=count).map(|i| hi * i as f64 / count as f64).collect()
}

fn resolve_alphas(params: &ChannelParams, scheme: Scheme, choice: AlphaChoice) -> Result<Vec<f64>> {
    let slave = |a2: f64| a2 * (params.p1() / (params.a12() * params.p2())).sqrt();
    match (scheme.is_balanced(), choice) {
        (false, AlphaChoice::Mmse) => match mmse_alpha_imbalanced(params, Decoder::One) {
            MmseCoeffs::Single { alpha, .. } => Ok(vec![alpha]),
            MmseCoeffs::Pair { .. } => unreachable!(),
        },
        (false, AlphaChoice::Single(a)) => Ok(vec![a]),
        (false, AlphaChoice::Pair(..)) => Err(Error::InvalidInput(format!(
            "{scheme} uses a single coefficient"
        ))),
        (true, AlphaChoice::Mmse) => match mmse_alphas_balanced(params, Decoder::One) {
            MmseCoeffs::Pair { alpha1, alpha2, .. } => Ok(vec![alpha1, alpha2]),
            MmseCoeffs::Single { .. } => unreachable!(),
        },
        (true, AlphaChoice::Single(a2)) => Ok(vec![slave(a2), a2]),
        (true, AlphaChoice::Pair(a1, a2)) => Ok(vec![a1, a2]),
    }
}

struct Prepared {
    oriented: ChannelParams,
    base: Lattice,
    lat2_scale: f64,
    chain: Chain,
    state: StateMode,
}

fn prepare(params: &ChannelParams, spec: &SchemeSpec) -> Result<Prepared> {
    if spec.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    spec.state.validate()?;
    let oriented = params.oriented(spec.decoder);
    let base = spec.family.build(spec.dim)?;
    let lat2_scale = match spec.lattice_scale {
        Some(c) => c,
        None => (oriented.p2() / base.second_moment().value).sqrt(),
    };
    let lat2 = base.scale(lat2_scale)?;
    let alphas = resolve_alphas(&oriented, spec.scheme, spec.alpha)?;
    let chain = Chain::new(spec.scheme, lat2, oriented.a12(), oriented.n1(), &alphas)?;
    let state = match spec.decoder {
        Decoder::One => spec.state,
        Decoder::Two => spec.state.mirrored(),
    };
    Ok(Prepared { oriented, base, lat2_scale, chain, state })
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `f` on each fixed chunk of `0..trials` in parallel and returns the
/// partial results in chunk order.
fn chunked<A, F>(trials: u64, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync,
{
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    (0..chunks)
        .into_par_iter()
        .map(|c| f(c * CHUNK_TRIALS..((c + 1) * CHUNK_TRIALS).min(trials)))
        .collect()
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.sum2 += v * v;
    }
    fn merge(&mut self, o: &Moments) {
        self.sum += o.sum;
        self.sum2 += o.sum2;
    }
    /// Mean and its standard error over `n` samples.
    fn stats(&self, n: u64) -> (f64, f64) {
        let m = n as f64;
        let mean = self.sum / m;
        if n < 2 {
            return (mean, 0.0);
        }
        let var = (self.sum2 / m - mean * mean).max(0.0) * m / (m - 1.0);
        (mean, (var / m).sqrt())
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    x1: Moments,
    x2: Moments,
    pre: Moments,
    post: Moments,
    max_residual: f64,
    errors: u64,
}

impl Accum {
    fn merge(&mut self, o: &Accum) {
        self.x1.merge(&o.x1);
        self.x2.merge(&o.x2);
        self.pre.merge(&o.pre);
        self.post.merge(&o.post);
        self.max_residual = self.max_residual.max(o.max_residual);
        self.errors += o.errors;
    }

    fn record(&mut self, w: &Work, residual: f64) {
        let n = w.x1.len() as f64;
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>() / n;
        self.x1.push(sq(&w.x1));
        self.x2.push(sq(&w.x2));
        self.pre.push(sq(&w.pre));
        self.post.push(sq(&w.post));
        self.max_residual = self.max_residual.max(residual);
    }
}

fn fold(parts: Vec<Accum>) -> Accum {
    let mut total = Accum::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

fn finish(prep: &Prepared, spec: &SchemeSpec, acc: &Accum, ser: Option<(f64, f64)>) -> SimResult {
    let t = spec.trials;
    let (x1, x1_se) = acc.x1.stats(t);
    let (x2, x2_se) = acc.x2.stats(t);
    let (pre, pre_se) = acc.pre.stats(t);
    let (post, post_se) = acc.post.stats(t);
    let c = &prep.chain;
    let (s1, s2) = (c.lat1.second_moment().value, c.lat2.second_moment().value);
    let mut r = SimResult {
        x1_power: x1,
        x1_power_se: x1_se,
        x2_power: x2,
        x2_power_se: x2_se,
        lattice1_sigma2: s1,
        lattice2_sigma2: s2,
        zeff_pre_var: pre,
        zeff_pre_se: pre_se,
        zeff_post_var: post,
        zeff_post_se: post_se,
        predicted_pre_var: c.predicted_pre_mod(),
        max_alignment_residual: acc.max_residual,
        alpha: c.alphas.clone(),
        ser: ser.map(|s| s.0),
        ser_se: ser.map(|s| s.1),
        trials: t,
        shaping_loss_bits: prep.base.shaping_loss_bits(),
    };
    if spec.decoder == Decoder::Two {
        std::mem::swap(&mut r.x1_power, &mut r.x2_power);
        std::mem::swap(&mut r.x1_power_se, &mut r.x2_power_se);
        std::mem::swap(&mut r.lattice1_sigma2, &mut r.lattice2_sigma2);
    }
    r
}

/// Executes the scheme's encoder equations and receiver combination for
/// every trial, alongside the reduced form of the alignment identity.
pub fn run_analog(params: &ChannelParams, spec: &SchemeSpec) -> Result<SimResult> {
    let prep = prepare(params, spec)?;
    let chain = &prep.chain;
    let parts = chunked(spec.trials, |range| {
        let mut w = Work::new(chain.dim());
        let mut acc = Accum::default();
        for t in range {
            let mut rng = trial_rng(spec.seed, t);
            chain.draw(&mut rng, &prep.state, &mut w, None);
            chain.run(&mut w);
            let res = chain.residual(&mut w);
            acc.record(&w, res);
        }
        acc
    });
    Ok(finish(&prep, spec, &fold(parts), None))
}

/// The vectors of a single trial, as [`run_analog`] would draw them.
pub fn trace_trial(params: &ChannelParams, spec: &SchemeSpec, trial: u64) -> Result<TrialTrace> {
    let prep = prepare(params, spec)?;
    let chain = &prep.chain;
    let mut w = Work::new(chain.dim());
    let mut rng = trial_rng(spec.seed, trial);
    chain.draw(&mut rng, &prep.state, &mut w, None);
    chain.run(&mut w);
    Ok(TrialTrace {
        s1: w.s1,
        s2: w.s2,
        d1: w.d1,
        d2: w.d2,
        v: w.v,
        x1: w.x1,
        x2: w.x2,
        z1: w.z,
        y1: w.y,
        yd1: w.yd,
        zeff: w.post,
        reduced_form: w.reduced,
    })
}

/// Empirical second moments of the effective noise before and after the
/// modulo reduction, with the closed-form pre-modulo prediction.
pub fn measure_effective_noise(params: &ChannelParams, spec: &SchemeSpec) -> Result<EffectiveNoise> {
    if spec.trials < 10_000 {
        return Err(Error::InvalidInput(format!(
            "effective-noise measurement needs at least 10000 trials (got {})",
            spec.trials
        )));
    }
    let r = run_analog(params, spec)?;
    Ok(EffectiveNoise {
        pre_mod_var: r.zeff_pre_var,
        pre_mod_se: r.zeff_pre_se,
        post_mod_var: r.zeff_post_var,
        post_mod_se: r.zeff_post_se,
        predicted_pre_mod: r.predicted_pre_var,
    })
}

/// Sweeps the receiver coefficient (α, or α2 with α1 slaved) over `grid`
/// and returns the point minimizing the empirical pre-modulo effective-noise
/// second moment. All grid points share one realization of the transmitted
/// signals, noise and states per trial: the dithers are chosen so that the
/// encoders output common cell points.
pub fn sweep_alpha(params: &ChannelParams, spec: &SchemeSpec, grid: &[f64]) -> Result<AlphaSweep> {
    if grid.len() < 11 {
        return Err(Error::TooFewPoints { needed: 11, got: grid.len() });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnsortedGrid);
    }
    let prep = prepare(params, spec)?;
    let oriented = &prep.oriented;
    let lat2 = prep.base.scale(prep.lat2_scale)?;
    let chains = grid
        .iter()
        .map(|&a| {
            let alphas = resolve_alphas(oriented, spec.scheme, AlphaChoice::Single(a))?;
            Chain::new(spec.scheme, lat2.clone(), oriented.a12(), oriented.n1(), &alphas)
        })
        .collect::<Result<Vec<_>>>()?;
    let closed_form = match resolve_alphas(oriented, spec.scheme, AlphaChoice::Mmse)?.as_slice() {
        [a] => *a,
        [_, a2] => *a2,
        _ => unreachable!(),
    };

    let n = spec.dim;
    let parts = chunked(spec.trials, |range| {
        let mut w = Work::new(n);
        let mut m = vec![Moments::default(); chains.len()];
        let (mut u1, mut u2) = (vec![0.0; n], vec![0.0; n]);
        let (mut w1, mut w2) = (vec![0.0; n], vec![0.0; n]);
        for t in range {
            let mut rng = trial_rng(spec.seed, t);
            // states and noise are drawn once through the first chain
            chains[0].draw(&mut rng, &prep.state, &mut w, None);
            for (a, b) in u1.iter_mut().zip(u2.iter_mut()) {
                *a = rng.random::<f64>();
                *b = rng.random::<f64>();
            }
            for (k, ch) in chains.iter().enumerate() {
                ch.lat1.dither_from_unit(&u1, &mut w1);
                ch.lat2.dither_from_unit(&u2, &mut w2);
                ch.couple(&mut w, &w1, &w2);
                ch.run(&mut w);
                m[k].push(w.pre.iter().map(|x| x * x).sum::<f64>() / n as f64);
            }
        }
        m
    });
    let mut total = vec![Moments::default(); chains.len()];
    for part in &parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    let stats: Vec<(f64, f64)> = total.iter().map(|m| m.stats(spec.trials)).collect();
    let argmin_index = stats
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .map(|(i, _)| i)
        .unwrap();
    Ok(AlphaSweep {
        grid: grid.to_vec(),
        pre_mod_var: stats.iter().map(|s| s.0).collect(),
        std_errors: stats.iter().map(|s| s.1).collect(),
        argmin_index,
        argmin: grid[argmin_index],
        closed_form,
    })
}

/// Finite-rate run with a self-similar nested integer-cubic pair: the fine
/// lattice is the message lattice divided by `2^k` per dimension. The
/// message is a uniformly chosen coset leader; the decoder quantizes the
/// receiver output to the fine lattice and reduces it modulo the message
/// lattice. `ser` is the fraction of trials with a wrong leader.
pub fn run_digital(params: &ChannelParams, spec: &SchemeSpec, k: u32) -> Result<SimResult> {
    if spec.family != Family::IntegerCubic {
        return Err(Error::UnsupportedFamily(spec.family.tag()));
    }
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidInput(format!("nesting exponent must be in 1..=20 (got {k})")));
    }
    let prep = prepare(params, spec)?;
    let chain = &prep.chain;
    let msg_lat = chain.message_lattice();
    let levels = 1i64 << k;
    let step = msg_lat.scale_factor() / levels as f64;
    let n = chain.dim();
    let parts = chunked(spec.trials, |range| {
        let mut w = Work::new(n);
        let mut acc = Accum::default();
        let mut index = vec![0i64; n];
        let mut leader = vec![0.0; n];
        for t in range {
            let mut rng = trial_rng(spec.seed, t);
            for (j, l) in index.iter_mut().zip(leader.iter_mut()) {
                *j = rng.random_range(0..levels);
                *l = *j as f64 * step;
            }
            msg_lat.reduce(&mut leader);
            chain.draw(&mut rng, &prep.state, &mut w, Some(&leader));
            chain.run(&mut w);
            let wrong = w.yd.iter().zip(&index).any(|(&y, &j)| {
                ((y / chain.gain / step).round() as i64).rem_euclid(levels) != j
            });
            if wrong {
                acc.errors += 1;
            }
            let res = chain.residual(&mut w);
            acc.record(&w, res);
        }
        acc
    });
    let acc = fold(parts);
    let ser = acc.errors as f64 / spec.trials as f64;
    let ser_se = (ser * (1.0 - ser) / spec.trials as f64).sqrt();
    Ok(finish(&prep, spec, &acc, Some((ser, ser_se))))
}

/// Symbol error rate of a decoder whose output is uniform over the
/// `2^(n·k)` leaders.
pub fn saturated_ser(dim: usize, k: u32) -> f64 {
    1.0 - 2f64.powi(-((dim as i32) * k as i32))
}
