// One decoder-1 transceiver chain in coefficient form.
//
// Every scheme fits the same template:
//   X1 = [m1·V1 + s1·D1 − b1·S1] mod Λ1
//   X2 = [m2·V2 + s2·D2 − b2·S2] mod Λ2
//   Y1 = X1 + g·X2 + S1 + g·S2 + Z1,            g = √a12
//   Yd = [c·Y1 + e1·D1 + e2·D2] mod Λout
// and the alignment identity states
//   Yd = [gain·V + k1·X1 + k2·X2 + kz·Z1] mod Λout.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

use super::{sample_state_into, Scheme, StateMode};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Encoder {
    pub message: f64,
    pub dither: f64,
    pub state: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Carrier {
    User1,
    User2,
}

#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub lat1: Lattice,
    pub lat2: Lattice,
    pub out: Lattice,
    pub enc1: Encoder,
    pub enc2: Encoder,
    pub g: f64,
    pub c: f64,
    pub e1: f64,
    pub e2: f64,
    pub gain: f64,
    pub k1: f64,
    pub k2: f64,
    pub kz: f64,
    pub carrier: Carrier,
    pub noise_sd: f64,
    pub alphas: Vec<f64>,
}

impl Chain {
    /// `lat2` is the interferer's shaping lattice; the others are derived
    /// from it. `alphas` is `[α]` for the imbalanced schemes and `[α1, α2]`
    /// for the balanced ones.
    pub fn new(scheme: Scheme, lat2: Lattice, a12: f64, n1: f64, alphas: &[f64]) -> Result<Chain> {
        if let Some(&a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidInput(format!("coefficients must be positive (got {a})")));
        }
        let g = a12.sqrt();
        let violated = |e: Error| Error::LatticeRelationViolated(e.to_string());
        let lat3 = lat2.scale(g).map_err(violated)?;
        let noise_sd = n1.sqrt();
        let enc = |message, dither, state| Encoder { message, dither, state };

        let chain = match scheme {
            Scheme::ImbalancedCrossCorner | Scheme::ImbalancedOwnCorner => {
                let &[alpha] = alphas else {
                    return Err(Error::InvalidInput("imbalanced schemes take one coefficient".into()));
                };
                let lat1 = lat3.scale(1.0 / alpha).map_err(violated)?;
                let cross = scheme == Scheme::ImbalancedCrossCorner;
                Chain {
                    enc1: if cross { enc(0.0, -1.0, 1.0) } else { enc(1.0, 0.0, 1.0) },
                    enc2: if cross { enc(1.0, 0.0, alpha) } else { enc(0.0, -1.0, alpha) },
                    c: alpha,
                    e1: if cross { alpha } else { 0.0 },
                    e2: if cross { 0.0 } else { g },
                    gain: if cross { g } else { alpha },
                    k1: 0.0,
                    k2: (alpha - 1.0) * g,
                    kz: alpha,
                    carrier: if cross { Carrier::User2 } else { Carrier::User1 },
                    out: lat3,
                    lat1,
                    lat2,
                    g,
                    noise_sd,
                    alphas: alphas.to_vec(),
                }
            }
            Scheme::BalancedCrossCorner | Scheme::BalancedOwnCorner | Scheme::BalancedOwnCornerRescaled => {
                let &[a1, a2] = alphas else {
                    return Err(Error::InvalidInput("balanced schemes take two coefficients".into()));
                };
                let r = a2 / a1;
                let lat1 = lat3.scale(a1 / a2).map_err(violated)?;
                let (enc1, enc2) = match scheme {
                    Scheme::BalancedCrossCorner => (enc(0.0, 1.0, a1), enc(1.0, -1.0, a2)),
                    _ => (enc(1.0, 1.0, a1), enc(0.0, 1.0, a2)),
                };
                let base = Chain {
                    enc1,
                    enc2,
                    c: a2,
                    e1: -r,
                    e2: g,
                    gain: g,
                    k1: -(1.0 - a1) * r,
                    k2: g * (a2 - 1.0),
                    kz: a2,
                    carrier: Carrier::User2,
                    out: lat3,
                    lat1,
                    lat2,
                    g,
                    noise_sd,
                    alphas: alphas.to_vec(),
                };
                match scheme {
                    Scheme::BalancedCrossCorner => base,
                    Scheme::BalancedOwnCorner => Chain {
                        c: a1,
                        e1: -1.0,
                        e2: -g / r,
                        gain: 1.0,
                        k1: a1 - 1.0,
                        k2: -g * (1.0 - a2) / r,
                        kz: a1,
                        carrier: Carrier::User1,
                        out: base.lat1.clone(),
                        ..base
                    },
                    _ => Chain {
                        e2: -g,
                        gain: r,
                        carrier: Carrier::User1,
                        ..base
                    },
                }
            }
        };
        Ok(chain)
    }

    pub fn dim(&self) -> usize {
        self.lat1.dim()
    }

    /// Lattice carrying the decoded message.
    pub fn message_lattice(&self) -> &Lattice {
        match self.carrier {
            Carrier::User1 => &self.lat1,
            Carrier::User2 => &self.lat2,
        }
    }

    /// Closed-form second moment of the pre-modulo effective noise, from the
    /// lattice second moments and the noise variance.
    pub fn predicted_pre_mod(&self) -> f64 {
        self.k1 * self.k1 * self.lat1.second_moment().value
            + self.k2 * self.k2 * self.lat2.second_moment().value
            + self.kz * self.kz * self.noise_sd * self.noise_sd
    }

    /// Draws the random inputs of one trial in a fixed order: S1, S2, D1,
    /// D2, V, Z1. Dithers a scheme does not use are zero and consume no
    /// randomness. `V` is left to the caller when `message` is supplied.
    pub fn draw<R: Rng>(&self, rng: &mut R, state: &StateMode, w: &mut Work, message: Option<&[f64]>) {
        sample_state_into(state, 1, &self.lat1, rng, &mut w.s1);
        sample_state_into(state, 2, &self.lat2, rng, &mut w.s2);
        draw_dither(self.enc1.dither, &self.lat1, rng, &mut w.d1);
        draw_dither(self.enc2.dither, &self.lat2, rng, &mut w.d2);
        match message {
            Some(v) => w.v.copy_from_slice(v),
            None => self.message_lattice().sample_dither_into(rng, &mut w.v),
        }
        for z in w.z.iter_mut() {
            let e: f64 = rng.sample(StandardNormal);
            *z = self.noise_sd * e;
        }
    }

    /// Runs encoders, channel and receiver on the inputs held in `w`.
    pub fn run(&self, w: &mut Work) {
        let (m1, m2) = match self.carrier {
            Carrier::User1 => (self.enc1.message, 0.0),
            Carrier::User2 => (0.0, self.enc2.message),
        };
        encode(&self.enc1, m1, &self.lat1, &w.v, &w.d1, &w.s1, &mut w.x1);
        encode(&self.enc2, m2, &self.lat2, &w.v, &w.d2, &w.s2, &mut w.x2);
        let g = self.g;
        for i in 0..w.y.len() {
            w.y[i] = w.x1[i] + g * w.x2[i] + w.s1[i] + g * w.s2[i] + w.z[i];
            w.yd[i] = self.c * w.y[i] + self.e1 * w.d1[i] + self.e2 * w.d2[i];
            w.pre[i] = self.k1 * w.x1[i] + self.k2 * w.x2[i] + self.kz * w.z[i];
            w.post[i] = w.pre[i];
            w.reduced[i] = self.gain * w.v[i] + w.pre[i];
        }
        self.out.reduce(&mut w.yd);
        self.out.reduce(&mut w.post);
        self.out.reduce(&mut w.reduced);
    }

    /// `‖(Yd − reduced) mod Λout‖∞ / (1 + ‖Yd‖∞)`.
    pub fn residual(&self, w: &mut Work) -> f64 {
        for i in 0..w.scratch.len() {
            w.scratch[i] = w.yd[i] - w.reduced[i];
        }
        self.out.reduce(&mut w.scratch);
        let diff = w.scratch.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let norm = w.yd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        diff / (1.0 + norm)
    }

    /// Replaces dithers (or the message, for undithered encoders) so that
    /// both encoders output the given cell points `w1`, `w2`. The
    /// replacements are uniform and independent of the rest whenever `w1`,
    /// `w2` are.
    pub fn couple(&self, w: &mut Work, w1: &[f64], w2: &[f64]) {
        let (m1, m2) = match self.carrier {
            Carrier::User1 => (1.0, 0.0),
            Carrier::User2 => (0.0, 1.0),
        };
        couple_one(&self.enc1, m1, &self.lat1, w1, &w.s1, &mut w.v, &mut w.d1);
        couple_one(&self.enc2, m2, &self.lat2, w2, &w.s2, &mut w.v, &mut w.d2);
    }
}

fn draw_dither<R: Rng>(sign: f64, lat: &Lattice, rng: &mut R, out: &mut [f64]) {
    if sign == 0.0 {
        out.fill(0.0);
    } else {
        lat.sample_dither_into(rng, out);
    }
}

fn encode(enc: &Encoder, m: f64, lat: &Lattice, v: &[f64], d: &[f64], s: &[f64], x: &mut [f64]) {
    for i in 0..x.len() {
        x[i] = m * v[i] + enc.dither * d[i] - enc.state * s[i];
    }
    lat.reduce(x);
}

fn couple_one(enc: &Encoder, m: f64, lat: &Lattice, target: &[f64], s: &[f64], v: &mut [f64], d: &mut [f64]) {
    if enc.dither != 0.0 {
        for i in 0..d.len() {
            d[i] = target[i] - m * enc.message * v[i] + enc.state * s[i];
        }
        lat.reduce(d);
        for x in d.iter_mut() {
            *x *= enc.dither;
        }
    } else {
        for i in 0..v.len() {
            v[i] = target[i] + enc.state * s[i];
        }
        lat.reduce(v);
    }
}

/// Per-trial scratch vectors.
#[derive(Debug, Clone)]
pub(crate) struct Work {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub v: Vec<f64>,
    pub z: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub y: Vec<f64>,
    pub yd: Vec<f64>,
    pub pre: Vec<f64>,
    pub post: Vec<f64>,
    pub reduced: Vec<f64>,
    pub scratch: Vec<f64>,
}

impl Work {
    pub fn new(n: usize) -> Work {
        let z = vec![0.0; n];
        Work {
            s1: z.clone(),
            s2: z.clone(),
            d1: z.clone(),
            d2: z.clone(),
            v: z.clone(),
            x1: z.clone(),
            x2: z.clone(),
            y: z.clone(),
            yd: z.clone(),
            pre: z.clone(),
            post: z.clone(),
            reduced: z.clone(),
            scratch: z.clone(),
            z,
        }
    }
}
