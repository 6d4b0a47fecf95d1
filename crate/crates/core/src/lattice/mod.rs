//! Lattice primitives: closest-point quantization, modulo-Λ reduction,
//! dither sampling and second moments.
//!
//! Points are row vectors: a lattice with generator rows `b₁ … bₙ` is
//! `{ z·B : z ∈ ℤⁿ }`. Four structured families have dedicated decoders
//! (ℤⁿ, hexagonal A₂, D₄, E₈); anything else goes through exhaustive
//! enumeration, which is only offered up to [`GENERIC_MAX_DIM`].

mod decode;
mod linalg;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted for generic lattices.
pub const GENERIC_MAX_DIM: usize = 4;

/// Dither samples used to estimate σ² when a non-cubic lattice is built.
pub const DEFAULT_MOMENT_SAMPLES: u64 = 1 << 17;

const MOMENT_SEED: u64 = 0x005e_ed0f_1a77;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    IntegerCubic,
    Hexagonal,
    D4,
    E8,
    Generic,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::IntegerCubic => "integer-cubic",
            Family::Hexagonal => "hexagonal",
            Family::D4 => "d4",
            Family::E8 => "e8",
            Family::Generic => "generic",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Family> {
        match tag.to_ascii_lowercase().as_str() {
            "integer-cubic" | "cubic" | "z" => Ok(Family::IntegerCubic),
            "hexagonal" | "hex" | "a2" => Ok(Family::Hexagonal),
            "d4" => Ok(Family::D4),
            "e8" => Ok(Family::E8),
            other => Err(Error::InvalidInput(format!("unknown lattice family {other:?}"))),
        }
    }

    /// Builds the unit-scale member of a structured family.
    pub fn build(self, dim: usize) -> Result<Lattice> {
        match self {
            Family::IntegerCubic => Lattice::integer_cubic(dim),
            Family::Hexagonal if dim == 2 => Ok(Lattice::hexagonal()),
            Family::D4 if dim == 4 => Ok(Lattice::d4()),
            Family::E8 if dim == 8 => Ok(Lattice::e8()),
            _ => Err(Error::UnsupportedDimension { family: self.tag(), dim }),
        }
    }

    /// Natural dimension of the family, if it has only one.
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            Family::Hexagonal => Some(2),
            Family::D4 => Some(4),
            Family::E8 => Some(8),
            Family::IntegerCubic | Family::Generic => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Per-dimension second moment σ²(Λ). `samples == None` means exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMoment {
    pub value: f64,
    pub std_error: f64,
    pub samples: Option<u64>,
}

impl SecondMoment {
    pub fn exact(value: f64) -> Self {
        SecondMoment {
            value,
            std_error: 0.0,
            samples: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.samples.is_none()
    }

    fn scaled(self, c2: f64) -> Self {
        SecondMoment {
            value: self.value * c2,
            std_error: self.std_error * c2,
            samples: self.samples,
        }
    }
}

/// An immutable full-rank lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    family: Family,
    dim: usize,
    scale: f64,
    /// Row-major generator, rows are basis vectors; already scaled.
    basis: Vec<f64>,
    /// Inverse of `basis`, used by the generic enumerator.
    inverse: Vec<f64>,
    /// Euclidean norms of the columns of `inverse`.
    inverse_col_norms: Vec<f64>,
    volume: f64,
    sigma2: SecondMoment,
}

impl Lattice {
    pub fn integer_cubic(dim: usize) -> Result<Lattice> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension { family: "integer-cubic", dim });
        }
        let mut basis = vec![0.0; dim * dim];
        for i in 0..dim {
            basis[i * dim + i] = 1.0;
        }
        Ok(Lattice::assemble(
            Family::IntegerCubic,
            dim,
            basis,
            1.0,
            Some(SecondMoment::exact(1.0 / 12.0)),
        ))
    }

    /// Hexagonal lattice with unit minimum distance.
    pub fn hexagonal() -> Lattice {
        let basis = vec![1.0, 0.0, 0.5, 0.5 * decode::SQRT3];
        Lattice::assemble(Family::Hexagonal, 2, basis, 0.5 * decode::SQRT3, None)
    }

    /// D₄ checkerboard lattice, volume 2.
    pub fn d4() -> Lattice {
        #[rustfmt::skip]
        let basis = vec![
            2.0, 0.0, 0.0, 0.0,
            1.0, 1.0, 0.0, 0.0,
            1.0, 0.0, 1.0, 0.0,
            1.0, 0.0, 0.0, 1.0,
        ];
        Lattice::assemble(Family::D4, 4, basis, 2.0, None)
    }

    /// E₈ = D₈ ∪ (D₈ + ½), unit volume.
    pub fn e8() -> Lattice {
        let mut basis = vec![0.0; 64];
        basis[0] = 2.0;
        for r in 1..7 {
            basis[r * 8 + r - 1] = -1.0;
            basis[r * 8 + r] = 1.0;
        }
        for c in 0..8 {
            basis[7 * 8 + c] = 0.5;
        }
        Lattice::assemble(Family::E8, 8, basis, 1.0, None)
    }

    /// Arbitrary full-rank lattice from generator rows, decoded by
    /// enumeration.
    pub fn generic(rows: &[Vec<f64>]) -> Result<Lattice> {
        let dim = rows.len();
        if dim == 0 || dim > GENERIC_MAX_DIM {
            return Err(Error::UnsupportedDimension { family: "generic", dim });
        }
        let mut basis = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            if let Some(&v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field: "generator", value: v });
            }
            basis.extend_from_slice(row);
        }
        let det = linalg::determinant(&basis, dim);
        if det.abs() < 1e-12 {
            return Err(Error::SingularGenerator);
        }
        Ok(Lattice::assemble(Family::Generic, dim, basis, det.abs(), None))
    }

    fn assemble(
        family: Family,
        dim: usize,
        basis: Vec<f64>,
        volume: f64,
        sigma2: Option<SecondMoment>,
    ) -> Lattice {
        let inverse = linalg::inverse(&basis, dim).expect("basis is full rank");
        let inverse_col_norms = (0..dim)
            .map(|j| (0..dim).map(|i| inverse[i * dim + j].powi(2)).sum::<f64>().sqrt())
            .collect();
        let mut lat = Lattice {
            family,
            dim,
            scale: 1.0,
            basis,
            inverse,
            inverse_col_norms,
            volume,
            sigma2: SecondMoment::exact(f64::NAN),
        };
        lat.sigma2 = match sigma2 {
            Some(m) => m,
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(MOMENT_SEED);
                lat.estimate_second_moment(DEFAULT_MOMENT_SAMPLES, &mut rng)
            }
        };
        lat
    }

    /// Re-estimates σ² with `samples` dither draws from `seed`. A no-op for
    /// the integer-cubic family, whose σ² is exact.
    pub fn with_moment_samples(mut self, samples: u64, seed: u64) -> Lattice {
        if !self.sigma2.is_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            self.sigma2 = self.estimate_second_moment(samples, &mut rng);
        }
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    /// Scale relative to the family's unit member (1 for generic lattices
    /// unless rescaled).
    pub fn scale_factor(&self) -> f64 {
        self.scale
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn second_moment(&self) -> SecondMoment {
        self.sigma2
    }
    /// Generator row `i`.
    pub fn basis_row(&self, i: usize) -> &[f64] {
        &self.basis[i * self.dim..(i + 1) * self.dim]
    }

    /// Normalized second moment G(Λ) = σ²(Λ) / V^(2/n).
    pub fn nsm(&self) -> f64 {
        self.sigma2.value / self.volume.powf(2.0 / self.dim as f64)
    }

    /// ½·log₂(2πe·G(Λ)): rate lost to a finite-dimensional shaping region.
    pub fn shaping_loss_bits(&self) -> f64 {
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * self.nsm()).log2()
    }

    /// The lattice `c·Λ`.
    pub fn scale(&self, c: f64) -> Result<Lattice> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::NonPositiveScale(c));
        }
        if c == 1.0 {
            return Ok(self.clone());
        }
        let basis: Vec<f64> = self.basis.iter().map(|b| b * c).collect();
        let inverse: Vec<f64> = self.inverse.iter().map(|b| b / c).collect();
        Ok(Lattice {
            family: self.family,
            dim: self.dim,
            scale: self.scale * c,
            inverse_col_norms: self.inverse_col_norms.iter().map(|v| v / c).collect(),
            basis,
            inverse,
            volume: self.volume * c.powi(self.dim as i32),
            sigma2: self.sigma2.scaled(c * c),
        })
    }

    /// The member of this lattice's scaling family whose σ² equals `target`.
    pub fn with_second_moment(&self, target: f64) -> Result<Lattice> {
        if !(target.is_finite() && target > 0.0) {
            return Err(Error::NonPositiveValue { field: "second moment", value: target });
        }
        self.scale((target / self.sigma2.value).sqrt())
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if let Some(&v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "x", value: v });
        }
        Ok(())
    }

    /// Closest lattice point Q_Λ(x).
    pub fn nearest_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let mut out = vec![0.0; self.dim];
        self.nearest_point_into(x, &mut out);
        Ok(out)
    }

    /// `x mod Λ = x − Q_Λ(x)`, a point of the fundamental Voronoi cell.
    pub fn mod_lattice(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let mut out = vec![0.0; self.dim];
        self.mod_into(x, &mut out);
        Ok(out)
    }

    /// Unchecked closest-point search; `x` and `out` must have length `dim`.
    pub fn nearest_point_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        let s = self.scale;
        match self.family {
            Family::IntegerCubic => {
                for (o, &v) in out.iter_mut().zip(x) {
                    *o = (v / s).round_ties_even() * s;
                }
            }
            Family::Hexagonal | Family::D4 | Family::E8 => {
                let mut unit = [0.0; 8];
                let unit = &mut unit[..self.dim];
                for (u, &v) in unit.iter_mut().zip(x) {
                    *u = v / s;
                }
                match self.family {
                    Family::Hexagonal => decode::hexagonal(unit, out),
                    Family::D4 => decode::checkerboard(unit, out),
                    _ => decode::e8(unit, out),
                }
                for o in out.iter_mut() {
                    *o *= s;
                }
            }
            Family::Generic => self.enumerate_nearest(x, out),
        }
    }

    /// Unchecked modulo reduction; `x` and `out` must have length `dim`.
    pub fn mod_into(&self, x: &[f64], out: &mut [f64]) {
        self.nearest_point_into(x, out);
        for (o, &v) in out.iter_mut().zip(x) {
            *o = v - *o;
        }
    }

    /// In-place modulo reduction.
    pub fn reduce(&self, x: &mut [f64]) {
        let mut q = [0.0; 8];
        if self.dim <= 8 {
            let q = &mut q[..self.dim];
            self.nearest_point_into(x, q);
            for (v, p) in x.iter_mut().zip(q.iter()) {
                *v -= p;
            }
        } else {
            let mut q = vec![0.0; self.dim];
            self.nearest_point_into(x, &mut q);
            for (v, p) in x.iter_mut().zip(&q) {
                *v -= p;
            }
        }
    }

    // Exhaustive search over all integer coefficient vectors whose lattice
    // point can lie within the Babai distance of x. First minimizer in
    // lexicographic coefficient order wins.
    fn enumerate_nearest(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim;
        let mut coeff = [0.0; GENERIC_MAX_DIM];
        for (j, c) in coeff[..n].iter_mut().enumerate() {
            *c = (0..n).map(|i| x[i] * self.inverse[i * n + j]).sum();
        }
        let mut babai = [0.0; GENERIC_MAX_DIM];
        let z: Vec<f64> = coeff[..n].iter().map(|c| c.round()).collect();
        self.combine(&z, &mut babai[..n]);
        let radius = decode::dist2(x, &babai[..n]).sqrt() * (1.0 + 1e-9) + 1e-12;

        let mut lo = [0i64; GENERIC_MAX_DIM];
        let mut hi = [0i64; GENERIC_MAX_DIM];
        for j in 0..n {
            let r = radius * self.inverse_col_norms[j];
            lo[j] = (coeff[j] - r).ceil() as i64;
            hi[j] = (coeff[j] + r).floor() as i64;
        }
        let mut cur = lo;
        let mut best = f64::INFINITY;
        let mut point = [0.0; GENERIC_MAX_DIM];
        let mut zf = [0.0; GENERIC_MAX_DIM];
        'outer: loop {
            for j in 0..n {
                zf[j] = cur[j] as f64;
            }
            self.combine(&zf[..n], &mut point[..n]);
            let d = decode::dist2(x, &point[..n]);
            if d < best {
                best = d;
                out.copy_from_slice(&point[..n]);
            }
            // odometer, last coordinate fastest
            let mut j = n;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    cur[j + 1..n].copy_from_slice(&lo[j + 1..n]);
                    break;
                }
            }
        }
    }

    fn combine(&self, z: &[f64], out: &mut [f64]) {
        let n = self.dim;
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..n).map(|i| z[i] * self.basis[i * n + c]).sum();
        }
    }

    /// Integer coefficients `z` with `x = z·B`, if `x` is a lattice point
    /// (coefficients within `tol` of integers).
    pub fn coefficients(&self, x: &[f64], tol: f64) -> Option<Vec<i64>> {
        let n = self.dim;
        let mut z = Vec::with_capacity(n);
        for j in 0..n {
            let c: f64 = (0..n).map(|i| x[i] * self.inverse[i * n + j]).sum();
            if (c - c.round()).abs() > tol {
                return None;
            }
            z.push(c.round() as i64);
        }
        Some(z)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim && self.coefficients(x, tol).is_some()
    }

    /// A dither `d = (u·B) mod Λ` with `u` uniform on `[0,1)ⁿ`; uniform over
    /// the fundamental Voronoi cell.
    pub fn sample_dither<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.sample_dither_into(rng, &mut out);
        out
    }

    pub fn sample_dither_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let n = self.dim;
        if n <= 8 {
            let mut u = [0.0; 8];
            for v in u[..n].iter_mut() {
                *v = rng.random::<f64>();
            }
            self.dither_from_unit(&u[..n], out);
        } else {
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            self.dither_from_unit(&u, out);
        }
    }

    /// `(u·B) mod Λ`. Uniform over 𝒱 when `u` is uniform on `[0,1)ⁿ`.
    pub fn dither_from_unit(&self, u: &[f64], out: &mut [f64]) {
        self.combine(u, out);
        self.reduce(out);
    }

    /// σ²(Λ) estimated from `samples` dithers as `(1/n)·mean ‖d‖²`, with its
    /// standard error. Exact for the integer-cubic family.
    pub fn estimate_second_moment<R: Rng + ?Sized>(&self, samples: u64, rng: &mut R) -> SecondMoment {
        if self.family == Family::IntegerCubic {
            return SecondMoment::exact(self.scale * self.scale / 12.0);
        }
        let n = self.dim as f64;
        let mut d = vec![0.0; self.dim];
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..samples {
            self.sample_dither_into(rng, &mut d);
            let e = d.iter().map(|v| v * v).sum::<f64>() / n;
            sum += e;
            sum2 += e * e;
        }
        let m = samples as f64;
        let mean = sum / m;
        let var = (sum2 / m - mean * mean).max(0.0);
        SecondMoment {
            value: mean,
            std_error: (var / (m - 1.0).max(1.0)).sqrt(),
            samples: Some(samples),
        }
    }
}
