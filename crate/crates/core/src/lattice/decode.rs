// Closest-point decoders for the unscaled base lattices. All of them write the
// nearest lattice point of `x` into `out` and break ties deterministically.

pub(crate) const SQRT3: f64 = 1.732_050_807_568_877_2;

/// ℤⁿ: per-coordinate rounding, ties to even.
pub(crate) fn cubic(x: &[f64], out: &mut [f64]) {
    for (o, &v) in out.iter_mut().zip(x) {
        *o = v.round_ties_even();
    }
}

/// Dₙ = {z ∈ ℤⁿ : Σz even}. Round every coordinate; if the parity is wrong,
/// re-round the coordinate with the largest rounding error the other way
/// (lowest index on ties).
pub(crate) fn checkerboard(x: &[f64], out: &mut [f64]) {
    cubic(x, out);
    let sum: f64 = out.iter().sum();
    if (sum as i64).rem_euclid(2) == 0 {
        return;
    }
    let mut worst = 0;
    let mut worst_err = -1.0;
    for (i, (&v, &r)) in x.iter().zip(out.iter()).enumerate() {
        let err = (v - r).abs();
        if err > worst_err {
            worst_err = err;
            worst = i;
        }
    }
    out[worst] += if x[worst] >= out[worst] { 1.0 } else { -1.0 };
}

/// E₈ = D₈ ∪ (D₈ + ½·1). D₈ coset wins ties.
pub(crate) fn e8(x: &[f64], out: &mut [f64]) {
    let mut shifted = [0.0; 8];
    for (s, &v) in shifted.iter_mut().zip(x) {
        *s = v - 0.5;
    }
    let mut odd = [0.0; 8];
    checkerboard(&shifted, &mut odd);
    for o in odd.iter_mut() {
        *o += 0.5;
    }
    checkerboard(x, out);
    if dist2(x, &odd) < dist2(x, out) {
        out.copy_from_slice(&odd);
    }
}

/// Hexagonal A₂ with unit minimum distance, generated by (1, 0) and
/// (½, √3/2): the union of the rectangular lattice ℤ × √3ℤ and its shift by
/// (½, √3/2). The unshifted coset wins ties.
pub(crate) fn hexagonal(x: &[f64], out: &mut [f64]) {
    let even = [x[0].round_ties_even(), (x[1] / SQRT3).round_ties_even() * SQRT3];
    let odd = [
        (x[0] - 0.5).round_ties_even() + 0.5,
        ((x[1] - 0.5 * SQRT3) / SQRT3).round_ties_even() * SQRT3 + 0.5 * SQRT3,
    ];
    if dist2(x, &odd) < dist2(x, &even) {
        out.copy_from_slice(&odd);
    } else {
        out.copy_from_slice(&even);
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}
