#![allow(dead_code)]

use std::io::Write as _;
use std::path::PathBuf;

use asdgic::cli::run_command;

/// Two-sample Kolmogorov-Smirnov statistic and its asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_q(lambda))
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..200 {
        let term = sign * 2.0 * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
        sign = -sign;
    }
    sum.clamp(0.0, 1.0)
}

/// Nearest point of the lattice generated by `rows` (row convention), by
/// exhaustive enumeration of every lattice point with norm at most
/// `2‖x‖`, which contains every point at least as close as the origin.
pub fn brute_nearest(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let n = rows.len();
    let inv = invert(rows);
    let frob: f64 = inv.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let norm_x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let k = (2.0 * norm_x * frob).ceil() as i64 + 1;
    let mut best = vec![0.0; n];
    let mut best_d = f64::INFINITY;
    let mut z = vec![-k; n];
    loop {
        let p: Vec<f64> = (0..n)
            .map(|c| (0..n).map(|r| z[r] as f64 * rows[r][c]).sum())
            .collect();
        let d: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best_d {
            best_d = d;
            best = p;
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if z[i] < k {
                z[i] += 1;
                break;
            }
            z[i] = -k;
            i += 1;
        }
    }
}

/// Gauss-Jordan inverse of a small square matrix.
pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Minimal vectors of D4 (±e_i ± e_j) or of E8 (those plus the 128
/// half-integer vectors with an even number of minus signs).
pub fn root_system(dim: usize, with_half: bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; dim];
                v[i] = si;
                v[j] = sj;
                out.push(v);
            }
        }
    }
    if with_half {
        for mask in 0u32..(1 << dim) {
            if mask.count_ones() % 2 == 0 {
                out.push((0..dim).map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 }).collect());
            }
        }
    }
    out
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// Writes a scenario file under the system temp dir and returns its path.
pub fn scenario_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("asdgic-{}-{name}.toml", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path
}

pub fn scenario_text(p1: f64, p2: f64, n1: f64, n2: f64, a12: f64, a21: f64, q: &str) -> String {
    format!("p1 = {p1:?}\np2 = {p2:?}\nn1 = {n1:?}\nn2 = {n2:?}\na12 = {a12:?}\na21 = {a21:?}\nq1 = {q}\nq2 = {q}\n")
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("asdgic").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Parses CSV output with a header row into (header, rows).
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn half_log2(v: f64) -> f64 {
    0.5 * v.log2()
}
