//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's eigensolver or matrix functions.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric 2x2 as `[a11, a12, a22]`.
pub type Sym2 = [f64; 3];

fn tr2(a: Sym2) -> f64 {
    a[0] + a[2]
}

fn det2(a: Sym2) -> f64 {
    a[0] * a[2] - a[1] * a[1]
}

/// `tr(AB)` for symmetric 2x2.
fn tr_prod2(a: Sym2, b: Sym2) -> f64 {
    a[0] * b[0] + 2.0 * a[1] * b[1] + a[2] * b[2]
}

/// Squared BW distance between 2x2 PSD matrices.
///
/// `M = A^{1/2} B A^{1/2}` has `tr M = tr(AB)` and `det M = det A det B`, and
/// for a 2x2 PSD matrix `(tr M^{1/2})^2 = tr M + 2 sqrt(det M)`.
pub fn bw2_sq(a: Sym2, b: Sym2) -> f64 {
    let det = (det2(a) * det2(b)).max(0.0);
    let fid = (tr_prod2(a, b) + 2.0 * det.sqrt()).max(0.0).sqrt();
    tr2(a) + tr2(b) - 2.0 * fid
}

pub fn frechet2(x: Sym2, inputs: &[Sym2], weights: &[f64]) -> f64 {
    inputs.iter().zip(weights).map(|(&s, &w)| w * bw2_sq(x, s)).sum()
}

/// `L L^T` for `L = [[p0, 0], [p1, p2]]`.
fn from_chol(p: [f64; 3]) -> Sym2 {
    [p[0] * p[0], p[0] * p[1], p[1] * p[1] + p[2] * p[2]]
}

/// Minimizes the Frechet functional over 2x2 PSD matrices: a coarse grid on
/// Cholesky factors followed by a shrinking compass search.
pub fn brute_force_barycentre2(inputs: &[Sym2], weights: &[f64]) -> (Sym2, f64) {
    let scale = inputs.iter().map(|s| tr2(*s)).fold(0.0, f64::max).sqrt().max(1e-3);
    let f = |p: [f64; 3]| frechet2(from_chol(p), inputs, weights);

    let steps = 24;
    let mut best = [scale, 0.0, scale];
    let mut best_val = f(best);
    for i in 0..=steps {
        for j in 0..=2 * steps {
            for k in 0..=steps {
                let p = [
                    scale * i as f64 / steps as f64,
                    scale * (j as f64 / steps as f64 - 1.0),
                    scale * k as f64 / steps as f64,
                ];
                let v = f(p);
                if v < best_val {
                    best_val = v;
                    best = p;
                }
            }
        }
    }

    let mut h = scale / steps as f64;
    while h > 1e-12 * scale {
        let mut improved = false;
        for axis in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut p = best;
                p[axis] += dir * h;
                let v = f(p);
                if v < best_val {
                    best_val = v;
                    best = p;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (from_chol(best), best_val)
}

/// Random 2x2 PD matrix with eigenvalues in `[0.1, 3]`.
pub fn random_pd2(rng: &mut impl Rng) -> Sym2 {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let (l1, l2): (f64, f64) = (rng.random_range(0.1..3.0), rng.random_range(0.1..3.0));
    let (c, s) = (theta.cos(), theta.sin());
    [l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c]
}

/// Row-major `G G^T` with `G` a random `n x k` Gaussian-ish matrix; rank at most `k`.
pub fn random_psd(rng: &mut impl Rng, n: usize, k: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..k).map(|l| g[i * k + l] * g[j * k + l]).sum();
        }
    }
    // Mirror so the result is exactly symmetric.
    for i in 0..n {
        for j in 0..i {
            out[i * n + j] = out[j * n + i];
        }
    }
    out
}

/// Power-series coefficients of `P(t) / Q(t)` up to `t^horizon`, by long division.
pub fn series_quotient(p: &[f64], q: &[f64], horizon: usize) -> Vec<f64> {
    assert!(q[0] != 0.0);
    let mut out = Vec::with_capacity(horizon + 1);
    for j in 0..=horizon {
        let mut c = p.get(j).copied().unwrap_or(0.0);
        for i in 1..q.len().min(j + 1) {
            c -= q[i] * out[j - i];
        }
        out.push(c / q[0]);
    }
    out
}

/// Sequence with `y_j + s*2 y_{j-1} + y_{j-2} = 0` read off its generating
/// function `(y0 + (y1 + 2 s y0) t) / (1 + 2 s t + t^2)`, `s = +1` or `-1`.
pub fn recurrence_by_series(y0: f64, y1: f64, s: f64, horizon: usize) -> Vec<f64> {
    series_quotient(&[y0, y1 + 2.0 * s * y0], &[1.0, 2.0 * s, 1.0], horizon)
}
