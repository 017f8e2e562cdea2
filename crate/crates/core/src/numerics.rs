//! Shared numerical utilities: deterministic summation, Gauss–Laguerre
//! quadrature rules and a natural cubic spline.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Pairwise (tree) summation.
///
/// Used for every reduction whose result must be bit-stable across worker
/// counts: terms are first materialised in index order, then folded in a
/// fixed tree shape independent of how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// A Gauss–Laguerre rule: approximates ∫₀^∞ f(u)·e^(−u) du ≈ Σ wᵢ f(uᵢ).
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static LAGUERRE_CACHE: Lazy<Mutex<HashMap<usize, GaussLaguerre>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl GaussLaguerre {
    /// Rule of the given order (number of nodes). Rules are cached.
    ///
    /// Orders above ~180 are rejected: the classical weight formula
    /// overflows f64 there, and the engine's refinement ladder stops at 128.
    pub fn with_order(n: usize) -> GaussLaguerre {
        assert!((2..=180).contains(&n), "Gauss-Laguerre order out of range");
        let mut cache = LAGUERRE_CACHE.lock().unwrap();
        cache.entry(n).or_insert_with(|| compute_laguerre(n)).clone()
    }

    /// Integrate ∫₀^∞ f(u) e^(−u) du.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * f(u))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Newton iteration on the Laguerre recurrence (Numerical-Recipes-style
/// bootstrap guesses). Weights via wᵢ = −1/(n·L'ₙ(uᵢ)·Lₙ₋₁(uᵢ)).
fn compute_laguerre(n: usize) -> GaussLaguerre {
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0_f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // Recurrence: (k+1) L_{k+1} = (2k+1−z) L_k − k L_{k−1}
            let mut p1 = 1.0_f64;
            let mut p2 = 0.0_f64;
            for k in 0..n {
                let p3 = p2;
                p2 = p1;
                let kf = k as f64;
                p1 = ((2.0 * kf + 1.0 - z) * p2 - kf * p3) / (kf + 1.0);
            }
            pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= z.abs() * 1e-15 + 1e-300 {
                break;
            }
        }
        // p2 now holds L_{n-1}(z) from the last sweep.
        let mut p1 = 1.0_f64;
        let mut p2 = 0.0_f64;
        for k in 0..n {
            let p3 = p2;
            p2 = p1;
            let kf = k as f64;
            p1 = ((2.0 * kf + 1.0 - z) * p2 - kf * p3) / (kf + 1.0);
        }
        pp = nf * (p1 - p2) / z;
        nodes[i] = z;
        weights[i] = -1.0 / (pp * nf * p2);
    }
    GaussLaguerre { nodes, weights }
}

/// Natural cubic spline through (x, y) with strictly ascending x.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> CubicSpline {
        assert!(x.len() == y.len() && x.len() >= 3, "spline needs >= 3 points");
        assert!(x.windows(2).all(|w| w[0] < w[1]), "spline x must ascend");
        let n = x.len();
        let mut second = vec![0.0; n];
        let mut scratch = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
            let p = sig * second[i - 1] + 2.0;
            second[i] = (sig - 1.0) / p;
            let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            scratch[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * scratch[i - 1]) / p;
        }
        for i in (0..n - 1).rev() {
            second[i] = second[i] * second[i + 1] + scratch[i];
        }
        CubicSpline { x, y, second }
    }

    /// Evaluate at `xq`; clamps to the boundary segments outside the range.
    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        let j = match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(j) => j.min(n - 2),
            Err(0) => 0,
            Err(j) if j >= n => n - 2,
            Err(j) => j - 1,
        };
        let h = self.x[j + 1] - self.x[j];
        let a = (self.x[j + 1] - xq) / h;
        let b = (xq - self.x[j]) / h;
        a * self.y[j]
            + b * self.y[j + 1]
            + ((a * a * a - a) * self.second[j] + (b * b * b - b) * self.second[j + 1]) * h * h
                / 6.0
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }
}

/// FNV-1a 64-bit hash, used to fingerprint configuration echoes in outputs.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
