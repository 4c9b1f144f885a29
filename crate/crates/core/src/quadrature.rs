//! Gauss–Legendre rules and cumulative Simpson sums along a parameter interval.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre settings with panel doubling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussConfig {
    pub order: usize,
    pub initial_panels: usize,
    pub rel_tol: f64,
    /// Cap on the total number of nodes per interval.
    pub max_nodes: usize,
}

impl Default for GaussConfig {
    fn default() -> Self {
        Self {
            order: 8,
            initial_panels: 2,
            rel_tol: 1e-10,
            max_nodes: 1 << 14,
        }
    }
}

/// `∫₀¹ f(t) dt` for a vector of complex outputs, doubling panels until every
/// component changes by less than `rel_tol` relative to the largest one.
pub fn integrate_unit<const N: usize>(
    f: &dyn Fn(f64) -> Result<[Complex64; N]>,
    cfg: &GaussConfig,
) -> Result<[Complex64; N]> {
    let (x, w) = gauss_legendre(cfg.order);
    let rule = |panels: usize| -> Result<[Complex64; N]> {
        let h = 1.0 / panels as f64;
        let mut acc = [Complex64::new(0.0, 0.0); N];
        for p in 0..panels {
            let a = p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                let v = f(a + 0.5 * h * (xi + 1.0))?;
                for k in 0..N {
                    acc[k] += v[k] * (0.5 * h * wi);
                }
            }
        }
        Ok(acc)
    };
    let mut panels = cfg.initial_panels.max(1);
    let mut prev = rule(panels)?;
    loop {
        panels *= 2;
        if panels * cfg.order > cfg.max_nodes {
            return Err(Error::QuadratureNotConverged {
                nodes: panels / 2 * cfg.order,
            });
        }
        let next = rule(panels)?;
        let scale = next.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let change = next
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= cfg.rel_tol * scale || change == 0.0 {
            return Ok(next);
        }
        prev = next;
    }
}

/// Cumulative integrals `I_i = ∫_{t₀}^{t_i} f` on a uniform grid of odd length.
///
/// Even nodes use composite Simpson; odd nodes add the three-point rule
/// `h(5f₀ + 8f₁ − f₂)/12` for the last half-panel.
pub fn simpson_prefix(values: &[Complex64], h: f64, out: &mut Vec<Complex64>) {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    out.clear();
    out.resize(n, Complex64::new(0.0, 0.0));
    let mut i = 2;
    while i < n {
        let (f0, f1, f2) = (values[i - 2], values[i - 1], values[i]);
        out[i] = out[i - 2] + (f0 + f1 * 4.0 + f2) * (h / 3.0);
        out[i - 1] = out[i - 2] + (f0 * 5.0 + f1 * 8.0 - f2) * (h / 12.0);
        i += 2;
    }
}
