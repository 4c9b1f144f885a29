//! Fourth-order central differences with a Richardson step check.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values that can be differenced: a real vector space with a norm.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn norm(&self) -> f64;
}

impl Linear for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl Linear for num_complex::Complex64 {
    fn norm(&self) -> f64 {
        num_complex::Complex64::norm(*self)
    }
}

impl Linear for crate::bicomplex::Bicomplex {
    fn norm(&self) -> f64 {
        crate::bicomplex::Bicomplex::norm(*self)
    }
}

/// Step selection and error control for differencing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffConfig {
    /// Fixed step; `None` picks `1e-4·(1 + |x|)`.
    pub step: Option<f64>,
    /// Bound on `|D_h − D_{h/2}| / max(1, |D_{h/2}|)`.
    pub tol: f64,
    /// Evaluate at `h` and `h/2` and enforce `tol`; otherwise one stencil at `h`.
    pub richardson: bool,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            step: None,
            tol: 1e-6,
            richardson: true,
        }
    }
}

impl DiffConfig {
    pub fn with_step(step: f64) -> Self {
        Self {
            step: Some(step),
            ..Self::default()
        }
    }

    /// Single stencil at a fixed step, no error check.
    pub fn plain(step: f64) -> Self {
        Self {
            step: Some(step),
            tol: f64::INFINITY,
            richardson: false,
        }
    }

    pub fn step_at(&self, x: f64) -> f64 {
        self.step.unwrap_or(1e-4 * (1.0 + x.abs()))
    }
}

fn stencil<T: Linear>(f: &dyn Fn(f64) -> Result<T>, x: f64, h: f64) -> Result<T> {
    let fm2 = f(x - 2.0 * h)?;
    let fm1 = f(x - h)?;
    let fp1 = f(x + h)?;
    let fp2 = f(x + 2.0 * h)?;
    Ok(((fm2 - fp2) + (fp1 - fm1) * 8.0) * (1.0 / (12.0 * h)))
}

/// First derivative of a one-variable function at `x`.
pub fn derivative<T: Linear>(f: &dyn Fn(f64) -> Result<T>, x: f64, cfg: &DiffConfig) -> Result<T> {
    let h = cfg.step_at(x);
    if !(h > 0.0) {
        return Err(Error::Invalid(format!(
            "differencing step must be positive, got {h}"
        )));
    }
    let coarse = stencil(f, x, h)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = stencil(f, x, 0.5 * h)?;
    let estimate = (fine - coarse).norm() / fine.norm().max(1.0);
    if !(estimate <= cfg.tol) {
        return Err(Error::StepTooLarge {
            estimate,
            tol: cfg.tol,
        });
    }
    Ok(fine)
}

/// Partial derivative along `axis` of a function on `ℝᴺ`.
pub fn partial<T: Linear, const N: usize>(
    f: &dyn Fn([f64; N]) -> Result<T>,
    x: [f64; N],
    axis: usize,
    cfg: &DiffConfig,
) -> Result<T> {
    let g = |t: f64| {
        let mut p = x;
        p[axis] = t;
        f(p)
    };
    derivative(&g, x[axis], cfg)
}

/// Second derivative by the 5-point fourth-order stencil.
pub fn second_derivative<T: Linear>(f: &dyn Fn(f64) -> Result<T>, x: f64, h: f64) -> Result<T> {
    let fm2 = f(x - 2.0 * h)?;
    let fm1 = f(x - h)?;
    let f0 = f(x)?;
    let fp1 = f(x + h)?;
    let fp2 = f(x + 2.0 * h)?;
    Ok(((fm1 + fp1) * 16.0 - (fm2 + fp2) - f0 * 30.0) * (1.0 / (12.0 * h * h)))
}

/// Fourth-order Laplacian in the plane, 5 samples per axis.
pub fn laplacian<T: Linear>(
    f: &dyn Fn(f64, f64) -> Result<T>,
    x: f64,
    y: f64,
    h: f64,
) -> Result<T> {
    let fxx = second_derivative(&|t| f(t, y), x, h)?;
    let fyy = second_derivative(&|t| f(x, t), y, h)?;
    Ok(fxx + fyy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_derivative_under_refinement() {
        let f = |x: f64| Ok(x.exp());
        let cfg = DiffConfig::default();
        let d = derivative(&f, 0.0, &cfg).unwrap();
        assert!((d - 1.0).abs() < 1e-11);
        // h-refinement oracle: the error shrinks like h⁴ until roundoff.
        let e1 = (derivative(&f, 0.0, &DiffConfig::plain(0.1)).unwrap() - 1.0).abs();
        let e2 = (derivative(&f, 0.0, &DiffConfig::plain(0.05)).unwrap() - 1.0).abs();
        assert!(e1 / e2 > 14.0 && e1 / e2 < 18.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn polynomials_up_to_degree_four_are_exact() {
        let f = |x: f64| Ok(x.powi(4) - 2.0 * x.powi(3) + x);
        let d = derivative(&f, 0.7, &DiffConfig::plain(0.3)).unwrap();
        let expect = 4.0 * 0.7f64.powi(3) - 6.0 * 0.49 + 1.0;
        assert!((d - expect).abs() < 1e-12);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let f = |x: f64| Ok((10.0 * x).sin());
        let err = derivative(&f, 0.3, &DiffConfig::with_step(0.5)).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn laplacian_of_harmonic_and_exponential() {
        let harmonic = |x: f64, y: f64| Ok(x * x - y * y);
        assert!(laplacian(&harmonic, 0.3, -0.2, 1e-3).unwrap().abs() < 1e-8);
        let e = |x: f64, y: f64| Ok(x.exp() * y.cos());
        let l = laplacian(&e, 0.1, 0.4, 1e-2).unwrap();
        assert!(l.abs() < 1e-9);
    }

    #[test]
    fn partial_picks_the_axis() {
        let f = |p: [f64; 3]| Ok(p[0] * p[1] * p[1] + p[2]);
        let cfg = DiffConfig::default();
        assert!((partial(&f, [1.0, 3.0, 0.0], 1, &cfg).unwrap() - 6.0).abs() < 1e-9);
        assert!((partial(&f, [1.0, 3.0, 0.0], 2, &cfg).unwrap() - 1.0).abs() < 1e-9);
    }
}
