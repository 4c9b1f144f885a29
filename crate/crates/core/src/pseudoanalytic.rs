//! Bers' theory for bicomplex generating pairs.
//!
//! A generating pair `(F, G)` has `Vec(F̄G) ≠ 0`, so every bicomplex `W`
//! decomposes uniquely as `φF + ψG` with complex `φ, ψ`. The pair defines the
//! Vekua equation `W_z̄ = a W + b W̄`, the derivative
//! `Ẇ = ½(W_z − A W − B W̄)` and the integral
//!
//! ```text
//! ∫_Γ W d_(F,G)z = F(z₁) Sc∫_Γ G*W dz + G(z₁) Sc∫_Γ F*W dz
//! ```
//!
//! with `(F*, G*)` the adjoint pair. Since `∂ = ∂ₓ − k∂_y` has no ½, the
//! derivative carries it instead and the integral does not: for the pair
//! `(1, k)` they reduce to the ordinary `d/dz` and `∫W dz`, and
//! `∫ Ẇ d_(F,G)z = W(z) − φ(z₀)F(z) − ψ(z₀)G(z)` holds.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, ZERO_DIVISOR_TOL};
use crate::diff::DiffConfig;
use crate::error::{Error, Result};
use crate::field::{self, BicomplexField};
use crate::geometry::{CellGrid, Point2, Polyline, Rect};
use crate::quadrature::{self, GaussConfig};

/// Relative threshold on `|Vec(F̄G)|` against `|F||G|`.
pub const DEGENERACY_TOL: f64 = 1e-10;

pub type BicomplexFn = Arc<dyn Fn(Point2) -> Bicomplex + Send + Sync>;

/// `∂̄` and `∂` of both generators at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDerivatives {
    pub f_zbar: Bicomplex,
    pub f_z: Bicomplex,
    pub g_zbar: Bicomplex,
    pub g_z: Bicomplex,
}

pub type DerivativeFn = Arc<dyn Fn(Point2) -> PairDerivatives + Send + Sync>;

/// Characteristic coefficients `a, b, A, B` of a pair at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharCoeffs {
    pub a: Bicomplex,
    pub b: Bicomplex,
    pub big_a: Bicomplex,
    pub big_b: Bicomplex,
}

/// A bicomplex generating pair on a rectangle of the z-plane.
#[derive(Clone)]
pub struct GeneratingPair {
    f: BicomplexFn,
    g: BicomplexFn,
    derivatives: Option<DerivativeFn>,
    pub domain: Rect,
    pub diff: DiffConfig,
}

impl std::fmt::Debug for GeneratingPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratingPair")
            .field("domain", &self.domain)
            .field("exact_derivatives", &self.derivatives.is_some())
            .finish()
    }
}

impl GeneratingPair {
    pub fn new(
        f: impl Fn(Point2) -> Bicomplex + Send + Sync + 'static,
        g: impl Fn(Point2) -> Bicomplex + Send + Sync + 'static,
        domain: Rect,
    ) -> Self {
        Self {
            f: Arc::new(f),
            g: Arc::new(g),
            derivatives: None,
            domain,
            diff: DiffConfig::default(),
        }
    }

    pub fn with_derivatives(
        mut self,
        d: impl Fn(Point2) -> PairDerivatives + Send + Sync + 'static,
    ) -> Self {
        self.derivatives = Some(Arc::new(d));
        self
    }

    pub fn with_diff(mut self, diff: DiffConfig) -> Self {
        self.diff = diff;
        self
    }

    /// The pair `(1, k)` of classical complex analysis.
    pub fn classical(domain: Rect) -> Self {
        Self::new(|_| Bicomplex::ONE, |_| Bicomplex::K, domain).with_derivatives(|_| {
            PairDerivatives {
                f_zbar: Bicomplex::ZERO,
                f_z: Bicomplex::ZERO,
                g_zbar: Bicomplex::ZERO,
                g_z: Bicomplex::ZERO,
            }
        })
    }

    pub fn f(&self, z: Point2) -> Bicomplex {
        (self.f)(z)
    }

    pub fn g(&self, z: Point2) -> Bicomplex {
        (self.g)(z)
    }

    pub fn has_exact_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    /// `(cF, cG)` for a complex constant `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let (f, g) = (self.f.clone(), self.g.clone());
        let mut out =
            Self::new(move |z| f(z) * c, move |z| g(z) * c, self.domain).with_diff(self.diff);
        if let Some(d) = self.derivatives.clone() {
            out = out.with_derivatives(move |z| {
                let v = d(z);
                PairDerivatives {
                    f_zbar: v.f_zbar * c,
                    f_z: v.f_z * c,
                    g_zbar: v.g_zbar * c,
                    g_z: v.g_z * c,
                }
            });
        }
        out
    }

    pub fn derivatives_at(&self, z: Point2) -> Result<PairDerivatives> {
        if let Some(d) = &self.derivatives {
            return Ok(d(z));
        }
        let f = |p: Point2| (self.f)(p);
        let g = |p: Point2| (self.g)(p);
        Ok(PairDerivatives {
            f_zbar: field::dbar(&f, z, &self.diff)?,
            f_z: field::dz(&f, z, &self.diff)?,
            g_zbar: field::dbar(&g, z, &self.diff)?,
            g_z: field::dz(&g, z, &self.diff)?,
        })
    }

    /// `Vec(F̄G) = F₀G₁ − F₁G₀`, the determinant of the decomposition.
    pub fn determinant(&self, z: Point2) -> Complex64 {
        determinant(self.f(z), self.g(z))
    }

    /// `(F(z), G(z), Vec(F̄G))`, failing where the pair degenerates.
    fn checked_values(&self, z: Point2) -> Result<(Bicomplex, Bicomplex, Complex64)> {
        let (f, g) = (self.f(z), self.g(z));
        let det = determinant(f, g);
        if !(det.norm() > DEGENERACY_TOL * f.norm() * g.norm()) {
            return Err(Error::DegeneratePair { x: z.x, y: z.y });
        }
        Ok((f, g, det))
    }

    /// Checks `Vec(F̄G) ≠ 0` on an `n × n` grid of the domain.
    pub fn check_nondegenerate(&self, n: usize) -> Result<()> {
        self.domain
            .grid(n, n)
            .into_iter()
            .try_for_each(|z| self.checked_values(z).map(|_| ()))
    }

    pub fn char_coeffs(&self, z: Point2) -> Result<CharCoeffs> {
        let (f, g, det) = self.checked_values(z)?;
        let d = self.derivatives_at(z)?;
        // F Ḡ − F̄ G = −2 Vec(F̄G) k, whose inverse is k / (2 Vec(F̄G)).
        let inv_den = Bicomplex::K * (0.5 / det);
        let (fc, gc) = (f.conj(), g.conj());
        Ok(CharCoeffs {
            a: -(fc * d.g_zbar - d.f_zbar * gc) * inv_den,
            b: (f * d.g_zbar - d.f_zbar * g) * inv_den,
            big_a: -(fc * d.g_z - d.f_z * gc) * inv_den,
            big_b: (f * d.g_z - d.f_z * g) * inv_den,
        })
    }

    /// Complex `(φ, ψ)` with `φF(z) + ψG(z) = w`.
    pub fn decompose(&self, w: Bicomplex, z: Point2) -> Result<(Complex64, Complex64)> {
        let (f, g, det) = self.checked_values(z)?;
        Ok(decompose_values(f, g, det, w))
    }

    /// `(F*(z), G*(z))`.
    pub fn adjoint_values(&self, z: Point2) -> Result<(Bicomplex, Bicomplex)> {
        let (f, g, det) = self.checked_values(z)?;
        Ok(adjoint_values(f, g, det))
    }

    /// The adjoint pair `F* = −2F̄/(FḠ − F̄G)`, `G* = 2Ḡ/(FḠ − F̄G)`.
    pub fn adjoint(&self) -> Result<GeneratingPair> {
        self.check_nondegenerate(16)?;
        let (f, g) = (self.f.clone(), self.g.clone());
        let (f2, g2) = (self.f.clone(), self.g.clone());
        Ok(GeneratingPair::new(
            move |z| {
                let (a, b) = (f(z), g(z));
                adjoint_values(a, b, determinant(a, b)).0
            },
            move |z| {
                let (a, b) = (f2(z), g2(z));
                adjoint_values(a, b, determinant(a, b)).1
            },
            self.domain,
        )
        .with_diff(self.diff))
    }

    /// `(F,G)`-derivative `½(W_z − AW − BW̄)` at `z`.
    pub fn fg_derivative(&self, w: &dyn BicomplexField, z: Point2) -> Result<Bicomplex> {
        let c = self.char_coeffs(z)?;
        let value = w.eval(z)?;
        Ok((field::dz(w, z, &self.diff)? - c.big_a * value - c.big_b * value.conj()) * 0.5)
    }

    /// Residual `W_z̄ − aW − bW̄` of the pair's own Vekua equation.
    pub fn vekua_residual(&self, w: &dyn BicomplexField, z: Point2) -> Result<Bicomplex> {
        let c = self.char_coeffs(z)?;
        let value = w.eval(z)?;
        Ok(field::dbar(w, z, &self.diff)? - c.a * value - c.b * value.conj())
    }

    /// `(F,G)`-integral of `W` along a polyline, composite Gauss–Legendre per segment.
    pub fn fg_integral(
        &self,
        w: &dyn BicomplexField,
        path: &Polyline,
        cfg: &GaussConfig,
    ) -> Result<Bicomplex> {
        let end = path.end();
        let (f_end, g_end, _) = self.checked_values(end)?;
        let mut with_g_star = Complex64::new(0.0, 0.0);
        let mut with_f_star = Complex64::new(0.0, 0.0);
        for (a, b) in path.segments() {
            let dzeta = (b - a).to_bicomplex();
            let integrand = |t: f64| -> Result<[Complex64; 2]> {
                let z = a.lerp(b, t);
                let (fs, gs) = self.adjoint_values(z)?;
                let wv = w.eval(z)? * dzeta;
                Ok([(gs * wv).sc, (fs * wv).sc])
            };
            let [i1, i2] = quadrature::integrate_unit(&integrand, cfg)?;
            with_g_star += i1;
            with_f_star += i2;
        }
        Ok(f_end * with_g_star + g_end * with_f_star)
    }

    /// Coefficients `a(z), b(z)` of the pair's Vekua equation as a value type.
    pub fn vekua_coefficients(&self) -> VekuaCoefficients {
        let (pa, pb) = (self.clone(), self.clone());
        VekuaCoefficients::new(
            move |z| {
                pa.char_coeffs(z)
                    .map(|c| c.a)
                    .unwrap_or(Bicomplex::new(f64::NAN.into(), f64::NAN.into()))
            },
            move |z| {
                pb.char_coeffs(z)
                    .map(|c| c.b)
                    .unwrap_or(Bicomplex::new(f64::NAN.into(), f64::NAN.into()))
            },
            ConjugationMode::Plain,
        )
    }
}

pub(crate) fn determinant(f: Bicomplex, g: Bicomplex) -> Complex64 {
    f.sc * g.vec - f.vec * g.sc
}

pub(crate) fn adjoint_values(f: Bicomplex, g: Bicomplex, det: Complex64) -> (Bicomplex, Bicomplex) {
    // −2F̄/(−2 det k) = −F̄k/det and 2Ḡ/(−2 det k) = Ḡk/det.
    let inv = det.inv();
    (
        -(f.conj() * Bicomplex::K) * inv,
        (g.conj() * Bicomplex::K) * inv,
    )
}

pub(crate) fn decompose_values(
    f: Bicomplex,
    g: Bicomplex,
    det: Complex64,
    w: Bicomplex,
) -> (Complex64, Complex64) {
    let phi = (w.sc * g.vec - w.vec * g.sc) / det;
    let psi = (f.sc * w.vec - f.vec * w.sc) / det;
    (phi, psi)
}

/// True when `succ` is a successor of `pred` at every grid point:
/// `a_succ = a_pred` and `b_succ = −B_pred` within `tol` (relative to `1 + |·|`).
pub fn is_successor(
    pred: &GeneratingPair,
    succ: &GeneratingPair,
    grid: &[Point2],
    tol: f64,
) -> Result<bool> {
    for &z in grid {
        let p = pred.char_coeffs(z)?;
        let s = succ.char_coeffs(z)?;
        let ok_a = (s.a - p.a).norm() <= tol * (1.0 + p.a.norm());
        let ok_b = (s.b + p.big_b).norm() <= tol * (1.0 + p.big_b.norm());
        if !(ok_a && ok_b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which conjugation the `b` term of a Vekua equation carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationMode {
    /// `∂̄w = a w + b w̄`.
    Plain,
    /// `∂̄W = a W + conj(b W)`.
    Outer,
}

/// Coefficients of a bicomplex Vekua equation.
#[derive(Clone)]
pub struct VekuaCoefficients {
    pub a: BicomplexFn,
    pub b: BicomplexFn,
    pub mode: ConjugationMode,
}

impl VekuaCoefficients {
    pub fn new(
        a: impl Fn(Point2) -> Bicomplex + Send + Sync + 'static,
        b: impl Fn(Point2) -> Bicomplex + Send + Sync + 'static,
        mode: ConjugationMode,
    ) -> Self {
        Self {
            a: Arc::new(a),
            b: Arc::new(b),
            mode,
        }
    }

    pub fn constant(a: Bicomplex, b: Bicomplex, mode: ConjugationMode) -> Self {
        Self::new(move |_| a, move |_| b, mode)
    }
}

/// `∂̄W − aW − bW̄` (plain) or `∂̄W − aW − conj(bW)` (outer) at `z`.
pub fn vekua_residual(
    coeffs: &VekuaCoefficients,
    w: &dyn BicomplexField,
    z: Point2,
    cfg: &DiffConfig,
) -> Result<Bicomplex> {
    let value = w.eval(z)?;
    let (a, b) = ((coeffs.a)(z), (coeffs.b)(z));
    let b_term = match coeffs.mode {
        ConjugationMode::Plain => b * value.conj(),
        ConjugationMode::Outer => (b * value).conj(),
    };
    Ok(field::dbar(w, z, cfg)? - a * value - b_term)
}

/// One residual sample for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub z: Point2,
    pub residual_norm: f64,
    pub mode: ConjugationMode,
}

/// Discretisation of the similarity transform `Φ = w·e^h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimilarityConfig {
    /// Constant in front of the area integral.
    pub constant: f64,
    /// Exclusion radius in cell diagonals.
    pub exclusion: f64,
    /// Below this norm `w` counts as zero and `g = a + b`.
    pub zero_tol: f64,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            constant: 1.0 / (2.0 * PI),
            exclusion: 1.5,
            zero_tol: 1e-12,
        }
    }
}

/// `g = a + b w̄/w` sampled on the cells of a grid, ready to evaluate
/// `h(z) = C Σ g(τ)·area/(τ − z)` by the midpoint rule.
pub struct SimilarityKernel {
    grid: CellGrid,
    centers: Vec<Point2>,
    g: Vec<Bicomplex>,
    cfg: SimilarityConfig,
}

impl SimilarityKernel {
    pub fn new(
        coeffs: &VekuaCoefficients,
        w: &dyn BicomplexField,
        grid: CellGrid,
        cfg: SimilarityConfig,
    ) -> Result<Self> {
        if coeffs.mode != ConjugationMode::Plain {
            return Err(Error::Invalid(
                "similarity principle needs the plain-mode equation".into(),
            ));
        }
        let centers = grid.centers();
        let mut g = Vec::with_capacity(centers.len());
        for &z in &centers {
            let (a, b) = ((coeffs.a)(z), (coeffs.b)(z));
            if b.is_singular(ZERO_DIVISOR_TOL) {
                return Err(Error::ZeroDivisorCoefficient { x: z.x, y: z.y });
            }
            let value = w.eval(z)?;
            let ratio = if value.norm() <= cfg.zero_tol || value.is_zero_divisor(ZERO_DIVISOR_TOL) {
                Bicomplex::ONE
            } else {
                value.conj() / value
            };
            g.push(a + b * ratio);
        }
        Ok(Self {
            grid,
            centers,
            g,
            cfg,
        })
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn g_values(&self) -> &[Bicomplex] {
        &self.g
    }

    /// `h(z)`, skipping cells whose centre lies within the exclusion radius.
    pub fn h(&self, z: Point2) -> Bicomplex {
        let eps = self.cfg.exclusion * self.grid.diagonal();
        let weight = self.cfg.constant * self.grid.cell_area();
        let mut acc = Bicomplex::ZERO;
        for (tau, g) in self.centers.iter().zip(&self.g) {
            let (dx, dy) = (tau.x - z.x, tau.y - z.y);
            let r2 = dx * dx + dy * dy;
            if r2.sqrt() <= eps {
                continue;
            }
            acc += *g * Bicomplex::from_real(dx / r2, -dy / r2);
        }
        acc * weight
    }

    /// `h` at every cell centre, in [`CellGrid::centers`] order.
    pub fn h_on_grid(&self) -> Vec<Bicomplex> {
        self.centers.par_iter().map(|&z| self.h(z)).collect()
    }
}

/// `h(z)` of the similarity transform `Φ = w·e^h`.
pub fn similarity_factor(
    coeffs: &VekuaCoefficients,
    w: &dyn BicomplexField,
    grid: CellGrid,
    z: Point2,
    cfg: SimilarityConfig,
) -> Result<Bicomplex> {
    Ok(SimilarityKernel::new(coeffs, w, grid, cfg)?.h(z))
}

/// Central-difference `∂̄` of grid values at interior cell `(i, j)`.
pub fn grid_dbar(values: &[Bicomplex], grid: &CellGrid, i: usize, j: usize) -> Bicomplex {
    let at = |i: usize, j: usize| values[j * grid.nx + i];
    let fx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.dx());
    let fy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.dy());
    fx + Bicomplex::K * fy
}
