//! Complex quaternions, the γ-matrix Dirac operator at fixed energy and its
//! quaternionic counterpart `R_ω = D + a + M^b`.
//!
//! A spinor `Φ` and a biquaternion field `F` are related by the constant
//! matrix `𝒜` composed with the reflection `x₃ → −x₃`:
//! `F(x) = 𝒜·Φ(x̃)`. Under this map `𝒜γ₁γ₂γ₃𝔻_ω𝒜⁻¹ = R_ω`, with the
//! potentials inside `R_ω` evaluated at the reflected point. The γ-matrices
//! are the standard Dirac representation.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::diff::{self, DiffConfig, Linear};
use crate::error::Result;
use crate::field::{self, BicomplexField, Conjugated};
use crate::geometry::{Point2, Point3};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `c₀e₀ + c₁e₁ + c₂e₂ + c₃e₃` with complex coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Biquaternion(pub [Complex64; 4]);

impl Biquaternion {
    pub const ZERO: Biquaternion = Biquaternion([ZERO; 4]);

    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self([c0, c1, c2, c3])
    }

    /// Basis unit `e_k`, `k = 0..=3`.
    pub fn e(k: usize) -> Self {
        let mut c = [ZERO; 4];
        c[k] = ONE;
        Self(c)
    }

    pub fn sc(&self) -> Complex64 {
        self.0[0]
    }

    pub fn vec(&self) -> Biquaternion {
        Self([ZERO, self.0[1], self.0[2], self.0[3]])
    }

    /// Quaternionic conjugate `q₀ − q⃗`.
    pub fn conj(&self) -> Self {
        Self([self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// `M^p q = q·p`.
    pub fn right_mul(&self, p: &Biquaternion) -> Self {
        *self * *p
    }

    /// Bicomplex components `Q₁ = q₀ + q₃k`, `Q₂ = q₂ − q₁k` with `k = e₃`,
    /// so that `q = Q₁ + Q₂e₂`.
    pub fn split(&self) -> (Bicomplex, Bicomplex) {
        let [q0, q1, q2, q3] = self.0;
        (Bicomplex::new(q0, q3), Bicomplex::new(q2, -q1))
    }

    /// Inverse of [`Biquaternion::split`].
    pub fn assemble(q1: Bicomplex, q2: Bicomplex) -> Self {
        Self([q1.sc, -q2.vec, q2.sc, q1.vec])
    }
}

impl Add for Biquaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for Biquaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Neg for Biquaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul for Biquaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = b.0;
        Self([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ])
    }
}

impl Mul<f64> for Biquaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Linear for Biquaternion {
    fn norm(&self) -> f64 {
        Biquaternion::norm(self)
    }
}

/// Value of a `ℂ⁴`-valued spinor field.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinorValue(pub [Complex64; 4]);

impl SpinorValue {
    pub const ZERO: SpinorValue = SpinorValue([ZERO; 4]);

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Add for SpinorValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for SpinorValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Mul<f64> for SpinorValue {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Linear for SpinorValue {
    fn norm(&self) -> f64 {
        SpinorValue::norm(self)
    }
}

/// Complex 4×4 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix4(pub [[Complex64; 4]; 4]);

impl Matrix4 {
    pub fn identity() -> Self {
        Self(std::array::from_fn(|r| {
            std::array::from_fn(|c| if r == c { ONE } else { ZERO })
        }))
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|r| (0..4).map(|c| self.0[r][c] * v[c]).sum())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, o: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).map(|k| self.0[r][k] * o.0[k][c]).sum())
        }))
    }
}

impl Mul<SpinorValue> for Matrix4 {
    type Output = SpinorValue;
    fn mul(self, v: SpinorValue) -> SpinorValue {
        SpinorValue(self.apply(&v.0))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The matrix of `𝒜` acting on `(Φ₀, Φ₁, Φ₂, Φ₃)`.
pub fn transform_a_matrix() -> Matrix4 {
    let h = 0.5;
    Matrix4([
        [ZERO, c(-h, 0.0), c(h, 0.0), ZERO],
        [c(0.0, h), ZERO, ZERO, c(0.0, -h)],
        [c(-h, 0.0), ZERO, ZERO, c(-h, 0.0)],
        [ZERO, c(0.0, h), c(0.0, h), ZERO],
    ])
}

/// The matrix of `𝒜⁻¹` acting on `(F₀, F₁, F₂, F₃)`.
pub fn transform_a_inv_matrix() -> Matrix4 {
    Matrix4([
        [ZERO, c(0.0, -1.0), c(-1.0, 0.0), ZERO],
        [c(-1.0, 0.0), ZERO, ZERO, c(0.0, -1.0)],
        [c(1.0, 0.0), ZERO, ZERO, c(0.0, -1.0)],
        [ZERO, c(0.0, 1.0), c(-1.0, 0.0), ZERO],
    ])
}

/// Pointwise `𝒜`; the spatial reflection is the caller's responsibility.
pub fn transform_a(phi: &SpinorValue) -> Biquaternion {
    Biquaternion(transform_a_matrix().apply(&phi.0))
}

/// Pointwise `𝒜⁻¹`.
pub fn transform_a_inv(f: &Biquaternion) -> SpinorValue {
    SpinorValue(transform_a_inv_matrix().apply(&f.0))
}

/// `x̃ = (x₁, x₂, −x₃)`.
pub fn reflect(x: Point3) -> Point3 {
    [x[0], x[1], -x[2]]
}

/// The Dirac matrices `γ₀..γ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaMatrices {
    pub gamma: [Matrix4; 4],
}

impl GammaMatrices {
    /// Dirac (Bjorken–Drell) representation: `γ₀ = diag(1,1,−1,−1)`,
    /// `γₖ = [[0, σₖ], [−σₖ, 0]]`.
    pub fn dirac() -> Self {
        let sigma = [
            [[ZERO, ONE], [ONE, ZERO]],
            [[ZERO, -I], [I, ZERO]],
            [[ONE, ZERO], [ZERO, -ONE]],
        ];
        let mut gamma = [Matrix4([[ZERO; 4]; 4]); 4];
        for r in 0..4 {
            gamma[0].0[r][r] = if r < 2 { ONE } else { -ONE };
        }
        for (k, s) in sigma.iter().enumerate() {
            for r in 0..2 {
                for col in 0..2 {
                    gamma[k + 1].0[r][col + 2] = s[r][col];
                    gamma[k + 1].0[r + 2][col] = -s[r][col];
                }
            }
        }
        Self { gamma }
    }

    /// The same set with every spatial matrix negated.
    pub fn flipped_spatial(&self) -> Self {
        let mut g = *self;
        for k in 1..4 {
            g.gamma[k] = g.gamma[k].scale(-ONE);
        }
        g
    }

    /// `γ₁γ₂γ₃`.
    pub fn gamma123(&self) -> Matrix4 {
        self.gamma[1] * self.gamma[2] * self.gamma[3]
    }

    /// JSON audit dump: four matrices of 4×4 `[re, im]` entries.
    pub fn to_json(&self) -> serde_json::Value {
        let mats: Vec<Vec<Vec<[f64; 2]>>> = self
            .gamma
            .iter()
            .map(|m| {
                m.0.iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({ "representation": "dirac", "gamma": mats })
    }
}

impl Default for GammaMatrices {
    fn default() -> Self {
        Self::dirac()
    }
}

/// Real scalar function on physical space.
pub type ScalarFn = Arc<dyn Fn(Point3) -> f64 + Send + Sync>;

fn zero_fn() -> ScalarFn {
    Arc::new(|_| 0.0)
}

/// Mass, energy and potentials entering the Dirac operator.
#[derive(Clone)]
pub struct PotentialData {
    pub m: f64,
    pub omega: Complex64,
    pub p_el: ScalarFn,
    pub p_sc: ScalarFn,
    pub a: [ScalarFn; 3],
}

impl PotentialData {
    pub fn free(m: f64, omega: Complex64) -> Self {
        Self {
            m,
            omega,
            p_el: zero_fn(),
            p_sc: zero_fn(),
            a: [zero_fn(), zero_fn(), zero_fn()],
        }
    }

    pub fn with_scalar(mut self, p_sc: ScalarFn) -> Self {
        self.p_sc = p_sc;
        self
    }

    pub fn with_electric(mut self, p_el: ScalarFn) -> Self {
        self.p_el = p_el;
        self
    }

    pub fn with_vector(mut self, a: [ScalarFn; 3]) -> Self {
        self.a = a;
        self
    }

    /// `a = i(A₁e₁ + A₂e₂ − A₃e₃)` at `x`.
    pub fn a_term(&self, x: Point3) -> Biquaternion {
        let [a1, a2, a3] = [(self.a[0])(x), (self.a[1])(x), (self.a[2])(x)];
        Biquaternion::new(ZERO, c(0.0, a1), c(0.0, a2), c(0.0, -a3))
    }

    /// `b = −i((p_el + ω)e₁ − i(p_sc + m)e₂)` at `x`.
    pub fn b_term(&self, x: Point3) -> Biquaternion {
        let el = (self.p_el)(x) + self.omega;
        let sc = (self.p_sc)(x) + self.m;
        Biquaternion::new(ZERO, -I * el, c(-sc, 0.0), ZERO)
    }
}

/// Field on physical space with a differencing configuration and an optional
/// exact Jacobian `[∂₁f, ∂₂f, ∂₃f]`.
pub struct FieldSampler<T> {
    eval: Arc<dyn Fn(Point3) -> Result<T> + Send + Sync>,
    jacobian: Option<Arc<dyn Fn(Point3) -> Result<[T; 3]> + Send + Sync>>,
    pub diff: DiffConfig,
}

impl<T> Clone for FieldSampler<T> {
    fn clone(&self) -> Self {
        Self {
            eval: self.eval.clone(),
            jacobian: self.jacobian.clone(),
            diff: self.diff,
        }
    }
}

impl<T: Linear + 'static> FieldSampler<T> {
    pub fn new(f: impl Fn(Point3) -> T + Send + Sync + 'static) -> Self {
        Self::fallible(move |x| Ok(f(x)))
    }

    pub fn fallible(f: impl Fn(Point3) -> Result<T> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            jacobian: None,
            diff: DiffConfig::default(),
        }
    }

    pub fn with_jacobian(
        mut self,
        j: impl Fn(Point3) -> Result<[T; 3]> + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    pub fn with_diff(mut self, diff: DiffConfig) -> Self {
        self.diff = diff;
        self
    }

    pub fn eval(&self, x: Point3) -> Result<T> {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: Point3) -> Result<[T; 3]> {
        if let Some(j) = &self.jacobian {
            return j(x);
        }
        let f = |p: Point3| (self.eval)(p);
        Ok([
            diff::partial(&f, x, 0, &self.diff)?,
            diff::partial(&f, x, 1, &self.diff)?,
            diff::partial(&f, x, 2, &self.diff)?,
        ])
    }

    /// Composes the field with a pointwise map.
    pub fn map<U: Linear + 'static>(
        &self,
        g: impl Fn(T) -> U + Send + Sync + 'static,
    ) -> FieldSampler<U> {
        let inner = self.eval.clone();
        FieldSampler::fallible(move |x| inner(x).map(&g)).with_diff(self.diff)
    }
}

/// Moisil–Theodorescu operator `Df = Σ eₖ∂ₖf`.
pub fn apply_d(f: &FieldSampler<Biquaternion>, x: Point3) -> Result<Biquaternion> {
    let j = f.jacobian(x)?;
    Ok((1..4).fold(Biquaternion::ZERO, |acc, k| {
        acc + Biquaternion::e(k) * j[k - 1]
    }))
}

/// `R_ω f = Df + a·f + f·b`, potentials evaluated at the reflected point.
pub fn apply_r_omega(
    f: &FieldSampler<Biquaternion>,
    x: Point3,
    pot: &PotentialData,
) -> Result<Biquaternion> {
    let value = f.eval(x)?;
    let xr = reflect(x);
    Ok(apply_d(f, x)? + pot.a_term(xr) * value + value * pot.b_term(xr))
}

/// `𝔻_ωΦ = iωγ₀Φ + Σγₖ∂ₖΦ + i(m + p_elγ₀ + ΣAₖγₖ + p_sc)Φ`.
pub fn apply_dirac_omega(
    phi: &FieldSampler<SpinorValue>,
    x: Point3,
    pot: &PotentialData,
    gammas: &GammaMatrices,
) -> Result<SpinorValue> {
    let value = phi.eval(x)?;
    let j = phi.jacobian(x)?;
    let g = &gammas.gamma;
    let mut out = (g[0] * value).scale(I * (pot.omega + (pot.p_el)(x)));
    out = out + value.scale(I * ((pot.p_sc)(x) + pot.m));
    for k in 0..3 {
        out = out + g[k + 1] * j[k] + (g[k + 1] * value).scale(I * (pot.a[k])(x));
    }
    Ok(out)
}

/// Left side `𝒜[γ₁γ₂γ₃𝔻_ωΦ](x)` and right side `R_ω𝒜[Φ](x)` of the
/// intertwining identity, including the reflections.
pub fn intertwining_sides(
    phi: &FieldSampler<SpinorValue>,
    x: Point3,
    pot: &PotentialData,
    gammas: &GammaMatrices,
) -> Result<(Biquaternion, Biquaternion)> {
    let xr = reflect(x);
    let lhs = transform_a(&(gammas.gamma123() * apply_dirac_omega(phi, xr, pot, gammas)?));
    let transformed = {
        let inner = phi.clone();
        FieldSampler::fallible(move |y| inner.eval(reflect(y)).map(|v| transform_a(&v)))
            .with_diff(phi.diff)
    };
    let rhs = apply_r_omega(&transformed, x, pot)?;
    Ok((lhs, rhs))
}

/// Residuals of the bicomplex system equivalent to `R_ωq = 0` for
/// `x₃`-independent fields `q = Q₁ + Q₂e₂`, with `z = x₂ + x₁k`:
///
/// ```text
/// A₁Q₁ − ∂Q̄₂ − A₂Q̄₂ − B̄Q₂
/// ∂Q̄₁ + A₂Q̄₁ + A₁Q₂ + BQ₁
/// ```
///
/// where `a = A₁ + A₂e₂` and `b = Be₂`.
pub fn vekua_system_residuals(
    q1: &dyn BicomplexField,
    q2: &dyn BicomplexField,
    z: Point2,
    pot: &PotentialData,
    cfg: &DiffConfig,
) -> Result<(Bicomplex, Bicomplex)> {
    let x = [z.y, z.x, 0.0];
    let (a1, a2) = pot.a_term(x).split();
    let (_, b) = pot.b_term(x).split();
    let v1 = q1.eval(z)?;
    let v2 = q2.eval(z)?;
    let d_q1bar = field::dz(&Conjugated(q1), z, cfg)?;
    let d_q2bar = field::dz(&Conjugated(q2), z, cfg)?;
    let r1 = a1 * v1 - d_q2bar - a2 * v2.conj() - b.conj() * v2;
    let r2 = d_q1bar + a2 * v1.conj() + a1 * v2 + b * v1;
    Ok((r1, r2))
}
