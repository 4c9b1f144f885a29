//! One-variable scalar potentials `p(x)` and the objects they induce:
//! `α = P + mx`, `f₀ = e^{α(x) + iωy}`, the period-2 generating sequence
//! `(e^σ, e^{−σ}k) → (e^τ, e^{−τ}k)` with `σ = α + iωy`, `τ = −α + iωy`,
//! and the Schrödinger potentials
//!
//! ```text
//! ν₁ = p′ + (p + m)² − ω²,    ν₂ = −p′ + (p + m)² − ω².
//! ```
//!
//! `W` solving `∂̄W = conj(bW)` with `b = p + m − iωk` has `Sc W` and `Vec W`
//! solving `−Δu + ν₁u = 0` and `−Δu + ν₂u = 0`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::diff::{self, DiffConfig};
use crate::error::{Error, Result};
use crate::field::BicomplexField;
use crate::formal_powers::GeneratingSequence;
use crate::geometry::{Point2, Rect};
use crate::pseudoanalytic::{ConjugationMode, GeneratingPair, PairDerivatives, VekuaCoefficients};

/// Cubic Hermite interpolant through `(x_i, y_i)` with slopes `d_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermite {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    /// `∫_{x₀}^{x_i}` of the interpolant.
    integral: Vec<f64>,
}

impl Hermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if x.len() < 2 || x.len() != y.len() || x.len() != d.len() {
            return Err(Error::Invalid(
                "table needs at least two points and matching lengths".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        if x.iter().chain(&y).chain(&d).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("table values must be finite".into()));
        }
        let mut this = Self {
            x,
            y,
            d,
            integral: Vec::new(),
        };
        let mut acc = 0.0;
        this.integral.push(0.0);
        for i in 0..this.x.len() - 1 {
            acc += this.piece_integral(i, this.x[i + 1]);
            this.integral.push(acc);
        }
        Ok(this)
    }

    /// Monotone (Fritsch–Carlson) slopes.
    pub fn pchip(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || n != y.len() {
            return Err(Error::Invalid(
                "table needs at least two points and matching lengths".into(),
            ));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d = vec![delta[0]; 2];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self::new(x, y, d)
    }

    fn piece(&self, x: f64) -> usize {
        match self.x.partition_point(|&v| v <= x) {
            0 => 0,
            i => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Value and first two derivatives on piece `i`, extrapolating past the ends.
    fn eval_piece(&self, i: usize, x: f64) -> (f64, f64, f64) {
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i] * h, self.d[i + 1] * h);
        let (t2, t3) = (t * t, t * t * t);
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        let dv = (6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * d1;
        let ddv = (12.0 * t - 6.0) * y0
            + (6.0 * t - 4.0) * d0
            + (-12.0 * t + 6.0) * y1
            + (6.0 * t - 2.0) * d1;
        (v, dv / h, ddv / (h * h))
    }

    /// `∫_{x_i}^{x}` on piece `i`; Simpson is exact for cubics.
    fn piece_integral(&self, i: usize, x: f64) -> f64 {
        let a = self.x[i];
        let m = 0.5 * (a + x);
        (x - a) / 6.0
            * (self.eval_piece(i, a).0 + 4.0 * self.eval_piece(i, m).0 + self.eval_piece(i, x).0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval_piece(self.piece(x), x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval_piece(self.piece(x), x).1
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.eval_piece(self.piece(x), x).2
    }

    /// `∫_{x₀}^{x}` of the interpolant.
    pub fn integral(&self, x: f64) -> f64 {
        let i = self.piece(x);
        self.integral[i] + self.piece_integral(i, x)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("nonempty"))
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Where a model's `p` came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Preset { name: String },
    Tabulated { points: usize },
    FromNu { x0: f64, steps: usize, step: f64 },
}

#[derive(Clone, Debug)]
enum Profile {
    Zero,
    Constant(f64),
    Linear(f64),
    Table(Arc<Hermite>),
    /// `p` through the Riccati slopes `ν − p²`, `P = ln|f₀|`.
    FromNu {
        p: Arc<Hermite>,
        big_p: Arc<Hermite>,
        nu: RealFn,
    },
}

/// A real function of `x`.
#[derive(Clone)]
pub struct RealFn(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl RealFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn call(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl std::fmt::Debug for RealFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("RealFn")
    }
}

/// A one-variable scalar potential with mass `m` and energy `ω`.
#[derive(Clone, Debug)]
pub struct PotentialModel {
    profile: Profile,
    pub m: f64,
    pub omega: Complex64,
    pub provenance: Provenance,
}

impl PotentialModel {
    fn preset(profile: Profile, name: &str, m: f64, omega: Complex64) -> Self {
        Self {
            profile,
            m,
            omega,
            provenance: Provenance::Preset { name: name.into() },
        }
    }

    pub fn zero(m: f64, omega: Complex64) -> Self {
        Self::preset(Profile::Zero, "zero", m, omega)
    }

    pub fn constant(c: f64, m: f64, omega: Complex64) -> Self {
        Self::preset(Profile::Constant(c), "constant", m, omega)
    }

    /// `p(x) = slope·x`.
    pub fn linear(slope: f64, m: f64, omega: Complex64) -> Self {
        Self::preset(Profile::Linear(slope), "linear", m, omega)
    }

    /// Monotone cubic interpolation of `(x_i, p_i)`, `P(x₀) = 0`.
    pub fn tabulated(x: Vec<f64>, p: Vec<f64>, m: f64, omega: Complex64) -> Result<Self> {
        let points = x.len();
        let table = Hermite::pchip(x, p)?;
        Ok(Self {
            profile: Profile::Table(Arc::new(table)),
            m,
            omega,
            provenance: Provenance::Tabulated { points },
        })
    }

    /// Factorizes `ν = p′ + p²` through a particular solution of `−f₀″ + νf₀ = 0`.
    ///
    /// RK4 runs from `x0` to both ends of `range` with at most 1e−3 of the
    /// width per step; `p = f₀′/f₀`, `P = ln|f₀/f₀(x0)|`.
    pub fn from_nu(
        nu: RealFn,
        x0: f64,
        f0: f64,
        df0: f64,
        range: (f64, f64),
        m: f64,
        omega: Complex64,
    ) -> Result<Self> {
        const VANISH: f64 = 1e-8;
        let (lo, hi) = range;
        if !(lo < hi) || !(lo..=hi).contains(&x0) {
            return Err(Error::Invalid(format!(
                "x0 = {x0} must lie in [{lo}, {hi}]"
            )));
        }
        if f0.abs() < VANISH {
            return Err(Error::SolutionVanishes { x: x0 });
        }
        let max_step = 1e-3 * (hi - lo);
        let march = |to: f64| -> Result<Vec<(f64, f64, f64)>> {
            let span = to - x0;
            let steps = (span.abs() / max_step - 1e-9).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            let mut out = vec![(x0, f0, df0)];
            let (mut x, mut u, mut v) = (x0, f0, df0);
            for _ in 0..steps {
                // u′ = v, v′ = ν u.
                let k1 = (v, nu.call(x) * u);
                let k2 = (
                    v + 0.5 * h * k1.1,
                    nu.call(x + 0.5 * h) * (u + 0.5 * h * k1.0),
                );
                let k3 = (
                    v + 0.5 * h * k2.1,
                    nu.call(x + 0.5 * h) * (u + 0.5 * h * k2.0),
                );
                let k4 = (v + h * k3.1, nu.call(x + h) * (u + h * k3.0));
                let prev = u;
                u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                x += h;
                if !(u.abs() >= VANISH) || u.signum() != prev.signum() {
                    return Err(Error::SolutionVanishes { x });
                }
                out.push((x, u, v));
            }
            Ok(out)
        };
        let mut left = if x0 > lo {
            march(lo)?
        } else {
            vec![(x0, f0, df0)]
        };
        let right = if x0 < hi {
            march(hi)?
        } else {
            vec![(x0, f0, df0)]
        };
        left.reverse();
        left.pop();
        let samples: Vec<_> = left.into_iter().chain(right).collect();
        let steps = samples.len() - 1;
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ps: Vec<f64> = samples.iter().map(|s| s.2 / s.1).collect();
        let dps: Vec<f64> = xs
            .iter()
            .zip(&ps)
            .map(|(&x, p)| nu.call(x) - p * p)
            .collect();
        let logs: Vec<f64> = samples.iter().map(|s| (s.1 / f0).abs().ln()).collect();
        let p = Hermite::new(xs.clone(), ps.clone(), dps)?;
        let big_p = Hermite::new(xs, logs, ps)?;
        Ok(Self {
            profile: Profile::FromNu {
                p: Arc::new(p),
                big_p: Arc::new(big_p),
                nu,
            },
            m,
            omega,
            provenance: Provenance::FromNu {
                x0,
                steps,
                step: (hi - lo) / steps as f64,
            },
        })
    }

    /// `c` when `p ≡ c` is a zero or constant preset.
    pub fn constant_value(&self) -> Option<f64> {
        match self.profile {
            Profile::Zero => Some(0.0),
            Profile::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn p(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::Zero => 0.0,
            Profile::Constant(c) => *c,
            Profile::Linear(s) => s * x,
            Profile::Table(t) => t.value(x),
            Profile::FromNu { p, .. } => p.value(x),
        }
    }

    pub fn dp(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::Zero | Profile::Constant(_) => 0.0,
            Profile::Linear(s) => *s,
            Profile::Table(t) => t.derivative(x),
            Profile::FromNu { p, nu, .. } => {
                let v = p.value(x);
                nu.call(x) - v * v
            }
        }
    }

    /// Antiderivative with `P(0) = 0` for presets, `P(x₀) = 0` otherwise.
    #[allow(non_snake_case)]
    pub fn P(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::Zero => 0.0,
            Profile::Constant(c) => c * x,
            Profile::Linear(s) => 0.5 * s * x * x,
            Profile::Table(t) => t.integral(x),
            Profile::FromNu { big_p, .. } => big_p.value(x),
        }
    }

    /// `α(x) = P(x) + mx`.
    pub fn alpha(&self, x: f64) -> f64 {
        self.P(x) + self.m * x
    }

    /// `σ = α(x) + iωy`.
    pub fn sigma(&self, z: Point2) -> Complex64 {
        Complex64::new(self.alpha(z.x), 0.0) + Complex64::i() * self.omega * z.y
    }

    /// `τ = −α(x) + iωy`.
    pub fn tau(&self, z: Point2) -> Complex64 {
        Complex64::new(-self.alpha(z.x), 0.0) + Complex64::i() * self.omega * z.y
    }

    pub fn f0(&self, z: Point2) -> Complex64 {
        self.sigma(z).exp()
    }

    /// `b = p + m − iωk`, shared by `∂̄W = conj(bW)` and `∂̄w = b w̄`.
    pub fn b(&self, x: f64) -> Bicomplex {
        Bicomplex::new(
            Complex64::new(self.p(x) + self.m, 0.0),
            -Complex64::i() * self.omega,
        )
    }

    /// `∂̄W = conj(bW)`, the equation for `W = Q₁`.
    pub fn upper_equation(&self) -> VekuaCoefficients {
        let model = self.clone();
        VekuaCoefficients::new(
            |_| Bicomplex::ZERO,
            move |z| model.b(z.x),
            ConjugationMode::Outer,
        )
    }

    /// `∂̄w = b w̄`, the equation for `w = Q₂`.
    pub fn lower_equation(&self) -> VekuaCoefficients {
        let model = self.clone();
        VekuaCoefficients::new(
            |_| Bicomplex::ZERO,
            move |z| model.b(z.x),
            ConjugationMode::Plain,
        )
    }

    /// `(cF·e^{s}, cG·e^{−s})` for `s ∈ {σ, τ}` with exact derivatives.
    fn exponential_pair(
        &self,
        sign: f64,
        cf: Bicomplex,
        cg: Bicomplex,
        domain: Rect,
    ) -> GeneratingPair {
        let (m1, m2, m3) = (self.clone(), self.clone(), self.clone());
        let s = move |model: &PotentialModel, z: Point2| {
            if sign > 0.0 {
                model.sigma(z)
            } else {
                model.tau(z)
            }
        };
        // ∂̄e^{s} = (s_x + k s_y)e^{s}, ∂e^{s} = (s_x − k s_y)e^{s}.
        let grads = move |model: &PotentialModel, z: Point2| {
            let sx = Complex64::new(sign * (model.p(z.x) + model.m), 0.0);
            let sy = Complex64::i() * model.omega;
            (Bicomplex::new(sx, sy), Bicomplex::new(sx, -sy))
        };
        GeneratingPair::new(
            move |z| cf * s(&m1, z).exp(),
            move |z| cg * (-s(&m2, z)).exp(),
            domain,
        )
        .with_derivatives(move |z| {
            let (f, g) = (cf * s(&m3, z).exp(), cg * (-s(&m3, z)).exp());
            let (bar, plain) = grads(&m3, z);
            PairDerivatives {
                f_zbar: bar * f,
                f_z: plain * f,
                g_zbar: -(bar * g),
                g_z: -(plain * g),
            }
        })
    }

    /// `((e^σ, e^{−σ}k), (e^τ, e^{−τ}k))`.
    pub fn make_pairs(&self, domain: Rect) -> (GeneratingPair, GeneratingPair) {
        (
            self.exponential_pair(1.0, Bicomplex::ONE, Bicomplex::K, domain),
            self.exponential_pair(-1.0, Bicomplex::ONE, Bicomplex::K, domain),
        )
    }

    /// Period-2 sequence for `∂̄W = conj(bW)`.
    pub fn generating_sequence(&self, domain: Rect) -> GeneratingSequence {
        let (p0, p1) = self.make_pairs(domain);
        GeneratingSequence::periodic(vec![p0, p1]).expect("two pairs")
    }

    /// `(e^τ k, −e^{−τ})`, a generating pair for `∂̄w = b w̄`.
    pub fn lower_pair(&self, domain: Rect) -> GeneratingPair {
        self.exponential_pair(-1.0, Bicomplex::K, -Bicomplex::ONE, domain)
    }

    /// Period-2 sequence `(e^τ k, −e^{−τ}) → (e^σ k, −e^{−σ})` for `∂̄w = b w̄`.
    pub fn lower_sequence(&self, domain: Rect) -> GeneratingSequence {
        let p1 = self.exponential_pair(1.0, Bicomplex::K, -Bicomplex::ONE, domain);
        GeneratingSequence::periodic(vec![self.lower_pair(domain), p1]).expect("two pairs")
    }

    pub fn nu_potentials(&self) -> SchrodingerPotentials {
        let (a, b) = (self.clone(), self.clone());
        SchrodingerPotentials {
            nu1: Arc::new(move |x| a.nu_common(x) + a.dp(x)),
            nu2: Arc::new(move |x| b.nu_common(x) - b.dp(x)),
        }
    }

    fn nu_common(&self, x: f64) -> Complex64 {
        let q = self.p(x) + self.m;
        Complex64::new(q * q, 0.0) - self.omega * self.omega
    }

    /// `max |P′ − p|` over the samples, `P′` by differencing.
    pub fn antiderivative_error(&self, xs: &[f64]) -> Result<f64> {
        let cfg = DiffConfig::default();
        xs.iter().try_fold(0.0f64, |acc, &x| {
            let d = diff::derivative(&|t| Ok(self.P(t)), x, &cfg)?;
            Ok(acc.max((d - self.p(x)).abs()))
        })
    }
}

pub type ComplexFn1 = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// `ν₁` for `Sc W` and `ν₂` for `Vec W`.
#[derive(Clone)]
pub struct SchrodingerPotentials {
    pub nu1: ComplexFn1,
    pub nu2: ComplexFn1,
}

/// `−Δu + ν(x)u` at `z` with the fourth-order 5-point-per-axis Laplacian.
pub fn schrodinger_residual(
    u: &dyn Fn(Point2) -> Result<Complex64>,
    nu: &dyn Fn(f64) -> Complex64,
    z: Point2,
    h: f64,
) -> Result<Complex64> {
    let lap = diff::laplacian(&|x, y| u(Point2::new(x, y)), z.x, z.y, h)?;
    Ok(-lap + nu(z.x) * u(z)?)
}

/// Largest Schrödinger residuals of `Sc W` and `Vec W` over a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateReport {
    pub scalar: f64,
    pub vector: f64,
}

impl ConjugateReport {
    pub fn max(&self) -> f64 {
        self.scalar.max(self.vector)
    }
}

pub fn conjugate_parts_check(
    w: &dyn BicomplexField,
    model: &PotentialModel,
    grid: &[Point2],
    h: f64,
) -> Result<ConjugateReport> {
    let nu = model.nu_potentials();
    let sc = |z: Point2| w.eval(z).map(|v| v.sc);
    let vec = |z: Point2| w.eval(z).map(|v| v.vec);
    let mut report = ConjugateReport {
        scalar: 0.0,
        vector: 0.0,
    };
    for &z in grid {
        report.scalar = report
            .scalar
            .max(schrodinger_residual(&sc, &*nu.nu1, z, h)?.norm());
        report.vector = report
            .vector
            .max(schrodinger_residual(&vec, &*nu.nu2, z, h)?.norm());
    }
    Ok(report)
}

/// JSON form of `ν` for models seeded from a Schrödinger potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", deny_unknown_fields)]
pub enum NuSpec {
    /// `Σ cᵢ xⁱ`.
    Polynomial { coeffs: Vec<f64> },
    /// Monotone cubic interpolation of samples.
    Table { x: Vec<f64>, nu: Vec<f64> },
}

impl NuSpec {
    pub fn build(&self) -> Result<RealFn> {
        match self {
            NuSpec::Polynomial { coeffs } => {
                let c = coeffs.clone();
                Ok(RealFn::new(move |x| {
                    c.iter().rev().fold(0.0, |acc, ci| acc * x + ci)
                }))
            }
            NuSpec::Table { x, nu } => {
                let t = Hermite::pchip(x.clone(), nu.clone())?;
                Ok(RealFn::new(move |v| t.value(v)))
            }
        }
    }
}

/// JSON form of a potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant {
        c: f64,
    },
    Linear {
        slope: f64,
    },
    Table {
        x: Vec<f64>,
        p: Vec<f64>,
    },
    FromNu {
        nu: NuSpec,
        x0: f64,
        f0: f64,
        df0: f64,
    },
}

impl PotentialSpec {
    /// `range` bounds the ODE integration for [`PotentialSpec::FromNu`].
    pub fn build(&self, m: f64, omega: Complex64, range: (f64, f64)) -> Result<PotentialModel> {
        match self {
            PotentialSpec::Zero => Ok(PotentialModel::zero(m, omega)),
            PotentialSpec::Constant { c } => Ok(PotentialModel::constant(*c, m, omega)),
            PotentialSpec::Linear { slope } => Ok(PotentialModel::linear(*slope, m, omega)),
            PotentialSpec::Table { x, p } => {
                PotentialModel::tabulated(x.clone(), p.clone(), m, omega)
            }
            PotentialSpec::FromNu { nu, x0, f0, df0 } => {
                PotentialModel::from_nu(nu.build()?, *x0, *f0, *df0, range, m, omega)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::dbar;
    use crate::field::dz;
    use crate::pseudoanalytic::{is_successor, vekua_residual};
    use proptest::prelude::*;

    const DOMAIN: Rect = Rect::square(1.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_pairs_are_classical() {
        let (p0, p1) = PotentialModel::zero(0.0, c(0.0, 0.0)).make_pairs(DOMAIN);
        let z = Point2::new(0.3, -0.7);
        for p in [&p0, &p1] {
            assert_eq!(p.f(z), Bicomplex::ONE);
            assert_eq!(p.g(z), Bicomplex::K);
        }
        let lower = PotentialModel::zero(0.0, c(0.0, 0.0)).lower_pair(DOMAIN);
        assert_eq!((lower.f(z), lower.g(z)), (Bicomplex::K, -Bicomplex::ONE));
    }

    #[test]
    fn massive_free_pair() {
        let (p0, _) = PotentialModel::zero(1.0, c(0.0, 0.0)).make_pairs(DOMAIN);
        let z = Point2::new(0.4, 0.9);
        assert!((p0.f(z) - Bicomplex::from_real(0.4f64.exp(), 0.0)).norm() < 1e-15);
        assert!((p0.g(z) - Bicomplex::from_real(0.0, (-0.4f64).exp())).norm() < 1e-15);
    }

    #[test]
    fn pair_derivatives_match_differences() {
        let model = PotentialModel::linear(0.8, 0.5, c(0.7, 0.1));
        let (p0, p1) = model.make_pairs(DOMAIN);
        let z = Point2::new(0.2, -0.3);
        let cfg = DiffConfig::default();
        for pair in [p0, p1, model.lower_pair(DOMAIN)] {
            let d = pair.derivatives_at(z).unwrap();
            let f = |p: Point2| pair.f(p);
            let g = |p: Point2| pair.g(p);
            assert!((d.f_zbar - dbar(&f, z, &cfg).unwrap()).norm() < 1e-8);
            assert!((d.f_z - dz(&f, z, &cfg).unwrap()).norm() < 1e-8);
            assert!((d.g_zbar - dbar(&g, z, &cfg).unwrap()).norm() < 1e-8);
            assert!((d.g_z - dz(&g, z, &cfg).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn pairs_solve_their_equations() {
        let model = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0));
        let (p0, _) = model.make_pairs(DOMAIN);
        let lower = model.lower_pair(DOMAIN);
        let cfg = DiffConfig::default();
        let z = Point2::new(0.1, 0.6);
        let upper = model.upper_equation();
        let lower_eq = model.lower_equation();
        for (pair, eq) in [(&p0, &upper), (&lower, &lower_eq)] {
            let f = |p: Point2| pair.f(p);
            let g = |p: Point2| pair.g(p);
            assert!(vekua_residual(eq, &f, z, &cfg).unwrap().norm() < 1e-9);
            assert!(vekua_residual(eq, &g, z, &cfg).unwrap().norm() < 1e-9);
            assert!(pair.determinant(z).norm() > 0.5);
        }
        // The pair's own coefficient b is conj of the outer-mode b, a = 0.
        let cc = p0.char_coeffs(z).unwrap();
        assert!(cc.a.norm() < 1e-14 && (cc.b - model.b(z.x).conj()).norm() < 1e-14);
    }

    #[test]
    fn sequences_have_period_two() {
        let grid = DOMAIN.grid(6, 6);
        for model in [
            PotentialModel::constant(-0.3, 1.0, c(0.7, 0.0)),
            PotentialModel::linear(1.2, 0.0, c(0.4, 0.2)),
        ] {
            assert!(model
                .generating_sequence(DOMAIN)
                .check(&grid, 1e-12)
                .unwrap());
            assert!(model.lower_sequence(DOMAIN).check(&grid, 1e-12).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_constant_models_have_successors(cv in -2.0..2.0f64, m in -2.0..2.0f64, w in -2.0..2.0f64) {
            let model = PotentialModel::constant(cv, m, c(w, 0.0));
            let (p0, p1) = model.make_pairs(DOMAIN);
            let grid = DOMAIN.grid(4, 4);
            prop_assert!(is_successor(&p0, &p1, &grid, 1e-12).unwrap());
        }

        #[test]
        fn nu_sum_and_difference(s in -2.0..2.0f64, m in -1.0..1.0f64, w in -1.0..1.0f64, x in -1.0..1.0f64) {
            let model = PotentialModel::linear(s, m, c(w, 0.0));
            let nu = model.nu_potentials();
            let q = model.p(x) + m;
            prop_assert!(((nu.nu1)(x) - (nu.nu2)(x) - 2.0 * s).norm() < 1e-12);
            prop_assert!(((nu.nu1)(x) + (nu.nu2)(x) - (2.0 * q * q - 2.0 * w * w)).norm() < 1e-12);
        }
    }

    #[test]
    fn nu_examples() {
        let nu = PotentialModel::zero(1.5, c(0.5, 0.0)).nu_potentials();
        assert!(((nu.nu1)(0.3) - (1.5f64.powi(2) - 0.25)).norm() < 1e-15);
        assert!(((nu.nu2)(0.3) - (1.5f64.powi(2) - 0.25)).norm() < 1e-15);
        let nu = PotentialModel::linear(1.0, 0.0, c(0.0, 0.0)).nu_potentials();
        assert!(((nu.nu1)(0.4) - 1.16).norm() < 1e-15);
        assert!(((nu.nu2)(0.4) - (-0.84)).norm() < 1e-15);
    }

    #[test]
    fn nu2_from_f0_derivatives() {
        let model = PotentialModel::linear(0.7, 0.4, c(0.6, 0.0));
        let f0 = |z: Point2| Bicomplex::scalar(model.f0(z));
        let cfg = DiffConfig::default();
        let nu = model.nu_potentials();
        for z in DOMAIN.grid(4, 4) {
            let f = f0(z);
            let prod = dbar(&f0, z, &cfg).unwrap() * dz(&f0, z, &cfg).unwrap() / (f * f);
            let nu2 = prod * 2.0 - Bicomplex::scalar((nu.nu1)(z.x));
            assert!((nu2 - Bicomplex::scalar((nu.nu2)(z.x))).norm() < 1e-6);
        }
    }

    #[test]
    fn antiderivatives() {
        let xs: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let table_x: Vec<f64> = (0..41).map(|i| -1.0 + 0.05 * i as f64).collect();
        let table_p: Vec<f64> = table_x.iter().map(|x| x.sin()).collect();
        for model in [
            PotentialModel::constant(0.5, 1.0, c(0.7, 0.0)),
            PotentialModel::linear(-1.3, 0.0, c(0.0, 0.0)),
            PotentialModel::tabulated(table_x, table_p, 0.0, c(0.0, 0.0)).unwrap(),
        ] {
            assert!(model.antiderivative_error(&xs).unwrap() < 1e-8);
        }
    }

    #[test]
    fn tabulated_interpolation() {
        let xs: Vec<f64> = (0..81).map(|i| -1.0 + 0.025 * i as f64).collect();
        let model = PotentialModel::tabulated(
            xs.clone(),
            xs.iter().map(|x| x * x).collect(),
            0.0,
            c(0.0, 0.0),
        )
        .unwrap();
        assert!((model.p(0.31) - 0.0961).abs() < 1e-4);
        assert!((model.P(0.5) - 1.125 / 3.0).abs() < 1e-5);
        // Monotone data stays monotone.
        let step = Hermite::pchip(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let samples: Vec<f64> = (0..=300).map(|i| step.value(i as f64 * 0.01)).collect();
        assert!(samples.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        assert!(
            PotentialModel::tabulated(vec![0.0, 0.0], vec![1.0, 2.0], 0.0, c(0.0, 0.0)).is_err()
        );
    }

    #[test]
    fn from_nu_examples() {
        let model = PotentialModel::from_nu(
            RealFn::new(|_| 0.0),
            0.0,
            1.0,
            0.0,
            (-1.0, 1.0),
            0.0,
            c(0.0, 0.0),
        )
        .unwrap();
        assert!(model.p(0.7).abs() < 1e-14 && model.P(-0.4).abs() < 1e-14);

        let one = RealFn::new(|_| 1.0);
        let model =
            PotentialModel::from_nu(one.clone(), 0.0, 1.0, 1.0, (-1.0, 1.0), 0.0, c(0.0, 0.0))
                .unwrap();
        for x in [-0.9, -0.2, 0.35, 1.0] {
            assert!((model.p(x) - 1.0).abs() < 1e-10);
            assert!((model.P(x) - x).abs() < 1e-10);
        }
        assert!(matches!(
            PotentialModel::from_nu(one, 0.0, 1.0, -1.0, (-1.0, 30.0), 0.0, c(0.0, 0.0)),
            Err(Error::SolutionVanishes { .. })
        ));
        // ν = −1 has f₀ = cos x, which vanishes at π/2.
        assert!(matches!(
            PotentialModel::from_nu(
                RealFn::new(|_| -1.0),
                0.0,
                1.0,
                0.0,
                (-2.0, 2.0),
                0.0,
                c(0.0, 0.0)
            ),
            Err(Error::SolutionVanishes { .. })
        ));
    }

    #[test]
    fn from_nu_round_trip() {
        // Airy-type ν = x with a positive solution on [−1, 1].
        let model = PotentialModel::from_nu(
            RealFn::new(|x| x),
            0.0,
            1.0,
            0.3,
            (-1.0, 1.0),
            0.0,
            c(0.0, 0.0),
        )
        .unwrap();
        let nus = model.nu_potentials();
        let cfg = DiffConfig::default();
        for i in 0..=20 {
            let x = -0.95 + 0.095 * i as f64;
            let dp = diff::derivative(&|t| Ok(model.p(t)), x, &cfg).unwrap();
            let p = model.p(x);
            assert!((dp + p * p - x).abs() < 1e-6, "x = {x}");
            assert!(((nus.nu1)(x) - x).norm() <= 1e-6 * (1.0 + x.abs()));
        }
        assert!(model.antiderivative_error(&[-0.5, 0.1, 0.8]).unwrap() < 1e-8);
    }

    #[test]
    fn schrodinger_residual_examples() {
        let zero = |_: f64| c(0.0, 0.0);
        let harmonic = |z: Point2| Ok(c(z.x * z.x - z.y * z.y, 0.0));
        assert!(
            schrodinger_residual(&harmonic, &zero, Point2::new(0.3, 0.2), 1e-3)
                .unwrap()
                .norm()
                < 1e-6
        );
        let one = |_: f64| c(1.0, 0.0);
        let ex = |z: Point2| Ok(c(z.x.exp(), 0.0));
        assert!(
            schrodinger_residual(&ex, &one, Point2::new(0.3, 0.2), 1e-3)
                .unwrap()
                .norm()
                < 1e-6
        );
    }

    #[test]
    fn conjugate_parts() {
        let model = PotentialModel::linear(0.6, 0.5, c(0.8, 0.0));
        let grid = DOMAIN.shrink(0.1).grid(4, 4);
        let f0 = |z: Point2| Bicomplex::scalar(model.f0(z));
        let report = conjugate_parts_check(&f0, &model, &grid, 1e-3).unwrap();
        assert!(report.max() < 1e-6, "{report:?}");
        let zbar =
            |z: Point2| Bicomplex::from_real(z.x, -z.y) * Bicomplex::from_real(z.x, z.y).powu(2);
        assert!(
            conjugate_parts_check(&zbar, &model, &grid, 1e-3)
                .unwrap()
                .max()
                > 1e-2
        );
    }

    #[test]
    fn spec_json() {
        let spec: PotentialSpec = serde_json::from_str(r#"{"type":"constant","c":0.5}"#).unwrap();
        assert_eq!(spec, PotentialSpec::Constant { c: 0.5 });
        let spec: PotentialSpec = serde_json::from_str(
            r#"{"type":"from_nu","nu":{"type":"polynomial","coeffs":[0,1]},"x0":0,"f0":1,"df0":0.3}"#,
        )
        .unwrap();
        let model = spec.build(0.0, c(0.0, 0.0), (-1.0, 1.0)).unwrap();
        assert!(matches!(
            model.provenance,
            Provenance::FromNu { steps: 1000, .. }
        ));
        assert!(serde_json::from_str::<PotentialSpec>(r#"{"type":"constant","k":0.5}"#).is_err());
    }
}
