//! Invariant checks over models, formal powers and spinors.
//!
//! Each check returns a [`CheckResult`]; [`run_suite`] runs a selection of
//! them against one model with the tolerances in [`SuiteSettings`].

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, ZERO_DIVISOR_TOL};
use crate::biquaternion::{
    intertwining_sides, FieldSampler, GammaMatrices, PotentialData, ScalarFn, SpinorValue,
};
use crate::dirac_bridge::{to_physical, DiracSolution};
use crate::error::{Error, Result};
use crate::formal_powers::{
    differential_relation_check, taylor_coefficients, FormalPower, GeneratingSequence, PowerSeries,
    QuadratureConfig, TaylorExpansion, TAYLOR_STEP,
};
use crate::geometry::{CellGrid, Point2, Point3, Polyline, Rect};
use crate::potential::{conjugate_parts_check, PotentialModel};
use crate::pseudoanalytic::{
    grid_dbar, vekua_residual, ConjugationMode, GeneratingPair, SimilarityConfig, SimilarityKernel,
    VekuaCoefficients,
};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(check: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

/// Nodes used wherever formal powers are differenced.
pub const DIFFERENCED_NODES: usize = 1025;

fn fixed_quadrature() -> QuadratureConfig {
    QuadratureConfig::fixed(DIFFERENCED_NODES)
}

fn random_points(rng: &mut impl Rng, rect: Rect, count: usize) -> Vec<Point2> {
    (0..count)
        .map(|_| {
            Point2::new(
                rng.gen_range(rect.x_min..rect.x_max),
                rng.gen_range(rect.y_min..rect.y_max),
            )
        })
        .collect()
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn collect_max(values: Vec<Result<f64>>) -> Result<f64> {
    values
        .into_iter()
        .try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

/// Random spinor field whose components are polynomials of total degree
/// `≤ degree` in `(x₁, x₂, x₃)`.
pub fn random_polynomial_spinor(rng: &mut impl Rng, degree: u32) -> FieldSampler<SpinorValue> {
    let mut exponents = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                exponents.push([a as i32, b as i32, c as i32]);
            }
        }
    }
    let coeffs: Vec<[Complex64; 4]> = exponents
        .iter()
        .map(|_| std::array::from_fn(|_| random_complex(rng)))
        .collect();
    FieldSampler::new(move |x: Point3| {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (e, c) in exponents.iter().zip(&coeffs) {
            let mono = x[0].powi(e[0]) * x[1].powi(e[1]) * x[2].powi(e[2]);
            for k in 0..4 {
                out[k] += c[k] * mono;
            }
        }
        SpinorValue(out)
    })
}

/// Random mass, energy and potentials, each constant plus linear in `x`.
pub fn random_linear_potentials(rng: &mut impl Rng) -> PotentialData {
    let mut lin = || -> ScalarFn {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        Arc::new(move |x: Point3| c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[2])
    };
    let (p_sc, p_el) = (lin(), lin());
    let a = [lin(), lin(), lin()];
    PotentialData::free(
        rng.gen_range(0.0..2.0),
        Complex64::new(rng.gen_range(-2.0..2.0), 0.0),
    )
    .with_scalar(p_sc)
    .with_electric(p_el)
    .with_vector(a)
}

/// `‖𝒜γ₁γ₂γ₃𝔻_ωΦ − R_ω𝒜Φ‖ / ‖Φ‖` over random polynomial fields and points.
pub fn check_intertwining(
    fields: usize,
    points_per_field: usize,
    gammas: &GammaMatrices,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..fields)
        .map(|_| {
            let phi = random_polynomial_spinor(&mut rng, 4);
            let pot = random_linear_potentials(&mut rng);
            let points: Vec<Point3> = (0..points_per_field)
                .map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
                .collect();
            (phi, pot, points)
        })
        .collect();
    let residuals = cases
        .par_iter()
        .map(|(phi, pot, points)| {
            let mut worst = 0.0f64;
            for &x in points {
                let (lhs, rhs) = intertwining_sides(phi, x, pot, gammas)?;
                let scale = phi.eval(crate::biquaternion::reflect(x))?.norm().max(1e-12);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
            Ok(worst)
        })
        .collect();
    Ok(CheckResult::new(
        "intertwining",
        collect_max(residuals)?,
        tol,
    ))
}

/// `Z⁽ⁿ⁾(1, 0; z) = zⁿ` for the trivial model, relative error.
pub fn check_classical_limit(
    n_max: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let domain = Rect::square(1.0);
    let seq = PotentialModel::zero(0.0, Complex64::new(0.0, 0.0)).generating_sequence(domain);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zs: Vec<Point2> = (0..points)
        .map(|_| {
            let r = rng.gen_range(0.1..1.0);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let power = FormalPower::new(&seq, n, Bicomplex::ONE, Point2::new(0.0, 0.0));
        let values = power.evaluate_many(&zs)?;
        for (z, v) in zs.iter().zip(values) {
            let expect = z.to_bicomplex().powu(n as u32);
            worst = worst.max((v.value - expect).norm() / expect.norm());
        }
    }
    Ok(CheckResult::new("classical_limit", worst, tol))
}

/// `∫_{u₀}^{u₁} e^{βu} du`.
fn exp_integral(beta: Complex64, u0: f64, u1: f64) -> Complex64 {
    if beta.norm() < 1e-12 {
        return Complex64::new(u1 - u0, 0.0);
    }
    ((beta * u1).exp() - (beta * u0).exp()) / beta
}

/// Closed form of `Z⁽¹⁾(a, z₀; z)` for `p ≡ c`.
///
/// The integrand of the second level is `λ₁e^{−2(c+m)x′} + μ₁e^{−2iωy′}k`
/// (and its companion), whose antiderivatives separate in `x′` and `y′`.
pub fn closed_form_first_power(
    model: &PotentialModel,
    a: Bicomplex,
    z0: Point2,
    z: Point2,
) -> Result<Bicomplex> {
    let c = model
        .constant_value()
        .ok_or_else(|| Error::Invalid("closed form needs a constant potential".into()))?;
    let kappa = Complex64::new(2.0 * (c + model.m), 0.0);
    let iw2 = Complex64::i() * model.omega * 2.0;
    let lambda = a.sc * (-model.tau(z0)).exp();
    let mu = a.vec * model.tau(z0).exp();
    let e_sigma = model.sigma(z).exp();
    let scalar = lambda * exp_integral(-kappa, z0.x, z.x) - mu * exp_integral(-iw2, z0.y, z.y);
    let vector = mu * exp_integral(kappa, z0.x, z.x) + lambda * exp_integral(iw2, z0.y, z.y);
    Ok(Bicomplex::new(e_sigma * scalar, vector / e_sigma))
}

/// Relative agreement of quadrature `Z⁽¹⁾` with [`closed_form_first_power`].
pub fn check_closed_form(
    setup: &PowerSetup,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let zs = random_points(&mut ChaCha8Rng::seed_from_u64(seed), setup.domain, points);
    let values = FormalPower::new(&setup.sequence(), 1, setup.a, setup.z0)
        .with_quadrature(setup.quad)
        .evaluate_many(&zs)?;
    let mut worst = 0.0f64;
    for (z, v) in zs.iter().zip(values) {
        let expect = closed_form_first_power(&setup.model, setup.a, setup.z0, *z)?;
        worst = worst.max((v.value - expect).norm() / expect.norm().max(1e-300));
    }
    Ok(CheckResult::new("closed_form", worst, tol))
}

fn successor_defect(pred: &GeneratingPair, succ: &GeneratingPair, grid: &[Point2]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in grid {
        let p = pred.char_coeffs(z)?;
        let s = succ.char_coeffs(z)?;
        worst = worst
            .max((s.a - p.a).norm() / (1.0 + p.a.norm()))
            .max((s.b + p.big_b).norm() / (1.0 + p.big_b.norm()));
    }
    Ok(worst)
}

/// Successor relations of both period-2 sequences on a grid.
pub fn check_successor(
    model: &PotentialModel,
    domain: Rect,
    n: usize,
    tol: f64,
) -> Result<CheckResult> {
    let grid = domain.grid(n, n);
    let mut worst = 0.0f64;
    for seq in [
        model.generating_sequence(domain),
        model.lower_sequence(domain),
    ] {
        for m in 0..seq.period() as i64 {
            let (p, s) = (seq.pair_at(m), seq.pair_at(m + 1));
            p.check_nondegenerate(n)?;
            worst = worst.max(successor_defect(p, s, &grid)?);
        }
    }
    Ok(CheckResult::new("successor", worst, tol))
}

/// Common inputs of the formal-power checks.
#[derive(Clone, Debug)]
pub struct PowerSetup {
    pub model: PotentialModel,
    pub domain: Rect,
    pub z0: Point2,
    pub a: Bicomplex,
    /// Quadrature for checks that do not difference the powers.
    pub quad: QuadratureConfig,
}

impl PowerSetup {
    pub fn new(model: PotentialModel, domain: Rect, z0: Point2, a: Bicomplex) -> Self {
        Self {
            model,
            domain,
            z0,
            a,
            quad: QuadratureConfig::default(),
        }
    }

    pub fn sequence(&self) -> GeneratingSequence {
        self.model.generating_sequence(self.domain)
    }

    fn interior(&self, rng: &mut impl Rng, count: usize) -> Vec<Point2> {
        let margin = 0.05 * self.domain.width().min(self.domain.height());
        random_points(rng, self.domain.shrink(margin), count)
    }
}

/// Outer-mode residual `‖∂̄Z⁽ⁿ⁾ − conj(bZ⁽ⁿ⁾)‖` for `n ≤ n_max`.
pub fn check_vekua_residual(
    setup: &PowerSetup,
    n_max: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let seq = setup.sequence();
    let eq = setup.model.upper_equation();
    let zs = setup.interior(&mut ChaCha8Rng::seed_from_u64(seed), points);
    let cfg = crate::diff::DiffConfig::default();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let power =
            FormalPower::new(&seq, n, setup.a, setup.z0).with_quadrature(fixed_quadrature());
        let res = zs
            .par_iter()
            .map(|&z| Ok(vekua_residual(&eq, &power, z, &cfg)?.norm()))
            .collect();
        worst = worst.max(collect_max(res)?);
    }
    Ok(CheckResult::new("vekua_residual", worst, tol))
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Fitted slopes of `log‖Z⁽ⁿ⁾ − a(z−z₀)ⁿ‖` over `|z−z₀| ∈ [1e−3, 1e−1]`.
///
/// The residual is the largest `(n + 1) − slope`; the ideal order is `n + 1`.
pub fn check_asymptotics(
    setup: &PowerSetup,
    orders: &[usize],
    directions: usize,
    tol: f64,
) -> Result<CheckResult> {
    let seq = setup.sequence();
    let radii: Vec<f64> = (0..9).map(|i| 10f64.powf(-3.0 + 0.25 * i as f64)).collect();
    let mut worst = f64::NEG_INFINITY;
    for &n in orders {
        let power = FormalPower::new(&seq, n, setup.a, setup.z0).with_quadrature(setup.quad);
        for d in 0..directions {
            let t = 0.3 + std::f64::consts::TAU * d as f64 / directions as f64;
            let mut errs = Vec::with_capacity(radii.len());
            for &r in &radii {
                let dz = Point2::new(r * t.cos(), r * t.sin());
                let z = setup.z0 + dz;
                let approx = setup.a * dz.to_bicomplex().powu(n as u32);
                errs.push((power.evaluate(z)? - approx).norm());
            }
            worst = worst.max((n + 1) as f64 - log_log_slope(&radii, &errs));
        }
    }
    Ok(CheckResult::new("asymptotics", worst, tol))
}

/// `‖d_(F₀,G₀)Z⁽ⁿ⁾/dz − nZ₁⁽ⁿ⁻¹⁾‖` for `n ≤ n_max`.
pub fn check_differential_relation(
    setup: &PowerSetup,
    n_max: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let seq = setup.sequence();
    let zs = setup.interior(&mut ChaCha8Rng::seed_from_u64(seed), points);
    let quad = fixed_quadrature();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let res = zs
            .par_iter()
            .map(|&z| differential_relation_check(&seq, n, setup.a, setup.z0, z, &quad))
            .collect();
        worst = worst.max(collect_max(res)?);
    }
    Ok(CheckResult::new("differential_relation", worst, tol))
}

/// Straight segment against the axis-parallel dog-leg, relative to `max(1, |Z|)`.
pub fn check_path_independence(
    setup: &PowerSetup,
    n_max: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let seq = setup.sequence();
    let zs = setup.interior(&mut ChaCha8Rng::seed_from_u64(seed), points);
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let power = FormalPower::new(&seq, n, setup.a, setup.z0).with_quadrature(setup.quad);
        let res = zs
            .par_iter()
            .map(|&z| {
                if z == setup.z0 {
                    return Ok(0.0);
                }
                let straight = power.evaluate(z)?;
                let bent = power.evaluate_along(&Polyline::dog_leg(setup.z0, z)?)?;
                Ok((straight - bent).norm() / straight.norm().max(1.0))
            })
            .collect();
        worst = worst.max(collect_max(res)?);
    }
    Ok(CheckResult::new("path_independence", worst, tol))
}

/// `−Δu + ν₁u` for `u = Sc Z⁽ⁿ⁾` and `−Δu + ν₂u` for `u = Vec Z⁽ⁿ⁾`.
pub fn check_schrodinger(
    setup: &PowerSetup,
    n_max: usize,
    points: usize,
    h: f64,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let seq = setup.sequence();
    let zs = setup.interior(&mut ChaCha8Rng::seed_from_u64(seed), points);
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let power =
            FormalPower::new(&seq, n, setup.a, setup.z0).with_quadrature(fixed_quadrature());
        let res = zs
            .par_iter()
            .map(|&z| Ok(conjugate_parts_check(&power, &setup.model, &[z], h)?.max()))
            .collect();
        worst = worst.max(collect_max(res)?);
    }
    Ok(CheckResult::new("schrodinger", worst, tol))
}

/// Outcome of a Taylor round trip.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub recovered: TaylorExpansion,
    pub coefficient_error: f64,
    /// `truncation_errors[N]`: largest `|W − Σ_{n≤N} Z⁽ⁿ⁾(a_n)|` on the circle.
    pub truncation_errors: Vec<f64>,
    pub monotone: bool,
}

/// Recovers the coefficients of `W = Σ Z⁽ⁿ⁾(a_n, z₀; ·)` and the truncation
/// errors of the re-expansion on `|z − z₀| = radius`.
pub fn taylor_round_trip(
    setup: &PowerSetup,
    coefficients: &[Bicomplex],
    radius: f64,
    directions: usize,
) -> Result<TaylorReport> {
    let seq = setup.sequence();
    let quad = fixed_quadrature();
    let exact = TaylorExpansion {
        z0: setup.z0,
        coefficients: coefficients.to_vec(),
    };
    let w = PowerSeries::new(&seq, &exact, quad);
    let degree = coefficients.len() - 1;
    let recovered = taylor_coefficients(&w, &seq, setup.z0, degree, TAYLOR_STEP)?;
    let coefficient_error = max_of(
        recovered
            .coefficients
            .iter()
            .zip(coefficients)
            .map(|(r, e)| (*r - *e).norm()),
    );
    let circle: Vec<Point2> = (0..directions)
        .map(|d| {
            let t = 0.1 + std::f64::consts::TAU * d as f64 / directions as f64;
            setup.z0 + Point2::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    let target: Vec<Bicomplex> = circle
        .iter()
        .map(|&z| crate::field::BicomplexField::eval(&w, z))
        .collect::<Result<_>>()?;
    let mut truncation_errors = Vec::with_capacity(degree + 1);
    for n in 0..=degree {
        let partial = PowerSeries::new(&seq, &recovered.truncated(n), quad);
        let mut worst = 0.0f64;
        for (z, t) in circle.iter().zip(&target) {
            worst = worst.max((crate::field::BicomplexField::eval(&partial, *z)? - *t).norm());
        }
        truncation_errors.push(worst);
    }
    let monotone = truncation_errors.windows(2).all(|w| w[1] < w[0]);
    Ok(TaylorReport {
        recovered,
        coefficient_error,
        truncation_errors,
        monotone,
    })
}

pub fn check_taylor_round_trip(
    setup: &PowerSetup,
    coefficients: &[Bicomplex],
    radius: f64,
    tol: f64,
) -> Result<CheckResult> {
    let report = taylor_round_trip(setup, coefficients, radius, 8)?;
    let mut result = CheckResult::new("taylor_round_trip", report.coefficient_error, tol);
    result.pass &= report.monotone;
    Ok(result)
}

/// Number of zero-divisor values among `Z⁽ⁿ⁾`, `n ≤ n_max`, on an `grid × grid` grid.
///
/// Requires `b = p + m − iωk` to stay away from zero divisors and zero on the domain.
pub fn check_zero_divisors(setup: &PowerSetup, n_max: usize, grid: usize) -> Result<CheckResult> {
    const MARGIN: f64 = 1e-3;
    let zs = setup.domain.grid(grid, grid);
    for z in &zs {
        let b = setup.model.b(z.x);
        if b.modulus().norm() <= MARGIN * b.norm_sqr() {
            return Err(Error::ZeroDivisorCoefficient { x: z.x, y: z.y });
        }
    }
    if setup.a.is_singular(ZERO_DIVISOR_TOL) {
        return Err(Error::Invalid(
            "zero-divisor check needs a coefficient that is not a zero divisor".into(),
        ));
    }
    let seq = setup.sequence();
    let mut count = 0usize;
    for n in 0..=n_max {
        let power = FormalPower::new(&seq, n, setup.a, setup.z0).with_quadrature(setup.quad);
        for v in power.evaluate_many(&zs)? {
            if v.value != Bicomplex::ZERO && v.value.is_zero_divisor(ZERO_DIVISOR_TOL) {
                count += 1;
            }
        }
    }
    Ok(CheckResult::new("zero_divisors", count as f64, 0.0))
}

/// `‖𝔻_ωΦ‖` for spinors assembled from upper and lower formal powers.
pub fn check_dirac(
    setup: &PowerSetup,
    n_upper: usize,
    n_lower: usize,
    lower_coefficient: Bicomplex,
    points: usize,
    gammas: &GammaMatrices,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let quad = fixed_quadrature();
    let upper =
        FormalPower::new(&setup.sequence(), n_upper, setup.a, setup.z0).with_quadrature(quad);
    let lower = FormalPower::new(
        &setup.model.lower_sequence(setup.domain),
        n_lower,
        lower_coefficient,
        setup.z0,
    )
    .with_quadrature(quad);
    let solution = DiracSolution::new(&setup.model, Arc::new(upper), Arc::new(lower));
    let zs = setup.interior(&mut ChaCha8Rng::seed_from_u64(seed), points);
    let res = zs
        .par_iter()
        .map(|&z| solution.dirac_residual(to_physical(z), gammas))
        .collect();
    Ok(CheckResult::new("dirac", collect_max(res)?, tol))
}

/// Constant-coefficient case of the similarity principle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimilaritySettings {
    /// `b = beta − iωk`, `a = 0`.
    pub beta: f64,
    pub omega: f64,
    /// `w = λe^τ k − μe^{−τ}` with `τ = −βx + iωy`.
    pub lambda: Complex64,
    pub mu: Complex64,
    pub cells: usize,
    /// Cells dropped at each edge before comparing derivatives.
    pub margin: usize,
    pub kernel: SimilarityConfig,
}

impl Default for SimilaritySettings {
    fn default() -> Self {
        Self {
            beta: 0.5,
            omega: 0.3,
            lambda: Complex64::new(1.0, 0.3),
            mu: Complex64::new(0.5, -0.2),
            cells: 64,
            margin: 4,
            kernel: SimilarityConfig::default(),
        }
    }
}

/// Ratio `‖∂̄(w e^h)‖∞ / ‖∂̄w‖∞` on the cell centres of `[−1, 1]²`.
pub fn check_similarity(settings: &SimilaritySettings, tol: f64) -> Result<CheckResult> {
    let s = *settings;
    let b = Bicomplex::new(Complex64::new(s.beta, 0.0), Complex64::new(0.0, -s.omega));
    let coeffs = VekuaCoefficients::constant(Bicomplex::ZERO, b, ConjugationMode::Plain);
    let w = move |z: Point2| {
        let tau = Complex64::new(-s.beta * z.x, s.omega * z.y);
        Bicomplex::vector(s.lambda * tau.exp()) - Bicomplex::scalar(s.mu * (-tau).exp())
    };
    let grid = CellGrid::new(Rect::square(1.0), s.cells, s.cells);
    let kernel = SimilarityKernel::new(&coeffs, &w, grid, s.kernel)?;
    let h = kernel.h_on_grid();
    let centers = grid.centers();
    let w_values: Vec<Bicomplex> = centers.iter().map(|&z| w(z)).collect();
    let phi: Vec<Bicomplex> = w_values.iter().zip(&h).map(|(w, h)| *w * h.exp()).collect();
    let lo = s.margin.max(1);
    let (mut dphi, mut dw) = (0.0f64, 0.0f64);
    for j in lo..s.cells - lo {
        for i in lo..s.cells - lo {
            dphi = dphi.max(grid_dbar(&phi, &grid, i, j).norm());
            dw = dw.max(grid_dbar(&w_values, &grid, i, j).norm());
        }
    }
    Ok(CheckResult::new("similarity", dphi / dw, tol))
}

/// Checks known to [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Intertwining,
    ClassicalLimit,
    ClosedForm,
    Successor,
    VekuaResidual,
    Asymptotics,
    DifferentialRelation,
    PathIndependence,
    Schrodinger,
    TaylorRoundTrip,
    ZeroDivisors,
    Dirac,
    Similarity,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::Intertwining,
        CheckKind::ClassicalLimit,
        CheckKind::ClosedForm,
        CheckKind::Successor,
        CheckKind::VekuaResidual,
        CheckKind::Asymptotics,
        CheckKind::DifferentialRelation,
        CheckKind::PathIndependence,
        CheckKind::Schrodinger,
        CheckKind::TaylorRoundTrip,
        CheckKind::ZeroDivisors,
        CheckKind::Dirac,
        CheckKind::Similarity,
    ];
}

/// Sample sizes and tolerances for [`run_suite`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSettings {
    pub seed: u64,
    pub intertwining_fields: usize,
    pub intertwining_tol: f64,
    pub classical_tol: f64,
    pub closed_form_tol: f64,
    pub successor_tol: f64,
    pub n_max: usize,
    pub points: usize,
    pub vekua_tol: f64,
    pub asymptotic_slack: f64,
    pub differential_tol: f64,
    pub path_tol: f64,
    pub schrodinger_h: f64,
    pub schrodinger_tol: f64,
    pub taylor_coefficients: Vec<Bicomplex>,
    pub taylor_tol: f64,
    pub zero_divisor_grid: usize,
    pub dirac_tol: f64,
    pub similarity: SimilaritySettings,
    pub similarity_tol: f64,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            seed: 7,
            intertwining_fields: 50,
            intertwining_tol: 1e-6,
            classical_tol: 1e-9,
            closed_form_tol: 1e-8,
            successor_tol: 1e-10,
            n_max: 3,
            points: 40,
            vekua_tol: 1e-5,
            asymptotic_slack: 0.2,
            differential_tol: 1e-5,
            path_tol: 1e-6,
            schrodinger_h: 1e-3,
            schrodinger_tol: 1e-4,
            taylor_coefficients: vec![
                Bicomplex::ONE,
                Bicomplex::from_real(0.5, -0.2),
                Bicomplex::from_real(0.3, 0.1),
                Bicomplex::from_real(-0.2, 0.4),
            ],
            taylor_tol: 1e-3,
            zero_divisor_grid: 40,
            dirac_tol: 1e-4,
            similarity: SimilaritySettings::default(),
            similarity_tol: 0.1,
        }
    }
}

/// Runs the selected checks in order. Checks that do not apply to the model
/// (the closed form for non-constant potentials) are skipped unless listed
/// explicitly, in which case they fail with an error.
pub fn run_suite(
    setup: &PowerSetup,
    settings: &SuiteSettings,
    checks: Option<&[CheckKind]>,
    gammas: &GammaMatrices,
) -> Result<Vec<CheckResult>> {
    let explicit = checks.is_some();
    let checks = checks.unwrap_or(&CheckKind::ALL);
    let s = settings;
    let mut out = Vec::with_capacity(checks.len());
    for &kind in checks {
        let result = match kind {
            CheckKind::Intertwining => {
                check_intertwining(s.intertwining_fields, 2, gammas, s.seed, s.intertwining_tol)?
            }
            CheckKind::ClassicalLimit => {
                check_classical_limit(6, s.points, s.seed, s.classical_tol)?
            }
            CheckKind::ClosedForm => {
                if setup.model.constant_value().is_none() && !explicit {
                    continue;
                }
                check_closed_form(setup, s.points, s.seed, s.closed_form_tol)?
            }
            CheckKind::Successor => {
                check_successor(&setup.model, setup.domain, 8, s.successor_tol)?
            }
            CheckKind::VekuaResidual => {
                check_vekua_residual(setup, s.n_max, s.points, s.seed, s.vekua_tol)?
            }
            CheckKind::Asymptotics => {
                let orders: Vec<usize> = (1..=s.n_max.max(1)).collect();
                check_asymptotics(setup, &orders, 4, s.asymptotic_slack)?
            }
            CheckKind::DifferentialRelation => {
                check_differential_relation(setup, s.n_max, s.points, s.seed, s.differential_tol)?
            }
            CheckKind::PathIndependence => {
                check_path_independence(setup, s.n_max, s.points, s.seed, s.path_tol)?
            }
            CheckKind::Schrodinger => check_schrodinger(
                setup,
                s.n_max,
                s.points,
                s.schrodinger_h,
                s.seed,
                s.schrodinger_tol,
            )?,
            CheckKind::TaylorRoundTrip => {
                check_taylor_round_trip(setup, &s.taylor_coefficients, 0.05, s.taylor_tol)?
            }
            CheckKind::ZeroDivisors => check_zero_divisors(setup, s.n_max, s.zero_divisor_grid)?,
            CheckKind::Dirac => check_dirac(
                setup,
                s.n_max,
                s.n_max.saturating_sub(1),
                Bicomplex::K,
                s.points,
                gammas,
                s.seed,
                s.dirac_tol,
            )?,
            CheckKind::Similarity => check_similarity(&s.similarity, s.similarity_tol)?,
        };
        out.push(result);
    }
    Ok(out)
}
