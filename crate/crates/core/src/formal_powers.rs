//! Formal powers `Z⁽ⁿ⁾_m(a, z₀; z)` of a periodic generating sequence.
//!
//! `Z⁽⁰⁾_m = λF_m + μG_m` with `λF_m(z₀) + μG_m(z₀) = a`, and
//! `Z⁽ⁿ⁺¹⁾_m = (n+1) ∫_{z₀}^{z} Z⁽ⁿ⁾_{m+1} d_(F_m,G_m)ζ`. Every level is sampled
//! on the same nodes of a path from `z₀` to `z`, and the two complex
//! integrals of each level are cumulative Simpson sums, so each node prefix
//! supplies the integrand of the next level.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::diff::DiffConfig;
use crate::error::{Error, Result};
use crate::field::BicomplexField;
use crate::geometry::{Point2, Polyline, Rect};
use crate::pseudoanalytic::{
    adjoint_values, decompose_values, determinant, is_successor, GeneratingPair, DEGENERACY_TOL,
};
use crate::quadrature::simpson_prefix;

/// A periodic chain of generating pairs, each a successor of the previous one.
#[derive(Clone, Debug)]
pub struct GeneratingSequence {
    pairs: Vec<GeneratingPair>,
}

impl GeneratingSequence {
    /// `pairs[m mod len]` is the m-th pair.
    pub fn periodic(pairs: Vec<GeneratingPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Invalid(
                "a generating sequence needs at least one pair".into(),
            ));
        }
        Ok(Self { pairs })
    }

    pub fn period(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair_at(&self, m: i64) -> &GeneratingPair {
        &self.pairs[m.rem_euclid(self.pairs.len() as i64) as usize]
    }

    pub fn domain(&self) -> Rect {
        self.pairs[0].domain
    }

    /// Every pair is nondegenerate on the grid and `pair_at(m+1)` succeeds `pair_at(m)`.
    pub fn check(&self, grid: &[Point2], tol: f64) -> Result<bool> {
        for m in 0..self.period() as i64 {
            if !is_successor(self.pair_at(m), self.pair_at(m + 1), grid, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same sequence with another differencing configuration on every pair.
    pub fn with_diff(&self, diff: DiffConfig) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|p| p.clone().with_diff(diff))
                .collect(),
        }
    }
}

/// Node schedule for the cumulative quadrature.
///
/// Nodes per path segment start at `initial_nodes` and go `Q → 2Q − 1` until
/// the value changes by less than `rel_tol`. With `max_nodes ≤ initial_nodes`
/// the rule runs once, which keeps differenced evaluations on a fixed grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub initial_nodes: usize,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 513,
            rel_tol: 1e-9,
            max_nodes: 16385,
        }
    }
}

impl QuadratureConfig {
    pub fn fixed(nodes: usize) -> Self {
        Self {
            initial_nodes: nodes,
            rel_tol: 0.0,
            max_nodes: nodes,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.initial_nodes < 3 || self.initial_nodes % 2 == 0 {
            return Err(Error::Invalid(format!(
                "initial_nodes must be odd and at least 3, got {}",
                self.initial_nodes
            )));
        }
        Ok(())
    }
}

/// A value together with the nodes per segment that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Bicomplex,
    pub nodes: usize,
}

/// `Z⁽ⁿ⁾_start(a, z₀; ·)` as an evaluable field.
#[derive(Clone, Debug)]
pub struct FormalPower {
    seq: GeneratingSequence,
    pub start: i64,
    pub n: usize,
    pub a: Bicomplex,
    pub z0: Point2,
    pub quad: QuadratureConfig,
}

/// `F, G, F*, G*` of one pair at one node.
#[derive(Clone, Copy)]
struct PairNode {
    f: Bicomplex,
    g: Bicomplex,
    f_star: Bicomplex,
    g_star: Bicomplex,
}

impl PairNode {
    fn at(pair: &GeneratingPair, z: Point2) -> Result<Self> {
        let (f, g) = (pair.f(z), pair.g(z));
        let det = determinant(f, g);
        if !(det.norm() > DEGENERACY_TOL * f.norm() * g.norm()) {
            return Err(Error::DegeneratePair { x: z.x, y: z.y });
        }
        let (f_star, g_star) = adjoint_values(f, g, det);
        Ok(Self {
            f,
            g,
            f_star,
            g_star,
        })
    }
}

impl FormalPower {
    pub fn new(seq: &GeneratingSequence, n: usize, a: Bicomplex, z0: Point2) -> Self {
        Self {
            seq: seq.clone(),
            start: 0,
            n,
            a,
            z0,
            quad: QuadratureConfig::default(),
        }
    }

    pub fn with_start(mut self, m: i64) -> Self {
        self.start = m;
        self
    }

    pub fn with_quadrature(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn sequence(&self) -> &GeneratingSequence {
        &self.seq
    }

    /// Pair index used at recursion level `j` (level 0 is the innermost).
    fn level_pair(&self, j: usize) -> i64 {
        self.start + (self.n - j) as i64
    }

    /// `(λ, μ)` of the innermost level.
    pub fn base_coefficients(&self) -> Result<(Complex64, Complex64)> {
        let pair = self.seq.pair_at(self.level_pair(0));
        let (f, g) = (pair.f(self.z0), pair.g(self.z0));
        let det = determinant(f, g);
        if !(det.norm() > DEGENERACY_TOL * f.norm() * g.norm()) {
            return Err(Error::DegeneratePair {
                x: self.z0.x,
                y: self.z0.y,
            });
        }
        Ok(decompose_values(f, g, det, self.a))
    }

    /// Value on the straight segment from `z₀`.
    pub fn evaluate(&self, z: Point2) -> Result<Bicomplex> {
        Ok(self.evaluate_detailed(z)?.value)
    }

    pub fn evaluate_detailed(&self, z: Point2) -> Result<Evaluation> {
        if self.n == 0 {
            let (lambda, mu) = self.base_coefficients()?;
            let pair = self.seq.pair_at(self.start);
            return Ok(Evaluation {
                value: pair.f(z) * lambda + pair.g(z) * mu,
                nodes: 0,
            });
        }
        if z == self.z0 {
            return Ok(Evaluation {
                value: Bicomplex::ZERO,
                nodes: 0,
            });
        }
        self.evaluate_along_detailed(&Polyline::segment(self.z0, z)?)
    }

    /// Value at the end of a path that starts at `z₀`.
    pub fn evaluate_along(&self, path: &Polyline) -> Result<Bicomplex> {
        Ok(self.evaluate_along_detailed(path)?.value)
    }

    pub fn evaluate_along_detailed(&self, path: &Polyline) -> Result<Evaluation> {
        if path.start().dist(self.z0) > 1e-14 * (1.0 + self.z0.abs()) {
            return Err(Error::Invalid("integration path must start at z0".into()));
        }
        self.quad.validate()?;
        let mut q = self.quad.initial_nodes;
        let mut prev = self.run(path, q)?;
        if self.quad.max_nodes <= q {
            return Ok(Evaluation {
                value: prev,
                nodes: q,
            });
        }
        loop {
            let next_q = 2 * q - 1;
            if next_q > self.quad.max_nodes {
                return Err(Error::QuadratureNotConverged { nodes: q });
            }
            let next = self.run(path, next_q)?;
            q = next_q;
            let change = (next - prev).norm();
            if change <= self.quad.rel_tol * next.norm() || change == 0.0 {
                return Ok(Evaluation {
                    value: next,
                    nodes: q,
                });
            }
            prev = next;
        }
    }

    /// One pass of the recursion with `q` nodes per segment.
    fn run(&self, path: &Polyline, q: usize) -> Result<Bicomplex> {
        let segments: Vec<(Point2, Point2)> = path.segments().collect();
        let h = 1.0 / (q - 1) as f64;
        let period = self.seq.period();
        let residues: Vec<usize> = (0..=self.n)
            .map(|j| self.level_pair(j).rem_euclid(period as i64) as usize)
            .collect();

        // Pair values at every node for each residue class that occurs.
        let mut tables: Vec<Option<Vec<Vec<PairNode>>>> = vec![None; period];
        for &r in &residues {
            if tables[r].is_some() {
                continue;
            }
            let pair = self.seq.pair_at(r as i64);
            let per_segment = segments
                .iter()
                .map(|&(a, b)| {
                    (0..q)
                        .map(|i| PairNode::at(pair, a.lerp(b, i as f64 * h)))
                        .collect()
                })
                .collect::<Result<Vec<Vec<PairNode>>>>()?;
            tables[r] = Some(per_segment);
        }
        let table = |r: usize| tables[r].as_ref().expect("table filled for every residue");

        let (lambda, mu) = self.base_coefficients()?;
        let mut values: Vec<Vec<Bicomplex>> = table(residues[0])
            .iter()
            .map(|seg| seg.iter().map(|p| p.f * lambda + p.g * mu).collect())
            .collect();

        let mut g_part = Vec::with_capacity(q);
        let mut f_part = Vec::with_capacity(q);
        let mut g_sum = Vec::with_capacity(q);
        let mut f_sum = Vec::with_capacity(q);
        for j in 1..=self.n {
            let nodes = table(residues[j]);
            let scale = j as f64;
            let mut carry = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for (s, &(a, b)) in segments.iter().enumerate() {
                let dzeta = (b - a).to_bicomplex();
                g_part.clear();
                f_part.clear();
                for (p, w) in nodes[s].iter().zip(&values[s]) {
                    let wd = *w * dzeta;
                    g_part.push((p.g_star * wd).sc);
                    f_part.push((p.f_star * wd).sc);
                }
                simpson_prefix(&g_part, h, &mut g_sum);
                simpson_prefix(&f_part, h, &mut f_sum);
                for (i, p) in nodes[s].iter().enumerate() {
                    let (ig, iff) = (carry.0 + g_sum[i], carry.1 + f_sum[i]);
                    values[s][i] = (p.f * ig + p.g * iff) * scale;
                }
                carry = (carry.0 + g_sum[q - 1], carry.1 + f_sum[q - 1]);
            }
        }
        Ok(*values
            .last()
            .and_then(|v| v.last())
            .expect("path has a segment"))
    }

    /// Values at many points in parallel, in input order.
    pub fn evaluate_many(&self, points: &[Point2]) -> Result<Vec<Evaluation>> {
        points
            .par_iter()
            .map(|&z| self.evaluate_detailed(z))
            .collect()
    }
}

impl BicomplexField for FormalPower {
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        self.evaluate(z)
    }
}

/// `Z⁽⁰⁾_m(a, z₀; z)`.
pub fn power0(
    seq: &GeneratingSequence,
    m: i64,
    a: Bicomplex,
    z0: Point2,
    z: Point2,
) -> Result<Bicomplex> {
    FormalPower::new(seq, 0, a, z0).with_start(m).evaluate(z)
}

/// `Z⁽ⁿ⁾_0(a, z₀; z)` along the segment `[z₀, z]`.
pub fn build_power(
    seq: &GeneratingSequence,
    n: usize,
    a: Bicomplex,
    z0: Point2,
    z: Point2,
    quad: &QuadratureConfig,
) -> Result<Bicomplex> {
    FormalPower::new(seq, n, a, z0)
        .with_quadrature(*quad)
        .evaluate(z)
}

/// `‖d_(F₀,G₀)Z⁽ⁿ⁾/dz − n Z₁⁽ⁿ⁻¹⁾‖` at `z`, and `‖Ż⁽⁰⁾‖` for `n = 0`.
pub fn differential_relation_check(
    seq: &GeneratingSequence,
    n: usize,
    a: Bicomplex,
    z0: Point2,
    z: Point2,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let power = FormalPower::new(seq, n, a, z0).with_quadrature(*quad);
    let derivative = seq.pair_at(0).fg_derivative(&power, z)?;
    if n == 0 {
        return Ok(derivative.norm());
    }
    let lower = FormalPower::new(seq, n - 1, a, z0)
        .with_start(1)
        .with_quadrature(*quad);
    Ok((derivative - lower.evaluate(z)? * n as f64).norm())
}

/// `(F_m,G_m)`-derivative of another field, itself a field.
pub struct FgDerivative<'a> {
    pub pair: &'a GeneratingPair,
    pub inner: &'a dyn BicomplexField,
}

impl BicomplexField for FgDerivative<'_> {
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        self.pair.fg_derivative(self.inner, z)
    }
}

/// Taylor coefficients `a_n` at a centre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorExpansion {
    pub z0: Point2,
    pub coefficients: Vec<Bicomplex>,
}

impl TaylorExpansion {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn truncated(&self, degree: usize) -> Self {
        Self {
            z0: self.z0,
            coefficients: self.coefficients.iter().take(degree + 1).copied().collect(),
        }
    }
}

/// Default differencing step for nested `(F,G)`-derivatives.
pub const TAYLOR_STEP: f64 = 5e-3;

/// `a_n = W^[n](z₀)/n!` for `n ≤ degree`, with `W^[m+1] = d_(F_m,G_m)W^[m]`
/// by nested fixed-step differences.
pub fn taylor_coefficients(
    w: &dyn BicomplexField,
    seq: &GeneratingSequence,
    z0: Point2,
    degree: usize,
    step: f64,
) -> Result<TaylorExpansion> {
    let seq = seq.with_diff(DiffConfig::plain(step));
    let mut coefficients = Vec::with_capacity(degree + 1);
    let mut factorial = 1.0;
    for n in 0..=degree {
        if n > 0 {
            factorial *= n as f64;
        }
        coefficients.push(nth_derivative(w, &seq, n, z0)? / factorial);
    }
    Ok(TaylorExpansion { z0, coefficients })
}

fn nth_derivative(
    w: &dyn BicomplexField,
    seq: &GeneratingSequence,
    n: usize,
    z: Point2,
) -> Result<Bicomplex> {
    Derived { seq, w, order: n }.eval(z)
}

/// `W^[order]`, one `(F_m,G_m)`-derivative per level.
struct Derived<'a> {
    seq: &'a GeneratingSequence,
    w: &'a dyn BicomplexField,
    order: usize,
}

impl BicomplexField for Derived<'_> {
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        if self.order == 0 {
            return self.w.eval(z);
        }
        let inner = Derived {
            order: self.order - 1,
            ..*self
        };
        self.seq
            .pair_at(self.order as i64 - 1)
            .fg_derivative(&inner, z)
    }
}

/// `Σ_{n ≤ N} Z⁽ⁿ⁾(a_n, z₀; z)`.
pub fn evaluate_series(
    expansion: &TaylorExpansion,
    seq: &GeneratingSequence,
    z: Point2,
    quad: &QuadratureConfig,
) -> Result<Bicomplex> {
    let mut acc = Bicomplex::ZERO;
    for (n, a) in expansion.coefficients.iter().enumerate() {
        if *a == Bicomplex::ZERO {
            continue;
        }
        acc += FormalPower::new(seq, n, *a, expansion.z0)
            .with_quadrature(*quad)
            .evaluate(z)?;
    }
    Ok(acc)
}

/// Sum of formal powers `Σ Z⁽ⁿ⁾(a_n, z₀; ·)` as a field.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    pub terms: Vec<FormalPower>,
}

impl PowerSeries {
    pub fn new(
        seq: &GeneratingSequence,
        expansion: &TaylorExpansion,
        quad: QuadratureConfig,
    ) -> Self {
        let terms = expansion
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| FormalPower::new(seq, n, *a, expansion.z0).with_quadrature(quad))
            .collect();
        Self { terms }
    }
}

impl BicomplexField for PowerSeries {
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        self.terms.iter().map(|t| t.evaluate(z)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialModel;

    const DOMAIN: Rect = Rect::square(1.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trivial() -> GeneratingSequence {
        PotentialModel::zero(0.0, c(0.0, 0.0)).generating_sequence(DOMAIN)
    }

    fn rel(a: Bicomplex, b: Bicomplex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    /// `∫_{u₀}^{u₁} e^{βu} du`.
    fn exp_integral(beta: Complex64, u0: f64, u1: f64) -> Complex64 {
        if beta.norm() < 1e-12 {
            return c(u1 - u0, 0.0);
        }
        ((beta * u1).exp() - (beta * u0).exp()) / beta
    }

    /// `Z⁽¹⁾(a′ + a″k, z₀; z)` for `p ≡ c` from separated antiderivatives.
    fn closed_form_z1(
        model: &PotentialModel,
        kappa: f64,
        a: Bicomplex,
        z0: Point2,
        z: Point2,
    ) -> Bicomplex {
        let iw = Complex64::i() * model.omega;
        let lambda = a.sc * (-model.tau(z0)).exp();
        let mu = a.vec * model.tau(z0).exp();
        let e_sigma = model.sigma(z).exp();
        let scalar = lambda * exp_integral(c(-2.0 * kappa, 0.0), z0.x, z.x)
            - mu * exp_integral(-2.0 * iw, z0.y, z.y);
        let vector = mu * exp_integral(c(2.0 * kappa, 0.0), z0.x, z.x)
            + lambda * exp_integral(2.0 * iw, z0.y, z.y);
        Bicomplex::scalar(e_sigma * scalar) + Bicomplex::vector(vector / e_sigma)
    }

    #[test]
    fn classical_powers() {
        let seq = trivial();
        let quad = QuadratureConfig::default();
        for z in [
            Point2::new(0.6, -0.3),
            Point2::new(-0.2, 0.9),
            Point2::new(0.7, 0.7),
        ] {
            for n in 0..=6 {
                let v =
                    build_power(&seq, n, Bicomplex::ONE, Point2::new(0.0, 0.0), z, &quad).unwrap();
                let expect = z.to_bicomplex().powu(n as u32);
                assert!(
                    rel(v, expect) < 1e-10,
                    "n = {n}, z = {z:?}: {v} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn values_at_the_centre() {
        let model = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(0.2, -0.1);
        let a = Bicomplex::from_array([0.3, -0.4, 1.1, 0.2]);
        assert!((FormalPower::new(&seq, 0, a, z0).evaluate(z0).unwrap() - a).norm() < 1e-14);
        for n in 1..4 {
            assert_eq!(
                FormalPower::new(&seq, n, a, z0).evaluate(z0).unwrap(),
                Bicomplex::ZERO
            );
        }
    }

    #[test]
    fn power0_examples() {
        let seq = trivial();
        let z = Point2::new(0.3, 0.4);
        assert_eq!(
            power0(&seq, 0, Bicomplex::ONE, Point2::new(0.0, 0.0), z).unwrap(),
            Bicomplex::ONE
        );

        let model = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(0.0, 0.0);
        let a = Bicomplex::new(c(1.0, 0.0), c(1.0, 0.0));
        let (lambda, mu) = FormalPower::new(&seq, 0, a, z0)
            .base_coefficients()
            .unwrap();
        assert!((lambda - 1.0).norm() < 1e-15 && (mu - 1.0).norm() < 1e-15);
        let expect =
            Bicomplex::scalar(model.sigma(z).exp()) + Bicomplex::vector((-model.sigma(z)).exp());
        assert!((power0(&seq, 0, a, z0, z).unwrap() - expect).norm() < 1e-14);

        let f = seq.pair_at(1).f(z0);
        let v = power0(&seq, 1, f, z0, z).unwrap();
        assert!((v - seq.pair_at(1).f(z)).norm() < 1e-14);
    }

    #[test]
    fn first_power_matches_closed_form() {
        let (cv, m) = (0.5, 1.0);
        let model = PotentialModel::constant(cv, m, c(0.7, 0.0));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(0.1, -0.2);
        for a in [
            Bicomplex::ONE,
            Bicomplex::K,
            Bicomplex::from_array([0.4, 0.3, -1.0, 0.8]),
        ] {
            let power = FormalPower::new(&seq, 1, a, z0);
            for z in [
                Point2::new(0.9, 0.5),
                Point2::new(-0.8, -0.9),
                Point2::new(0.1, 0.7),
            ] {
                let expect = closed_form_z1(&model, cv + m, a, z0, z);
                assert!(
                    rel(power.evaluate(z).unwrap(), expect) < 1e-10,
                    "a = {a}, z = {z:?}"
                );
            }
        }
    }

    #[test]
    fn linear_in_the_coefficient() {
        let model = PotentialModel::linear(0.9, 0.3, c(0.5, 0.0));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(-0.1, 0.2);
        let z = Point2::new(0.6, -0.4);
        let (a1, a2) = (c(0.3, -1.2), c(0.7, 0.4));
        for n in 0..4 {
            let whole = FormalPower::new(&seq, n, Bicomplex::new(a1, a2), z0)
                .evaluate(z)
                .unwrap();
            let one = FormalPower::new(&seq, n, Bicomplex::ONE, z0)
                .evaluate(z)
                .unwrap();
            let k = FormalPower::new(&seq, n, Bicomplex::K, z0)
                .evaluate(z)
                .unwrap();
            assert!((whole - (one * a1 + k * a2)).norm() <= 1e-10 * (1.0 + whole.norm()));
        }
    }

    #[test]
    fn segment_and_dog_leg_agree() {
        let model = PotentialModel::linear(-0.7, 1.0, c(0.6, 0.1));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(0.0, 0.1);
        let z = Point2::new(0.8, -0.6);
        for n in 0..=3 {
            let power = FormalPower::new(&seq, n, Bicomplex::from_real(1.0, 0.5), z0);
            let straight = power.evaluate(z).unwrap();
            let bent = power
                .evaluate_along(&Polyline::dog_leg(z0, z).unwrap())
                .unwrap();
            assert!(
                (straight - bent).norm() <= 1e-9 * (1.0 + straight.norm()),
                "n = {n}"
            );
        }
        let power = FormalPower::new(&seq, 1, Bicomplex::ONE, z0);
        assert!(power
            .evaluate_along(&Polyline::segment(z, z0).unwrap())
            .is_err());
    }

    #[test]
    fn differential_relations() {
        let quad = QuadratureConfig::fixed(1025);
        let z0 = Point2::new(0.0, 0.0);
        let z = Point2::new(0.4, 0.3);
        assert!(
            differential_relation_check(&trivial(), 2, Bicomplex::ONE, z0, z, &quad).unwrap()
                < 1e-6
        );
        let seq = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0)).generating_sequence(DOMAIN);
        assert!(differential_relation_check(&seq, 0, Bicomplex::K, z0, z, &quad).unwrap() < 1e-8);
        assert!(differential_relation_check(&seq, 1, Bicomplex::ONE, z0, z, &quad).unwrap() < 1e-5);
        assert!(differential_relation_check(&seq, 3, Bicomplex::K, z0, z, &quad).unwrap() < 1e-5);
    }

    #[test]
    fn taylor_coefficients_of_simple_fields() {
        let model = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0));
        let seq = model.generating_sequence(DOMAIN);
        let z0 = Point2::new(0.1, 0.1);
        let w = FormalPower::new(&seq, 0, Bicomplex::ONE, z0);
        let t = taylor_coefficients(&w, &seq, z0, 2, TAYLOR_STEP).unwrap();
        assert!((t.coefficients[0] - Bicomplex::ONE).norm() < 1e-12);
        assert!(t.coefficients[1].norm() < 1e-8 && t.coefficients[2].norm() < 1e-6);

        let pair = seq.pair_at(0).clone();
        let f0 = move |z: Point2| pair.f(z);
        let t = taylor_coefficients(&f0, &seq, z0, 2, TAYLOR_STEP).unwrap();
        assert!((t.coefficients[0] - seq.pair_at(0).f(z0)).norm() < 1e-14);
        assert!(t.coefficients[1].norm() < 1e-8 && t.coefficients[2].norm() < 1e-6);

        let quad = QuadratureConfig::fixed(513);
        let expansion = TaylorExpansion {
            z0,
            coefficients: vec![Bicomplex::ONE, Bicomplex::from_real(2.0, 0.0)],
        };
        let series = PowerSeries::new(&seq, &expansion, quad);
        let t = taylor_coefficients(&series, &seq, z0, 2, TAYLOR_STEP).unwrap();
        assert!((t.coefficients[0] - Bicomplex::ONE).norm() < 1e-3);
        assert!((t.coefficients[1] - Bicomplex::from_real(2.0, 0.0)).norm() < 1e-3);
        assert!(t.coefficients[2].norm() < 1e-3);
    }

    #[test]
    fn series_examples() {
        let seq = trivial();
        let quad = QuadratureConfig::default();
        let z0 = Point2::new(0.0, 0.0);
        let zero = TaylorExpansion {
            z0,
            coefficients: vec![Bicomplex::ZERO; 4],
        };
        assert_eq!(
            evaluate_series(&zero, &seq, Point2::new(0.5, 0.5), &quad).unwrap(),
            Bicomplex::ZERO
        );

        let mut factorial = 1.0;
        let coefficients = (0..=14)
            .map(|n| {
                if n > 0 {
                    factorial *= n as f64;
                }
                Bicomplex::from_real(1.0 / factorial, 0.0)
            })
            .collect();
        let exp = TaylorExpansion { z0, coefficients };
        let z = Point2::new(0.5, -0.6);
        let sum = evaluate_series(&exp, &seq, z, &quad).unwrap();
        assert!((sum - z.to_bicomplex().exp()).norm() < 1e-10);
        assert_eq!(exp.truncated(3).degree(), 3);
    }

    #[test]
    fn refinement_cap_is_reported() {
        let seq = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0)).generating_sequence(DOMAIN);
        let quad = QuadratureConfig {
            initial_nodes: 5,
            rel_tol: 1e-15,
            max_nodes: 17,
        };
        let err = build_power(
            &seq,
            2,
            Bicomplex::ONE,
            Point2::new(0.0, 0.0),
            Point2::new(0.9, 0.9),
            &quad,
        );
        assert!(matches!(
            err,
            Err(Error::QuadratureNotConverged { nodes: 17 })
        ));
        let bad = QuadratureConfig {
            initial_nodes: 4,
            ..QuadratureConfig::default()
        };
        assert!(build_power(
            &seq,
            1,
            Bicomplex::ONE,
            Point2::new(0.0, 0.0),
            Point2::new(0.1, 0.0),
            &bad
        )
        .is_err());
    }

    #[test]
    fn sequence_indexing() {
        let seq = PotentialModel::constant(0.5, 1.0, c(0.7, 0.0)).generating_sequence(DOMAIN);
        let z = Point2::new(0.3, 0.2);
        assert_eq!(seq.period(), 2);
        assert_eq!(seq.pair_at(-1).f(z), seq.pair_at(1).f(z));
        assert_eq!(seq.pair_at(4).g(z), seq.pair_at(0).g(z));
        assert!(seq.check(&DOMAIN.grid(4, 4), 1e-12).unwrap());
        assert!(GeneratingSequence::periodic(vec![]).is_err());
    }
}
