//! Bicomplex numbers `q = q₀ + q₁k` with complex `q₀, q₁`.
//!
//! The imaginary unit `i` of the coefficients commutes with `k`, and
//! `k² = −1`. The ring is commutative but has zero divisors: the nonzero
//! elements with `q₁ = ±i q₀`. Conjugation flips the sign of the `k`
//! component only; it never conjugates the complex coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for zero-divisor detection.
pub const ZERO_DIVISOR_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A bicomplex number `sc + vec·k`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Bicomplex {
    /// Coefficient of `1`.
    pub sc: Complex64,
    /// Coefficient of `k`.
    pub vec: Complex64,
}

/// One of the two idempotents `P± = (1 ± ik)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Projector {
    Plus,
    Minus,
}

impl Projector {
    pub fn element(self) -> Bicomplex {
        match self {
            Projector::Plus => Bicomplex::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)),
            Projector::Minus => Bicomplex::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5)),
        }
    }

    pub fn other(self) -> Projector {
        match self {
            Projector::Plus => Projector::Minus,
            Projector::Minus => Projector::Plus,
        }
    }
}

impl Bicomplex {
    pub const ZERO: Bicomplex = Bicomplex::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    pub const ONE: Bicomplex = Bicomplex::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    pub const K: Bicomplex = Bicomplex::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    /// The complex unit `i` as a bicomplex scalar.
    pub const I: Bicomplex = Bicomplex::new(I, Complex64::new(0.0, 0.0));

    pub const fn new(sc: Complex64, vec: Complex64) -> Self {
        Self { sc, vec }
    }

    /// `x + y k` with real `x, y`.
    pub const fn from_real(x: f64, y: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    pub const fn scalar(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0))
    }

    /// `c·k`.
    pub const fn vector(c: Complex64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), c)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.sc.re, self.sc.im, self.vec.re, self.vec.im]
    }

    pub fn from_array([a, b, c, d]: [f64; 4]) -> Self {
        Self::new(Complex64::new(a, b), Complex64::new(c, d))
    }

    pub fn conj(self) -> Self {
        Self::new(self.sc, -self.vec)
    }

    /// `q·conj(q) = q₀² + q₁²`, a complex scalar.
    pub fn modulus(self) -> Complex64 {
        self.sc * self.sc + self.vec * self.vec
    }

    /// Euclidean norm on `ℂ²`.
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(self) -> f64 {
        self.sc.norm_sqr() + self.vec.norm_sqr()
    }

    pub fn is_finite(self) -> bool {
        self.sc.is_finite() && self.vec.is_finite()
    }

    /// True for nonzero `q` with `|q₀² + q₁²| ≤ tol·|q|²`.
    pub fn is_zero_divisor(self, tol: f64) -> bool {
        let n2 = self.norm_sqr();
        n2.sqrt() > tol && self.modulus().norm() <= tol * n2
    }

    /// True when `q` is zero or a zero divisor at tolerance `tol`.
    pub fn is_singular(self, tol: f64) -> bool {
        self.norm() <= tol || self.is_zero_divisor(tol)
    }

    /// `conj(q)/(q₀² + q₁²)`, failing on zero and zero divisors.
    pub fn inverse(self) -> Result<Self> {
        self.inverse_with(ZERO_DIVISOR_TOL)
    }

    pub fn inverse_with(self, tol: f64) -> Result<Self> {
        if self.is_singular(tol) {
            return Err(Error::ZeroDivisorOrZero);
        }
        Ok(self.recip_unchecked())
    }

    /// Inverse without the singularity check; non-finite for singular input.
    pub fn recip_unchecked(self) -> Self {
        self.conj() * self.modulus().inv()
    }

    /// `e^{q₀}(cos q₁ + k sin q₁)`.
    pub fn exp(self) -> Self {
        let e = self.sc.exp();
        Self::new(e * self.vec.cos(), e * self.vec.sin())
    }

    pub fn powu(self, n: u32) -> Self {
        let mut acc = Bicomplex::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            base *= base;
            n >>= 1;
        }
        acc
    }

    /// `P±·q`.
    pub fn project(self, sign: Projector) -> Self {
        sign.element() * self
    }

    /// Components in the idempotent basis: `q = u·P⁺ + v·P⁻` with
    /// `u = q₀ − i q₁`, `v = q₀ + i q₁`.
    pub fn idempotent_parts(self) -> (Complex64, Complex64) {
        (self.sc - I * self.vec, self.sc + I * self.vec)
    }
}

impl From<[f64; 4]> for Bicomplex {
    fn from(a: [f64; 4]) -> Self {
        Bicomplex::from_array(a)
    }
}

impl From<Bicomplex> for [f64; 4] {
    fn from(q: Bicomplex) -> Self {
        q.to_array()
    }
}

impl From<Complex64> for Bicomplex {
    fn from(c: Complex64) -> Self {
        Bicomplex::scalar(c)
    }
}

impl From<f64> for Bicomplex {
    fn from(x: f64) -> Self {
        Bicomplex::from_real(x, 0.0)
    }
}

impl fmt::Display for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})k", self.sc, self.vec)
    }
}

impl Add for Bicomplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.sc + o.sc, self.vec + o.vec)
    }
}

impl Sub for Bicomplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.sc - o.sc, self.vec - o.vec)
    }
}

impl Neg for Bicomplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.sc, -self.vec)
    }
}

impl Mul for Bicomplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.sc * o.sc - self.vec * o.vec,
            self.sc * o.vec + self.vec * o.sc,
        )
    }
}

impl Mul<Complex64> for Bicomplex {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        Self::new(self.sc * c, self.vec * c)
    }
}

impl Mul<Bicomplex> for Complex64 {
    type Output = Bicomplex;
    fn mul(self, q: Bicomplex) -> Bicomplex {
        q * self
    }
}

impl Mul<f64> for Bicomplex {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.sc * s, self.vec * s)
    }
}

impl Mul<Bicomplex> for f64 {
    type Output = Bicomplex;
    fn mul(self, q: Bicomplex) -> Bicomplex {
        q * self
    }
}

/// Unchecked division; use [`Bicomplex::inverse`] when the divisor may be singular.
impl Div for Bicomplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip_unchecked()
    }
}

impl Div<f64> for Bicomplex {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.sc / s, self.vec / s)
    }
}

impl AddAssign for Bicomplex {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Bicomplex {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Bicomplex {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Bicomplex {
    fn sum<It: Iterator<Item = Bicomplex>>(iter: It) -> Self {
        iter.fold(Bicomplex::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Bicomplex, b: Bicomplex, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    fn arb() -> impl Strategy<Value = Bicomplex> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Bicomplex::from_array)
    }

    #[test]
    fn multiplication_examples() {
        let a = Bicomplex::from_real(3.0, 1.0);
        let b = Bicomplex::from_real(1.0, 2.0);
        assert_eq!(a * b, Bicomplex::from_real(1.0, 7.0));

        let p = Bicomplex::new(c(1.0, 0.0), c(0.0, 1.0));
        let m = Bicomplex::new(c(1.0, 0.0), c(0.0, -1.0));
        assert_eq!(p * m, Bicomplex::ZERO);
        assert_eq!(a * Bicomplex::ONE, a);
        assert_eq!(Bicomplex::K * Bicomplex::K, -Bicomplex::ONE);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            Bicomplex::from_real(2.0, 0.0).inverse().unwrap(),
            Bicomplex::from_real(0.5, 0.0)
        );
        let zd = Bicomplex::new(c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(zd.inverse(), Err(Error::ZeroDivisorOrZero));
        assert_eq!(Bicomplex::ZERO.inverse(), Err(Error::ZeroDivisorOrZero));
        let inv = Bicomplex::from_real(1.0, 1.0).inverse().unwrap();
        assert!(close(inv, Bicomplex::from_real(0.5, -0.5), 1e-15));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(Bicomplex::ZERO.exp(), Bicomplex::ONE);
        let e = Bicomplex::scalar(c(0.0, std::f64::consts::PI)).exp();
        assert!(close(e, -Bicomplex::ONE, 1e-15));

        // Power-series oracle for exp((π/2)k), 40 terms.
        let q = Bicomplex::from_real(0.0, std::f64::consts::FRAC_PI_2);
        let mut term = Bicomplex::ONE;
        let mut series = Bicomplex::ONE;
        for n in 1..40 {
            term = term * q / n as f64;
            series += term;
        }
        assert!(close(series, Bicomplex::K, 1e-14));
        assert!(close(q.exp(), series, 1e-14));
    }

    #[test]
    fn zero_divisor_examples() {
        let tol = ZERO_DIVISOR_TOL;
        assert!(Bicomplex::new(c(1.0, 0.0), c(0.0, 1.0)).is_zero_divisor(tol));
        assert!(Bicomplex::new(c(2.0, 1.0), c(-1.0, 2.0)).is_zero_divisor(tol));
        assert!(!Bicomplex::from_real(1.0, 1.0).is_zero_divisor(tol));
        assert!(!Bicomplex::ZERO.is_zero_divisor(tol));
    }

    #[test]
    fn projector_examples() {
        let p1 = Bicomplex::ONE.project(Projector::Plus);
        assert_eq!(p1, Bicomplex::new(c(0.5, 0.0), c(0.0, 0.5)));
        let zd = Bicomplex::new(c(1.0, 0.0), c(0.0, 1.0));
        assert!(zd.project(Projector::Minus).norm() < 1e-16);
        for s in [Projector::Plus, Projector::Minus] {
            let e = s.element();
            assert!(close(e * e, e, 1e-16));
            assert!((e * s.other().element()).norm() < 1e-16);
        }
        assert_eq!(
            Projector::Plus.element() + Projector::Minus.element(),
            Bicomplex::ONE
        );
    }

    #[test]
    fn serializes_as_four_reals() {
        let q = Bicomplex::new(c(1.0, -2.0), c(0.5, 3.0));
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,3.0]");
        assert_eq!(serde_json::from_str::<Bicomplex>(&s).unwrap(), q);
    }

    #[test]
    fn idempotent_parts_are_a_ring_isomorphism() {
        let a = Bicomplex::new(c(0.3, -1.0), c(2.0, 0.7));
        let b = Bicomplex::new(c(-1.1, 0.2), c(0.4, 0.9));
        let (ua, va) = a.idempotent_parts();
        let (ub, vb) = b.idempotent_parts();
        let (u, v) = (a * b).idempotent_parts();
        assert!((u - ua * ub).norm() < 1e-14 && (v - va * vb).norm() < 1e-14);
        let (cu, cv) = a.conj().idempotent_parts();
        assert!((cu - va).norm() < 1e-15 && (cv - ua).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(), b in arb(), d in arb()) {
            prop_assert!(close(a * b, b * a, 1e-12));
            prop_assert!(close((a * b) * d, a * (b * d), 1e-12));
            prop_assert!(close(a * (b + d), a * b + a * d, 1e-12));
            prop_assert!(close((a * b).conj(), a.conj() * b.conj(), 1e-12));
            let m = a * a.conj();
            prop_assert!(m.vec.norm() < 1e-12);
        }

        #[test]
        fn inverse_is_an_involution(a in arb()) {
            prop_assume!(!a.is_singular(1e-6));
            let inv = a.inverse().unwrap();
            prop_assert!(close(inv * a, Bicomplex::ONE, 1e-10));
            let back = inv.inverse().unwrap();
            prop_assert!(close(back, a, 1e-9));
        }

        #[test]
        fn exp_is_a_homomorphism(a in arb(), b in arb()) {
            prop_assert!(close(a.exp() * (-a).exp(), Bicomplex::ONE, 1e-10));
            prop_assert!(close((a + b).exp(), a.exp() * b.exp(), 1e-9));
        }

        #[test]
        fn projections_split_and_annihilate(a in arb(), z in -2.0f64..2.0, w in -2.0f64..2.0) {
            let plus = a.project(Projector::Plus);
            let minus = a.project(Projector::Minus);
            prop_assert!(close(plus + minus, a, 1e-14));
            prop_assert!((plus * minus).norm() < 1e-12);
            // Lemma: a zero divisor is 2P±q₀, so one of its projections vanishes.
            let q0 = Complex64::new(z, w);
            for sign in [1.0, -1.0] {
                let zd = Bicomplex::new(q0, Complex64::new(0.0, sign) * q0);
                prop_assume!(zd.norm() > 1e-6);
                prop_assert!(zd.is_zero_divisor(ZERO_DIVISOR_TOL));
                let p = zd.project(Projector::Plus).norm();
                let m = zd.project(Projector::Minus).norm();
                prop_assert!(p.min(m) < 1e-14);
            }
        }
    }
}
