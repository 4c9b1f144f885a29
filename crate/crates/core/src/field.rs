//! Bicomplex-valued fields on the z-plane and the operators `∂̄ = ∂ₓ + k∂_y`,
//! `∂ = ∂ₓ − k∂_y`.
//!
//! Neither operator carries a ½ factor, so `∂∂̄ = Δ` on scalar functions and
//! `∂̄z = 0`, `∂z = 2`.

use crate::bicomplex::Bicomplex;
use crate::diff::{self, DiffConfig};
use crate::error::Result;
use crate::geometry::Point2;

/// A bicomplex function of `z`. Evaluation may fail (e.g. quadrature-backed fields).
pub trait BicomplexField: Sync {
    fn eval(&self, z: Point2) -> Result<Bicomplex>;
}

impl<F> BicomplexField for F
where
    F: Fn(Point2) -> Bicomplex + Sync,
{
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        Ok(self(z))
    }
}

/// Adapter for closures that already return `Result`.
pub struct Fallible<F>(pub F);

impl<F> BicomplexField for Fallible<F>
where
    F: Fn(Point2) -> Result<Bicomplex> + Sync,
{
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        (self.0)(z)
    }
}

/// Pointwise conjugate of another field.
pub struct Conjugated<'a>(pub &'a dyn BicomplexField);

impl BicomplexField for Conjugated<'_> {
    fn eval(&self, z: Point2) -> Result<Bicomplex> {
        Ok(self.0.eval(z)?.conj())
    }
}

/// `(∂ₓf, ∂_yf)` at `z`.
pub fn gradient(
    f: &dyn BicomplexField,
    z: Point2,
    cfg: &DiffConfig,
) -> Result<(Bicomplex, Bicomplex)> {
    let fx = diff::derivative(&|t| f.eval(Point2::new(t, z.y)), z.x, cfg)?;
    let fy = diff::derivative(&|t| f.eval(Point2::new(z.x, t)), z.y, cfg)?;
    Ok((fx, fy))
}

/// `∂̄f = ∂ₓf + k∂_yf`.
pub fn dbar(f: &dyn BicomplexField, z: Point2, cfg: &DiffConfig) -> Result<Bicomplex> {
    let (fx, fy) = gradient(f, z, cfg)?;
    Ok(fx + Bicomplex::K * fy)
}

/// `∂f = ∂ₓf − k∂_yf`.
pub fn dz(f: &dyn BicomplexField, z: Point2, cfg: &DiffConfig) -> Result<Bicomplex> {
    let (fx, fy) = gradient(f, z, cfg)?;
    Ok(fx - Bicomplex::K * fy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_field() {
        let cfg = DiffConfig::default();
        let f = |z: Point2| z.to_bicomplex();
        let z = Point2::new(0.3, -0.8);
        assert!(dbar(&f, z, &cfg).unwrap().norm() < 1e-10);
        assert!((dz(&f, z, &cfg).unwrap() - Bicomplex::from_real(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constants_are_annihilated() {
        let cfg = DiffConfig::default();
        let f = |_: Point2| Bicomplex::from_array([1.0, 2.0, 3.0, 4.0]);
        let z = Point2::new(1.0, 1.0);
        assert!(dbar(&f, z, &cfg).unwrap().norm() < 1e-12);
        assert!(dz(&f, z, &cfg).unwrap().norm() < 1e-12);
    }

    #[test]
    fn exponential_weight_log_derivative() {
        // f = e^{P + m x + iωy} with P = c x: ∂̄f/f = (c + m) + iωk.
        let (c, m, w) = (0.5, 1.0, 0.7);
        let f = move |z: Point2| Bicomplex::scalar((Complex64::new((c + m) * z.x, w * z.y)).exp());
        let z = Point2::new(0.2, 0.4);
        let ratio = dbar(&f, z, &DiffConfig::default()).unwrap() / f(z);
        let expect = Bicomplex::new(Complex64::new(c + m, 0.0), Complex64::new(0.0, w));
        assert!((ratio - expect).norm() < 1e-9);
    }

    #[test]
    fn dz_dbar_is_the_laplacian() {
        let f = |z: Point2| Bicomplex::scalar(Complex64::new((z.x * z.x) * z.y.sin(), z.x * z.y));
        let cfg = DiffConfig::plain(1e-3);
        let inner = Fallible(|z: Point2| dbar(&f, z, &cfg));
        let z = Point2::new(0.4, 0.3);
        let lhs = dz(&inner, z, &cfg).unwrap();
        let lap = diff::laplacian(&|x, y| Ok(f(Point2::new(x, y))), z.x, z.y, 1e-3).unwrap();
        assert!((lhs - lap).norm() < 1e-6, "{lhs} vs {lap}");
    }
}
