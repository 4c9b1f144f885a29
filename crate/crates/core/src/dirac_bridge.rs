//! Spinor solutions of `𝔻_ωΦ = 0` from pairs of Vekua solutions.
//!
//! For fields independent of `x₃` with `z = x₂ + x₁k`, `q = W + w e₂` solves
//! `R_ωq = 0` exactly when `∂̄W = conj(bW)` and `∂̄w = b w̄` with
//! `b = p(x₂) + m − iωk`. The spinor is `Φ(x) = 𝒜⁻¹q(x̃)`; the reflection
//! `x̃ = (x₁, x₂, −x₃)` is the identity on such fields. Outputs use the
//! physical `(x₁, x₂)`, never the z-plane coordinates.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biquaternion::{
    apply_dirac_omega, apply_r_omega, reflect, transform_a_inv, Biquaternion, FieldSampler,
    GammaMatrices, PotentialData, SpinorValue,
};
use crate::diff::DiffConfig;
use crate::error::Result;
use crate::field::BicomplexField;
use crate::geometry::{Point2, Point3, Rect};
use crate::potential::PotentialModel;
use crate::pseudoanalytic::GeneratingPair;

pub type SharedField = Arc<dyn BicomplexField + Send + Sync>;

/// z-plane point of a physical point.
pub fn to_z(x: Point3) -> Point2 {
    Point2::new(x[1], x[0])
}

/// Physical point `(x₁, x₂, 0)` of a z-plane point.
pub fn to_physical(z: Point2) -> Point3 {
    [z.y, z.x, 0.0]
}

/// `q(x₁, x₂) = W(z) + w(z)e₂`, constant in `x₃`.
pub fn assemble_quaternion(upper: SharedField, lower: SharedField) -> FieldSampler<Biquaternion> {
    FieldSampler::fallible(move |x| {
        let z = to_z(x);
        Ok(Biquaternion::assemble(upper.eval(z)?, lower.eval(z)?))
    })
}

/// `Φ(x) = 𝒜⁻¹q(x̃)`.
pub fn spinor_field(q: &FieldSampler<Biquaternion>) -> FieldSampler<SpinorValue> {
    let q = q.clone();
    let diff = q.diff;
    FieldSampler::fallible(move |x| q.eval(reflect(x)).map(|v| transform_a_inv(&v))).with_diff(diff)
}

/// `(e^τ k, −e^{−τ})` for `∂̄w = b w̄`.
pub fn generating_pair_for_w(model: &PotentialModel, domain: Rect) -> GeneratingPair {
    model.lower_pair(domain)
}

/// Dirac-operator data for a model: `p_sc(x) = p(x₂)`, no other potentials.
pub fn potential_data(model: &PotentialModel) -> PotentialData {
    let m = model.clone();
    PotentialData::free(model.m, model.omega).with_scalar(Arc::new(move |x: Point3| m.p(x[1])))
}

/// A spinor built from an upper solution `W` and a lower solution `w`.
#[derive(Clone)]
pub struct DiracSolution {
    pub potential: PotentialData,
    pub quaternion: FieldSampler<Biquaternion>,
    pub spinor: FieldSampler<SpinorValue>,
}

impl DiracSolution {
    pub fn new(model: &PotentialModel, upper: SharedField, lower: SharedField) -> Self {
        Self::with_diff(model, upper, lower, DiffConfig::default())
    }

    pub fn with_diff(
        model: &PotentialModel,
        upper: SharedField,
        lower: SharedField,
        diff: DiffConfig,
    ) -> Self {
        let quaternion = assemble_quaternion(upper, lower).with_diff(diff);
        let spinor = spinor_field(&quaternion);
        Self {
            potential: potential_data(model),
            quaternion,
            spinor,
        }
    }

    /// `‖𝔻_ωΦ‖` at a physical point.
    pub fn dirac_residual(&self, x: Point3, gammas: &GammaMatrices) -> Result<f64> {
        Ok(apply_dirac_omega(&self.spinor, x, &self.potential, gammas)?.norm())
    }

    /// `‖R_ωq‖` at a physical point.
    pub fn quaternion_residual(&self, x: Point3) -> Result<f64> {
        Ok(apply_r_omega(&self.quaternion, x, &self.potential)?.norm())
    }

    /// Spinor values at physical points, in input order.
    pub fn sample(&self, points: &[[f64; 2]]) -> Result<Vec<SpinorRecord>> {
        points
            .par_iter()
            .map(|&[x1, x2]| {
                Ok(SpinorRecord {
                    x1,
                    x2,
                    phi: self.spinor.eval([x1, x2, 0.0])?,
                })
            })
            .collect()
    }
}

/// One spinor sample at physical coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorRecord {
    pub x1: f64,
    pub x2: f64,
    pub phi: SpinorValue,
}

impl SpinorRecord {
    pub fn header() -> &'static str {
        "x1,x2,re_phi0,im_phi0,re_phi1,im_phi1,re_phi2,im_phi2,re_phi3,im_phi3"
    }
}

/// Residual report of a spinor job.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinorReport {
    pub points: usize,
    pub max_dirac_residual: f64,
    pub max_spinor_norm: f64,
    pub tolerance: f64,
    pub pass: bool,
}
