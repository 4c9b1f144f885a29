//! JSON run configurations.

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use vekua_core::formal_powers::QuadratureConfig;
use vekua_core::potential::{PotentialModel, PotentialSpec};
use vekua_core::verify::{CheckKind, SuiteSettings, DIFFERENCED_NODES};
use vekua_core::{Bicomplex, Point2, Rect};

use crate::CliError;

/// `ω` as a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Omega {
    Real(f64),
    Complex([f64; 2]),
}

impl Default for Omega {
    fn default() -> Self {
        Omega::Real(0.0)
    }
}

impl From<Omega> for Complex64 {
    fn from(w: Omega) -> Self {
        match w {
            Omega::Real(re) => Complex64::new(re, 0.0),
            Omega::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "zero_potential")]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub m: f64,
    #[serde(default)]
    pub omega: Omega,
}

fn zero_potential() -> PotentialSpec {
    PotentialSpec::Zero
}

impl ModelConfig {
    pub fn build(&self, domain: Rect) -> Result<PotentialModel, CliError> {
        self.potential
            .build(self.m, self.omega.into(), (domain.x_min, domain.x_max))
            .map_err(CliError::from)
    }
}

fn unit_square() -> Rect {
    Rect::square(1.0)
}

fn origin() -> Point2 {
    Point2::new(0.0, 0.0)
}

fn one() -> Bicomplex {
    Bicomplex::ONE
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { nx: 21, ny: 21 }
    }
}

/// `vekua powers`: `Z⁽⁰⁾ … Z⁽ⁿ_max⁾` on a tensor grid of `domain`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowersConfig {
    pub model: ModelConfig,
    #[serde(default = "unit_square")]
    pub domain: Rect,
    #[serde(default = "origin")]
    pub z0: Point2,
    /// `[re_sc, im_sc, re_vec, im_vec]`.
    #[serde(default = "one")]
    pub a: Bicomplex,
    pub n_max: usize,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

/// `vekua verify`: the invariant suite against one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub model: ModelConfig,
    #[serde(default = "unit_square")]
    pub domain: Rect,
    #[serde(default = "origin")]
    pub z0: Point2,
    #[serde(default = "one")]
    pub a: Bicomplex,
    /// All checks when absent.
    #[serde(default)]
    pub checks: Option<Vec<CheckKind>>,
    #[serde(default)]
    pub settings: SuiteSettings,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

/// One formal power `Z⁽ⁿ⁾(a, z₀; ·)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSpec {
    pub n: usize,
    #[serde(default = "one")]
    pub a: Bicomplex,
    #[serde(default)]
    pub start: i64,
}

/// `vekua spinor`: `Φ` built from an upper power `W` and a lower power `w`.
///
/// `region` and the grid are in physical coordinates `(x₁, x₂)`, with `x_*`
/// bounding `x₁` and `y_*` bounding `x₂`. `z0` is a z-plane point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinorConfig {
    pub model: ModelConfig,
    #[serde(default = "default_region")]
    pub region: Rect,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "origin")]
    pub z0: Point2,
    /// Absent means `W ≡ 0`.
    #[serde(default)]
    pub upper: Option<PowerSpec>,
    /// Absent means `w ≡ 0`.
    #[serde(default)]
    pub lower: Option<PowerSpec>,
    /// Fixed node count by default, since residuals difference the powers.
    #[serde(default = "fixed_quadrature")]
    pub quadrature: QuadratureConfig,
    #[serde(default = "default_spinor_tol")]
    pub tolerance: f64,
}

fn default_region() -> Rect {
    Rect::square(0.9)
}

fn fixed_quadrature() -> QuadratureConfig {
    QuadratureConfig::fixed(DIFFERENCED_NODES)
}

fn default_spinor_tol() -> f64 {
    1e-4
}

impl SpinorConfig {
    /// z-plane rectangle covering `region`.
    pub fn z_domain(&self) -> Rect {
        let r = self.region;
        Rect::new(r.y_min, r.y_max, r.x_min, r.x_max)
    }
}

/// Reads and parses a config, naming the offending key on failure.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Config(inner.to_string())
        } else {
            CliError::Config(format!("at `{path}`: {inner}"))
        }
    })
}
