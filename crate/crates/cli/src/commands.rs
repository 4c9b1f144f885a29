//! The `powers`, `verify` and `spinor` jobs.

use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use vekua_core::biquaternion::GammaMatrices;
use vekua_core::dirac_bridge::{DiracSolution, SharedField, SpinorRecord, SpinorReport};
use vekua_core::formal_powers::{FormalPower, GeneratingSequence, QuadratureConfig};
use vekua_core::potential::Provenance;
use vekua_core::verify::{run_suite, CheckResult, PowerSetup};
use vekua_core::{Bicomplex, Point2, Rect};

use crate::config::{GridConfig, ModelConfig, PowerSpec, PowersConfig, SpinorConfig, VerifyConfig};
use crate::output::{Csv, Outputs};
use crate::{CliError, Overrides};

fn quadrature(mut q: QuadratureConfig, overrides: &Overrides) -> QuadratureConfig {
    if let Some(tol) = overrides.tol {
        q.rel_tol = tol;
    }
    q
}

fn gammas(overrides: &Overrides) -> GammaMatrices {
    if overrides.gamma_flip {
        GammaMatrices::dirac().flipped_spatial()
    } else {
        GammaMatrices::dirac()
    }
}

#[derive(Serialize)]
struct PowersMetadata<'a> {
    model: &'a ModelConfig,
    provenance: &'a Provenance,
    domain: Rect,
    grid: GridConfig,
    z0: Point2,
    a: Bicomplex,
    n_max: usize,
    quadrature: QuadratureConfig,
    points: usize,
    max_nodes_used: usize,
    columns: Vec<String>,
}

pub fn powers_header(n_max: usize) -> Vec<String> {
    let mut cols = vec!["x".to_string(), "y".to_string()];
    for n in 0..=n_max {
        for part in ["re_sc", "im_sc", "re_vec", "im_vec"] {
            cols.push(format!("{part}_{n}"));
        }
    }
    cols
}

pub fn powers(config: &PowersConfig, overrides: &Overrides) -> Result<Vec<PathBuf>, CliError> {
    let model = config.model.build(config.domain)?;
    let seq = model.generating_sequence(config.domain);
    let quad = quadrature(config.quadrature, overrides);
    let points = config.domain.grid(config.grid.nx, config.grid.ny);
    let mut columns = Vec::with_capacity(config.n_max + 1);
    let mut max_nodes = 0;
    for n in 0..=config.n_max {
        let values = FormalPower::new(&seq, n, config.a, config.z0)
            .with_quadrature(quad)
            .evaluate_many(&points)?;
        max_nodes = values.iter().map(|v| v.nodes).fold(max_nodes, usize::max);
        columns.push(values);
    }
    let header = powers_header(config.n_max);
    let mut csv = Csv::new(&header.join(","));
    for (i, z) in points.iter().enumerate() {
        let mut row = vec![z.x, z.y];
        for col in &columns {
            row.extend(col[i].value.to_array());
        }
        csv.row(row);
    }
    let meta = PowersMetadata {
        model: &config.model,
        provenance: &model.provenance,
        domain: config.domain,
        grid: config.grid,
        z0: config.z0,
        a: config.a,
        n_max: config.n_max,
        quadrature: quad,
        points: points.len(),
        max_nodes_used: max_nodes,
        columns: header,
    };
    let mut out = Outputs::new(&overrides.out)?;
    out.write("powers.csv", &csv.finish())?;
    out.write_json("powers.json", &meta)?;
    Ok(out.commit())
}

pub fn verify(
    config: &VerifyConfig,
    overrides: &Overrides,
) -> Result<(Vec<CheckResult>, Vec<PathBuf>), CliError> {
    let model = config.model.build(config.domain)?;
    let mut setup = PowerSetup::new(model, config.domain, config.z0, config.a);
    setup.quad = quadrature(config.quadrature, overrides);
    let results = run_suite(
        &setup,
        &config.settings,
        config.checks.as_deref(),
        &gammas(overrides),
    )?;
    let mut out = Outputs::new(&overrides.out)?;
    out.write_json("verify.json", &results)?;
    Ok((results, out.commit()))
}

fn power_field(
    seq: &GeneratingSequence,
    spec: Option<PowerSpec>,
    z0: Point2,
    quad: QuadratureConfig,
) -> SharedField {
    match spec {
        Some(p) => Arc::new(
            FormalPower::new(seq, p.n, p.a, z0)
                .with_start(p.start)
                .with_quadrature(quad),
        ),
        None => Arc::new(|_: Point2| Bicomplex::ZERO),
    }
}

pub fn spinor(
    config: &SpinorConfig,
    overrides: &Overrides,
) -> Result<(SpinorReport, Vec<PathBuf>), CliError> {
    let domain = config.z_domain();
    let model = config.model.build(domain)?;
    let quad = quadrature(config.quadrature, overrides);
    let upper = power_field(
        &model.generating_sequence(domain),
        config.upper,
        config.z0,
        quad,
    );
    let lower = power_field(&model.lower_sequence(domain), config.lower, config.z0, quad);
    let solution = DiracSolution::new(&model, upper, lower);
    let points: Vec<[f64; 2]> = config
        .region
        .grid(config.grid.nx, config.grid.ny)
        .into_iter()
        .map(|p| [p.x, p.y])
        .collect();
    let records = solution.sample(&points)?;
    let g = gammas(overrides);
    let residuals: Vec<f64> = points
        .par_iter()
        .map(|&[x1, x2]| solution.dirac_residual([x1, x2, 0.0], &g))
        .collect::<vekua_core::Result<_>>()?;
    let max_dirac_residual = residuals.iter().copied().fold(0.0, f64::max);
    let max_spinor_norm = records.iter().map(|r| r.phi.norm()).fold(0.0, f64::max);
    let report = SpinorReport {
        points: points.len(),
        max_dirac_residual,
        max_spinor_norm,
        tolerance: config.tolerance,
        pass: max_dirac_residual <= config.tolerance,
    };
    let mut csv = Csv::new(SpinorRecord::header());
    for r in &records {
        let mut row = vec![r.x1, r.x2];
        for c in r.phi.0 {
            row.extend([c.re, c.im]);
        }
        csv.row(row);
    }
    let mut out = Outputs::new(&overrides.out)?;
    out.write("spinor.csv", &csv.finish())?;
    out.write_json("spinor_report.json", &report)?;
    Ok((report, out.commit()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let h = powers_header(1);
        assert_eq!(
            h.join(","),
            "x,y,re_sc_0,im_sc_0,re_vec_0,im_vec_0,re_sc_1,im_sc_1,re_vec_1,im_vec_1"
        );
    }
}
