//! Configuration, figure presets, the end-to-end pipeline and its outputs.

mod checks;
mod config;
mod output;
mod pipeline;

pub use checks::{invariant_suite, InvariantCheck};
pub use config::{
    BathSection, CurveKind, CurveSpec, Expectation, ExpectationKind, GridSection, ModelSection, OutputSection,
    Preset, Resolved, RunConfig, TruncationSection, DEFAULT_HOPFIELD_DIM, DEFAULT_KAPPA_OVER_G,
    DEFAULT_RABI_CAVITY_DIM, DIVERGENCE_LINF, OVERLAP_LINF, OVERLAP_PEAK_SHIFT,
};
pub use output::{emit_svg, render_csv, render_svg, write_atomic, write_csv, write_report};
pub use pipeline::{
    assemble_systems, compute_curves, convergence_sweep, curve_model, run, ComparisonReport, ConvergenceStep,
    Curve, CurveReport, ExpectationResult, PairMetric, RunOutput,
};

use std::path::{Path, PathBuf};

use crate::error::{Result, Stage, StageExt};

/// Paths of the files written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub report: PathBuf,
}

/// Writes CSV, SVG and JSON report of `out` below `dir`.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<Artifacts> {
    let r = &out.report.parameters;
    let provenance = pipeline::run_provenance(r)?;
    let artifacts = Artifacts {
        csv: dir.join(&r.csv),
        svg: dir.join(&r.svg),
        report: dir.join(&r.report),
    };
    write_csv(&artifacts.csv, &out.curves, &provenance).stage(Stage::Output)?;
    emit_svg(&out.curves, &artifacts.svg, &provenance).stage(Stage::Output)?;
    write_report(&artifacts.report, &out.report).stage(Stage::Output)?;
    Ok(artifacts)
}
