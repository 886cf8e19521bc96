use std::collections::HashMap;

use serde::Serialize;

use super::config::{CurveKind, CurveSpec, ExpectationKind, Resolved};
use crate::error::{Error, Result, Stage, StageExt};
use crate::gme::{BathSpec, OpenSystem};
use crate::models::{dressed_states, Gauge, ModelKind, ModelParams};
use crate::numeric::NumericPolicy;
use crate::operators::{EigenSystem, HilbertSpace};
use crate::spectra::{
    classical_spectrum, compare_spectra, find_peaks, quantum_spectrum, ClassicalParams, Comparison, Peak,
    Provenance, Spectrum, DEFAULT_PROMINENCE,
};

/// One computed column of the output.
#[derive(Debug, Clone)]
pub struct Curve {
    pub spec: CurveSpec,
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub name: String,
    pub label: String,
    pub provenance_hash: String,
    pub peaks: Vec<Peak>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairMetric {
    pub curve: String,
    pub reference: String,
    #[serde(flatten)]
    pub metrics: Comparison,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationResult {
    pub curve: String,
    pub reference: String,
    pub expectation: ExpectationKind,
    pub linf: f64,
    pub peak_shift_max: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStep {
    /// Number of doublings applied to the base truncation.
    pub step: u32,
    pub cavity_dim: usize,
    pub matter_dim: usize,
    pub rabi_cavity_dim: usize,
    pub dressed_dim: usize,
    /// `linf` of each quantum curve against the previous step.
    pub deltas: Vec<(String, f64)>,
    pub max_delta: f64,
}

/// Peak tables, pairwise metrics and threshold verdicts of one run.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub provenance_hash: String,
    pub parameters: Resolved,
    pub curves: Vec<CurveReport>,
    pub comparisons: Vec<PairMetric>,
    pub expectations: Vec<ExpectationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Vec<ConvergenceStep>>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub curves: Vec<Curve>,
    pub report: ComparisonReport,
}

impl RunOutput {
    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.spec.name == name)
    }
}

pub(crate) fn run_provenance(r: &Resolved) -> Result<Provenance> {
    Provenance::new("run", r)
}

/// Model parameters of one quantum curve.
pub fn curve_model(r: &Resolved, model: ModelKind, gauge: Gauge) -> Result<ModelParams> {
    let space = match model {
        ModelKind::Hopfield => HilbertSpace::hopfield(r.cavity_dim, r.matter_dim)?,
        ModelKind::Rabi => HilbertSpace::rabi(r.rabi_cavity_dim)?,
    };
    let p = ModelParams {
        omega_c: r.omega_c,
        omega_0: r.omega_0,
        eta: r.eta,
        model,
        gauge,
        diamagnetic: model == ModelKind::Hopfield && r.diamagnetic,
        space,
    };
    p.validate()?;
    Ok(p)
}

fn classical_params(r: &Resolved) -> Result<ClassicalParams> {
    ClassicalParams::new(r.omega_c, r.omega_0, r.g(), r.kappa)
}

/// Assembled open systems for every quantum curve, keyed by curve name.
/// Curves on the same model and gauge share one diagonalisation.
pub fn assemble_systems(r: &Resolved) -> Result<Vec<(CurveSpec, OpenSystem)>> {
    let mut eigen: HashMap<(ModelKind, Gauge), (ModelParams, EigenSystem)> = HashMap::new();
    let mut out = Vec::new();
    for spec in &r.curves {
        let CurveKind::Quantum {
            model,
            gauge,
            pi,
            gauge_corrected,
        } = spec.kind
        else {
            continue;
        };
        if !eigen.contains_key(&(model, gauge)) {
            let params = curve_model(r, model, gauge).stage(Stage::Hamiltonian)?;
            let eig = dressed_states(&params).stage(Stage::Eigensystem)?;
            eigen.insert((model, gauge), (params, eig));
        }
        let (params, eig) = &eigen[&(model, gauge)];
        let dressed = r.dressed_dim.min(params.space.total_dim());
        let bath = BathSpec {
            pi_choice: pi,
            gauge_corrected,
            kappa: r.kappa,
            pump: r.pump,
            rate_model: Default::default(),
        };
        let system = OpenSystem::from_eigen(eig.clone(), params, &bath, dressed, &NumericPolicy::default())?;
        out.push((spec.clone(), system));
    }
    Ok(out)
}

/// Computes every curve of `r` on its grid.
pub fn compute_curves(r: &Resolved) -> Result<Vec<Curve>> {
    let grid = r.grid();
    let systems = assemble_systems(r)?;
    let mut curves = Vec::new();
    for spec in &r.curves {
        let spectrum = match &spec.kind {
            CurveKind::Classical => {
                classical_spectrum(&grid, &classical_params(r)?).stage(Stage::ClassicalSpectrum)?
            }
            CurveKind::Quantum { .. } => {
                let (_, system) = systems
                    .iter()
                    .find(|(s, _)| s.name == spec.name)
                    .expect("every quantum curve was assembled");
                quantum_spectrum(system, &grid).stage(Stage::QuantumSpectrum)?
            }
        };
        let provenance = Provenance::new(
            spec.name.clone(),
            serde_json::json!({ "curve": spec, "run": r }),
        )?;
        curves.push(Curve {
            spec: spec.clone(),
            spectrum: spectrum.with_provenance(provenance),
        });
    }
    Ok(curves)
}

/// The full pipeline: all curves, peak tables, comparisons against the
/// classical curve and the preset's threshold verdicts.
pub fn run(r: &Resolved) -> Result<RunOutput> {
    let curves = compute_curves(r)?;
    let report = build_report(r, &curves)?;
    Ok(RunOutput { curves, report })
}

fn build_report(r: &Resolved, curves: &[Curve]) -> Result<ComparisonReport> {
    let find = |name: &str| {
        curves
            .iter()
            .find(|c| c.spec.name == name)
            .ok_or_else(|| Error::Config(format!("no curve named `{name}`")))
    };
    let mut warnings = Vec::new();
    let curve_reports = curves
        .iter()
        .map(|c| {
            let peaks = find_peaks(&c.spectrum.normalized(), DEFAULT_PROMINENCE);
            if c.spectrum.max() == 0.0 {
                warnings.push(format!("curve `{}` is identically zero", c.spec.name));
            }
            CurveReport {
                name: c.spec.name.clone(),
                label: c.spec.label(),
                provenance_hash: c.spectrum.provenance.hash(),
                peaks,
            }
        })
        .collect();

    let mut comparisons = Vec::new();
    if let Ok(classical) = find("classical") {
        for c in curves.iter().filter(|c| c.spec.name != "classical") {
            comparisons.push(PairMetric {
                curve: c.spec.name.clone(),
                reference: "classical".into(),
                metrics: compare_spectra(&c.spectrum, &classical.spectrum).stage(Stage::Comparison)?,
            });
        }
    }

    let mut expectations = Vec::new();
    for e in &r.expectations {
        let m = compare_spectra(&find(&e.curve)?.spectrum, &find(&e.reference)?.spectrum).stage(Stage::Comparison)?;
        let passed = match e.kind {
            ExpectationKind::Overlap {
                max_linf,
                max_peak_shift,
            } => m.linf <= max_linf && m.peak_shift_max <= max_peak_shift,
            ExpectationKind::Divergence {
                min_linf,
                peak_count_counts,
            } => m.linf > min_linf || (peak_count_counts && !m.same_peak_count()),
        };
        expectations.push(ExpectationResult {
            curve: e.curve.clone(),
            reference: e.reference.clone(),
            expectation: e.kind.clone(),
            linf: m.linf,
            peak_shift_max: m.peak_shift_max,
            passed,
        });
    }
    let passed = expectations.iter().all(|e| e.passed);
    Ok(ComparisonReport {
        provenance_hash: run_provenance(r)?.hash(),
        parameters: r.clone(),
        curves: curve_reports,
        comparisons,
        expectations,
        convergence: None,
        warnings,
        passed,
    })
}

/// Repeats the quantum curves with all truncations doubled `doublings`
/// times and records the change per step.
///
/// Deltas are expected to shrink; growth is logged as a warning and stored in
/// the returned warnings, not treated as a failure.
pub fn convergence_sweep(r: &Resolved, doublings: u32) -> Result<(Vec<ConvergenceStep>, Vec<String>)> {
    if doublings < 1 {
        return Err(Error::Config("convergence sweep needs at least one doubling".into()));
    }
    let quantum_only = |res: &Resolved| Resolved {
        curves: res
            .curves
            .iter()
            .filter(|c| !matches!(c.kind, CurveKind::Classical))
            .cloned()
            .collect(),
        expectations: Vec::new(),
        ..res.clone()
    };
    let mut previous = compute_curves(&quantum_only(r))?;
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    for step in 1..=doublings {
        let d = quantum_only(&r.doubled(step));
        let current = compute_curves(&d)?;
        let deltas: Vec<(String, f64)> = previous
            .iter()
            .zip(&current)
            .map(|(a, b)| Ok((a.spec.name.clone(), compare_spectra(&a.spectrum, &b.spectrum)?.linf)))
            .collect::<Result<_>>()?;
        let max_delta = deltas.iter().map(|(_, v)| *v).fold(0.0, f64::max);
        if let Some(last) = steps.last().map(|s: &ConvergenceStep| s.max_delta) {
            if max_delta > last {
                let msg = format!("convergence is not monotone: delta {max_delta:e} at step {step} after {last:e}");
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
        steps.push(ConvergenceStep {
            step,
            cavity_dim: d.cavity_dim,
            matter_dim: d.matter_dim,
            rabi_cavity_dim: d.rabi_cavity_dim,
            dressed_dim: d.dressed_dim,
            deltas,
            max_delta,
        });
        previous = current;
    }
    Ok((steps, warnings))
}
