use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gme::{PiChoice, DEFAULT_DRESSED_DIM, DEFAULT_PUMP_FRACTION};
use crate::models::{Gauge, ModelKind};
use crate::spectra::{Grid, DEFAULT_GRID};

/// Named parameter sets for the reference lineshape comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Preset {
    /// η = 0.5, κ = 0.05g, bath coupled through `P`.
    Fig2a,
    /// η = 0.5, κ = 0.05g, bath coupled through `Q`.
    Fig2b,
    /// η = 0.5, κ = 0.05g, bath coupled through `(P+Q)/√2`.
    Fig2c,
    /// η = 0.1, Hopfield and Rabi models against the classical spectrum.
    Fig3EtaLow,
    /// η = 0.3.
    Fig3EtaMid,
    /// η = 0.5.
    Fig3EtaHigh,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Fig3EtaLow => "fig3_eta_low",
            Preset::Fig3EtaMid => "fig3_eta_mid",
            Preset::Fig3EtaHigh => "fig3_eta_high",
        }
    }

    pub fn all() -> [Preset; 6] {
        [
            Preset::Fig2a,
            Preset::Fig2b,
            Preset::Fig2c,
            Preset::Fig3EtaLow,
            Preset::Fig3EtaMid,
            Preset::Fig3EtaHigh,
        ]
    }

    fn eta(self) -> f64 {
        match self {
            Preset::Fig3EtaLow => 0.1,
            Preset::Fig3EtaMid => 0.3,
            _ => 0.5,
        }
    }

    fn pi(self) -> PiChoice {
        match self {
            Preset::Fig2a => PiChoice::P,
            Preset::Fig2b => PiChoice::Q,
            _ => PiChoice::PplusQ,
        }
    }

    fn curves(self) -> Vec<CurveSpec> {
        let pi = self.pi();
        let mut curves = vec![
            CurveSpec::classical(),
            CurveSpec::quantum("hopfield_nogc", ModelKind::Hopfield, Gauge::Dipole, pi, false),
            CurveSpec::quantum("hopfield_gc", ModelKind::Hopfield, Gauge::Dipole, pi, true),
        ];
        if matches!(self, Preset::Fig3EtaLow | Preset::Fig3EtaMid | Preset::Fig3EtaHigh) {
            curves.push(CurveSpec::quantum("qrm_nogc", ModelKind::Rabi, Gauge::Dipole, pi, false));
            curves.push(CurveSpec::quantum("qrm_gc", ModelKind::Rabi, Gauge::Dipole, pi, true));
        }
        curves
    }

    fn expectations(self) -> Vec<Expectation> {
        let overlap = |curve: &str| Expectation {
            curve: curve.into(),
            reference: "classical".into(),
            kind: ExpectationKind::Overlap {
                max_linf: OVERLAP_LINF,
                max_peak_shift: OVERLAP_PEAK_SHIFT,
            },
        };
        let diverge = |curve: &str, count_counts: bool| Expectation {
            curve: curve.into(),
            reference: "classical".into(),
            kind: ExpectationKind::Divergence {
                min_linf: DIVERGENCE_LINF,
                peak_count_counts: count_counts,
            },
        };
        match self {
            Preset::Fig2a | Preset::Fig2b => vec![diverge("hopfield_nogc", false)],
            Preset::Fig2c | Preset::Fig3EtaLow | Preset::Fig3EtaMid => vec![overlap("hopfield_gc")],
            Preset::Fig3EtaHigh => vec![overlap("hopfield_gc"), diverge("qrm_gc", true)],
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest `linf` for two lineshapes to count as overlapping.
pub const OVERLAP_LINF: f64 = 0.05;
/// Largest peak displacement, in units of ω₀, for overlapping lineshapes.
pub const OVERLAP_PEAK_SHIFT: f64 = 0.005;
/// Smallest `linf` for two lineshapes to count as distinct.
pub const DIVERGENCE_LINF: f64 = 0.10;

/// What a spectrum column is computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    Classical,
    Quantum {
        model: ModelKind,
        gauge: Gauge,
        pi: PiChoice,
        gauge_corrected: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: CurveKind,
}

impl CurveSpec {
    pub fn classical() -> Self {
        Self {
            name: "classical".into(),
            kind: CurveKind::Classical,
        }
    }

    pub fn quantum(name: &str, model: ModelKind, gauge: Gauge, pi: PiChoice, gauge_corrected: bool) -> Self {
        Self {
            name: name.into(),
            kind: CurveKind::Quantum {
                model,
                gauge,
                pi,
                gauge_corrected,
            },
        }
    }

    /// Legend text naming model, gauge and bath.
    pub fn label(&self) -> String {
        match &self.kind {
            CurveKind::Classical => "classical".into(),
            CurveKind::Quantum {
                model,
                gauge,
                pi,
                gauge_corrected,
            } => format!(
                "{} {:?} gauge, Pi = {}, {}",
                match model {
                    ModelKind::Hopfield => "Hopfield",
                    ModelKind::Rabi => "Rabi",
                },
                gauge,
                pi.label(),
                if *gauge_corrected { "gauge corrected" } else { "uncorrected" }
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectationKind {
    Overlap { max_linf: f64, max_peak_shift: f64 },
    /// `linf` above `min_linf`, or (when `peak_count_counts`) a different
    /// number of peaks.
    Divergence { min_linf: f64, peak_count_counts: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub curve: String,
    pub reference: String,
    #[serde(flatten)]
    pub kind: ExpectationKind,
}

// Sections of the TOML file. Every field is optional; absent fields come from
// the preset or the defaults.

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub eta: Option<f64>,
    pub omega_c: Option<f64>,
    pub kind: Option<ModelKind>,
    pub gauge: Option<Gauge>,
    pub diamagnetic: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub pi: Option<PiChoice>,
    pub gauge_corrected: Option<bool>,
    /// Absolute loss rate, units of ω₀.
    pub kappa: Option<f64>,
    /// Loss rate relative to `g`.
    pub kappa_over_g: Option<f64>,
    /// Pump rate relative to `kappa`.
    pub pump_fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    /// Cavity Fock states for the Hopfield model.
    pub cavity: Option<usize>,
    /// Matter Fock states for the Hopfield model.
    pub matter: Option<usize>,
    /// Cavity Fock states for the Rabi model.
    pub rabi_cavity: Option<usize>,
    /// Dressed states kept in the master equation.
    pub dressed: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// Run configuration as written in the TOML file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub bath: BathSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub truncation: TruncationSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Default truncations.
pub const DEFAULT_HOPFIELD_DIM: usize = 15;
pub const DEFAULT_RABI_CAVITY_DIM: usize = 30;
/// Default `κ/g`.
pub const DEFAULT_KAPPA_OVER_G: f64 = 0.05;

/// Fully resolved physics, truncation and output settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub preset: Option<Preset>,
    pub eta: f64,
    pub omega_c: f64,
    pub omega_0: f64,
    pub diamagnetic: bool,
    pub kappa: f64,
    pub pump: f64,
    pub grid: (f64, f64, usize),
    pub cavity_dim: usize,
    pub matter_dim: usize,
    pub rabi_cavity_dim: usize,
    pub dressed_dim: usize,
    pub curves: Vec<CurveSpec>,
    pub expectations: Vec<Expectation>,
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub report: PathBuf,
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            preset: Some(preset),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Applies the preset and defaults.
    ///
    /// A preset fixes every physics parameter; explicit fields that disagree
    /// with it still win, with a warning.
    pub fn resolve(&self) -> Result<Resolved> {
        let preset = self.preset;
        let pick = |name: &str, explicit: Option<f64>, preset_value: Option<f64>, default: f64| -> f64 {
            match (explicit, preset_value) {
                (Some(x), Some(p)) if x != p => {
                    log::warn!("{name} = {x} overrides preset value {p}");
                    x
                }
                (Some(x), _) => x,
                (None, Some(p)) => p,
                (None, None) => default,
            }
        };

        let m = &self.model;
        let eta = pick("model.eta", m.eta, preset.map(Preset::eta), 0.5);
        let omega_c = pick("model.omega_c", m.omega_c, preset.map(|_| 1.0), 1.0);
        let diamagnetic = m.diamagnetic.unwrap_or(true);
        if preset.is_some() && !diamagnetic {
            log::warn!("model.diamagnetic = false overrides preset value true");
        }
        let g = eta * omega_c;

        let b = &self.bath;
        let kappa = match (b.kappa, b.kappa_over_g) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("set at most one of bath.kappa and bath.kappa_over_g".into()))
            }
            (Some(k), None) => {
                if preset.is_some() && k != DEFAULT_KAPPA_OVER_G * g {
                    log::warn!("bath.kappa = {k} overrides preset value {}", DEFAULT_KAPPA_OVER_G * g);
                }
                k
            }
            (None, ratio) => {
                let ratio = pick("bath.kappa_over_g", ratio, preset.map(|_| DEFAULT_KAPPA_OVER_G), DEFAULT_KAPPA_OVER_G);
                if g == 0.0 {
                    return Err(Error::Config(
                        "kappa_over_g needs a nonzero coupling; set bath.kappa directly".into(),
                    ));
                }
                ratio * g
            }
        };
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Config(format!("bath.kappa must be > 0, got {kappa}")));
        }
        let pump = kappa * b.pump_fraction.unwrap_or(DEFAULT_PUMP_FRACTION);

        let (mut curves, expectations) = match preset {
            Some(p) => (p.curves(), p.expectations()),
            None => {
                let kind = m.kind.unwrap_or(ModelKind::Hopfield);
                let name = match kind {
                    ModelKind::Hopfield => "hopfield",
                    ModelKind::Rabi => "qrm",
                };
                let curve = CurveSpec::quantum(
                    name,
                    kind,
                    m.gauge.unwrap_or(Gauge::Dipole),
                    b.pi.unwrap_or(PiChoice::PplusQ),
                    b.gauge_corrected.unwrap_or(true),
                );
                (vec![CurveSpec::classical(), curve], Vec::new())
            }
        };
        if preset.is_some() {
            if m.kind.is_some() {
                log::warn!("model.kind is ignored under a preset; presets fix their model list");
            }
            if b.gauge_corrected.is_some() {
                log::warn!("bath.gauge_corrected is ignored under a preset; presets ship both variants");
            }
            for curve in &mut curves {
                if let CurveKind::Quantum { gauge, pi, .. } = &mut curve.kind {
                    if let Some(explicit) = m.gauge.filter(|x| x != gauge) {
                        log::warn!("model.gauge = {explicit:?} overrides preset value {gauge:?}");
                        *gauge = explicit;
                    }
                    if let Some(explicit) = b.pi.filter(|x| x != pi) {
                        log::warn!("bath.pi = {explicit:?} overrides preset value {pi:?}");
                        *pi = explicit;
                    }
                }
            }
        }

        let gs = &self.grid;
        let grid = (
            gs.start.unwrap_or(DEFAULT_GRID.0),
            gs.stop.unwrap_or(DEFAULT_GRID.1),
            gs.points.unwrap_or(DEFAULT_GRID.2),
        );
        Grid::linspace(grid.0, grid.1, grid.2).map_err(|e| Error::Config(e.to_string()))?;

        let t = &self.truncation;
        let out = &self.output;
        let resolved = Resolved {
            preset,
            eta,
            omega_c,
            omega_0: 1.0,
            diamagnetic,
            kappa,
            pump,
            grid,
            cavity_dim: t.cavity.unwrap_or(DEFAULT_HOPFIELD_DIM),
            matter_dim: t.matter.unwrap_or(DEFAULT_HOPFIELD_DIM),
            rabi_cavity_dim: t.rabi_cavity.unwrap_or(DEFAULT_RABI_CAVITY_DIM),
            dressed_dim: t.dressed.unwrap_or(DEFAULT_DRESSED_DIM),
            curves,
            expectations,
            csv: out.csv.clone().unwrap_or_else(|| "spectra.csv".into()),
            svg: out.svg.clone().unwrap_or_else(|| "spectra.svg".into()),
            report: out.report.clone().unwrap_or_else(|| "report.json".into()),
        };
        resolved.validate()?;
        Ok(resolved)
    }
}

impl Resolved {
    fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::Config(format!("model.eta must be >= 0, got {}", self.eta)));
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::Config(format!("model.omega_c must be > 0, got {}", self.omega_c)));
        }
        if !(self.pump.is_finite() && self.pump >= 0.0) {
            return Err(Error::Config(format!("bath.pump_fraction must be >= 0, got {}", self.pump / self.kappa)));
        }
        for (name, v) in [
            ("truncation.cavity", self.cavity_dim),
            ("truncation.matter", self.matter_dim),
            ("truncation.rabi_cavity", self.rabi_cavity_dim),
            ("truncation.dressed", self.dressed_dim),
        ] {
            if v < 2 {
                return Err(Error::Config(format!("{name} must be >= 2, got {v}")));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid::linspace(self.grid.0, self.grid.1, self.grid.2).expect("validated in resolve")
    }

    pub fn g(&self) -> f64 {
        self.eta * self.omega_c
    }

    /// Same settings with every truncation doubled `times` times.
    pub fn doubled(&self, times: u32) -> Resolved {
        let f = 1usize << times;
        Resolved {
            cavity_dim: self.cavity_dim * f,
            matter_dim: self.matter_dim * f,
            rabi_cavity_dim: self.rabi_cavity_dim * f,
            dressed_dim: self.dressed_dim * f,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_pin_figure_parameters() {
        for p in [Preset::Fig2a, Preset::Fig2b, Preset::Fig2c] {
            let r = RunConfig::from_preset(p).resolve().unwrap();
            assert_eq!(r.eta, 0.5);
            assert!((r.kappa - 0.025).abs() < 1e-15);
            assert_eq!(r.curves.len(), 3);
        }
        let etas: Vec<f64> = [Preset::Fig3EtaLow, Preset::Fig3EtaMid, Preset::Fig3EtaHigh]
            .iter()
            .map(|p| RunConfig::from_preset(*p).resolve().unwrap().eta)
            .collect();
        assert_eq!(etas, vec![0.1, 0.3, 0.5]);
        let high = RunConfig::from_preset(Preset::Fig3EtaHigh).resolve().unwrap();
        assert_eq!(high.curves.len(), 5);
        assert_eq!(high.expectations.len(), 2);
    }

    #[test]
    fn documented_configuration_parses() {
        let book = include_str!("../../../../book/src/harness.md");
        let start = book.find("```toml\n").unwrap() + "```toml\n".len();
        let len = book[start..].find("```").unwrap();
        let r = RunConfig::parse(&book[start..start + len]).unwrap().resolve().unwrap();
        assert_eq!(r.preset, Some(Preset::Fig2c));
        assert_eq!((r.eta, r.kappa, r.dressed_dim), (0.5, 0.025, 15));
    }

    #[test]
    fn explicit_fields_override_presets() {
        let c = RunConfig::parse("preset = \"fig2c\"\n[model]\neta = 0.3\n[grid]\npoints = 11").unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.eta, 0.3);
        assert!((r.kappa - 0.015).abs() < 1e-15);
        assert_eq!(r.grid().len(), 11);
    }

    #[test]
    fn custom_run_has_one_quantum_curve() {
        let c = RunConfig::parse(
            "[model]\neta = 0.2\nkind = \"rabi\"\ngauge = \"coulomb\"\n[bath]\npi = \"Q\"\ngauge_corrected = false\nkappa = 0.01",
        )
        .unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.kappa, 0.01);
        assert_eq!(r.curves.len(), 2);
        assert_eq!(
            r.curves[1].kind,
            CurveKind::Quantum {
                model: ModelKind::Rabi,
                gauge: Gauge::Coulomb,
                pi: PiChoice::Q,
                gauge_corrected: false
            }
        );
        assert!(r.expectations.is_empty());
    }

    #[test]
    fn configuration_errors() {
        assert!(RunConfig::parse("[model]\nfoo = 1").is_err());
        assert!(RunConfig::parse("preset = \"fig9\"").is_err());
        let both = RunConfig::parse("[bath]\nkappa = 0.1\nkappa_over_g = 0.05").unwrap();
        assert!(matches!(both.resolve(), Err(Error::Config(_))));
        let zero_g = RunConfig::parse("[model]\neta = 0.0").unwrap();
        assert!(zero_g.resolve().is_err());
        let ok = RunConfig::parse("[model]\neta = 0.0\n[bath]\nkappa = 0.05").unwrap();
        assert!(ok.resolve().is_ok());
        let bad = RunConfig::parse("[truncation]\ndressed = 1").unwrap();
        assert_eq!(bad.resolve().unwrap_err().exit_code(), 2);
        let bad_grid = RunConfig::parse("[grid]\nstart = 2.0\nstop = 1.0").unwrap();
        assert!(bad_grid.resolve().is_err());
    }

    #[test]
    fn doubling() {
        let r = RunConfig::default().resolve().unwrap().doubled(1);
        assert_eq!((r.cavity_dim, r.matter_dim, r.rabi_cavity_dim, r.dressed_dim), (30, 30, 60, 30));
    }
}
