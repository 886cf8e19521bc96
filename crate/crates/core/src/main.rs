use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use usc_spectra::harness::{
    convergence_sweep, invariant_suite, run, write_outputs, write_report, Preset, Resolved, RunConfig,
};
use usc_spectra::models::{
    bloch_siegert_poles, ground_state_energy, hopfield_poles_general, hopfield_poles_resonant,
    no_diamagnetic_poles, qrm_bs_poles,
};
use usc_spectra::Error;

/// Quantum and classical emission spectra of ultrastrongly coupled
/// cavity–dipole systems.
#[derive(Parser, Debug)]
#[command(name = "usc-spectra", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Figure preset; overrides the preset named in the configuration.
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// Directory for CSV, SVG and report files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Run the open-system invariant suite before the command.
    #[arg(long, global = true)]
    seed_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute all curves and write CSV, SVG and report.
    Run,
    /// Like `run`, exiting with status 4 if a threshold is missed.
    Compare,
    /// Print the closed-form polariton frequencies.
    Poles {
        #[arg(long)]
        eta: f64,
        /// Cavity frequency in units of the dipole frequency.
        #[arg(long, default_value_t = 1.0)]
        omega_c: f64,
    },
    /// Double every truncation and report how much the spectra move.
    Converge {
        #[arg(long, default_value_t = 1)]
        doublings: u32,
    },
}

const THRESHOLD_FAILURE: u8 = 4;

fn resolve(cli: &Cli) -> Result<Resolved, Error> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = cli.preset {
        if config.preset.is_some_and(|c| c != p) {
            log::warn!("--preset {p} overrides the configuration's preset");
        }
        config.preset = Some(p);
    }
    config.resolve()
}

fn seed_check(r: &Resolved) -> Result<bool, Error> {
    let checks = invariant_suite(r)?;
    for c in &checks {
        println!(
            "{} {:<10} {:<44} {:>12.3e} (bound {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.curve,
            c.check,
            c.value,
            c.bound
        );
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn execute(cli: &Cli) -> Result<u8, Error> {
    if let Command::Poles { eta, omega_c } = cli.command {
        let general = hopfield_poles_general(1.0, omega_c, eta * omega_c)?;
        println!("hopfield exact       {:.10} {:.10}", general.omega_minus, general.omega_plus);
        if (omega_c - 1.0).abs() < 1e-12 {
            let r = hopfield_poles_resonant(eta, 1.0)?;
            let bs = bloch_siegert_poles(eta, 1.0)?;
            let nd = no_diamagnetic_poles(eta, 1.0)?;
            let q = qrm_bs_poles(eta, 1.0)?;
            println!("hopfield resonant    {:.10} {:.10}", r.omega_minus, r.omega_plus);
            println!("hopfield bs          {:.10} {:.10}", bs.omega_minus, bs.omega_plus);
            println!(
                "no diamagnetic       {:.10} {:.10}{}",
                nd.poles.omega_minus,
                nd.poles.omega_plus,
                if nd.lower_invalid { "  (lower pole invalid)" } else { "" }
            );
            println!("qrm bs               {:.10} {:.10}", q.omega_minus, q.omega_plus);
            println!("ground state energy  {:.10}", ground_state_energy(eta, 1.0)?);
        } else {
            println!("(detuned: only the exact Hopfield poles have a closed form)");
        }
        return Ok(0);
    }

    let resolved = resolve(cli)?;
    if cli.seed_check && !seed_check(&resolved)? {
        return Ok(3);
    }
    match cli.command {
        Command::Run | Command::Compare => {
            let output = run(&resolved)?;
            let artifacts = write_outputs(&output, &cli.out)?;
            for m in &output.report.comparisons {
                println!(
                    "{:<14} vs {:<10} linf {:.4}  peak shift {:.4}  peaks {}/{}",
                    m.curve,
                    m.reference,
                    m.metrics.linf,
                    m.metrics.peak_shift_max,
                    m.metrics.peak_count_a,
                    m.metrics.peak_count_b
                );
            }
            for e in &output.report.expectations {
                println!(
                    "{} {} vs {}: {:?}",
                    if e.passed { "PASS" } else { "FAIL" },
                    e.curve,
                    e.reference,
                    e.expectation
                );
            }
            println!("wrote {}, {}, {}", artifacts.csv.display(), artifacts.svg.display(), artifacts.report.display());
            if matches!(cli.command, Command::Compare) && !output.report.passed {
                return Ok(THRESHOLD_FAILURE);
            }
            Ok(0)
        }
        Command::Converge { doublings } => {
            let (steps, warnings) = convergence_sweep(&resolved, doublings)?;
            for s in &steps {
                println!(
                    "step {} (N_c {}, N_m {}, N_qrm {}, K {}): max delta {:.3e}",
                    s.step, s.cavity_dim, s.matter_dim, s.rabi_cavity_dim, s.dressed_dim, s.max_delta
                );
                for (name, d) in &s.deltas {
                    println!("    {name:<14} {d:.3e}");
                }
            }
            let output = run(&resolved)?;
            let mut report = output.report;
            report.convergence = Some(steps);
            report.warnings.extend(warnings);
            let path = cli.out.join("convergence.json");
            write_report(&path, &report)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Poles { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    faer::set_global_parallelism(faer::Par::Seq);
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
