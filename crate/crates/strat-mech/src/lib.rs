//! Config-driven experiment runner over `strat-mech-core`.
//!
//! Every command is a pure function of its config file and seed: repeated
//! runs write byte-identical files. Outputs are written atomically.
//!
//! - [`config`]: the TOML experiment description.
//! - [`classify`]: stratum report for supplied phase points.
//! - [`simulate`]: the four trajectory engines and the row validator.
//! - [`compare`]: the seeded two-engine agreement suite.
//! - [`plot`]: SVG rendering of trajectory tables.
//! - [`io`]: byte-stable CSV/JSON tables and atomic writes.

pub mod classify;
pub mod compare;
pub mod config;
mod error;
pub mod io;
pub mod plot;
pub mod simulate;

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use error::{CliError, CliResult};

use config::{ExperimentConfig, Format};
use io::{write_atomic, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Simulate,
    Compare,
    Plot,
}

/// One invocation: the command, its config file and the shared flags.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub out: PathBuf,
    /// Overrides the seed in the config.
    pub seed: Option<u64>,
    /// Re-read emitted trajectories and check every row's invariants.
    pub validate: bool,
}

/// What a successful command produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    /// Human-readable summary for the terminal.
    pub summary: String,
}

fn emit(out: &mut Outcome, path: PathBuf, bytes: &[u8]) -> CliResult<()> {
    write_atomic(&path, bytes)?;
    log::info!("wrote {}", path.display());
    out.written.push(path);
    Ok(())
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializing plain values");
    v.push(b'\n');
    v
}

pub fn execute(inv: &Invocation) -> CliResult<Outcome> {
    let cfg = ExperimentConfig::load(&inv.config)?;
    let mut out = Outcome::default();
    match inv.command {
        Command::Classify => {
            let report = classify::run(&cfg.classify)?;
            emit(
                &mut out,
                inv.out.join("classify_report.json"),
                &json_bytes(&report),
            )?;
            let text = report.to_text();
            emit(
                &mut out,
                inv.out.join("classify_report.txt"),
                text.as_bytes(),
            )?;
            out.summary = text;
        }
        Command::Simulate => {
            let sim = cfg
                .simulate
                .as_ref()
                .ok_or_else(|| CliError::Validation("config has no [simulate] table".into()))?;
            let seed = inv.seed.or(sim.seed).unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let table = simulate::run(sim, &mut rng)?;
            let csv = table.to_csv();
            for format in dedup(&sim.formats) {
                match format {
                    Format::Csv => emit(&mut out, inv.out.join(format!("{}.csv", sim.name)), &csv)?,
                    Format::Json => emit(
                        &mut out,
                        inv.out.join(format!("{}.json", sim.name)),
                        &table.to_json(sim.engine.label()),
                    )?,
                }
            }
            if inv.validate {
                let reread = Table::from_csv(&csv)
                    .map_err(|e| CliError::invalid("re-reading the emitted table", e))?;
                simulate::validate_table(sim.engine, sim.scale, &reread)
                    .map_err(|e| CliError::Validation(format!("emitted row invalid: {e}")))?;
            }
            out.summary = format!(
                "{}: {} samples over [0, {}] (seed {seed})\n",
                sim.engine.label(),
                table.rows.len(),
                sim.horizon
            );
        }
        Command::Compare => {
            let seed = inv.seed.or(cfg.compare.seed).unwrap_or(0);
            let summary = compare::run(&cfg.compare, seed)?;
            let name = &cfg.compare.name;
            emit(
                &mut out,
                inv.out.join(format!("{name}_report.json")),
                &json_bytes(&summary),
            )?;
            let text = summary.to_text();
            emit(
                &mut out,
                inv.out.join(format!("{name}_report.txt")),
                text.as_bytes(),
            )?;
            if summary.engine_failed() {
                return Err(CliError::Integrator(format!(
                    "an engine failed; see {name}_report.txt\n{text}"
                )));
            }
            if !summary.pass {
                return Err(CliError::Comparison(text));
            }
            out.summary = text;
        }
        Command::Plot => {
            let plot_cfg = cfg
                .plot
                .as_ref()
                .ok_or_else(|| CliError::Validation("config has no [plot] table".into()))?;
            let root = inv.config.parent().unwrap_or(Path::new("."));
            for input in &plot_cfg.inputs {
                let path = root.join(input);
                let table = Table::read_csv(&path)?;
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("trajectory")
                    .to_string();
                for p in plot::plots(&stem, &table) {
                    emit(
                        &mut out,
                        inv.out.join(format!("{stem}_{}.svg", p.kind)),
                        p.svg.as_bytes(),
                    )?;
                }
            }
            out.summary = format!("{} plots written\n", out.written.len());
        }
    }
    Ok(out)
}

fn dedup(formats: &[Format]) -> Vec<Format> {
    let mut seen = Vec::new();
    for f in formats {
        if !seen.contains(f) {
            seen.push(*f);
        }
    }
    seen
}
