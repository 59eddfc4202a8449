//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "stepscatter", version, about = "Scattering of a particle on a potential step: subprocess wave functions, characteristic times and wave-packet dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic times and lengths for every k of the grid.
    Times,
    /// Plot-ready dataset for one of the figures.
    Figure {
        #[arg(value_enum)]
        which: Figure,
    },
    /// Wave-packet simulation: norms and moments of every channel over time.
    Evolve,
    /// Runs the property and oracle checks and prints a pass/fail table.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct Options {
    /// Config file of `key = value` lines (dotted keys or [sections]).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "STEPSCATTER_THREADS", value_name = "N")]
    pub threads: Option<usize>,

    /// Any config setting as KEY=VALUE; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Step height V0; its sign selects step or well.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v0: Option<f64>,

    /// Position of the step.
    #[arg(long, global = true)]
    pub a: Option<f64>,

    #[arg(long, global = true)]
    pub hbar: Option<f64>,

    #[arg(long, global = true)]
    pub mass: Option<f64>,

    /// A single wavenumber instead of a grid.
    #[arg(long, global = true)]
    pub k: Option<f64>,

    #[arg(long, global = true)]
    pub k_min: Option<f64>,

    #[arg(long, global = true)]
    pub k_max: Option<f64>,

    #[arg(long, global = true)]
    pub k_count: Option<usize>,

    /// Packet width l0.
    #[arg(long, global = true)]
    pub l0: Option<f64>,

    /// Packet mean wavenumber.
    #[arg(long, global = true)]
    pub kbar: Option<f64>,

    /// Spectral quadrature nodes.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,

    /// Length L of the observation interval behind the step.
    #[arg(long, global = true)]
    pub interval_l: Option<f64>,
}

impl Options {
    /// Defaults, then the file, then `--set` pairs, then dedicated flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        for pair in &self.set {
            cfg.set_pair(pair)?;
        }
        let flags: [(&str, Option<String>); 12] = [
            ("v0", self.v0.map(|v| v.to_string())),
            ("a", self.a.map(|v| v.to_string())),
            ("hbar", self.hbar.map(|v| v.to_string())),
            ("mass", self.mass.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("k.min", self.k_min.map(|v| v.to_string())),
            ("k.max", self.k_max.map(|v| v.to_string())),
            ("k.count", self.k_count.map(|v| v.to_string())),
            ("packet.l0", self.l0.map(|v| v.to_string())),
            ("packet.k_bar", self.kbar.map(|v| v.to_string())),
            ("packet.nodes", self.nodes.map(|v| v.to_string())),
            ("interval_l", self.interval_l.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set_pair(&format!("{key}={v}"))?;
            }
        }
        if let Some(path) = &self.output {
            cfg.output.path = Some(path.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f.into();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
