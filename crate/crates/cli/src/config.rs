//! Run configuration: a flat key/value file with dotted section prefixes
//! (`packet.l0 = 50.0`), overridden by command-line values.
//!
//! Precedence, lowest first: built-in defaults, the config file, `--set`
//! pairs, dedicated flags such as `--l0`.

use std::path::{Path, PathBuf};

use stepscatter_core::{PhysicalConfig, Sign, SpatialGrid, SpectralProfile, StepPotential};
use toml::Value;

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl KGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * i as f64 / n,
                    Spacing::Log => self.min * (self.max / self.min).powf(i as f64 / n),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketConfig {
    pub l0: f64,
    pub k_bar: f64,
    pub window_sigmas: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimesConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl TimesConfig {
    pub fn values(&self) -> Vec<f64> {
        KGrid {
            min: self.t_min,
            max: self.t_max,
            count: self.count,
            spacing: Spacing::Linear,
        }
        .values()
    }
}

/// Sampling of the figure datasets. Wavenumber bounds are in units of κ0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureConfig {
    pub points: usize,
    pub k_min: f64,
    pub k_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub v0: f64,
    pub a: f64,
    pub hbar: f64,
    pub mass: f64,
    pub k_grid: KGrid,
    pub packet: PacketConfig,
    pub grid: GridConfig,
    pub times: TimesConfig,
    /// Length L of the free region after the step; defaults to a.
    pub interval_l: Option<f64>,
    pub figure: FigureConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            v0: 0.5,
            a: 500.0,
            hbar: 1.0,
            mass: 1.0,
            k_grid: KGrid {
                min: 0.05,
                max: 5.0,
                count: 100,
                spacing: Spacing::Log,
            },
            packet: PacketConfig {
                l0: 50.0,
                k_bar: 1.5,
                window_sigmas: 8.0,
                nodes: 513,
            },
            grid: GridConfig {
                x_min: -700.0,
                x_max: 1700.0,
                n_points: 5001,
            },
            times: TimesConfig {
                t_min: 0.0,
                t_max: 800.0,
                count: 81,
            },
            interval_l: None,
            figure: FigureConfig {
                points: 401,
                k_min: 0.05,
                k_max: 5.0,
            },
            output: OutputConfig {
                path: None,
                format: Format::Csv,
            },
        }
    }
}

/// Where a setting came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    File { path: PathBuf, line: usize },
    CommandLine,
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::CommandLine => f.write_str("command line"),
        }
    }
}

fn config_error(origin: &Origin, key: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{origin}: {key}: {message}"))
}

fn as_f64(value: &Value, key: &str, origin: &Origin) -> Result<f64, CliError> {
    match value {
        Value::Float(v) => Ok(*v),
        Value::Integer(v) => Ok(*v as f64),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| config_error(origin, key, format!("expected a number, got '{s}'"))),
        other => Err(config_error(origin, key, format!("expected a number, got {other}"))),
    }
}

fn as_usize(value: &Value, key: &str, origin: &Origin) -> Result<usize, CliError> {
    let err = || config_error(origin, key, format!("expected a non-negative integer, got {value}"));
    match value {
        Value::Integer(v) => usize::try_from(*v).map_err(|_| err()),
        Value::String(s) => s.trim().parse().map_err(|_| err()),
        _ => Err(err()),
    }
}

fn as_str<'a>(value: &'a Value, key: &str, origin: &Origin) -> Result<&'a str, CliError> {
    value
        .as_str()
        .ok_or_else(|| config_error(origin, key, format!("expected a string, got {value}")))
}

impl RunConfig {
    /// Applies one setting. Command-line values arrive as strings and are
    /// parsed according to the key.
    pub fn set(&mut self, key: &str, value: &Value, origin: &Origin) -> Result<(), CliError> {
        let f = || as_f64(value, key, origin);
        let n = || as_usize(value, key, origin);
        match key {
            "v0" => self.v0 = f()?,
            "a" => self.a = f()?,
            "hbar" => self.hbar = f()?,
            "mass" => self.mass = f()?,
            "k" => {
                let k = f()?;
                self.k_grid = KGrid {
                    min: k,
                    max: k,
                    count: 1,
                    spacing: Spacing::Linear,
                };
            }
            "k.min" => self.k_grid.min = f()?,
            "k.max" => self.k_grid.max = f()?,
            "k.count" => self.k_grid.count = n()?,
            "k.spacing" => {
                self.k_grid.spacing = match as_str(value, key, origin)? {
                    "linear" => Spacing::Linear,
                    "log" => Spacing::Log,
                    other => return Err(config_error(origin, key, format!("expected linear or log, got '{other}'"))),
                }
            }
            "packet.l0" => self.packet.l0 = f()?,
            "packet.k_bar" => self.packet.k_bar = f()?,
            "packet.window_sigmas" => self.packet.window_sigmas = f()?,
            "packet.nodes" => self.packet.nodes = n()?,
            "grid.x_min" => self.grid.x_min = f()?,
            "grid.x_max" => self.grid.x_max = f()?,
            "grid.n_points" => self.grid.n_points = n()?,
            "times.t_min" => self.times.t_min = f()?,
            "times.t_max" => self.times.t_max = f()?,
            "times.count" => self.times.count = n()?,
            "interval_l" => self.interval_l = Some(f()?),
            "figure.points" => self.figure.points = n()?,
            "figure.k_min" => self.figure.k_min = f()?,
            "figure.k_max" => self.figure.k_max = f()?,
            "output.path" => self.output.path = Some(PathBuf::from(as_str(value, key, origin)?)),
            "output.format" => {
                self.output.format = as_str(value, key, origin)?
                    .parse()
                    .map_err(|e| config_error(origin, key, e))?
            }
            _ => return Err(config_error(origin, key, "unknown setting")),
        }
        Ok(())
    }

    /// Reads settings from a file on top of the current values.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        self.merge_str(&text, path)
    }

    pub fn merge_str(&mut self, text: &str, path: &Path) -> Result<(), CliError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let line = e
                .span()
                .map(|s| line_of(text, s.start))
                .map_or(String::new(), |l| format!(":{l}"));
            CliError::Config(format!("{}{line}: {}", path.display(), e.message()))
        })?;
        let mut entries = Vec::new();
        flatten(&table, "", &mut entries);
        for (key, value) in entries {
            let line = find_key_line(text, &key);
            let origin = Origin::File { path: path.to_path_buf(), line };
            self.set(&key, &value, &origin)?;
        }
        Ok(())
    }

    /// Applies a `key=value` pair given on the command line.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("command line: expected KEY=VALUE, got '{pair}'")))?;
        self.set(key.trim(), &Value::String(value.trim().to_string()), &Origin::CommandLine)
    }

    pub fn physical(&self) -> Result<PhysicalConfig, CliError> {
        PhysicalConfig::new(self.hbar, self.mass).map_err(|e| CliError::Config(format!("hbar/mass: {e}")))
    }

    pub fn step(&self) -> Result<StepPotential, CliError> {
        StepPotential::new(self.v0, self.a, &self.physical()?).map_err(|e| CliError::Config(format!("v0/a: {e}")))
    }

    pub fn interval_l(&self) -> f64 {
        self.interval_l.unwrap_or(self.a)
    }

    pub fn profile(&self) -> Result<SpectralProfile, CliError> {
        let p = &self.packet;
        SpectralProfile::new(p.l0, p.k_bar)
            .and_then(|s| s.with_window(p.window_sigmas / (2.0 * p.l0)))
            .and_then(|s| s.with_nodes(p.nodes))
            .map_err(|e| CliError::Config(format!("packet: {e}")))
    }

    pub fn spatial_grid(&self) -> Result<SpatialGrid, CliError> {
        let g = &self.grid;
        SpatialGrid::new(g.x_min, g.x_max, g.n_points).map_err(|e| CliError::Config(format!("grid: {e}")))
    }

    /// Checks every setting; nothing is computed until this passes.
    pub fn validate(&self) -> Result<(), CliError> {
        let step = self.step()?;
        let bad = |key: &str, msg: String| Err(CliError::Config(format!("{key}: {msg}")));
        let g = &self.k_grid;
        if g.count == 0 {
            return bad("k.count", "k grid is empty".into());
        }
        if !(g.min.is_finite() && g.max.is_finite() && g.min > 0.0 && g.max >= g.min) {
            return bad("k.min/k.max", format!("need 0 < k.min <= k.max, got [{}, {}]", g.min, g.max));
        }
        if step.beta() == Sign::Positive {
            let k0 = step.kappa0();
            if let Some(k) = g.values().into_iter().find(|k| (k - k0).abs() <= 1e-12 * k0) {
                return bad(
                    "k",
                    format!("grid contains k = {k}, the step threshold kappa0 = {k0}, where the characteristic quantities diverge"),
                );
            }
        }
        if let Some(l) = self.interval_l {
            if !(l.is_finite() && l > 0.0) {
                return bad("interval_l", format!("must be positive, got {l}"));
            }
        }
        self.profile()?;
        self.spatial_grid()?;
        let t = &self.times;
        if t.count == 0 || !(t.t_min.is_finite() && t.t_max.is_finite() && t.t_max >= t.t_min) {
            return bad("times", format!("need count >= 1 and t_min <= t_max, got {t:?}"));
        }
        let fig = &self.figure;
        if fig.points < 2 || !(fig.k_min > 0.0 && fig.k_max > fig.k_min) {
            return bad("figure", format!("need points >= 2 and 0 < k_min < k_max, got {fig:?}"));
        }
        Ok(())
    }
}

fn flatten(table: &toml::Table, prefix: &str, out: &mut Vec<(String, Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(t, &key, out),
            other => out.push((key, other.clone())),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line on which a flattened key is assigned, 0 if it cannot be located.
fn find_key_line(text: &str, key: &str) -> usize {
    let last = key.rsplit('.').next().unwrap_or(key);
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        let lhs: String = lhs.split('.').map(str::trim).collect::<Vec<_>>().join(".");
        let full = if section.is_empty() { lhs.clone() } else { format!("{section}.{lhs}") };
        if full == key || (lhs == last && full.ends_with(key)) {
            return i + 1;
        }
    }
    0
}
