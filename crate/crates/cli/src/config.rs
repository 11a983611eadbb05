//! Run configuration: command-line flags merged over an optional JSON file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::Deserialize;

use tricomi::field::{manufactured, ScalarField, VanishOn};
use tricomi::geometry::{DomainSpec, Variant};
use tricomi::identities::{fixture_domain, fixture_seeds};
use tricomi::params::{Nonlinearity, OperatorParams};
use tricomi::quad::QuadConfig;

use crate::CliError;

/// Options shared by every subcommand. The JSON config file uses the same
/// keys as the long flags; a flag given on the command line wins.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// JSON config file with the same keys as the flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub m1: Option<u32>,
    #[arg(long, global = true)]
    pub m2: Option<u32>,
    /// omega1 | omega2 | omega3 | omega4.
    #[arg(long, global = true)]
    pub variant: Option<String>,
    /// Anchor coordinate of the domain; the suite uses its magnitude only.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Free semi-axis of the elliptic arc.
    #[arg(long, global = true)]
    pub semi_axis: Option<f64>,
    /// `fixture[:N]`, `ac:EXPR`, `ac-sigma:EXPR` or a prefix expression such as `(* x y)`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub field: Option<String>,
    /// linear | cubic | power | power:ALPHA.
    #[arg(long, global = true)]
    pub f: Option<String>,
    /// Exponent of the power nonlinearity.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub gauss_order: Option<usize>,
    #[arg(long, global = true)]
    pub panels: Option<usize>,
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub grade: Option<bool>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Seed of randomized sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Record wall-clock seconds in reports.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub timing: Option<bool>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV output path (boundary, flow or Hardy table).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Sample count for exports, tables and sweeps.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Flow start point `x,y`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Left end of the Hardy interval; defaults to the apex height of the Omega1 fixture.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y_c: Option<f64>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Settings { config: $a.config, $($f: $a.$f.or($b.$f)),* }
    };
}

impl Settings {
    /// Reads the config file, if any, and fills every unset flag from it.
    pub fn resolve(self) -> Result<Settings, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        Ok(merge_fields!(self, file; m1, m2, variant, x0, semi_axis, field, f, alpha, lambda, p,
            gauss_order, panels, grade, abs_tol, rel_tol, seed, timing, out, csv, svg, samples,
            start, t_max, y_c))
    }

    pub fn params(&self) -> OperatorParams {
        OperatorParams::new(self.m1.unwrap_or(1), self.m2.unwrap_or(4))
    }

    pub fn variant(&self) -> Result<Variant, CliError> {
        match &self.variant {
            None => Ok(Variant::Omega1),
            Some(s) => Variant::from_str(s).map_err(CliError::config),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(42)
    }

    pub fn timing(&self) -> bool {
        self.timing.unwrap_or(false)
    }

    pub fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn quad(&self) -> Result<QuadConfig, CliError> {
        let d = QuadConfig::default();
        let cfg = QuadConfig {
            gauss_order: self.gauss_order.unwrap_or(d.gauss_order),
            panels_per_axis: self.panels.unwrap_or(d.panels_per_axis),
            grade_endpoints: self.grade.unwrap_or(d.grade_endpoints),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<DomainSpec, CliError> {
        let (variant, params) = (self.variant()?, self.params());
        let d = match (self.x0, self.semi_axis) {
            (None, None) => fixture_domain(variant, params, 0.5)?,
            (x0, None) => DomainSpec::new(variant, params, x0.unwrap_or(default_anchor(variant)))?,
            (x0, Some(b)) => DomainSpec::with_semi_axis(variant, params, x0.unwrap_or(default_anchor(variant)), b)?,
        };
        Ok(d)
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity, CliError> {
        let alpha = self.alpha.unwrap_or(2.5);
        let nl = match self.f.as_deref().unwrap_or("cubic") {
            "linear" => Nonlinearity::Linear,
            "cubic" => Nonlinearity::Cubic,
            "power" => Nonlinearity::Power { alpha },
            s => match s.strip_prefix("power:") {
                Some(a) => Nonlinearity::Power {
                    alpha: a.parse().map_err(|_| CliError::config(format!("invalid power exponent '{a}'")))?,
                },
                None => return Err(CliError::config(format!("unknown nonlinearity '{s}' (linear, cubic, power)"))),
            },
        };
        Ok(nl)
    }

    /// The suite's two nonlinearities: the cubic and `s|s|^(alpha - 1)`.
    pub fn suite_nonlinearities(&self) -> [Nonlinearity; 2] {
        [Nonlinearity::Cubic, Nonlinearity::Power { alpha: self.alpha.unwrap_or(2.5) }]
    }

    /// Resolves `--field` against `domain`; returns the field and its label.
    pub fn field(&self, domain: &DomainSpec) -> Result<(ScalarField, String), CliError> {
        let spec = self.field.as_deref().unwrap_or("fixture");
        let parse = |s: &str| s.parse::<ScalarField>().map_err(CliError::from);
        if let Some(rest) = spec.strip_prefix("fixture") {
            let n: usize = match rest.strip_prefix(':') {
                Some(n) => n.parse().map_err(|_| CliError::config(format!("invalid fixture seed '{n}'")))?,
                None if rest.is_empty() => 0,
                None => return Err(CliError::config(format!("invalid field '{spec}'"))),
            };
            let seeds = fixture_seeds();
            let (name, seed) = seeds.get(n).ok_or_else(|| {
                CliError::config(format!("fixture seed {n} out of range (0..{})", seeds.len()))
            })?;
            let u = manufactured(domain, VanishOn::AcAndSigma, seed)?;
            return Ok((u, format!("G_AC*S_sigma*({name})")));
        }
        if let Some(e) = spec.strip_prefix("ac-sigma:") {
            return Ok((manufactured(domain, VanishOn::AcAndSigma, &parse(e)?)?, format!("G_AC*S_sigma*({e})")));
        }
        if let Some(e) = spec.strip_prefix("ac:") {
            return Ok((manufactured(domain, VanishOn::AcOnly, &parse(e)?)?, format!("G_AC*({e})")));
        }
        Ok((parse(spec)?, spec.to_string()))
    }
}

fn default_anchor(variant: Variant) -> f64 {
    if variant == Variant::Omega2 {
        0.5
    } else {
        -0.5
    }
}

fn read_config(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}
