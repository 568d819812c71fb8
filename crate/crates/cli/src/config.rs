use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use twoloop::model::{Family, SpecRecord};
use twoloop::ovals::Annulus;
use twoloop::Spec;

pub const OUT_DIR_ENV: &str = "TWOLOOP_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config, or a spec the operation does not apply to.
    Config(String),
    Hard(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid config: {m}"),
            CliError::Hard(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<twoloop::Error> for CliError {
    fn from(e: twoloop::Error) -> Self {
        use twoloop::Error::*;
        match e {
            InvalidParameter(_)
            | FieldNotApplicable { .. }
            | OutOfRange { .. }
            | NoTwoSaddleLoop(_)
            | NoAnnulus(_)
            | Precondition(_)
            | IdenticallyZero => CliError::Config(e.to_string()),
            Bracketing(_) | Singular { .. } | Integration(_) => CliError::Hard(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Hard(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Hard(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Hard(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    #[value(name = "normal_form", alias = "normal-form")]
    #[serde(alias = "normal-form")]
    NormalForm,
    Appendix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusArg {
    #[value(alias = "sigma_plus")]
    #[serde(alias = "sigma_plus")]
    Plus,
    #[value(alias = "sigma_minus")]
    #[serde(alias = "sigma_minus")]
    Minus,
    Both,
    Upper,
}

impl AnnulusArg {
    pub fn single(self) -> CliResult<Annulus> {
        match self {
            AnnulusArg::Plus => Ok(Annulus::SigmaPlus),
            AnnulusArg::Minus => Ok(Annulus::SigmaMinus),
            AnnulusArg::Upper => Ok(Annulus::Upper),
            AnnulusArg::Both => config_err("annulus: `both` is only accepted by centroid"),
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct SpecArgs {
    #[arg(long, value_enum, default_value = "normal_form")]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

impl SpecArgs {
    pub fn build(&self) -> CliResult<Spec> {
        let family = match self.family {
            FamilyArg::NormalForm => Family::NormalForm,
            FamilyArg::Appendix => Family::Appendix,
        };
        Ok(SpecRecord {
            family,
            a: self.a,
            c: self.c,
        }
        .build()?)
    }

    pub fn default_annulus(&self, given: Option<AnnulusArg>) -> CliResult<Annulus> {
        match (given, self.family) {
            (Some(a), _) => a.single(),
            (None, FamilyArg::NormalForm) => Ok(Annulus::SigmaPlus),
            (None, FamilyArg::Appendix) => Ok(Annulus::Upper),
        }
    }
}

/// `lo:hi:n`, n points uniformly spaced with both ends included.
pub fn parse_grid(s: &str, field: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Config(format!("{field}: expected lo:hi:n, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            lo * (1.0 - f) + hi * f
        })
        .collect())
}

/// Comma-separated list of exactly `n` numbers.
pub fn parse_list(s: &str, n: usize, field: &str) -> CliResult<Vec<f64>> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => config_err(format!(
            "{field}: expected {n} comma-separated numbers, got `{s}`"
        )),
    }
}

pub fn required<T: Clone>(v: &Option<T>, field: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Config(format!("missing field {field}")))
}

/// Overlays the keys of a config object on the parsed flags.
pub fn merge<A: Serialize + DeserializeOwned>(
    args: &A,
    overrides: &Map<String, Value>,
    subcommand: &str,
) -> CliResult<A> {
    let mut v = serde_json::to_value(args)?;
    let obj = v
        .as_object_mut()
        .expect("argument structs serialize to objects");
    for (k, val) in overrides {
        if !obj.contains_key(k) {
            return config_err(format!("unknown field `{k}` for subcommand {subcommand}"));
        }
        obj.insert(k.clone(), val.clone());
    }
    serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))
}

pub fn out_path(out: &Option<PathBuf>, default_name: &str) -> PathBuf {
    match out {
        Some(p) => p.clone(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(default_name),
    }
}
