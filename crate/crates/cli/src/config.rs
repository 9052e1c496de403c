use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kn_core::knbasis::PointConfig;
use kn_core::rational::{int, parse_rat};
use kn_core::{Error, Rat, Result};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "kn", version, about = "Exact Krichever-Novikov tables and Sugawara checks on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Basis elements of one weight over a degree window
    Basis,
    /// Structure constants, cocycles and almost-grading bands
    Tables,
    /// Dimension and Casimir eigenvalue of a Lie algebra
    Kappa,
    /// Current commutator and central extension checks
    Verify,
    /// Basis of a truncated vacuum module
    Module,
}

/// Every flag overrides the matching key of the `--config` file.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// JSON file with "in"/"out" points and any of the keys below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// e.g. sl:2, abelian:1, sl:2+abelian:1
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub level: Option<String>,
    #[arg(long, global = true)]
    pub depth: Option<i32>,
    #[arg(long, global = true)]
    pub nmax: Option<i32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<i32>,
    /// Degree window LO:HI
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// standard, swap-equal or lagged
    #[arg(long, global = true)]
    pub ordering: Option<String>,
    /// vacuum or fock
    #[arg(long, global = true)]
    pub module: Option<String>,
    /// vacuum or free-zero
    #[arg(long, global = true)]
    pub induction: Option<String>,
    /// Write the JSON document here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub points: PointConfig,
    pub algebra: String,
    pub level: Rat,
    pub depth: i32,
    pub nmax: i32,
    pub lambda: i32,
    pub window: Option<(i32, i32)>,
    pub ordering: String,
    pub module: String,
    pub induction: String,
}

fn parse_window(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::Parse(format!("window `{s}` is not LO:HI"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn string_key(doc: &Value, key: &str) -> Result<Option<String>> {
    match doc.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(v) => Err(Error::Parse(format!("`{key}` must be a string, got {v}"))),
    }
}

fn int_key(doc: &Value, key: &str) -> Result<Option<i32>> {
    match doc.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_i64()
            .and_then(|x| i32::try_from(x).ok())
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("`{key}` must be an integer, got {v}"))),
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let doc = match &flags.config {
            None => Value::Object(Default::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            }
        };
        let points = match (doc.get("in"), doc.get("out")) {
            (None, None) => PointConfig::classical(),
            (i, o) => PointConfig::from_value(&serde_json::json!({ "in": i, "out": o }))?,
        };
        let window = match flags.window.clone().or(string_key(&doc, "window")?) {
            Some(w) => Some(parse_window(&w)?),
            None => None,
        };
        let level = flags.level.clone().or(string_key(&doc, "level")?).map(|s| parse_rat(&s)).transpose()?;
        let pick = |flag: &Option<String>, key: &str, default: &str| -> Result<String> {
            Ok(flag.clone().or(string_key(&doc, key)?).unwrap_or_else(|| default.to_string()))
        };
        let cfg = Self {
            points,
            algebra: pick(&flags.algebra, "algebra", "sl:2")?,
            level: level.unwrap_or_else(|| int(1)),
            depth: flags.depth.or(int_key(&doc, "depth")?).unwrap_or(4),
            nmax: flags.nmax.or(int_key(&doc, "nmax")?).unwrap_or(2),
            lambda: flags.lambda.or(int_key(&doc, "lambda")?).unwrap_or(-1),
            window,
            ordering: pick(&flags.ordering, "ordering", "standard")?,
            module: pick(&flags.module, "module", "vacuum")?,
            induction: pick(&flags.induction, "induction", "vacuum")?,
        };
        if cfg.depth < 0 {
            return Err(Error::Parse(format!("depth must be non-negative, got {}", cfg.depth)));
        }
        if cfg.nmax < 0 {
            return Err(Error::Parse(format!("nmax must be non-negative, got {}", cfg.nmax)));
        }
        Ok(cfg)
    }

    pub fn window_or(&self, default: (i32, i32)) -> (i32, i32) {
        self.window.unwrap_or(default)
    }
}
