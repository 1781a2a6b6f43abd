//! Run configuration: a flat `key = value` file merged under command-line
//! flags, validated into a [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use biharm::models::{bilaplace, interval, newtonian::NewtonianModel};
use biharm::{Evaluable, LineModel, Tolerances};

use crate::error::CliError;

/// Every key accepted in a config file, in echo order.
pub const KEYS: [&str; 12] = [
    "model",
    "kernel",
    "x",
    "y",
    "dist",
    "func",
    "tol_quad",
    "tol_identity",
    "tol_fd",
    "grid",
    "out",
    "seed",
];

pub const DEFAULT_SEED: u64 = 1;

/// Raw string settings, keyed by the names in [`KEYS`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings(BTreeMap<&'static str, String>);

fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().replace('-', "_");
    KEYS.iter().copied().find(|known| *known == k)
}

impl Settings {
    pub fn set(&mut self, key: &'static str, value: String) {
        self.0.insert(key, value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Parses `key = value` lines. Blank lines and lines starting with `#`
    /// are skipped; unknown and repeated keys are errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut out = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("{origin}:{}: expected `key = value`", n + 1))
            })?;
            let key = canonical_key(k).ok_or_else(|| {
                CliError::config(format!("{origin}:{}: unknown key `{}`", n + 1, k.trim()))
            })?;
            if out.0.insert(key, v.trim().to_string()).is_some() {
                return Err(CliError::config(format!(
                    "{origin}:{}: key `{key}` given twice",
                    n + 1
                )));
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `self` with every key of `flags` taking precedence.
    pub fn overridden_by(mut self, flags: &Settings) -> Settings {
        for (k, v) in &flags.0 {
            self.0.insert(k, v.clone());
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Interval,
    /// The interval model with the `y(1 - y)` reference density.
    IntervalStated,
    Bilaplace,
    Newtonian(u32),
}

impl ModelChoice {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "interval" => ModelChoice::Interval,
            "interval-stated" => ModelChoice::IntervalStated,
            "bilaplace" => ModelChoice::Bilaplace,
            _ => match s.strip_prefix("newtonian").map(str::parse::<u32>) {
                Some(Ok(n)) => {
                    NewtonianModel::new(n)?;
                    ModelChoice::Newtonian(n)
                }
                _ => {
                    return Err(CliError::config(format!(
                        "unknown model `{s}` (interval, interval-stated, bilaplace, newtonianN with N >= 5)"
                    )))
                }
            },
        })
    }

    /// The one-dimensional model, or `None` for the Newtonian kernels.
    pub fn line_model(&self, quad_tol: f64) -> Option<LineModel> {
        let m = match self {
            ModelChoice::Interval => interval::model(),
            ModelChoice::IntervalStated => interval::model_with(interval::MuDensity::Stated),
            ModelChoice::Bilaplace => bilaplace::model(),
            ModelChoice::Newtonian(_) => return None,
        };
        Some(m.with_quad_tol(quad_tol))
    }
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelChoice::Interval => f.write_str("interval"),
            ModelChoice::IntervalStated => f.write_str("interval-stated"),
            ModelChoice::Bilaplace => f.write_str("bilaplace"),
            ModelChoice::Newtonian(n) => write!(f, "newtonian{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelChoice {
    G1,
    G2,
    H,
    V,
    VStar,
}

impl KernelChoice {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "g1" => KernelChoice::G1,
            "g2" => KernelChoice::G2,
            "h" => KernelChoice::H,
            "v" => KernelChoice::V,
            "vstar" => KernelChoice::VStar,
            _ => {
                return Err(CliError::config(format!(
                    "unknown kernel `{s}` (g1, g2, h, v, vstar)"
                )))
            }
        })
    }

    pub fn is_operator(&self) -> bool {
        matches!(self, KernelChoice::V | KernelChoice::VStar)
    }
}

impl fmt::Display for KernelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelChoice::G1 => "g1",
            KernelChoice::G2 => "g2",
            KernelChoice::H => "h",
            KernelChoice::V => "v",
            KernelChoice::VStar => "vstar",
        })
    }
}

/// Data for `v`/`vstar`: `const:C`, `poly:c0:c1:...` or `bump:a:b`
/// (the hat `(z - a)(b - z)` on `[a, b]`, zero elsewhere).
#[derive(Debug, Clone, PartialEq)]
pub enum FuncSpec {
    Const(f64),
    Poly(Vec<f64>),
    Bump(f64, f64),
}

impl FuncSpec {
    fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::config(format!(
                "bad function `{s}` (const:C, poly:c0:c1:..., bump:a:b)"
            ))
        };
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums = rest
            .split(':')
            .map(|t| parse_finite(t, "func"))
            .collect::<Result<Vec<_>, _>>()?;
        match (kind, nums.as_slice()) {
            ("const", [c]) => Ok(FuncSpec::Const(*c)),
            ("poly", cs) if !cs.is_empty() => Ok(FuncSpec::Poly(cs.to_vec())),
            ("bump", [a, b]) if a < b => Ok(FuncSpec::Bump(*a, *b)),
            _ => Err(bad()),
        }
    }

    pub fn value(&self, z: f64) -> f64 {
        match self {
            FuncSpec::Const(c) => *c,
            FuncSpec::Poly(cs) => cs.iter().rev().fold(0.0, |acc, c| acc * z + c),
            FuncSpec::Bump(a, b) => {
                if z < *a || z > *b {
                    0.0
                } else {
                    (z - a) * (b - z)
                }
            }
        }
    }

    pub fn evaluable(&self) -> Evaluable {
        match self {
            FuncSpec::Const(c) => Evaluable::constant(*c),
            _ => {
                let spec = self.clone();
                let kinks = match self {
                    FuncSpec::Bump(a, b) => vec![*a, *b],
                    _ => Vec::new(),
                };
                Evaluable::closed(self.to_string(), move |z| spec.value(z)).with_kinks(&kinks)
            }
        }
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncSpec::Const(c) => write!(f, "const:{c}"),
            FuncSpec::Poly(cs) => {
                f.write_str("poly")?;
                cs.iter().try_for_each(|c| write!(f, ":{c}"))
            }
            FuncSpec::Bump(a, b) => write!(f, "bump:{a}:{b}"),
        }
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Option<ModelChoice>,
    pub kernel: Option<KernelChoice>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dist: Vec<f64>,
    pub func: FuncSpec,
    pub tol: Tolerances,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

fn parse_finite(s: &str, key: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::config(format!("`{key}`: `{s}` is not a finite number"))),
    }
}

fn parse_list(s: &str, key: &str) -> Result<Vec<f64>, CliError> {
    let v = s
        .split(',')
        .map(|t| parse_finite(t, key))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(v)
}

fn parse_tol(s: Option<&str>, key: &str, default: f64) -> Result<f64, CliError> {
    let Some(s) = s else { return Ok(default) };
    let v = parse_finite(s, key)?;
    if v <= 0.0 {
        return Err(CliError::config(format!("`{key}` must be positive, got {s}")));
    }
    Ok(v)
}

fn parse_seed(s: &str) -> Result<u64, CliError> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.parse::<u64>(),
    };
    parsed.map_err(|_| CliError::config(format!("`seed`: `{s}` is not an unsigned integer")))
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let defaults = Tolerances::default();
        let grid = match s.get("grid") {
            None => None,
            Some(g) => match g.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Some(n),
                _ => {
                    return Err(CliError::config(format!(
                        "`grid` must be a positive integer, got `{g}`"
                    )))
                }
            },
        };
        Ok(RunConfig {
            model: s.get("model").map(ModelChoice::parse).transpose()?,
            kernel: s.get("kernel").map(KernelChoice::parse).transpose()?,
            x: s.get("x").map(|v| parse_list(v, "x")).transpose()?.unwrap_or_default(),
            y: s.get("y").map(|v| parse_list(v, "y")).transpose()?.unwrap_or_default(),
            dist: s
                .get("dist")
                .map(|v| parse_list(v, "dist"))
                .transpose()?
                .unwrap_or_default(),
            func: s
                .get("func")
                .map(FuncSpec::parse)
                .transpose()?
                .unwrap_or(FuncSpec::Const(1.0)),
            tol: Tolerances {
                quad: parse_tol(s.get("tol_quad"), "tol_quad", defaults.quad)?,
                identity: parse_tol(s.get("tol_identity"), "tol_identity", defaults.identity)?,
                fd: parse_tol(s.get("tol_fd"), "tol_fd", defaults.fd)?,
            },
            grid,
            out: s.get("out").map(PathBuf::from),
            seed: s.get("seed").map(parse_seed).transpose()?.unwrap_or(DEFAULT_SEED),
        })
    }

    /// `key=value` pairs for the output header: tolerances and seed always,
    /// everything else when set.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut out = Vec::new();
        if let Some(m) = self.model {
            out.push(("model".into(), m.to_string()));
        }
        if let Some(k) = self.kernel {
            out.push(("kernel".into(), k.to_string()));
        }
        for (key, v) in [("x", &self.x), ("y", &self.y), ("dist", &self.dist)] {
            if !v.is_empty() {
                out.push((key.into(), list(v)));
            }
        }
        if self.kernel.is_some_and(|k| k.is_operator()) {
            out.push(("func".into(), self.func.to_string()));
        }
        out.push(("tol_quad".into(), format!("{:e}", self.tol.quad)));
        out.push(("tol_identity".into(), format!("{:e}", self.tol.identity)));
        out.push(("tol_fd".into(), format!("{:e}", self.tol.fd)));
        if let Some(g) = self.grid {
            out.push(("grid".into(), g.to_string()));
        }
        out.push(("seed".into(), self.seed.to_string()));
        out
    }
}
