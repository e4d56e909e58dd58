//! Run settings: defaults, `key=value` config files and command-line flags.
//!
//! Every setting has one textual key. Files and flags are both applied
//! through [`Settings::set`], in the order defaults, then file, then flags,
//! so a flag always wins and both sources share one set of error messages.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anisoreg_core::inequality::{Lemma2Exponents, Suite, TestFunctionKind, TestFunctionSpec};
use anisoreg_core::solver::{InitialData, SolverConfig};
use anisoreg_core::{Exponent, Grid3, MixedExponents};

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Keys written into manifests that carry no setting of their own.
const INFORMATIONAL: [&str; 2] = ["subcommand", "version"];
const OUTPUT_PREFIX: &str = "output.";

/// Parses `key=value` lines. Blank lines and `#` comments are skipped;
/// repeated keys are an error.
pub fn parse_pairs(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::invalid(format!("{source}:{}: expected key=value, got {line:?}", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if out.iter().any(|(k, _)| *k == key) {
            return Err(CliError::invalid(format!("{source}:{}: duplicate key '{key}'", lineno + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// A family of settings addressable by key.
pub trait Settings: Sized + Default {
    const SUBCOMMAND: &'static str;

    /// Every accepted key, in manifest order.
    fn keys() -> &'static [&'static str];

    fn set(&mut self, key: &str, value: &str) -> Result<()>;

    /// Current value of every key, as it would be written to a file.
    fn pairs(&self) -> Vec<(&'static str, String)>;

    /// Cross-key checks run once everything is applied.
    fn validate(&self) -> Result<()>;

    /// Defaults, then the file at `config` if any, then `flags`.
    fn resolve(config: Option<&Path>, flags: &[(&str, String)]) -> Result<Self> {
        let mut s = Self::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let source = path.display().to_string();
            for (key, value) in parse_pairs(&text, &source)? {
                s.apply_file_key(&key, &value)
                    .map_err(|e| CliError::invalid(format!("{source}: {e}")))?;
            }
        }
        for (key, value) in flags {
            s.set(key, value)?;
        }
        s.validate()?;
        Ok(s)
    }

    fn apply_file_key(&mut self, key: &str, value: &str) -> Result<()> {
        if key == "subcommand" {
            if value != Self::SUBCOMMAND {
                return Err(CliError::invalid(format!(
                    "file is for '{value}', not '{}'",
                    Self::SUBCOMMAND
                )));
            }
            return Ok(());
        }
        if INFORMATIONAL.contains(&key) || key.starts_with(OUTPUT_PREFIX) {
            return Ok(());
        }
        self.set(key, value)
    }
}

fn unknown<S: Settings>(key: &str) -> CliError {
    CliError::invalid(format!(
        "unknown key '{key}' for {}; accepted keys: {}",
        S::SUBCOMMAND,
        S::keys().join(", ")
    ))
}

fn number<T: FromStr>(key: &str, value: &str, what: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::invalid(format!("{key}: expected {what}, got {value:?}")))
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let v: f64 = number(key, value, "a number")?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::invalid(format!("{key}: must be a positive finite number, got {value}")));
    }
    Ok(v)
}

fn finite(key: &str, value: &str) -> Result<f64> {
    let v: f64 = number(key, value, "a number")?;
    if !v.is_finite() {
        return Err(CliError::invalid(format!("{key}: must be finite, got {value}")));
    }
    Ok(v)
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(CliError::invalid(format!("{key}: expected true or false, got {value:?}"))),
    }
}

fn exponent(key: &str, value: &str) -> Result<Exponent> {
    value
        .parse()
        .map_err(|e| CliError::invalid(format!("{key}: {e}")))
}

/// Grid sizes, written `N` for a cube or `N1xN2xN3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec(pub [usize; 3]);

impl GridSpec {
    pub fn grid(self) -> Result<Grid3> {
        Grid3::new(self.0[0], self.0[1], self.0[2]).map_err(|e| CliError::invalid(e.to_string()))
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::invalid(format!("grid: expected N or N1xN2xN3, got {s:?}"));
        let parts: Vec<usize> = s
            .split('x')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let dims = match parts[..] {
            [n] => [n, n, n],
            [a, b, c] => [a, b, c],
            _ => return Err(bad()),
        };
        let spec = GridSpec(dims);
        spec.grid()?;
        Ok(spec)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        if a == b && b == c {
            write!(f, "{a}")
        } else {
            write!(f, "{a}x{b}x{c}")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    TaylorGreen,
    Random,
    SingleMode,
    File,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            InitKind::TaylorGreen => "taylor-green",
            InitKind::Random => "random",
            InitKind::SingleMode => "single-mode",
            InitKind::File => "file",
        }
    }
}

impl FromStr for InitKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor-green" => Ok(InitKind::TaylorGreen),
            "random" | "random-divfree" => Ok(InitKind::Random),
            "single-mode" => Ok(InitKind::SingleMode),
            "file" => Ok(InitKind::File),
            _ => Err(CliError::invalid(format!(
                "init: expected taylor-green, random, single-mode or file, got {s:?}"
            ))),
        }
    }
}

/// Fully resolved `simulate` settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulateSettings {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub nu: f64,
    pub init: InitKind,
    pub init_file: Option<PathBuf>,
    pub seed: u64,
    pub amplitude: f64,
    pub slope: f64,
    pub dealias: bool,
    pub stride: u64,
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    pub out: PathBuf,
    pub save_fields: Option<PathBuf>,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        let core = SolverConfig::default();
        Self {
            grid: GridSpec(core.grid.dims()),
            dt: core.dt,
            t_end: core.t_end,
            nu: core.nu,
            init: InitKind::TaylorGreen,
            init_file: None,
            seed: core.seed,
            amplitude: core.amplitude,
            slope: core.slope,
            dealias: core.dealias,
            stride: core.stride,
            p: Exponent::Infinite,
            q: Exponent::Infinite,
            r: Exponent::Infinite,
            out: PathBuf::from("run.csv"),
            save_fields: None,
        }
    }
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn path_text(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl Settings for SimulateSettings {
    const SUBCOMMAND: &'static str = "simulate";

    fn keys() -> &'static [&'static str] {
        &[
            "grid", "dt", "t_end", "nu", "init", "init_file", "seed", "amplitude", "slope", "dealias", "stride",
            "p", "q", "r", "out", "save_fields",
        ]
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "grid" => self.grid = value.parse()?,
            "dt" => self.dt = positive(key, value)?,
            "t_end" => self.t_end = positive(key, value)?,
            "nu" => {
                let v = finite(key, value)?;
                if v < 0.0 {
                    return Err(CliError::invalid(format!("nu: must be non-negative, got {value}")));
                }
                self.nu = v;
            }
            "init" => self.init = value.parse()?,
            "init_file" => self.init_file = optional_path(value),
            "seed" => self.seed = number(key, value, "a non-negative integer")?,
            "amplitude" => self.amplitude = finite(key, value)?,
            "slope" => self.slope = finite(key, value)?,
            "dealias" => self.dealias = boolean(key, value)?,
            "stride" => {
                self.stride = number(key, value, "a positive integer")?;
                if self.stride == 0 {
                    return Err(CliError::invalid("stride: must be at least 1"));
                }
            }
            "p" => self.p = exponent(key, value)?,
            "q" => self.q = exponent(key, value)?,
            "r" => self.r = exponent(key, value)?,
            "out" => {
                if value.is_empty() {
                    return Err(CliError::invalid("out: must name a file"));
                }
                self.out = PathBuf::from(value);
            }
            "save_fields" => self.save_fields = optional_path(value),
            _ => return Err(unknown::<Self>(key)),
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("grid", self.grid.to_string()),
            ("dt", self.dt.to_string()),
            ("t_end", self.t_end.to_string()),
            ("nu", self.nu.to_string()),
            ("init", self.init.name().to_string()),
            ("init_file", path_text(&self.init_file)),
            ("seed", self.seed.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("slope", self.slope.to_string()),
            ("dealias", self.dealias.to_string()),
            ("stride", self.stride.to_string()),
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
            ("r", self.r.to_string()),
            ("out", self.out.display().to_string()),
            ("save_fields", path_text(&self.save_fields)),
        ]
    }

    fn validate(&self) -> Result<()> {
        self.exponents()?;
        if self.t_end < self.dt {
            return Err(CliError::invalid(format!(
                "t_end ({}) must be at least dt ({})",
                self.t_end, self.dt
            )));
        }
        match (self.init, &self.init_file) {
            (InitKind::File, None) => Err(CliError::invalid("init=file needs init_file (--init-file PATH)")),
            (InitKind::File, Some(_)) | (_, None) => Ok(()),
            (_, Some(_)) => Err(CliError::invalid(format!(
                "init_file is only used with init=file, but init={}",
                self.init.name()
            ))),
        }?;
        if self.amplitude == 0.0 && self.init == InitKind::TaylorGreen {
            return Err(CliError::invalid("amplitude: taylor-green needs a nonzero amplitude"));
        }
        Ok(())
    }
}

impl SimulateSettings {
    pub fn exponents(&self) -> Result<MixedExponents> {
        MixedExponents::new(self.p, self.q, self.r).map_err(|e| CliError::invalid(e.to_string()))
    }

    /// Solver configuration; `provided` carries the velocity for `init=file`.
    pub fn solver_config(&self, provided: Option<anisoreg_core::VectorField>) -> Result<SolverConfig> {
        let init = match (self.init, provided) {
            (InitKind::TaylorGreen, _) => InitialData::TaylorGreen,
            (InitKind::Random, _) => InitialData::RandomDivFree,
            (InitKind::SingleMode, _) => InitialData::SingleMode,
            (InitKind::File, Some(u)) => InitialData::Provided(u),
            (InitKind::File, None) => return Err(CliError::invalid("init=file needs a velocity field")),
        };
        let config = SolverConfig {
            grid: self.grid.grid()?,
            dt: self.dt,
            t_end: self.t_end,
            nu: self.nu,
            init,
            seed: self.seed,
            amplitude: self.amplitude,
            slope: self.slope,
            dealias: self.dealias,
            stride: self.stride,
        };
        config.validate().map_err(|e| CliError::invalid(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Lemma1,
    Lemma2,
}

impl FromStr for SuiteKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(SuiteKind::Lemma1),
            "lemma2" => Ok(SuiteKind::Lemma2),
            _ => Err(CliError::invalid(format!("suite: expected lemma1 or lemma2, got {s:?}"))),
        }
    }
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Lemma1 => "lemma1",
            SuiteKind::Lemma2 => "lemma2",
        }
    }
}

/// Fully resolved `verify` settings.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifySettings {
    pub suite: SuiteKind,
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    pub theta: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub samples: usize,
    pub grids: Vec<GridSpec>,
    pub seed: u64,
    pub kind: TestFunctionKind,
    /// `None` until resolved: the default depends on `kind`.
    pub radius: Option<f64>,
    pub amplitude: f64,
    pub out: PathBuf,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            suite: SuiteKind::Lemma1,
            p: Exponent::Finite(4.0),
            q: Exponent::Finite(4.0),
            r: Exponent::Finite(4.0),
            theta: 2.0,
            lambda: 2.0,
            kappa: 3.0,
            samples: 100,
            grids: vec![GridSpec([32; 3])],
            seed: 0,
            kind: TestFunctionKind::GaussianBump,
            radius: None,
            amplitude: 1.0,
            out: PathBuf::from("report.csv"),
        }
    }
}

impl Settings for VerifySettings {
    const SUBCOMMAND: &'static str = "verify";

    fn keys() -> &'static [&'static str] {
        &[
            "suite", "p", "q", "r", "theta", "lambda", "kappa", "samples", "grid", "seed", "kind", "radius",
            "amplitude", "out",
        ]
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "suite" => self.suite = value.parse()?,
            "p" => self.p = exponent(key, value)?,
            "q" => self.q = exponent(key, value)?,
            "r" => self.r = exponent(key, value)?,
            "theta" => self.theta = finite(key, value)?,
            "lambda" => self.lambda = finite(key, value)?,
            "kappa" => self.kappa = finite(key, value)?,
            "samples" => {
                self.samples = number(key, value, "a positive integer")?;
                if self.samples == 0 {
                    return Err(CliError::invalid("samples: must be at least 1"));
                }
            }
            "grid" => {
                self.grids = value
                    .split(',')
                    .map(|g| g.trim().parse())
                    .collect::<Result<Vec<GridSpec>>>()?;
            }
            "seed" => self.seed = number(key, value, "a non-negative integer")?,
            "kind" => self.kind = value.parse().map_err(|e: anisoreg_core::Error| CliError::invalid(e.to_string()))?,
            "radius" => self.radius = if value.is_empty() { None } else { Some(positive(key, value)?) },
            "amplitude" => self.amplitude = finite(key, value)?,
            "out" => {
                if value.is_empty() {
                    return Err(CliError::invalid("out: must name a file"));
                }
                self.out = PathBuf::from(value);
            }
            _ => return Err(unknown::<Self>(key)),
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        let grids: Vec<String> = self.grids.iter().map(|g| g.to_string()).collect();
        vec![
            ("suite", self.suite.name().to_string()),
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
            ("r", self.r.to_string()),
            ("theta", self.theta.to_string()),
            ("lambda", self.lambda.to_string()),
            ("kappa", self.kappa.to_string()),
            ("samples", self.samples.to_string()),
            ("grid", grids.join(",")),
            ("seed", self.seed.to_string()),
            ("kind", self.kind.name().to_string()),
            ("radius", self.test_functions().radius.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("out", self.out.display().to_string()),
        ]
    }

    fn validate(&self) -> Result<()> {
        self.suite()?;
        self.test_functions()
            .validate()
            .map_err(|e| CliError::invalid(e.to_string()))
    }
}

impl VerifySettings {
    pub fn suite(&self) -> Result<Suite> {
        let invalid = |e: anisoreg_core::Error| CliError::invalid(e.to_string());
        Ok(match self.suite {
            SuiteKind::Lemma1 => Suite::Lemma1(MixedExponents::new(self.p, self.q, self.r).map_err(invalid)?),
            SuiteKind::Lemma2 => {
                Suite::Lemma2(Lemma2Exponents::new(self.theta, self.lambda, self.kappa).map_err(invalid)?)
            }
        })
    }

    pub fn test_functions(&self) -> TestFunctionSpec {
        let mut spec = TestFunctionSpec::new(self.kind, self.seed);
        if let Some(r) = self.radius {
            spec.radius = r;
        }
        spec.amplitude = self.amplitude;
        spec
    }

    pub fn grid_list(&self) -> Result<Vec<Grid3>> {
        self.grids.iter().map(|g| g.grid()).collect()
    }
}

/// Record of one run, written next to its outputs. Feeding it back through
/// `--config` reproduces the outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub settings: Vec<(&'static str, String)>,
    pub outputs: Vec<(&'static str, PathBuf)>,
}

impl RunManifest {
    pub fn new<S: Settings>(settings: &S, outputs: Vec<(&'static str, PathBuf)>) -> Self {
        Self {
            subcommand: S::SUBCOMMAND,
            version: VERSION,
            settings: settings.pairs(),
            outputs,
        }
    }

    pub fn seed(&self) -> Option<&str> {
        self.settings.iter().find(|(k, _)| *k == "seed").map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::from("# anisoreg run manifest; pass to --config to rerun\n");
        s.push_str(&format!("subcommand={}\n", self.subcommand));
        s.push_str(&format!("version={}\n", self.version));
        for (k, v) in &self.settings {
            s.push_str(&format!("{k}={v}\n"));
        }
        for (k, p) in &self.outputs {
            s.push_str(&format!("{OUTPUT_PREFIX}{k}={}\n", p.display()));
        }
        s
    }
}

/// `run.csv` becomes `run.json`; a name without extension gets one added.
pub fn sibling(path: &Path, extension: &str) -> PathBuf {
    path.with_extension(extension)
}
