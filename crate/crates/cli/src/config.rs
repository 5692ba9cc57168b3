//! Run configuration: CLI flags layered over an optional JSON config
//! file, with `AIM_PRECISION` from the environment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use bosonaim::aim::{AimOptions, PrecisionMode};
use bosonaim::algebra::{Letter, OperatorExpression, OperatorWord};
use bosonaim::models::{
    anharmonic_hamiltonian, bistable_hamiltonian, AnharmonicParams, BistableParams, HalfInt,
    Su2Model, TwoModeParams,
};
use serde::Deserialize;

/// A configuration problem; always exits with code 1 and a message
/// naming the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError(format!("{field}: {message}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Anharmonic,
    Bistable,
    Su2,
    TwoMode,
    Custom,
}

impl Model {
    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "anharmonic" => Ok(Self::Anharmonic),
            "bistable" => Ok(Self::Bistable),
            "su2" => Ok(Self::Su2),
            "two-mode" => Ok(Self::TwoMode),
            "custom" => Ok(Self::Custom),
            other => Err(err(
                "model",
                format!("unknown model '{other}' (anharmonic|bistable|su2|two-mode|custom)"),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Anharmonic => "anharmonic",
            Self::Bistable => "bistable",
            Self::Su2 => "su2",
            Self::TwoMode => "two-mode",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
    Csv,
}

/// Flag values as they come off the command line.
#[derive(Debug, Default, Clone)]
pub struct CliOverrides {
    pub model: Option<String>,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub kappa: Option<f64>,
    pub omega_nl: Option<f64>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub j: Option<String>,
    pub n_total: Option<u64>,
    pub depth: Option<usize>,
    pub nmax: Option<u64>,
    pub levels: Option<usize>,
    pub tol: Option<f64>,
    pub output: Option<String>,
    pub config: Option<PathBuf>,
    pub seed_file: Option<PathBuf>,
}

/// Shape of the JSON config file; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    #[serde(default)]
    parameters: BTreeMap<String, serde_json::Value>,
    aim: Option<FileAim>,
    oracle_n_max: Option<u64>,
    levels: Option<usize>,
    output: Option<String>,
    seed_file: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileAim {
    depth: Option<usize>,
    tol: Option<f64>,
    interval: Option<[f64; 2]>,
    stability_window: Option<usize>,
    precision: Option<String>,
}

/// Fully resolved run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    pub alpha: f64,
    pub omega: f64,
    pub kappa: f64,
    pub omega_nl: f64,
    pub r: u32,
    pub s: u32,
    pub j: Option<HalfInt>,
    pub n_total: Option<u64>,
    pub aim: AimOptions,
    pub interval_explicit: bool,
    pub oracle_n_max: u64,
    pub levels: usize,
    pub tol: f64,
    pub output: OutputMode,
    pub seed_file: Option<PathBuf>,
}

fn parse_half_integer(s: &str) -> Result<HalfInt, ConfigError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| err("j", format!("bad fraction '{s}'")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| err("j", format!("bad fraction '{s}'")))?;
        if d != 2 {
            return Err(err("j", format!("only halves are allowed, got '{s}'")));
        }
        return Ok(HalfInt::from_twice(n));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(HalfInt::from_int(n));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| err("j", format!("cannot parse '{s}'")))?;
    let doubled = 2.0 * x;
    if doubled.fract() != 0.0 {
        return Err(err("j", format!("'{s}' is not a half-integer")));
    }
    Ok(HalfInt::from_twice(doubled as i64))
}

fn number(field: &str, v: &serde_json::Value) -> Result<f64, ConfigError> {
    v.as_f64()
        .ok_or_else(|| err(field, format!("expected a number, got {v}")))
}

impl RunConfig {
    pub fn resolve(cli: &CliOverrides) -> Result<Self, ConfigError> {
        let file: FileConfig = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| err("config", format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| err("config", format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let model_name = cli
            .model
            .clone()
            .or(file.model)
            .ok_or_else(|| err("model", "required (anharmonic|bistable|su2|two-mode|custom)"))?;
        let model = Model::parse(&model_name)?;

        let p = &file.parameters;
        let fparam = |key: &str| -> Result<Option<f64>, ConfigError> {
            p.get(key).map(|v| number(key, v)).transpose()
        };
        let alpha = cli.alpha.or(fparam("alpha")?).unwrap_or(0.0);
        let omega = cli.omega.or(fparam("omega")?).unwrap_or(1.0);
        let kappa = cli.kappa.or(fparam("kappa")?).unwrap_or(0.0);
        let omega_nl = cli.omega_nl.or(fparam("Omega")?).unwrap_or(0.0);
        let r = match cli.r {
            Some(v) => v,
            None => fparam("r")?.map(|x| x as u32).unwrap_or(1),
        };
        let s = match cli.s {
            Some(v) => v,
            None => fparam("s")?.map(|x| x as u32).unwrap_or(1),
        };
        let j = match (&cli.j, p.get("j")) {
            (Some(text), _) => Some(parse_half_integer(text)?),
            (None, Some(v)) => match v {
                serde_json::Value::String(text) => Some(parse_half_integer(text)?),
                other => Some(parse_half_integer(&number("j", other)?.to_string())?),
            },
            (None, None) => None,
        };
        let n_total = match cli.n_total {
            Some(v) => Some(v),
            None => fparam("N")?.map(|x| x as u64),
        };

        let file_aim = file.aim.unwrap_or_default();
        let depth = cli.depth.or(file_aim.depth).unwrap_or(20);
        let mut aim = AimOptions::with_depth(depth);
        let tol = cli.tol.or(file_aim.tol).unwrap_or(1e-6);
        aim.convergence_tol = tol;
        if let Some(w) = file_aim.stability_window {
            aim.stability_window = w;
        }
        let interval_explicit = file_aim.interval.is_some();
        if let Some([lo, hi]) = file_aim.interval {
            aim.root_interval = (lo, hi);
        }
        aim.precision = match std::env::var("AIM_PRECISION") {
            Ok(text) => text
                .parse::<PrecisionMode>()
                .map_err(|e| err("AIM_PRECISION", e))?,
            Err(_) => match file_aim.precision {
                Some(text) => text
                    .parse::<PrecisionMode>()
                    .map_err(|e| err("aim.precision", e))?,
                None => PrecisionMode::Standard,
            },
        };

        let output = match cli.output.clone().or(file.output).as_deref() {
            None | Some("text") => OutputMode::Text,
            Some("json") => OutputMode::Json,
            Some("csv") => OutputMode::Csv,
            Some(other) => {
                return Err(err("output", format!("unknown mode '{other}' (text|json|csv)")))
            }
        };
        let levels = cli.levels.or(file.levels).unwrap_or(6);
        if levels < 1 {
            return Err(err("levels", "must be >= 1"));
        }
        let seed_file = cli
            .seed_file
            .clone()
            .or(file.seed_file.map(PathBuf::from));
        if model == Model::Custom {
            match &seed_file {
                None => return Err(err("seed_file", "required when model=custom")),
                Some(path) if !path.exists() => {
                    return Err(err("seed_file", format!("{} does not exist", path.display())))
                }
                _ => {}
            }
        }

        let config = Self {
            model,
            alpha,
            omega,
            kappa,
            omega_nl,
            r,
            s,
            j,
            n_total,
            aim,
            interval_explicit,
            oracle_n_max: cli.nmax.or(file.oracle_n_max).unwrap_or(200),
            levels,
            tol,
            output,
            seed_file,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.model {
            Model::Su2 => {
                if self.j.is_none() {
                    return Err(err("j", "required for model=su2"));
                }
            }
            Model::TwoMode
                if self.n_total.is_none() => {
                    return Err(err("N", "required for model=two-mode"));
                }
            _ => {}
        }
        Ok(())
    }

    /// The su(2) model named by the configuration.
    pub fn su2_model(&self) -> Result<Su2Model, ConfigError> {
        match self.model {
            Model::Su2 => Su2Model::new(self.j.expect("validated"), self.s, self.omega, self.kappa)
                .map_err(|e| err("j/s", e)),
            Model::TwoMode => {
                let p = self.two_mode_params();
                p.to_su2(self.n_total.expect("validated"))
                    .map_err(|e| err("r/s", e))
            }
            _ => Err(err("model", "not an su(2) model")),
        }
    }

    pub fn two_mode_params(&self) -> TwoModeParams {
        TwoModeParams {
            omega: self.omega,
            kappa: self.kappa,
            r: self.r,
            s: self.s,
        }
    }

    /// The single-mode expression named by the configuration.
    pub fn expression(&self) -> Result<OperatorExpression, ConfigError> {
        match self.model {
            Model::Anharmonic => Ok(anharmonic_hamiltonian(&AnharmonicParams {
                alpha: self.alpha,
            })),
            Model::Bistable => Ok(bistable_hamiltonian(&BistableParams {
                omega: self.omega,
                kappa: self.kappa,
                omega_nl: self.omega_nl,
            })),
            Model::Custom => {
                let path = self.seed_file.as_ref().expect("validated");
                load_custom_expression(path)
            }
            _ => Err(err("model", "not a single-mode model")),
        }
    }

    /// Conserved charge of the two-mode block this run addresses:
    /// `N` counts total bosons for balanced exchange, otherwise it is
    /// the raw charge `r·n_a + s·n_b`.
    pub fn two_mode_charge(&self) -> u64 {
        let n = self.n_total.expect("validated");
        if self.r == self.s {
            self.s as u64 * n
        } else {
            n
        }
    }

    pub fn describe_parameters(&self) -> String {
        match self.model {
            Model::Anharmonic => format!("alpha = {}", self.alpha),
            Model::Bistable => format!(
                "omega = {}, kappa = {}, Omega = {}",
                self.omega, self.kappa, self.omega_nl
            ),
            Model::Su2 => format!(
                "j = {}, s = {}, omega = {}, kappa = {}",
                self.j.expect("validated"),
                self.s,
                self.omega,
                self.kappa
            ),
            Model::TwoMode => format!(
                "r = {}, s = {}, N = {}, omega = {}, kappa = {}",
                self.r,
                self.s,
                self.n_total.expect("validated"),
                self.omega,
                self.kappa
            ),
            Model::Custom => format!(
                "file = {}",
                self.seed_file.as_ref().expect("validated").display()
            ),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CustomFile {
    terms: Vec<CustomTerm>,
}

#[derive(Debug, Deserialize)]
struct CustomTerm {
    coeff: f64,
    word: String,
}

/// Load a Hamiltonian from JSON: `{"terms": [{"coeff": c, "word":
/// "a+ a a+"}, …]}` where words are space-separated `a` / `a+` letters
/// and the empty word is the identity.
pub fn load_custom_expression(path: &std::path::Path) -> Result<OperatorExpression, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err("seed_file", format!("{}: {e}", path.display())))?;
    let parsed: CustomFile = serde_json::from_str(&text)
        .map_err(|e| err("seed_file", format!("{}: {e}", path.display())))?;
    let mut terms = Vec::new();
    for term in &parsed.terms {
        let mut letters = Vec::new();
        for token in term.word.split_whitespace() {
            match token {
                "a" => letters.push(Letter::Lower),
                "a+" => letters.push(Letter::Raise),
                "1" => {}
                other => {
                    return Err(err(
                        "seed_file",
                        format!("unknown letter '{other}' in word '{}'", term.word),
                    ))
                }
            }
        }
        terms.push((term.coeff, OperatorWord::new(letters)));
    }
    let expr = OperatorExpression::from_terms(terms);
    if expr.is_empty() {
        return Err(err("seed_file", "expression has no nonzero terms"));
    }
    Ok(expr)
}
