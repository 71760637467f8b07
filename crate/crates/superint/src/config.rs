//! JSON run configuration. Unknown keys are rejected everywhere; the schema
//! lives in `docs/config.schema.json`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use superint_core::fields::{FieldModel, MonopolePotential, RadialProfile};
use superint_core::integrals::{known_integrals, Alpha, IntegralSpec, ScalarField, VectorField};
use superint_core::{IntegratorConfig, Method, PhaseState, Vec3};

use crate::error::CliError;

/// Reads and validates a JSON document, reporting the offending field path
/// together with line and column.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    parse(&text).map_err(|msg| CliError::Config(format!("{}: {msg}", path.display())))
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("field `{path}`: {inner}")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialChoice {
    ModifiedCoulomb,
    CoulombOnly,
}

impl From<PotentialChoice> for MonopolePotential {
    fn from(p: PotentialChoice) -> Self {
        match p {
            PotentialChoice::ModifiedCoulomb => MonopolePotential::ModifiedCoulomb,
            PotentialChoice::CoulombOnly => MonopolePotential::CoulombOnly,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn three() -> f64 {
    3.0
}

fn modified() -> PotentialChoice {
    PotentialChoice::ModifiedCoulomb
}

/// Field model as written in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    ConstantB {
        #[serde(default = "one")]
        b: f64,
    },
    Helical {
        #[serde(default = "three")]
        amplitude: f64,
        #[serde(default = "three")]
        beta: f64,
        #[serde(default)]
        phi0: f64,
    },
    Monopole {
        #[serde(default = "one")]
        g: f64,
        #[serde(default = "one")]
        q: f64,
        #[serde(default = "modified")]
        potential: PotentialChoice,
    },
}

impl SystemConfig {
    pub fn default_for(name: &str) -> Result<Self, CliError> {
        match name {
            "constant_b" | "constant-b" => Ok(SystemConfig::ConstantB { b: 1.0 }),
            "helical" => Ok(SystemConfig::Helical {
                amplitude: 3.0,
                beta: 3.0,
                phi0: 0.0,
            }),
            "monopole" => Ok(SystemConfig::Monopole {
                g: 1.0,
                q: 1.0,
                potential: PotentialChoice::ModifiedCoulomb,
            }),
            other => Err(CliError::Usage(format!(
                "unknown system `{other}` (expected constant_b, helical or monopole)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemConfig::ConstantB { .. } => "constant_b",
            SystemConfig::Helical { .. } => "helical",
            SystemConfig::Monopole { .. } => "monopole",
        }
    }

    pub fn model(&self) -> Result<FieldModel, CliError> {
        Ok(match *self {
            SystemConfig::ConstantB { b } => FieldModel::constant_b(b)?,
            SystemConfig::Helical {
                amplitude,
                beta,
                phi0,
            } => FieldModel::helical(amplitude, beta, phi0)?,
            SystemConfig::Monopole { g, q, potential } => FieldModel::monopole_with(g, q, potential.into())?,
        })
    }

    /// The integrals the named system is claimed to have. For the monopole the
    /// catalogue always follows the modified Coulomb potential, so checking it
    /// against `coulomb-only` exposes the missing term.
    pub fn catalogue(&self) -> Result<Vec<IntegralSpec>, CliError> {
        let reference = match *self {
            SystemConfig::Monopole { g, q, .. } => FieldModel::monopole(g, q)?,
            _ => self.model()?,
        };
        Ok(known_integrals(&reference)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub x: [f64; 3],
    pub p: [f64; 3],
}

impl InitialState {
    pub fn state(&self) -> PhaseState {
        PhaseState::new(
            Vec3::new(self.x[0], self.x[1], self.x[2]),
            Vec3::new(self.p[0], self.p[1], self.p[2]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Rk45,
    Boris,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub method: MethodChoice,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            method: MethodChoice::Rk45,
            rel_tol: d.rel_tol,
            abs_tol: d.abs_tol,
            max_step: d.max_step,
        }
    }
}

impl IntegratorSection {
    pub fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            method: match self.method {
                MethodChoice::Rk45 => Method::Rk45,
                MethodChoice::Boris => Method::Boris,
            },
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
        }
    }
}

/// Top-level run configuration shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub initial: Option<InitialState>,
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Extra integrals for `verify`, in the same representation as the built-in ones.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub integrals: Vec<IntegralEntry>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralEntry {
    pub name: String,
    /// `[a, b, value]` with 1-based `1 ≤ a ≤ b ≤ 6`.
    #[serde(default)]
    pub alpha: Vec<(usize, usize, f64)>,
    /// `zero`, `e1`..`e3`, `rot1`..`rot3` or `from:<integral>`.
    #[serde(default = "zero_name")]
    pub s: String,
    /// A constant, `zero` or `from:<integral>`.
    #[serde(default)]
    pub m: Option<ScalarChoice>,
}

fn zero_name() -> String {
    "zero".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ScalarChoice {
    Constant(f64),
    Named(String),
}

impl IntegralEntry {
    pub fn build(&self, catalogue: &[IntegralSpec]) -> Result<IntegralSpec, CliError> {
        let lookup = |name: &str| {
            catalogue.iter().find(|i| i.name == name).ok_or_else(|| {
                CliError::Config(format!("integral `{}`: unknown reference `{name}`", self.name))
            })
        };
        let mut alpha = Alpha::zero();
        for &(a, b, v) in &self.alpha {
            if !(1..=6).contains(&a) || !(1..=6).contains(&b) {
                return Err(CliError::Config(format!(
                    "integral `{}`: alpha index out of 1..=6",
                    self.name
                )));
            }
            alpha.set(a.min(b), a.max(b), v);
        }
        let s = match self.s.as_str() {
            "zero" => VectorField::constant(Vec3::ZERO),
            "e1" | "e2" | "e3" => {
                let j = self.s[1..].parse::<usize>().unwrap() - 1;
                VectorField::constant(Vec3::unit(j))
            }
            "rot1" | "rot2" | "rot3" => VectorField::rotation(self.s[3..].parse::<usize>().unwrap() - 1),
            other => match other.strip_prefix("from:") {
                Some(name) => lookup(name)?.s.clone(),
                None => {
                    return Err(CliError::Config(format!(
                        "integral `{}`: unknown linear term `{other}`",
                        self.name
                    )))
                }
            },
        };
        let m = match &self.m {
            None => ScalarField::zero(),
            Some(ScalarChoice::Constant(c)) => {
                let c = *c;
                ScalarField::with_gradient(move |_| c, |_| Vec3::ZERO)
            }
            Some(ScalarChoice::Named(n)) if n == "zero" => ScalarField::zero(),
            Some(ScalarChoice::Named(n)) => match n.strip_prefix("from:") {
                Some(name) => lookup(name)?.m.clone(),
                None => {
                    return Err(CliError::Config(format!(
                        "integral `{}`: unknown scalar term `{n}`",
                        self.name
                    )))
                }
            },
        };
        Ok(IntegralSpec::new(&self.name, alpha, s, m))
    }
}

/// `spectrum` job.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawSpectrumJob")]
pub struct SpectrumJob {
    pub system: SpectrumSystem,
    pub grid: Option<GridSection>,
    pub n_levels: usize,
}

fn default_levels() -> usize {
    6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SpectrumKind {
    ConstantB,
    Helical,
    Cylindrical,
}

// `parameters` is typed in a second pass so errors can name the offending key.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrumJob {
    system: SpectrumKind,
    #[serde(default)]
    parameters: Option<serde_json::Value>,
    #[serde(default)]
    grid: Option<GridSection>,
    #[serde(default = "default_levels")]
    n_levels: usize,
}

impl TryFrom<RawSpectrumJob> for SpectrumJob {
    type Error = String;

    fn try_from(raw: RawSpectrumJob) -> Result<Self, String> {
        fn typed<T: DeserializeOwned>(v: serde_json::Value) -> Result<T, String> {
            serde_path_to_error::deserialize(v).map_err(|e| {
                let path = e.path().to_string();
                let path = if path == "." {
                    String::new()
                } else {
                    format!(".{path}")
                };
                format!("parameters{path}: {}", e.into_inner())
            })
        }
        let params = raw
            .parameters
            .unwrap_or_else(|| serde_json::Value::Object(Default::default()));
        let system = match raw.system {
            SpectrumKind::ConstantB => SpectrumSystem::ConstantB(typed(params)?),
            SpectrumKind::Helical => SpectrumSystem::Helical(typed(params)?),
            SpectrumKind::Cylindrical => SpectrumSystem::Cylindrical(typed(params)?),
        };
        Ok(SpectrumJob {
            system,
            grid: raw.grid,
            n_levels: raw.n_levels,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSystem {
    /// Landau problem `ħ²f'' = ((Bz − k₂)² + k₁² − 2E) f`.
    ConstantB(LandauParameters),
    /// Mathieu characteristic values of the helical reduced equation.
    Helical(HelicalParameters),
    /// Radial equation of the axially symmetric family; profiles are
    /// polynomial coefficient lists in `R`.
    Cylindrical(RadialParameters),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandauParameters {
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default)]
    pub k1: f64,
    #[serde(default)]
    pub k2: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelicalParameters {
    #[serde(default = "three")]
    pub amplitude: f64,
    #[serde(default = "three")]
    pub beta: f64,
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialParameters {
    #[serde(default)]
    pub f1: Vec<f64>,
    #[serde(default)]
    pub f2: Vec<f64>,
    #[serde(default)]
    pub v: Vec<f64>,
    #[serde(default)]
    pub m: i64,
    #[serde(default)]
    pub k: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

impl RadialParameters {
    pub fn model(&self) -> FieldModel {
        let poly = |c: &Vec<f64>| {
            if c.is_empty() {
                RadialProfile::zero()
            } else {
                RadialProfile::polynomial(c.clone())
            }
        };
        FieldModel::cylindrical(poly(&self.f1), poly(&self.f2), poly(&self.v))
    }

    /// `F₁ = F₂ = 0`, `V = ω²R²/2`: returns `ω`.
    pub fn oscillator_frequency(&self) -> Option<f64> {
        let zero = |c: &Vec<f64>| c.iter().all(|v| *v == 0.0);
        if !zero(&self.f1) || !zero(&self.f2) || self.v.len() != 3 || self.v[0] != 0.0 || self.v[1] != 0.0 {
            return None;
        }
        (self.v[2] > 0.0).then(|| (2.0 * self.v[2]).sqrt())
    }
}
