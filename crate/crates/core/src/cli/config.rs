//! Run configuration: file ingestion (TOML or JSON), flag overrides and
//! validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glmod::{Entry, ModuleSpec};
use crate::rational;
use crate::weyl::WhittakerType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Bracket,
    Phi,
    VerifyIso,
    Whittaker,
    Decompose,
    Omega,
    Complex,
    Weighting,
    All,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::Bracket,
        Task::Phi,
        Task::VerifyIso,
        Task::Whittaker,
        Task::Decompose,
        Task::Omega,
        Task::Complex,
        Task::Weighting,
        Task::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Bracket => "bracket",
            Task::Phi => "phi",
            Task::VerifyIso => "verify-iso",
            Task::Whittaker => "whittaker",
            Task::Decompose => "decompose",
            Task::Omega => "omega",
            Task::Complex => "complex",
            Task::Weighting => "weighting",
            Task::All => "all",
        }
    }

    /// Tasks that only make sense for nonsingular `a`.
    pub fn needs_nonsingular(self) -> bool {
        matches!(self, Task::Decompose | Task::Omega | Task::Weighting)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| Error::parse("task", format!("unknown task {s:?}")))
    }
}

/// `a` as written in a config file: `"1,1/2"` or `["1", "1/2"]` / `[1, 2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TypeInput {
    Text(String),
    List(Vec<Entry>),
}

impl TypeInput {
    fn resolve(&self) -> Result<WhittakerType> {
        match self {
            TypeInput::Text(s) => WhittakerType::parse(s),
            TypeInput::List(xs) => xs
                .iter()
                .map(|x| match x {
                    Entry::Int(v) => Ok(rational::int(*v)),
                    Entry::Text(s) => rational::parse("a", s),
                })
                .collect::<Result<Vec<_>>>()
                .map(WhittakerType::new),
        }
    }
}

/// `module` as written in a config file: `"exterior:1"` or a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleInput {
    Text(String),
    Spec(ModuleSpec),
}

impl ModuleInput {
    fn resolve(&self) -> Result<ModuleSpec> {
        match self {
            ModuleInput::Text(s) => s.parse(),
            ModuleInput::Spec(s) => Ok(s.clone()),
        }
    }
}

/// Every setting optional; both the config file and the flags parse into this.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub task: Option<Task>,
    pub n: Option<usize>,
    pub a: Option<TypeInput>,
    pub module: Option<ModuleInput>,
    #[serde(alias = "degree")]
    pub deg: Option<u32>,
    pub out: Option<PathBuf>,
    pub grid: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub m_max: Option<u32>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub poly: Option<String>,
    pub component: Option<usize>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads `path`; `.json` files are parsed as JSON, anything else as TOML.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        };
        parsed.map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fields set in `other` win.
    pub fn overridden_by(self, other: RawConfig) -> RawConfig {
        RawConfig {
            task: other.task.or(self.task),
            n: other.n.or(self.n),
            a: other.a.or(self.a),
            module: other.module.or(self.module),
            deg: other.deg.or(self.deg),
            out: other.out.or(self.out),
            grid: other.grid.or(self.grid),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            m_max: other.m_max.or(self.m_max),
            x: other.x.or(self.x),
            y: other.y.or(self.y),
            poly: other.poly.or(self.poly),
            component: other.component.or(self.component),
        }
    }
}

pub const DEFAULT_DEGREE: u32 = 3;
pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_M_MAX: u32 = 8;
pub const DEFAULT_GRID: &str = "-2:2";

/// A validated configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub task: Task,
    pub n: usize,
    pub a: WhittakerType,
    pub module: ModuleSpec,
    pub degree: u32,
    pub out: Option<PathBuf>,
    pub grid: String,
    pub trials: usize,
    pub seed: u64,
    pub m_max: u32,
    pub x: Option<String>,
    pub y: Option<String>,
    pub poly: Option<String>,
    /// 1-based index of the basis vector of `V` used by `decompose`.
    pub component: usize,
}

impl RunConfig {
    /// Fills defaults and validates. `n` falls back to the length of `a`,
    /// then to 1; `a` falls back to all ones.
    pub fn resolve(raw: RawConfig) -> Result<Self> {
        let task = raw.task.ok_or_else(|| Error::Config("no task given".into()))?;
        let a = raw.a.as_ref().map(TypeInput::resolve).transpose()?;
        let n = raw.n.or(a.as_ref().map(WhittakerType::dim)).unwrap_or(1);
        if n == 0 {
            return Err(Error::parse("n", "must be at least 1"));
        }
        let a = a.unwrap_or_else(|| WhittakerType::from_i64(&vec![1; n]));
        if a.dim() != n {
            return Err(Error::parse("a", format!("expected {n} entries, found {}", a.dim())));
        }
        if task.needs_nonsingular() {
            a.require_nonsingular()?;
        }
        let module = raw.module.as_ref().map(ModuleInput::resolve).transpose()?.unwrap_or(ModuleSpec::Trivial);
        if let ModuleSpec::Exterior { k } = module {
            if k > n {
                return Err(Error::ExteriorOutOfRange { n, k });
            }
        }
        let component = raw.component.unwrap_or(1);
        if component == 0 {
            return Err(Error::parse("component", "indices are 1-based"));
        }
        Ok(RunConfig {
            task,
            n,
            a,
            module,
            degree: raw.deg.unwrap_or(DEFAULT_DEGREE),
            out: raw.out,
            grid: raw.grid.unwrap_or_else(|| DEFAULT_GRID.to_string()),
            trials: raw.trials.unwrap_or(DEFAULT_TRIALS),
            seed: raw.seed.unwrap_or(0),
            m_max: raw.m_max.unwrap_or(DEFAULT_M_MAX),
            x: raw.x,
            y: raw.y,
            poly: raw.poly,
            component,
        })
    }

    /// Loads `path` (if any), lets `flags` override it and validates.
    pub fn load(path: Option<&Path>, flags: RawConfig) -> Result<Self> {
        let base = match path {
            Some(p) => RawConfig::from_file(p)?,
            None => RawConfig::default(),
        };
        Self::resolve(base.overridden_by(flags))
    }

    /// Canonical form echoed into reports; the output path is left out so
    /// that the same run written to two places gives identical reports.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            task: self.task,
            n: self.n,
            a: self.a.values().iter().map(ToString::to_string).collect(),
            module: self.module.clone(),
            degree: self.degree,
            grid: self.grid.clone(),
            trials: self.trials,
            seed: self.seed,
            m_max: self.m_max,
            x: self.x.clone(),
            y: self.y.clone(),
            poly: self.poly.clone(),
            component: self.component,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub task: Task,
    pub n: usize,
    pub a: Vec<String>,
    pub module: ModuleSpec,
    pub degree: u32,
    pub grid: String,
    pub trials: usize,
    pub seed: u64,
    pub m_max: u32,
    pub x: Option<String>,
    pub y: Option<String>,
    pub poly: Option<String>,
    pub component: usize,
}
