//! Experiment configuration: one JSON document naming a metric, a sequence
//! source, an optional contraction and the run parameters.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::banach::{self, Contraction, SolverConfig};
use crate::certificate::DeltaGrid;
use crate::error::{Error, Result};
use crate::metric::sampler::SamplerConfig;
use crate::metric::{builtin, DbMetric, Point};
use crate::params::{self, get_f64_or, get_usize, get_vec, ParamSpec, Params, RegistryEntry};
use crate::sequence::{SearchConfig, SequencePrefix, TailConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Named {
    pub name: String,
    #[serde(default)]
    pub params: Params,
}

/// A point written either as a bare number or as a list of coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PointSpec {
    pub fn to_point(&self) -> Result<Point> {
        match self {
            PointSpec::Scalar(x) => Point::scalar(*x),
            PointSpec::Vector(v) => Point::new(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSource {
    pub path: PathBuf,
    #[serde(default)]
    pub header: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Inline(Vec<PointSpec>),
    Generator(Named),
    Csv(CsvSource),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Axioms,
    Condition2a,
    Condition2b,
    Search,
    Certify,
    Solve,
}

/// Witness shape `(p, lambda, n0)` applied to every grid delta instead of
/// searching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedWitness {
    pub p: usize,
    pub lambda: f64,
    pub n0: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    pub seed: u64,
    pub delta_grid: DeltaGrid,
    /// Explicit deltas; replaces `delta_grid` when present.
    pub deltas: Option<Vec<f64>>,
    pub tail: TailConfig,
    pub search: SearchConfig,
    pub witness: Option<FixedWitness>,
    pub sampler: SamplerConfig,
    pub solver: SolverConfig,
    /// First index of the oracle's tail; defaults to the condition (a)
    /// window start.
    pub oracle_from: Option<usize>,
    pub target_delta: f64,
    pub x0: Option<PointSpec>,
    /// Prefix length for the counterexample run.
    pub len: Option<usize>,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            seed: 0,
            delta_grid: DeltaGrid::default(),
            deltas: None,
            tail: TailConfig::default(),
            search: SearchConfig::default(),
            witness: None,
            sampler: SamplerConfig::default(),
            solver: SolverConfig::default(),
            oracle_from: None,
            target_delta: 0.01,
            x0: None,
            len: None,
        }
    }
}

impl Parameters {
    pub fn deltas(&self) -> Vec<f64> {
        self.deltas.clone().unwrap_or_else(|| self.delta_grid.deltas())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub metric: Named,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<Named>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub parameters: Parameters,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    /// Reads a config from `path`, or from stdin when `path` is `None` or `-`.
    /// A relative CSV path in a config file is resolved against the file's
    /// directory.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let text = match path {
            Some(p) if p != Path::new("-") => {
                std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?
            }
            _ => {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf)?;
                return Self::from_json(&buf);
            }
        };
        let mut cfg = Self::from_json(&text)?;
        if let (Some(Source::Csv(csv)), Some(dir)) = (&mut cfg.source, path.and_then(Path::parent)) {
            if csv.path.is_relative() {
                csv.path = dir.join(&csv.path);
            }
        }
        Ok(cfg)
    }

    /// Whether a stage tagged `check` should run. An empty `checks` list
    /// runs everything the command offers.
    pub fn wants(&self, check: Check) -> bool {
        self.checks.is_empty() || self.checks.contains(&check)
    }

    /// Resolves every referenced name before any computation happens.
    pub fn resolve(&self) -> Result<Resolved> {
        let metric = builtin::by_name(&self.metric.name, &self.metric.params)?;
        let contraction = self
            .contraction
            .as_ref()
            .map(|c| banach::by_name(&c.name, &c.params))
            .transpose()?;
        if let Some(Source::Generator(g)) = &self.source {
            params::lookup(&generator_registry(), "generator", &g.name)?.check_params(&g.params)?;
            if g.name == "orbit" && contraction.is_none() {
                return Err(Error::Config("generator `orbit` needs a `contraction`".into()));
            }
        }
        for d in self.parameters.deltas() {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::Config(format!("delta must be > 0, got {d}")));
            }
        }
        Ok(Resolved { metric, contraction })
    }
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub metric: DbMetric,
    pub contraction: Option<Contraction>,
}

impl Resolved {
    /// Builds the configured sequence prefix.
    pub fn sequence(&self, source: &Source) -> Result<SequencePrefix> {
        let points = match source {
            Source::Inline(specs) => specs.iter().map(PointSpec::to_point).collect::<Result<Vec<_>>>()?,
            Source::Generator(g) => generate(g, &self.metric, self.contraction.as_ref())?,
            Source::Csv(csv) => read_csv(&csv.path, csv.header)?,
        };
        SequencePrefix::new(points, self.metric.clone()).map_err(as_config)
    }
}

pub(crate) fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidParameter(m) | Error::InvalidPoint(m) => Error::Config(m),
        Error::PrefixTooShort { .. } | Error::DimensionMismatch { .. } => Error::Config(e.to_string()),
        other => other,
    }
}

pub fn generator_registry() -> Vec<RegistryEntry> {
    let len = ParamSpec {
        name: "len",
        kind: "integer >= 2",
        default: Some("50"),
        doc: "prefix length N",
    };
    let spec = |name, kind, default, doc| ParamSpec {
        name,
        kind,
        default,
        doc,
    };
    vec![
        RegistryEntry {
            name: "arithmetic",
            doc: "x_n = offset + step * n, n = 1..len",
            params: vec![
                len.clone(),
                spec("step", "number", Some("1"), "common difference"),
                spec("offset", "number", Some("0"), "value added to every term"),
            ],
        },
        RegistryEntry {
            name: "geometric",
            doc: "x_n = start * ratio^(n-1), n = 1..len",
            params: vec![
                len.clone(),
                spec("start", "number", Some("1"), "first term"),
                spec("ratio", "number", Some("0.5"), "common ratio"),
            ],
        },
        RegistryEntry {
            name: "constant",
            doc: "x_n = value",
            params: vec![
                len.clone(),
                spec("value", "number or list", Some("0"), "the repeated point"),
            ],
        },
        RegistryEntry {
            name: "orbit",
            doc: "x_n = f^n x0 for the configured contraction",
            params: vec![len, spec("x0", "number or list", Some("1"), "seed point")],
        },
    ]
}

fn generate(g: &Named, metric: &DbMetric, contraction: Option<&Contraction>) -> Result<Vec<Point>> {
    let p = &g.params;
    let len = get_usize(p, "len")?.unwrap_or(50);
    let scalars = |f: &dyn Fn(usize) -> f64| (1..=len).map(|n| Point::scalar(f(n))).collect::<Result<Vec<_>>>();
    match g.name.as_str() {
        "arithmetic" => {
            let step = get_f64_or(p, "step", 1.0)?;
            let offset = get_f64_or(p, "offset", 0.0)?;
            scalars(&|n| offset + step * n as f64)
        }
        "geometric" => {
            let start = get_f64_or(p, "start", 1.0)?;
            let ratio = get_f64_or(p, "ratio", 0.5)?;
            scalars(&|n| start * ratio.powi(n as i32 - 1))
        }
        "constant" => {
            let value = Point::new(get_vec(p, "value")?.unwrap_or_else(|| vec![0.0]))?;
            Ok(vec![value; len])
        }
        "orbit" => {
            let f = contraction.ok_or_else(|| Error::Config("generator `orbit` needs a `contraction`".into()))?;
            let dim = metric.dim().unwrap_or(1);
            let x0 = match get_vec(p, "x0")? {
                Some(v) if v.len() == 1 && dim > 1 => Point::new(vec![v[0]; dim])?,
                Some(v) => Point::new(v)?,
                None => Point::new(vec![1.0; dim])?,
            };
            Ok(banach::iterate(f, metric, &x0, len)
                .map_err(as_config)?
                .sequence
                .points()
                .to_vec())
        }
        other => Err(Error::Config(format!("unknown generator `{other}`"))),
    }
}

/// One point per row, comma-separated components. Malformed rows are errors
/// carrying their line number.
pub fn read_csv(path: &Path, header: bool) -> Result<Vec<Point>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    parse_csv(file, header)
}

pub fn parse_csv<R: Read>(input: R, header: bool) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let coords = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| Error::Csv {
                    line,
                    message: format!("`{field}` is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords).map_err(|e| Error::Csv {
            line,
            message: e.to_string(),
        })?);
    }
    Ok(points)
}
