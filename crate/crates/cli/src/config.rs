//! JSON run configuration.
//!
//! ```json
//! {
//!   "experiment": {
//!     "kind": "resonance_discrete",
//!     "swept": { "name": "phi", "grid": { "start": "-pi", "stop": "pi", "count": 101 } },
//!     "fixed": { "n": 2, "n_steps": 2, "theta1": "pi/4" },
//!     "series": [ { "id": "alpha=0", "fixed": { "alpha": 0 } },
//!                 { "id": "alpha=pi/2", "fixed": { "alpha": "pi/2" } } ],
//!     "trials": 1,
//!     "seed": 7
//!   },
//!   "output": { "path": "r.csv", "format": "csv" },
//!   "engine": { "backend": "auto", "threads": 4, "verification": false }
//! }
//! ```
//!
//! Any numeric value may instead be an angle literal such as `"pi/4"`,
//! `"-3pi/8"`, `"2*pi"` or `"pi/1.5"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use trotterlab::model::GateFamily;
use trotterlab::output::Format;
use trotterlab::sweep::{Backend, ExperimentKind, Grid, SweepSpec};
use trotterlab::{Error, Result};

/// A number, or a string holding a number or a rational multiple of pi.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    pub fn value(&self) -> Result<f64> {
        match self {
            Angle::Number(x) => Ok(*x),
            Angle::Text(s) => parse_angle(s),
        }
    }
}

fn number(s: &str, whole: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::config(format!("cannot read {whole:?} as a number or pi/k angle")))
}

/// Parses `1.25`, `pi`, `-pi/2`, `3pi/4`, `3*pi/4`, `pi/1.5`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    let Some(at) = s.find("pi") else {
        return number(s, text);
    };
    let (head, tail) = (s[..at].trim(), s[at + 2..].trim());
    let head = head.strip_suffix('*').unwrap_or(head).trim();
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => number(other, text)?,
    };
    let divisor = match tail {
        "" => 1.0,
        _ => match tail.strip_prefix('/') {
            Some(d) => number(d, text)?,
            None => return Err(Error::config(format!("cannot read {text:?} as a pi/k angle"))),
        },
    };
    if divisor == 0.0 {
        return Err(Error::config(format!("angle {text:?} divides by zero")));
    }
    Ok(factor * std::f64::consts::PI / divisor)
}

/// Parses a `start:stop:count` grid override.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(Error::config(format!("grid {text:?} is not start:stop:count")));
    };
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::config(format!("grid count in {text:?} is not a positive integer")))?;
    Ok(Grid::linear(parse_angle(start)?, parse_angle(stop)?, count))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSection {
    Linear { start: Angle, stop: Angle, count: usize },
    Values { values: Vec<Angle> },
}

impl GridSection {
    fn grid(&self) -> Result<Grid> {
        match self {
            GridSection::Linear { start, stop, count } => {
                Ok(Grid::linear(start.value()?, stop.value()?, *count))
            }
            GridSection::Values { values } => Ok(Grid::values(
                values.iter().map(Angle::value).collect::<Result<_>>()?,
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweptSection {
    pub name: String,
    pub grid: GridSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSection {
    pub id: String,
    #[serde(default)]
    pub fixed: BTreeMap<String, Angle>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub swept: SweptSection,
    #[serde(default)]
    pub fixed: BTreeMap<String, Angle>,
    #[serde(default)]
    pub series: Vec<SeriesSection>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub gate_family: Option<GateFamily>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSection {
    #[serde(default)]
    pub backend: Backend,
    pub threads: Option<usize>,
    /// Forces single-threaded, bitwise-reproducible execution.
    #[serde(default)]
    pub verification: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<ExperimentSection>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub engine: EngineSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))
    }
}

fn values(map: &BTreeMap<String, Angle>) -> Result<BTreeMap<String, f64>> {
    map.iter()
        .map(|(k, v)| {
            v.value()
                .map(|x| (k.clone(), x))
                .map_err(|e| Error::config(format!("parameter `{k}`: {e}")))
        })
        .collect()
}

impl ExperimentSection {
    /// One `(series id, spec)` pair per series entry, or a single series
    /// named after the kind when none are listed.
    pub fn specs(&self, grid_override: Option<&Grid>) -> Result<Vec<(String, SweepSpec)>> {
        let grid = match grid_override {
            Some(g) => g.clone(),
            None => self.swept.grid.grid()?,
        };
        let mut base = SweepSpec::new(self.kind, &self.swept.name, grid);
        base.fixed = values(&self.fixed)?;
        base.trials = self.trials;
        base.gate_family = self.gate_family;
        if let Some(seed) = self.seed {
            base.master_seed = seed;
        }
        let entries: Vec<(String, BTreeMap<String, f64>)> = if self.series.is_empty() {
            vec![(self.kind.name().to_owned(), BTreeMap::new())]
        } else {
            self.series
                .iter()
                .map(|s| Ok((s.id.clone(), values(&s.fixed)?)))
                .collect::<Result<_>>()?
        };
        entries
            .into_iter()
            .map(|(id, extra)| {
                let mut spec = base.clone();
                spec.fixed.extend(extra);
                spec.validate()?;
                Ok((id, spec))
            })
            .collect()
    }
}
