//! JSON input files: the Fuchsian group, the two multicurves and harness fields.
//!
//! ```json
//! {
//!   "traces": [3.0, 3.0, 3.0],
//!   "multicurves": { "lambda": [{"word": "A", "weight": 1.0}], "mu": [{"word": "B", "weight": 1.0}] },
//!   "grid": [0.1, 0.01, 0.001, 0.0001, -0.1, -0.01, -0.001, -0.0001],
//!   "words": ["A", "B"],
//!   "samples": 200
//! }
//! ```
//!
//! The group is given either by `traces` or by two `generators` in `SL(2, R)`.
//! Words are strings over `A, B, a, b` with `a = A^{-1}` and `b = B^{-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianGroup, TeichPoint, WeightedMulticurve, Word, M2};
use crate::transition::default_grid;

/// Default number of surface samples.
pub const DEFAULT_SAMPLES: usize = 200;

/// One weighted component as written in a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    /// Word of the curve.
    pub word: String,
    /// Positive weight.
    pub weight: f64,
}

/// The two multicurves of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MulticurveSpecs {
    /// Bending multicurve of the upper boundary.
    pub lambda: Vec<ComponentSpec>,
    /// Bending multicurve of the lower boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<ComponentSpec>>,
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Trace coordinates `(tr A, tr B, tr AB)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<[f64; 3]>,
    /// Generators `A` and `B` as row-major 2x2 matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<[[[f64; 2]; 2]; 2]>,
    /// Multicurves.
    pub multicurves: MulticurveSpecs,
    /// Parameter grid of the transition families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    /// Words whose holonomy families are reported.
    #[serde(default)]
    pub words: Vec<String>,
    /// Number of surface samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Config {
    /// Parses and validates a configuration; errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a configuration file.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks the fields that do not need the group.
    pub fn validate(&self) -> Result<()> {
        match (&self.traces, &self.generators) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either `traces` or `generators`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "missing field `traces` or `generators`".into(),
                ))
            }
            _ => {}
        }
        self.lambda()?;
        self.mu()?;
        self.words()?;
        if let Some(g) = &self.grid {
            if let Some(t) = g.iter().find(|t| !t.is_finite() || **t == 0.0) {
                return Err(Error::Config(format!(
                    "field `grid`: value {t} must be finite and nonzero"
                )));
            }
        }
        if self.samples == Some(0) {
            return Err(Error::Config("field `samples`: must be positive".into()));
        }
        Ok(())
    }

    /// The Fuchsian group.
    pub fn group(&self) -> Result<FuchsianGroup> {
        match (&self.traces, &self.generators) {
            (Some([x, y, z]), None) => FuchsianGroup::from_traces(&TeichPoint::new(*x, *y, *z)?),
            (None, Some([a, b])) => {
                let m = |g: &[[f64; 2]; 2]| M2::new(g[0][0], g[0][1], g[1][0], g[1][1]);
                FuchsianGroup::from_generators(m(a), m(b))
            }
            _ => Err(Error::Config(
                "give exactly one of `traces` and `generators`".into(),
            )),
        }
    }

    /// The multicurve `lambda`.
    pub fn lambda(&self) -> Result<WeightedMulticurve> {
        multicurve("lambda", &self.multicurves.lambda)
    }

    /// The multicurve `mu`, if present.
    pub fn mu(&self) -> Result<Option<WeightedMulticurve>> {
        self.multicurves
            .mu
            .as_ref()
            .map(|m| multicurve("mu", m))
            .transpose()
    }

    /// The words of the report.
    pub fn words(&self) -> Result<Vec<Word>> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                Word::parse(w).map_err(|e| Error::Config(format!("field `words[{i}]`: {e}")))
            })
            .collect()
    }

    /// The grid, or the default grid.
    pub fn grid(&self) -> Vec<f64> {
        self.grid.clone().unwrap_or_else(default_grid)
    }

    /// The number of samples, or [`DEFAULT_SAMPLES`].
    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }
}

fn multicurve(name: &str, specs: &[ComponentSpec]) -> Result<WeightedMulticurve> {
    let comps = specs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Word::parse(&c.word)
                .map(|w| (w, c.weight))
                .map_err(|e| Error::Config(format!("field `multicurves.{name}[{i}].word`: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedMulticurve::new(comps)
        .map_err(|e| Error::Config(format!("field `multicurves.{name}`: {e}")))
}
