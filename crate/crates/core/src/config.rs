//! System definitions read from TOML.
//!
//! ```toml
//! [system]
//! alphabet = ["a", "b"]
//! side = "one-sided"
//! kind = "matrix"            # full | matrix | forbidden | substitution | points
//! matrix = [[1, 1], [1, 0]]
//!
//! [bounds]
//! resolution = [3, 3]
//! radius = 2
//! ```
//!
//! Every bound has a default, so `[bounds]` may be omitted.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolean_algebra::{Algebra, Resolution};
use crate::free_group::Word;
use crate::shift_space::{Alphabet, PresentationKind, ShiftError, ShiftPresentation, Side};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed configuration: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Full,
    Matrix,
    Forbidden,
    Substitution,
    Points,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub alphabet: Vec<String>,
    #[serde(default = "default_side")]
    pub side: Side,
    pub kind: Kind,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<u8>>>,
    #[serde(default)]
    pub forbidden: Option<Vec<String>>,
    #[serde(default)]
    pub substitution: Option<BTreeMap<String, String>>,
    /// One period per periodic orbit.
    #[serde(default)]
    pub points: Option<Vec<String>>,
}

fn default_side() -> Side {
    Side::OneSided
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    /// `(k, l)` for atoms, lattices and Stone duals.
    pub resolution: [usize; 2],
    /// Free-group ball radius for the relation suites.
    pub radius: usize,
    /// Basis preperiod `q` and period `p`.
    pub basis: [usize; 2],
    /// Extra preperiod `d` around the basis core.
    pub closure_depth: usize,
    pub coverage_floor: f64,
    /// Depth of the left special scan.
    pub scan_depth: usize,
    pub seed: u64,
    /// Longest `μ` for which property (*) is checked.
    pub star_length: usize,
    /// Longest witness searched for property (*) on non-finite-type shifts.
    pub witness_bound: usize,
    /// Random instances for sampled checks.
    pub samples: usize,
    /// Largest `k` tried for the singleton witness of a matrix unit.
    pub max_k: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            resolution: [3, 3],
            radius: 2,
            basis: [2, 4],
            closure_depth: 4,
            coverage_floor: 0.9,
            scan_depth: 12,
            seed: 0,
            star_length: 6,
            witness_bound: 32,
            samples: 100,
            max_k: 12,
        }
    }
}

impl Bounds {
    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.resolution[0], self.resolution[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub system: SystemSection,
    #[serde(default)]
    pub bounds: Bounds,
}

impl SystemConfig {
    /// Parse and validate.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: SystemConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let b = &self.bounds;
        if !(0.0..=1.0).contains(&b.coverage_floor) {
            return Err(ConfigError::Invalid(format!("coverage_floor {} is not in [0, 1]", b.coverage_floor)));
        }
        if b.scan_depth == 0 || b.star_length == 0 {
            return Err(ConfigError::Invalid("scan_depth and star_length must be positive".into()));
        }
        if b.basis[1] == 0 {
            return Err(ConfigError::Invalid("basis period must be positive".into()));
        }
        self.presentation_on(self.system.side).map(drop)
    }

    pub fn alphabet(&self) -> Result<Alphabet, ConfigError> {
        let mut names = Vec::new();
        for s in &self.system.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => names.push(c),
                _ => return Err(ConfigError::Invalid(format!("alphabet entry {s:?} is not a single character"))),
            }
        }
        Ok(Alphabet::new(names)?)
    }

    /// The presentation on the configured side.
    pub fn presentation(&self) -> Result<ShiftPresentation, ConfigError> {
        self.presentation_on(self.system.side)
    }

    /// The same language on either side.
    pub fn presentation_on(&self, side: Side) -> Result<ShiftPresentation, ConfigError> {
        let alphabet = self.alphabet()?;
        let sys = &self.system;
        let missing = |field: &str| ConfigError::Invalid(format!("kind {:?} needs `{field}`", sys.kind));
        let words = |list: &[String]| list.iter().map(|w| alphabet.parse_word(w)).collect::<Result<Vec<Word>, _>>();
        let kind = match sys.kind {
            Kind::Full => PresentationKind::FullShift,
            Kind::Matrix => PresentationKind::MatrixSft(sys.matrix.clone().ok_or_else(|| missing("matrix"))?),
            Kind::Forbidden => PresentationKind::ForbiddenWords(words(sys.forbidden.as_deref().ok_or_else(|| missing("forbidden"))?)?),
            Kind::Points => PresentationKind::FinitePointSet(words(sys.points.as_deref().ok_or_else(|| missing("points"))?)?),
            Kind::Substitution => {
                let map = sys.substitution.as_ref().ok_or_else(|| missing("substitution"))?;
                let mut images = Vec::new();
                for &c in alphabet.names() {
                    let image = map.get(&c.to_string()).ok_or_else(|| ConfigError::Invalid(format!("substitution has no image for {c}")))?;
                    images.push(alphabet.parse_word(image)?);
                }
                if map.len() != alphabet.len() {
                    return Err(ConfigError::Invalid("substitution maps a symbol outside the alphabet".into()));
                }
                PresentationKind::Substitution(images)
            }
        };
        Ok(ShiftPresentation::new(alphabet, kind, side)?)
    }

    pub fn algebra(&self) -> Result<Algebra, ConfigError> {
        Ok(Algebra::from_presentation(self.presentation()?)?)
    }

    pub fn algebra_on(&self, side: Side) -> Result<Algebra, ConfigError> {
        Ok(Algebra::from_presentation(self.presentation_on(side)?)?)
    }
}
