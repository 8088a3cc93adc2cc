//! Scenario configuration and body loading.

use std::path::{Path, PathBuf};

use minmetric::body::spec::parse_body;
use minmetric::ConvexBody;

use crate::scenarios;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown scenario `{0}` (run `list-scenarios`)")]
    UnknownScenario(String),
    #[error("budget `{0}` must be positive")]
    ZeroBudget(&'static str),
    #[error("cannot read body spec {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("body spec {path}: {source}")]
    Body {
        path: PathBuf,
        source: minmetric::Error,
    },
}

/// Knobs shared by all scenarios. Each scenario reads the ones it uses.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub body: Option<PathBuf>,
    pub seed: u64,
    /// Pointwise samples per body.
    pub samples: usize,
    pub graph_nodes: usize,
    pub quadruples: usize,
    pub mesh_level: usize,
    pub plane_samples: usize,
    pub out: PathBuf,
}

impl ScenarioConfig {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            body: None,
            seed: 1,
            samples: 10_000,
            graph_nodes: 20_000,
            quadruples: 100_000,
            mesh_level: 3,
            plane_samples: 512,
            out: PathBuf::from("reports"),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if scenarios::find(&self.name).is_none() {
            return Err(ConfigError::UnknownScenario(self.name.clone()));
        }
        for (name, value) in [
            ("samples", self.samples),
            ("graph_nodes", self.graph_nodes),
            ("quadruples", self.quadruples),
            ("plane_samples", self.plane_samples),
        ] {
            if value == 0 {
                return Err(ConfigError::ZeroBudget(name));
            }
        }
        Ok(())
    }

    /// The body given on the command line, if any.
    pub fn load_body(&self) -> Result<Option<ConvexBody>, ConfigError> {
        self.body.as_deref().map(load_body).transpose()
    }
}

pub fn load_body(path: &Path) -> Result<ConvexBody, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_body(&text).map_err(|source| ConfigError::Body {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_names_and_zero_budgets() {
        assert!(matches!(
            ScenarioConfig::new("no-such-thing").validate(),
            Err(ConfigError::UnknownScenario(_))
        ));
        let mut c = ScenarioConfig::new("ball-metric-equality");
        assert!(c.validate().is_ok());
        c.graph_nodes = 0;
        assert!(matches!(c.validate(), Err(ConfigError::ZeroBudget("graph_nodes"))));
    }
}
