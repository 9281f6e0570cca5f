//! TOML configuration file. Keys are camelCase; unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use tgq_core::task::EngineConfig;
use tgq_core::TemporalGraph;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Config {
    pub similarity_threshold: Option<f64>,
    pub slope_epsilon: Option<f64>,
    pub histogram_bins: Option<usize>,
    pub search_max_candidates: Option<usize>,
    pub correlation_threshold: Option<f64>,
    pub min_window: Option<usize>,
    pub output_format: Option<OutputFormat>,
    /// Carry-forward for attributes not listed in `carryForward`.
    pub carry_forward_default: Option<bool>,
    #[serde(default)]
    pub carry_forward: BTreeMap<String, bool>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    /// Engine settings with overrides applied, checked against their valid ranges.
    pub fn engine(&self) -> Result<EngineConfig, CliError> {
        let mut c = EngineConfig::default();
        if let Some(v) = self.similarity_threshold {
            c.patterns.similarity_threshold = v;
        }
        if let Some(v) = self.slope_epsilon {
            c.patterns.slope_epsilon = v;
        }
        if let Some(v) = self.histogram_bins {
            c.patterns.histogram_bins = v;
        }
        if let Some(v) = self.search_max_candidates {
            c.max_candidates = v;
        }
        if let Some(v) = self.correlation_threshold {
            c.correlation_threshold = v;
        }
        if let Some(v) = self.min_window {
            c.min_window = v;
        }
        c.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(c)
    }

    pub fn apply_carry_forward(&self, graph: &mut TemporalGraph) {
        if self.carry_forward_default.is_some() || !self.carry_forward.is_empty() {
            graph.configure_carry_forward(self.carry_forward_default.unwrap_or(true), &self.carry_forward);
        }
    }
}
