//! Pattern types describing how the graph structure itself behaves.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::trend::TrendPattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PresenceClass {
    Always,
    Never,
    Appearing,
    Disappearing,
    Intermittent,
}

impl PresenceClass {
    pub const ALL: [PresenceClass; 5] = [
        PresenceClass::Always,
        PresenceClass::Never,
        PresenceClass::Appearing,
        PresenceClass::Disappearing,
        PresenceClass::Intermittent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresenceClass::Always => "ALWAYS",
            PresenceClass::Never => "NEVER",
            PresenceClass::Appearing => "APPEARING",
            PresenceClass::Disappearing => "DISAPPEARING",
            PresenceClass::Intermittent => "INTERMITTENT",
        }
    }

    pub fn from_name(name: &str) -> Option<PresenceClass> {
        PresenceClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(name))
    }

    pub fn is_opposite(self, other: PresenceClass) -> bool {
        use PresenceClass::*;
        matches!(
            (self, other),
            (Always, Never) | (Never, Always) | (Appearing, Disappearing) | (Disappearing, Appearing)
        )
    }

    /// Classifies a presence bit sequence (one bit per time point).
    pub fn of_bits(bits: &[bool]) -> PresenceClass {
        if bits.iter().all(|&b| b) {
            return PresenceClass::Always;
        }
        if bits.iter().all(|&b| !b) {
            return PresenceClass::Never;
        }
        let changes = bits.windows(2).filter(|w| w[0] != w[1]).count();
        match (changes, bits[0]) {
            (1, false) => PresenceClass::Appearing,
            (1, true) => PresenceClass::Disappearing,
            _ => PresenceClass::Intermittent,
        }
    }
}

/// Connection history of a node pair over an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresencePattern {
    pub bits: String,
    pub class: PresenceClass,
    pub transitions: usize,
}

impl PresencePattern {
    pub fn from_bits(bits: &[bool]) -> PresencePattern {
        PresencePattern {
            bits: bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            class: PresenceClass::of_bits(bits),
            transitions: bits.windows(2).filter(|w| w[0] != w[1]).count(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigMetric {
    Nodes,
    Edges,
    Density,
    Components,
    Triangles,
    MeanDegree,
    MaxClique,
}

impl ConfigMetric {
    pub const ALL: [ConfigMetric; 7] = [
        ConfigMetric::Nodes,
        ConfigMetric::Edges,
        ConfigMetric::Density,
        ConfigMetric::Components,
        ConfigMetric::Triangles,
        ConfigMetric::MeanDegree,
        ConfigMetric::MaxClique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigMetric::Nodes => "nodes",
            ConfigMetric::Edges => "edges",
            ConfigMetric::Density => "density",
            ConfigMetric::Components => "components",
            ConfigMetric::Triangles => "triangles",
            ConfigMetric::MeanDegree => "mean_degree",
            ConfigMetric::MaxClique => "max_clique",
        }
    }

    pub fn from_name(name: &str) -> Option<ConfigMetric> {
        ConfigMetric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for ConfigMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motif {
    Empty,
    Clique,
    Star,
    Cycle,
    Tree,
    Other,
}

impl Motif {
    pub const ALL: [Motif; 6] = [
        Motif::Empty,
        Motif::Clique,
        Motif::Star,
        Motif::Cycle,
        Motif::Tree,
        Motif::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Motif::Empty => "empty",
            Motif::Clique => "clique",
            Motif::Star => "star",
            Motif::Cycle => "cycle",
            Motif::Tree => "tree",
            Motif::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Motif> {
        Motif::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(name))
    }
}

/// Shape of a subgraph at one time point, measured on its undirected
/// simple projection. `max_clique` is reported up to 4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationPattern {
    pub metrics: BTreeMap<ConfigMetric, f64>,
    pub motif: Motif,
}

/// How many node pairs of a subset follow each presence class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsAggregatePattern {
    pub frequencies: BTreeMap<PresenceClass, usize>,
    pub total: usize,
}

/// Trend of each configuration metric across an interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationTrendPattern {
    pub trends: BTreeMap<ConfigMetric, TrendPattern>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "snake_case")]
pub enum StructuralPattern {
    Presence(PresencePattern),
    Configuration(ConfigurationPattern),
    PairsAggregate(PairsAggregatePattern),
    ConfigurationTrend(ConfigurationTrendPattern),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presence_classes() {
        let c = |s: &str| PresenceClass::of_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>());
        assert_eq!(c("1111"), PresenceClass::Always);
        assert_eq!(c("0000"), PresenceClass::Never);
        assert_eq!(c("0011"), PresenceClass::Appearing);
        assert_eq!(c("1100"), PresenceClass::Disappearing);
        assert_eq!(c("0110"), PresenceClass::Intermittent);
        assert_eq!(c("1"), PresenceClass::Always);
    }
}
