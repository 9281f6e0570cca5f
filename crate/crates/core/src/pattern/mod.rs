//! Behaviour patterns (trends, distributions, aspectual and structural
//! summaries), pattern specifications and the similarity between them.

mod distribution;
mod structural;
mod trend;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distribution::{bin_index, describe_distribution, DistClass, DistributionPattern};
pub use structural::{
    ConfigMetric, ConfigurationPattern, ConfigurationTrendPattern, Motif, PairsAggregatePattern,
    PresenceClass, PresencePattern, StructuralPattern,
};
pub use trend::{classify_trend, TrendClass, TrendPattern};

/// Tunables for pattern extraction and matching.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub similarity_threshold: f64,
    pub slope_epsilon: f64,
    pub histogram_bins: usize,
    pub histogram_weight: f64,
    pub moment_weight: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            similarity_threshold: 0.9,
            slope_epsilon: 0.05,
            histogram_bins: 8,
            histogram_weight: 0.7,
            moment_weight: 0.3,
        }
    }
}

impl PatternConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(0.0..=1.0).contains(&self.similarity_threshold) {
            return bad("similarity_threshold must lie in [0, 1]");
        }
        if !(self.slope_epsilon >= 0.0 && self.slope_epsilon.is_finite()) {
            return bad("slope_epsilon must be a non-negative number");
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins must be positive");
        }
        if !(self.histogram_weight >= 0.0 && self.moment_weight >= 0.0)
            || self.histogram_weight + self.moment_weight <= 0.0
        {
            return bad("distribution weights must be non-negative with a positive sum");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case")]
pub enum AspectualPattern {
    /// Frequency of each trend class over the elements of a subset.
    TrendsOverGraph {
        frequencies: BTreeMap<TrendClass, usize>,
        total: usize,
    },
    /// How the per-time-point distribution over a subset evolves.
    DistributionOverTime {
        mean_trend: TrendPattern,
        stddev_trend: TrendPattern,
        points: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    Trend(TrendPattern),
    Distribution(DistributionPattern),
    Aspectual(AspectualPattern),
    Structural(StructuralPattern),
}

impl Pattern {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Pattern::Trend(_) => "trend",
            Pattern::Distribution(_) => "distribution",
            Pattern::Aspectual(AspectualPattern::TrendsOverGraph { .. }) => "aspect_trends",
            Pattern::Aspectual(AspectualPattern::DistributionOverTime { .. }) => "aspect_distributions",
            Pattern::Structural(StructuralPattern::Presence(_)) => "presence",
            Pattern::Structural(StructuralPattern::Configuration(_)) => "configuration",
            Pattern::Structural(StructuralPattern::PairsAggregate(_)) => "pairs_aggregate",
            Pattern::Structural(StructuralPattern::ConfigurationTrend(_)) => "configuration_trend",
        }
    }
}

/// Similarity score in `[0, 1]` plus whether the two patterns are
/// semantic opposites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub score: f64,
    pub opposite: bool,
}

impl Similarity {
    fn of(score: f64) -> Similarity {
        Similarity {
            score: score.clamp(0.0, 1.0),
            opposite: false,
        }
    }

    fn class_match(same: bool, opposite: bool) -> Similarity {
        Similarity {
            score: if same { 1.0 } else { 0.0 },
            opposite,
        }
    }
}

fn mismatch(a: &Pattern, b: &Pattern) -> Error {
    Error::KindMismatch(format!(
        "cannot compare a {} pattern with a {} pattern",
        a.kind_name(),
        b.kind_name()
    ))
}

fn trend_similarity(a: TrendClass, b: TrendClass) -> Similarity {
    Similarity::class_match(a == b, a.is_opposite(b))
}

/// Overlap of two histograms: `1 - L1/2`.
pub fn histogram_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::KindMismatch(format!(
            "histograms have {} and {} bins",
            a.len(),
            b.len()
        )));
    }
    let l1: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    Ok((1.0 - 0.5 * l1).clamp(0.0, 1.0))
}

/// Weighted blend of histogram overlap and closeness of mean and standard
/// deviation relative to the combined value range.
pub fn distribution_similarity(
    a: &DistributionPattern,
    b: &DistributionPattern,
    cfg: &PatternConfig,
) -> Result<Similarity> {
    let hist = histogram_similarity(&a.histogram, &b.histogram)?;
    let range = a.max.max(b.max) - a.min.min(b.min);
    let moment_gap = if range > 0.0 {
        (0.5 * ((a.mean - b.mean).abs() + (a.stddev - b.stddev).abs()) / range).min(1.0)
    } else {
        0.0
    };
    let total = cfg.histogram_weight + cfg.moment_weight;
    let score = (cfg.histogram_weight * hist + cfg.moment_weight * (1.0 - moment_gap)) / total;
    Ok(Similarity {
        score: score.clamp(0.0, 1.0),
        opposite: a.class_hint.is_opposite(b.class_hint),
    })
}

/// `1 - total variation distance` between two frequency tables.
pub fn frequency_similarity<K: Ord + Copy>(a: &BTreeMap<K, usize>, b: &BTreeMap<K, usize>) -> f64 {
    let ta: usize = a.values().sum();
    let tb: usize = b.values().sum();
    if ta == 0 || tb == 0 {
        return if ta == tb { 1.0 } else { 0.0 };
    }
    let mut keys: Vec<K> = a.keys().chain(b.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let tv: f64 = keys
        .iter()
        .map(|k| {
            let pa = *a.get(k).unwrap_or(&0) as f64 / ta as f64;
            let pb = *b.get(k).unwrap_or(&0) as f64 / tb as f64;
            (pa - pb).abs()
        })
        .sum::<f64>()
        * 0.5;
    (1.0 - tv).clamp(0.0, 1.0)
}

/// Closeness of two metric values: absolute for density (already in
/// `[0, 1]`), relative to the larger magnitude otherwise.
pub fn metric_proximity(metric: ConfigMetric, a: f64, b: f64) -> f64 {
    if metric == ConfigMetric::Density {
        return (1.0 - (a - b).abs()).clamp(0.0, 1.0);
    }
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        1.0
    } else {
        (1.0 - (a - b).abs() / scale).clamp(0.0, 1.0)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        1.0
    } else {
        sum / n as f64
    }
}

/// Similarity of two patterns of the same kind.
pub fn similarity(a: &Pattern, b: &Pattern, cfg: &PatternConfig) -> Result<Similarity> {
    use AspectualPattern as A;
    use StructuralPattern as S;
    match (a, b) {
        (Pattern::Trend(x), Pattern::Trend(y)) => Ok(trend_similarity(x.class, y.class)),
        (Pattern::Distribution(x), Pattern::Distribution(y)) => distribution_similarity(x, y, cfg),
        (
            Pattern::Aspectual(A::TrendsOverGraph { frequencies: x, .. }),
            Pattern::Aspectual(A::TrendsOverGraph { frequencies: y, .. }),
        ) => Ok(Similarity::of(frequency_similarity(x, y))),
        (
            Pattern::Aspectual(A::DistributionOverTime {
                mean_trend: m1,
                stddev_trend: s1,
                ..
            }),
            Pattern::Aspectual(A::DistributionOverTime {
                mean_trend: m2,
                stddev_trend: s2,
                ..
            }),
        ) => {
            let m = trend_similarity(m1.class, m2.class);
            let s = trend_similarity(s1.class, s2.class);
            Ok(Similarity {
                score: 0.5 * (m.score + s.score),
                opposite: m.opposite,
            })
        }
        (Pattern::Structural(S::Presence(x)), Pattern::Structural(S::Presence(y))) => Ok(
            Similarity::class_match(x.class == y.class, x.class.is_opposite(y.class)),
        ),
        (Pattern::Structural(S::Configuration(x)), Pattern::Structural(S::Configuration(y))) => {
            let shared = x.metrics.iter().filter_map(|(m, va)| {
                y.metrics.get(m).map(|vb| metric_proximity(*m, *va, *vb))
            });
            let motif = std::iter::once(if x.motif == y.motif { 1.0 } else { 0.0 });
            Ok(Similarity::of(mean(shared.chain(motif))))
        }
        (Pattern::Structural(S::PairsAggregate(x)), Pattern::Structural(S::PairsAggregate(y))) => {
            Ok(Similarity::of(frequency_similarity(&x.frequencies, &y.frequencies)))
        }
        (
            Pattern::Structural(S::ConfigurationTrend(x)),
            Pattern::Structural(S::ConfigurationTrend(y)),
        ) => Ok(Similarity::of(mean(x.trends.iter().filter_map(|(m, tx)| {
            y.trends.get(m).map(|ty| trend_similarity(tx.class, ty.class).score)
        })))),
        _ => Err(mismatch(a, b)),
    }
}

/// A pattern to search for or compare against. Class-level specs match on
/// the class alone; the others are scored by similarity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "spec", rename_all = "snake_case")]
pub enum PatternSpec {
    Trend { class: TrendClass },
    Distribution { class: DistClass },
    DistributionShape { shape: DistributionPattern },
    TrendsOverGraph { frequencies: BTreeMap<TrendClass, usize> },
    DistributionOverTime {
        mean: Option<TrendClass>,
        stddev: Option<TrendClass>,
    },
    Presence { class: PresenceClass },
    Configuration {
        metrics: BTreeMap<ConfigMetric, f64>,
        motif: Option<Motif>,
    },
    PairsAggregate { frequencies: BTreeMap<PresenceClass, usize> },
    ConfigurationTrend { trends: BTreeMap<ConfigMetric, TrendClass> },
    Exact { pattern: Pattern },
}

impl PatternSpec {
    /// The spec that matches `pattern` exactly.
    pub fn exact(pattern: Pattern) -> PatternSpec {
        PatternSpec::Exact { pattern }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            PatternSpec::Trend { .. } => "trend",
            PatternSpec::Distribution { .. } | PatternSpec::DistributionShape { .. } => "distribution",
            PatternSpec::TrendsOverGraph { .. } => "aspect_trends",
            PatternSpec::DistributionOverTime { .. } => "aspect_distributions",
            PatternSpec::Presence { .. } => "presence",
            PatternSpec::Configuration { .. } => "configuration",
            PatternSpec::PairsAggregate { .. } => "pairs_aggregate",
            PatternSpec::ConfigurationTrend { .. } => "configuration_trend",
            PatternSpec::Exact { pattern } => pattern.kind_name(),
        }
    }

    /// Whether this spec can score patterns of the given kind.
    pub fn accepts_kind(&self, kind: &str) -> bool {
        self.kind_name() == kind
    }

    pub fn score(&self, p: &Pattern, cfg: &PatternConfig) -> Result<Similarity> {
        use AspectualPattern as A;
        use StructuralPattern as S;
        let wrong = || {
            Error::KindMismatch(format!(
                "a {} pattern cannot match a {} spec",
                p.kind_name(),
                self.kind_name()
            ))
        };
        match (self, p) {
            (PatternSpec::Trend { class }, Pattern::Trend(t)) => Ok(trend_similarity(*class, t.class)),
            (PatternSpec::Distribution { class }, Pattern::Distribution(d)) => Ok(
                Similarity::class_match(*class == d.class_hint, class.is_opposite(d.class_hint)),
            ),
            (PatternSpec::DistributionShape { shape }, Pattern::Distribution(d)) => {
                distribution_similarity(shape, d, cfg)
            }
            (
                PatternSpec::TrendsOverGraph { frequencies },
                Pattern::Aspectual(A::TrendsOverGraph { frequencies: f, .. }),
            ) => Ok(Similarity::of(frequency_similarity(frequencies, f))),
            (
                PatternSpec::DistributionOverTime { mean: m, stddev: s },
                Pattern::Aspectual(A::DistributionOverTime {
                    mean_trend,
                    stddev_trend,
                    ..
                }),
            ) => {
                let parts: Vec<Similarity> = [(m, mean_trend), (s, stddev_trend)]
                    .into_iter()
                    .filter_map(|(want, got)| want.map(|w| trend_similarity(w, got.class)))
                    .collect();
                Ok(Similarity {
                    score: mean(parts.iter().map(|s| s.score)),
                    opposite: !parts.is_empty() && parts.iter().all(|s| s.opposite),
                })
            }
            (PatternSpec::Presence { class }, Pattern::Structural(S::Presence(x))) => Ok(
                Similarity::class_match(*class == x.class, class.is_opposite(x.class)),
            ),
            (PatternSpec::Configuration { metrics, motif }, Pattern::Structural(S::Configuration(x))) => {
                if motif.is_some_and(|m| m != x.motif) {
                    return Ok(Similarity::of(0.0));
                }
                Ok(Similarity::of(mean(metrics.iter().map(|(m, want)| {
                    x.metrics
                        .get(m)
                        .map_or(0.0, |got| metric_proximity(*m, *want, *got))
                }))))
            }
            (PatternSpec::PairsAggregate { frequencies }, Pattern::Structural(S::PairsAggregate(x))) => {
                Ok(Similarity::of(frequency_similarity(frequencies, &x.frequencies)))
            }
            (
                PatternSpec::ConfigurationTrend { trends },
                Pattern::Structural(S::ConfigurationTrend(x)),
            ) => Ok(Similarity::of(mean(trends.iter().map(|(m, want)| {
                x.trends
                    .get(m)
                    .map_or(0.0, |got| trend_similarity(*want, got.class).score)
            })))),
            (PatternSpec::Exact { pattern }, other) => similarity(pattern, other, cfg),
            _ => Err(wrong()),
        }
    }
}
