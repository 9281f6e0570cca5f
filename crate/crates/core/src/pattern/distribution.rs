use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DistClass {
    Uniform,
    Concentrated,
    Bimodal,
    SkewedLeft,
    SkewedRight,
}

impl DistClass {
    pub const ALL: [DistClass; 5] = [
        DistClass::Uniform,
        DistClass::Concentrated,
        DistClass::Bimodal,
        DistClass::SkewedLeft,
        DistClass::SkewedRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistClass::Uniform => "UNIFORM",
            DistClass::Concentrated => "CONCENTRATED",
            DistClass::Bimodal => "BIMODAL",
            DistClass::SkewedLeft => "SKEWED_LEFT",
            DistClass::SkewedRight => "SKEWED_RIGHT",
        }
    }

    pub fn from_name(name: &str) -> Option<DistClass> {
        DistClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(name))
    }

    pub fn is_opposite(self, other: DistClass) -> bool {
        matches!(
            (self, other),
            (DistClass::SkewedLeft, DistClass::SkewedRight)
                | (DistClass::SkewedRight, DistClass::SkewedLeft)
        )
    }
}

/// Summary of a multiset of numeric values. `stddev` is the population
/// standard deviation and `histogram` holds bin frequencies over
/// `[min, max]` summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionPattern {
    pub count: usize,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Vec<f64>,
    pub class_hint: DistClass,
}

/// Bin of `value` among `bins` equal-width bins over `[min, max]`. With a
/// zero range every value lands in the first bin.
pub fn bin_index(value: f64, min: f64, max: f64, bins: usize) -> usize {
    if max <= min {
        return 0;
    }
    let raw = ((value - min) / (max - min) * bins as f64).floor();
    (raw.max(0.0) as usize).min(bins - 1)
}

/// Describes `values`, or `None` when there are none. `bins` must be positive.
pub fn describe_distribution(values: &[f64], bins: usize) -> Option<DistributionPattern> {
    if values.is_empty() {
        return None;
    }
    let bins = bins.max(1);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = vec![0usize; bins];
    for &v in values {
        counts[bin_index(v, min, max, bins)] += 1;
    }
    let histogram: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let class_hint = if max == min || m2 == 0.0 {
        DistClass::Concentrated
    } else {
        shape_class(&histogram, m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    };
    Some(DistributionPattern {
        count: values.len(),
        mean,
        stddev: m2.sqrt(),
        min,
        max,
        histogram,
        class_hint,
    })
}

impl DistributionPattern {
    /// A distribution given by its summary, as written in a query. The
    /// shape hint comes from the moments of the histogram's bin centres.
    pub fn from_summary(mean: f64, stddev: f64, min: f64, max: f64, histogram: Vec<f64>) -> DistributionPattern {
        let total: f64 = histogram.iter().sum();
        let class_hint = if max <= min || stddev == 0.0 || histogram.is_empty() || total <= 0.0 {
            DistClass::Concentrated
        } else {
            let b = histogram.len() as f64;
            let centres: Vec<f64> = (0..histogram.len()).map(|i| (i as f64 + 0.5) / b).collect();
            let w: Vec<f64> = histogram.iter().map(|h| h / total).collect();
            let mu: f64 = centres.iter().zip(&w).map(|(c, p)| c * p).sum();
            let moment = |k: i32| -> f64 { centres.iter().zip(&w).map(|(c, p)| (c - mu).powi(k) * p).sum() };
            let m2 = moment(2);
            if m2 == 0.0 {
                DistClass::Concentrated
            } else {
                shape_class(&w, moment(3) / m2.powf(1.5), moment(4) / (m2 * m2) - 3.0)
            }
        };
        DistributionPattern {
            count: 0,
            mean,
            stddev,
            min,
            max,
            histogram,
            class_hint,
        }
    }
}

fn shape_class(histogram: &[f64], skewness: f64, excess_kurtosis: f64) -> DistClass {
    let b = histogram.len() as f64;
    if histogram.iter().all(|h| (h - 1.0 / b).abs() <= 0.5 / b) {
        return DistClass::Uniform;
    }
    if excess_kurtosis < -1.6 {
        return DistClass::Bimodal;
    }
    if skewness > 0.5 {
        return DistClass::SkewedRight;
    }
    if skewness < -0.5 {
        return DistClass::SkewedLeft;
    }
    if excess_kurtosis <= -0.9 {
        return DistClass::Uniform;
    }
    DistClass::Concentrated
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_through_eight_is_uniform() {
        let values: Vec<f64> = (1..=8).map(f64::from).collect();
        let d = describe_distribution(&values, 8).unwrap();
        assert!(d.histogram.iter().all(|&h| h == 0.125));
        assert_eq!(d.class_hint, DistClass::Uniform);
        assert_eq!(d.mean, 4.5);
    }

    #[test]
    fn constant_values_concentrate_in_first_bin() {
        let d = describe_distribution(&[3.0, 3.0, 3.0], 4).unwrap();
        assert_eq!(d.histogram, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(d.class_hint, DistClass::Concentrated);
        assert_eq!(d.stddev, 0.0);
    }

    #[test]
    fn shape_hints() {
        let two_clumps = [0.0, 0.0, 0.1, 9.9, 10.0, 10.0];
        assert_eq!(describe_distribution(&two_clumps, 8).unwrap().class_hint, DistClass::Bimodal);
        let tail_right = [1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 10.0];
        assert_eq!(describe_distribution(&tail_right, 8).unwrap().class_hint, DistClass::SkewedRight);
        let tail_left: Vec<f64> = tail_right.iter().map(|v| -v).collect();
        assert_eq!(describe_distribution(&tail_left, 8).unwrap().class_hint, DistClass::SkewedLeft);
        let bell = [0.0, 4.0, 4.5, 5.0, 5.0, 5.0, 5.5, 6.0, 10.0];
        assert_eq!(describe_distribution(&bell, 8).unwrap().class_hint, DistClass::Concentrated);
    }

    #[test]
    fn summary_hint_follows_histogram() {
        let flat = DistributionPattern::from_summary(2.0, 1.0, 0.0, 4.0, vec![0.25; 4]);
        assert_eq!(flat.class_hint, DistClass::Uniform);
        let tail = DistributionPattern::from_summary(1.0, 1.0, 0.0, 4.0, vec![0.7, 0.2, 0.05, 0.05]);
        assert_eq!(tail.class_hint, DistClass::SkewedRight);
    }

    #[test]
    fn empty_input_has_no_distribution() {
        assert!(describe_distribution(&[], 8).is_none());
    }
}
