use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrendClass {
    Increasing,
    Decreasing,
    Constant,
    Peak,
    Trough,
    Fluctuating,
    Degenerate,
}

impl TrendClass {
    pub const ALL: [TrendClass; 7] = [
        TrendClass::Increasing,
        TrendClass::Decreasing,
        TrendClass::Constant,
        TrendClass::Peak,
        TrendClass::Trough,
        TrendClass::Fluctuating,
        TrendClass::Degenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrendClass::Increasing => "INCREASING",
            TrendClass::Decreasing => "DECREASING",
            TrendClass::Constant => "CONSTANT",
            TrendClass::Peak => "PEAK",
            TrendClass::Trough => "TROUGH",
            TrendClass::Fluctuating => "FLUCTUATING",
            TrendClass::Degenerate => "DEGENERATE",
        }
    }

    pub fn from_name(name: &str) -> Option<TrendClass> {
        TrendClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(name))
    }

    pub fn is_opposite(self, other: TrendClass) -> bool {
        use TrendClass::*;
        matches!(
            (self, other),
            (Increasing, Decreasing) | (Decreasing, Increasing) | (Peak, Trough) | (Trough, Peak)
        )
    }
}

/// Shape of a numeric series over time.
///
/// `slope` is the least-squares slope after rescaling values to `[0, 1]`
/// by their range and time to the sampled span, so it is scale-free.
/// `extremum_pos` locates the peak or trough within the span, in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendPattern {
    pub class: TrendClass,
    pub slope: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremum_pos: Option<f64>,
    pub samples: usize,
}

/// Classifies `(time, value)` samples, ordered by strictly increasing time.
///
/// Monotone and single-extremum shapes are recognised exactly (runs of equal
/// values count as one step); anything else is CONSTANT when its relative
/// slope is within `slope_epsilon`, and FLUCTUATING otherwise.
pub fn classify_trend(samples: &[(f64, f64)], slope_epsilon: f64) -> TrendPattern {
    let n = samples.len();
    let flat = |class| TrendPattern {
        class,
        slope: 0.0,
        extremum_pos: None,
        samples: n,
    };
    if n < 2 {
        return flat(TrendClass::Degenerate);
    }
    let min = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if range == 0.0 {
        return flat(TrendClass::Constant);
    }
    let x0 = samples[0].0;
    let span = samples[n - 1].0 - x0;
    let slope = relative_slope(samples, min, range, span);

    // runs of equal values collapse to (value, first sample index)
    let mut runs: Vec<(f64, usize)> = Vec::new();
    for (i, &(_, y)) in samples.iter().enumerate() {
        if runs.last().is_none_or(|&(v, _)| v != y) {
            runs.push((y, i));
        }
    }
    let rising = |w: &[(f64, usize)]| w.windows(2).all(|p| p[0].0 < p[1].0);
    let falling = |w: &[(f64, usize)]| w.windows(2).all(|p| p[0].0 > p[1].0);
    let shaped = |class, extremum_pos| TrendPattern {
        class,
        slope,
        extremum_pos,
        samples: n,
    };

    if rising(&runs) {
        return shaped(TrendClass::Increasing, None);
    }
    if falling(&runs) {
        return shaped(TrendClass::Decreasing, None);
    }
    let position = |k: usize| Some((samples[runs[k].1].0 - x0) / span);
    let last = runs.len() - 1;
    let top = argmax(runs.iter().map(|r| r.0));
    if top > 0 && top < last && rising(&runs[..=top]) && falling(&runs[top..]) {
        return shaped(TrendClass::Peak, position(top));
    }
    let bottom = argmax(runs.iter().map(|r| -r.0));
    if bottom > 0 && bottom < last && falling(&runs[..=bottom]) && rising(&runs[bottom..]) {
        return shaped(TrendClass::Trough, position(bottom));
    }
    if slope.abs() <= slope_epsilon {
        return shaped(TrendClass::Constant, None);
    }
    shaped(TrendClass::Fluctuating, None)
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn relative_slope(samples: &[(f64, f64)], min: f64, range: f64, span: f64) -> f64 {
    let n = samples.len() as f64;
    let x0 = samples[0].0;
    let xs: Vec<f64> = samples.iter().map(|s| (s.0 - x0) / span).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.1 - min) / range).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
