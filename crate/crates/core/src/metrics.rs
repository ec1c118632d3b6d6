//! Front quality: normalized hypervolume, per-run win counts and average ranks.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("variant {variant} has {got} runs, expected {expected}")]
    RunCount { variant: usize, got: usize, expected: usize },
    #[error("no variants to compare")]
    NoVariants,
    #[error("HV matrix row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("HV matrix entry ({row}, {col}) is missing or not finite")]
    Missing { row: usize, col: usize },
}

/// Per-objective min/max used to map raw objectives onto [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalizationBounds {
    pub min: [f64; 2],
    pub max: [f64; 2],
    /// Objectives whose range was empty and got the `max = min + 1` sentinel.
    pub degenerate: [bool; 2],
}

impl NormalizationBounds {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Self {
        let mut b = Self { min, max, degenerate: [false; 2] };
        for k in 0..2 {
            if !(b.max[k] > b.min[k]) {
                b.max[k] = b.min[k] + 1.0;
                b.degenerate[k] = true;
            }
        }
        b
    }

    /// Bounds over a reference set; `[0, 1]` for an empty set.
    pub fn from_points<S: Scalar>(points: impl IntoIterator<Item = (S, S)>) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        let mut any = false;
        for (a, b) in points {
            any = true;
            for (k, v) in [a.as_f64(), b.as_f64()].into_iter().enumerate() {
                min[k] = min[k].min(v);
                max[k] = max[k].max(v);
            }
        }
        if !any {
            return Self::new([0.0; 2], [1.0; 2]);
        }
        Self::new(min, max)
    }

    pub fn normalize<S: Scalar>(&self, p: (S, S)) -> (f64, f64) {
        (
            (p.0.as_f64() - self.min[0]) / (self.max[0] - self.min[0]),
            (p.1.as_f64() - self.min[1]) / (self.max[1] - self.min[1]),
        )
    }
}

/// Area dominated by already-normalized points against the reference (1, 1).
/// Points are clamped to [0, 1]; those on the reference boundary add nothing.
pub fn hypervolume_normalized(points: &[(f64, f64)]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .map(|&(x, y)| (x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)))
        .filter(|&(x, y)| x < 1.0 && y < 1.0)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut prev_y = 1.0;
    for (x, y) in pts {
        if y < prev_y {
            area += (1.0 - x) * (prev_y - y);
            prev_y = y;
        }
    }
    area
}

pub fn hypervolume<S: Scalar>(front: &[(S, S)], bounds: &NormalizationBounds) -> f64 {
    let pts: Vec<(f64, f64)> = front.iter().map(|&p| bounds.normalize(p)).collect();
    hypervolume_normalized(&pts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinCounts {
    pub wins: Vec<usize>,
    /// Runs in which the best HV was shared.
    pub ties: usize,
    /// `hv[variant][run]` under that run's union bounds.
    pub hv: Vec<Vec<f64>>,
    pub bounds: Vec<NormalizationBounds>,
}

/// Per run, bounds over the union of every variant's front; a variant wins the
/// run when its HV is strictly above all others.
pub fn win_counts<S: Scalar>(runs: &[Vec<Vec<(S, S)>>]) -> Result<WinCounts, MetricsError> {
    let Some(first) = runs.first() else {
        return Err(MetricsError::NoVariants);
    };
    let n = first.len();
    for (variant, r) in runs.iter().enumerate() {
        if r.len() != n {
            return Err(MetricsError::RunCount { variant, got: r.len(), expected: n });
        }
    }
    let mut wins = vec![0; runs.len()];
    let mut ties = 0;
    let mut hv = vec![Vec::with_capacity(n); runs.len()];
    let mut bounds = Vec::with_capacity(n);
    for run in 0..n {
        let b = NormalizationBounds::from_points(runs.iter().flat_map(|v| v[run].iter().copied()));
        let values: Vec<f64> = runs.iter().map(|v| hypervolume(&v[run], &b)).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..values.len()).filter(|&k| values[k] == best).collect();
        if winners.len() == 1 {
            wins[winners[0]] += 1;
        } else {
            ties += 1;
        }
        for (k, v) in values.into_iter().enumerate() {
            hv[k].push(v);
        }
        bounds.push(b);
    }
    Ok(WinCounts { wins, ties, hv, bounds })
}

/// Mean rank per algorithm; `matrix[instance][algorithm]` holds HV (higher is
/// better). Rank 1 is best; tied values share the mean of their ranks.
pub fn average_ranks(matrix: &[Vec<f64>]) -> Result<Vec<f64>, MetricsError> {
    let Some(first) = matrix.first() else {
        return Ok(Vec::new());
    };
    let k = first.len();
    let mut sums = vec![0.0; k];
    for (row, values) in matrix.iter().enumerate() {
        if values.len() != k {
            return Err(MetricsError::Ragged { row, got: values.len(), expected: k });
        }
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(MetricsError::Missing { row, col });
        }
        for (a, r) in row_ranks(values).into_iter().enumerate() {
            sums[a] += r;
        }
    }
    Ok(sums.into_iter().map(|s| s / matrix.len() as f64).collect())
}

/// Mid-ranks of one row, descending.
pub fn row_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}
