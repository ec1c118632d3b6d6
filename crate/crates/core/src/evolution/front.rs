use thiserror::Error;

use crate::scalar::{total_cmp, Scalar};
use crate::schedule::{approx_eq, dominates_approx, Solution};

#[derive(Clone, Debug, PartialEq)]
pub struct FrontPoint<S> {
    pub makespan_s: S,
    pub energy_kj: S,
    pub solution: Solution,
}

impl<S: Scalar> FrontPoint<S> {
    pub fn objectives(&self) -> (S, S) {
        (self.makespan_s, self.energy_kj)
    }
}

/// Non-dominated (makespan, transport energy) points, sorted by makespan,
/// one per distinct objective pair.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParetoFront<S> {
    pub points: Vec<FrontPoint<S>>,
}

impl<S: Scalar> ParetoFront<S> {
    pub fn from_candidates(candidates: impl IntoIterator<Item = FrontPoint<S>>) -> Self {
        let all: Vec<FrontPoint<S>> = candidates.into_iter().collect();
        let mut points: Vec<FrontPoint<S>> = Vec::new();
        for (i, c) in all.iter().enumerate() {
            let o = c.objectives();
            let beaten = all.iter().any(|d| dominates_approx(d.objectives(), o));
            let repeated = all[..i].iter().any(|d| approx_eq(d.objectives().0, o.0) && approx_eq(d.objectives().1, o.1));
            if !beaten && !repeated {
                points.push(c.clone());
            }
        }
        points.sort_by(|a, b| total_cmp(&a.makespan_s, &b.makespan_s).then(total_cmp(&a.energy_kj, &b.energy_kj)));
        Self { points }
    }

    pub fn objectives(&self) -> Vec<(S, S)> {
        self.points.iter().map(FrontPoint::objectives).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot pick a default solution from an empty front")]
pub struct EmptyFront;

/// Index of the knee point of `points`.
///
/// Objectives are scaled to [0, 1] over the set's own extremes; the knee is
/// the point farthest below the line through the two extremes (toward the
/// ideal corner). Ties go to the lower makespan. When one objective is
/// constant, the lexicographic minimum is returned.
pub fn knee_index<S: Scalar>(points: &[(S, S)]) -> Result<usize, EmptyFront> {
    if points.is_empty() {
        return Err(EmptyFront);
    }
    let lexmin = (0..points.len())
        .min_by(|&a, &b| {
            total_cmp(&points[a].0, &points[b].0)
                .then(total_cmp(&points[a].1, &points[b].1))
                .then(a.cmp(&b))
        })
        .expect("nonempty");
    let f = |sel: fn(&(S, S)) -> S| {
        let lo = points.iter().map(sel).fold(S::infinity(), S::min);
        let hi = points.iter().map(sel).fold(S::neg_infinity(), S::max);
        (lo.as_f64(), hi.as_f64())
    };
    let (x0, x1) = f(|p| p.0);
    let (y0, y1) = f(|p| p.1);
    if !(x1 > x0 && y1 > y0) {
        return Ok(lexmin);
    }
    let norm = |p: &(S, S)| ((p.0.as_f64() - x0) / (x1 - x0), (p.1.as_f64() - y0) / (y1 - y0));
    // extremes of the front: min makespan (top-left) and min energy (bottom-right)
    let a = (0..points.len())
        .map(|i| norm(&points[i]))
        .min_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)))
        .expect("nonempty");
    let b = (0..points.len())
        .map(|i| norm(&points[i]))
        .min_by(|p, q| p.1.total_cmp(&q.1).then(p.0.total_cmp(&q.0)))
        .expect("nonempty");
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt();
    let mut best = lexmin;
    let mut best_d = f64::NEG_INFINITY;
    let mut best_x = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let (x, y) = norm(p);
        // positive on the side of the ideal point (0, 0)
        let d = if len > 0.0 { (dx * (y - a.1) - dy * (x - a.0)) / len * -1.0 } else { 0.0 };
        if d > best_d || (d == best_d && x < best_x) {
            best = i;
            best_d = d;
            best_x = x;
        }
    }
    Ok(best)
}

/// The knee solution of a front: the default output of a run.
pub fn select_default_solution<S: Scalar>(front: &ParetoFront<S>) -> Result<&FrontPoint<S>, EmptyFront> {
    knee_index(&front.objectives()).map(|i| &front.points[i])
}
