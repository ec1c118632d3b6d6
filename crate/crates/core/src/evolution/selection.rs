//! Non-dominated sorting and crowding distance.

use std::cmp::Ordering;

use rand::Rng;

use crate::scalar::{total_cmp, Scalar};
use crate::schedule::dominates;
use crate::work;

/// Pareto rank of every point (0 = non-dominated).
pub fn nondominated_ranks<S: Scalar>(points: &[(S, S)]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(points[i], points[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(points[j], points[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    work::tick((n * n) as u64 / 2 * work::PAIR);
    let mut rank = vec![usize::MAX; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut r = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            rank[i] = r;
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        current = next;
        r += 1;
    }
    rank
}

/// Crowding distance of each member of one front (given by indices into `points`).
pub fn crowding_distance<S: Scalar>(points: &[(S, S)], front: &[usize]) -> Vec<f64> {
    let m = front.len();
    let mut dist = vec![0.0; m];
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    for obj in 0..2 {
        let key = |i: usize| if obj == 0 { points[front[i]].0 } else { points[front[i]].1 };
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| total_cmp(&key(a), &key(b)).then(a.cmp(&b)));
        let span = (key(order[m - 1]) - key(order[0])).as_f64();
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        if span > 0.0 {
            for w in 1..m - 1 {
                dist[order[w]] += (key(order[w + 1]) - key(order[w - 1])).as_f64() / span;
            }
        }
    }
    dist
}

/// Rank and crowding of every point.
pub fn rank_and_crowding<S: Scalar>(points: &[(S, S)]) -> (Vec<usize>, Vec<f64>) {
    let rank = nondominated_ranks(points);
    let mut crowd = vec![0.0; points.len()];
    let max_rank = rank.iter().copied().max().map_or(0, |r| r + 1);
    for r in 0..max_rank {
        let front: Vec<usize> = (0..points.len()).filter(|&i| rank[i] == r).collect();
        for (k, c) in crowding_distance(points, &front).into_iter().enumerate() {
            crowd[front[k]] = c;
        }
    }
    (rank, crowd)
}

fn better(rank: &[usize], crowd: &[f64], a: usize, b: usize) -> Ordering {
    rank[a]
        .cmp(&rank[b])
        .then_with(|| crowd[b].partial_cmp(&crowd[a]).unwrap_or(Ordering::Equal))
        .then(a.cmp(&b))
}

/// Indices of the `keep` survivors: by rank, then by crowding distance.
/// Points with the same objectives as an earlier point are only used when
/// distinct ones run out.
pub fn environmental_selection<S: Scalar>(points: &[(S, S)], keep: usize) -> Vec<usize> {
    let mut distinct = Vec::new();
    let mut repeats = Vec::new();
    for i in 0..points.len() {
        if points[..i].iter().any(|p| *p == points[i]) {
            repeats.push(i);
        } else {
            distinct.push(i);
        }
    }
    let sub: Vec<(S, S)> = distinct.iter().map(|&i| points[i]).collect();
    let (rank, crowd) = rank_and_crowding(&sub);
    let mut order: Vec<usize> = (0..sub.len()).collect();
    order.sort_by(|&a, &b| better(&rank, &crowd, a, b));
    let mut out: Vec<usize> = order.into_iter().map(|k| distinct[k]).take(keep).collect();
    out.extend(repeats.into_iter().take(keep - out.len()));
    out
}

/// Binary tournament on (rank, crowding).
pub fn tournament<R: Rng>(rank: &[usize], crowd: &[f64], rng: &mut R) -> usize {
    let a = rng.gen_range(0..rank.len());
    let b = rng.gen_range(0..rank.len());
    if better(rank, crowd, a, b) == Ordering::Greater {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranks_by_layer() {
        let pts = [(1.0, 5.0), (2.0, 2.0), (5.0, 1.0), (3.0, 3.0), (6.0, 6.0)];
        assert_eq!(nondominated_ranks(&pts), vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn crowding_extremes_are_infinite() {
        let pts = [(0.0, 4.0), (1.0, 2.0), (2.0, 1.0), (4.0, 0.0)];
        let c = crowding_distance(&pts, &[0, 1, 2, 3]);
        assert!(c[0].is_infinite() && c[3].is_infinite());
        assert!((c[1] - (2.0 / 4.0 + 3.0 / 4.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn selection_keeps_all_rank_zero(pts in prop::collection::vec((0u32..50, 0u32..50), 4..40)) {
            let pts: Vec<(f64, f64)> = pts.into_iter().map(|(a, b)| (a as f64, b as f64)).collect();
            let keep = pts.len() / 2;
            let chosen = environmental_selection(&pts, keep);
            prop_assert_eq!(chosen.len(), keep);
            let rank = nondominated_ranks(&pts);
            let mut first: Vec<(f64, f64)> = (0..pts.len()).filter(|&i| rank[i] == 0).map(|i| pts[i]).collect();
            first.sort_by(|a, b| a.partial_cmp(b).unwrap());
            first.dedup();
            if first.len() <= keep {
                for p in first {
                    prop_assert!(chosen.iter().any(|&i| pts[i] == p));
                }
            }
        }
    }
}
