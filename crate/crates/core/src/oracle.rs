//! Exhaustive Pareto front for tiny instances.
//!
//! Each task is cut into at most `split_granularity` chunks. Every assignment
//! of chunks to robots, every visiting order, and every placement of optional
//! depot returns between consecutive chunks is scored; energy swaps and any
//! further returns come from marker repair. Chunks of one task that share a
//! cycle are merged into a single visit.

use thiserror::Error;

use crate::instance::Instance;
use crate::scalar::{total_cmp, Scalar};
use crate::schedule::{approx_eq, dominates_approx, repair_route, simulate_route, Visit};

/// Largest candidate count the oracle agrees to enumerate.
pub const MAX_CANDIDATES: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub max_tasks: usize,
    pub split_granularity: u32,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self { max_tasks: 6, split_granularity: 1 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {got} tasks, oracle limit is {max}")]
    TooManyTasks { got: usize, max: usize },
    #[error("oracle supports at most 6 tasks and granularity >= 1")]
    Spec,
    #[error("enumeration would visit {0} candidate routes, above the 1e8 limit")]
    BoundExceeded(u128),
}

/// Chunks of every task: `granularity - 1` chunks of `q / granularity`
/// fruits and the remainder last; empty chunks are dropped.
pub fn chunks<S: Scalar>(inst: &Instance<S>, granularity: u32) -> Vec<Visit> {
    let mut out = Vec::new();
    for t in inst.tasks() {
        let base = t.yield_fruits / granularity;
        for _ in 1..granularity {
            if base > 0 {
                out.push(Visit { task: t.id, fruits: base });
            }
        }
        out.push(Visit { task: t.id, fruits: t.yield_fruits - base * (granularity - 1) });
    }
    out
}

/// Upper bound on single-robot sequences enumerated for `m` chunks:
/// sum over subsets of size k of k! orderings times 2^(k-1) break patterns.
pub fn candidate_count(m: usize) -> u128 {
    let mut total: u128 = 1;
    let mut binom: u128 = 1;
    let mut fact: u128 = 1;
    for k in 1..=m as u128 {
        binom = binom * (m as u128 - k + 1) / k;
        fact *= k;
        total = total.saturating_add(binom.saturating_mul(fact).saturating_mul(1 << (k - 1)));
    }
    total
}

/// `q` is no worse than `p` in both objectives, up to summation-order rounding.
fn covers<S: Scalar>(q: (S, S), p: (S, S)) -> bool {
    dominates_approx(q, p) || (approx_eq(q.0, p.0) && approx_eq(q.1, p.1))
}

fn insert_nd<S: Scalar>(set: &mut Vec<(S, S)>, p: (S, S)) {
    if set.iter().any(|&q| covers(q, p)) {
        return;
    }
    set.retain(|&q| !covers(p, q));
    set.push(p);
}

fn permutations(items: &[usize], chunks: &[Visit], f: &mut impl FnMut(&[usize])) {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, chunks: &[Visit], f: &mut dyn FnMut(&[usize])) {
        if rest.is_empty() {
            f(cur);
            return;
        }
        for i in 0..rest.len() {
            let c = rest[i];
            // identical chunks are taken in index order only
            if rest[..i].iter().any(|&o| chunks[o] == chunks[c]) {
                continue;
            }
            rest.remove(i);
            cur.push(c);
            rec(rest, cur, chunks, f);
            cur.pop();
            rest.insert(i, c);
        }
    }
    rec(&mut items.to_vec(), &mut Vec::new(), chunks, f);
}

/// Pareto set of (completion, energy) for one robot serving exactly `subset`.
fn robot_front<S: Scalar>(inst: &Instance<S>, chunks: &[Visit], subset: &[usize]) -> Vec<(S, S)> {
    let mut set = Vec::new();
    if subset.is_empty() {
        set.push((S::zero(), S::zero()));
        return set;
    }
    let battery = inst.params().battery_kj;
    let k = subset.len();
    permutations(subset, chunks, &mut |order| {
        for breaks in 0u32..(1 << (k - 1)) {
            let mut segs: Vec<Vec<Visit>> = vec![Vec::new()];
            for (pos, &c) in order.iter().enumerate() {
                if pos > 0 && breaks & (1 << (pos - 1)) != 0 {
                    segs.push(Vec::new());
                }
                let seg = segs.last_mut().expect("nonempty");
                match seg.iter_mut().find(|v| v.task == chunks[c].task) {
                    Some(v) => v.fruits += chunks[c].fruits,
                    None => seg.push(chunks[c]),
                }
            }
            let Ok(r) = repair_route(inst, &segs, battery) else { continue };
            if let Ok(o) = simulate_route(inst, 0, &r.cycles, battery, None) {
                if o.feasible {
                    insert_nd(&mut set, (o.completion, o.energy));
                }
            }
        }
    });
    set
}

/// The exact non-dominated set of (makespan, transport energy), sorted by makespan.
pub fn enumerate_pareto<S: Scalar>(inst: &Instance<S>, spec: &OracleSpec) -> Result<Vec<(S, S)>, OracleError> {
    if spec.max_tasks > 6 || spec.split_granularity == 0 {
        return Err(OracleError::Spec);
    }
    if inst.task_count() > spec.max_tasks {
        return Err(OracleError::TooManyTasks { got: inst.task_count(), max: spec.max_tasks });
    }
    let chunks = chunks(inst, spec.split_granularity);
    let m = chunks.len();
    let bound = candidate_count(m);
    if bound > MAX_CANDIDATES || m > 20 {
        return Err(OracleError::BoundExceeded(bound));
    }
    let full = (1usize << m) - 1;
    let subsets: Vec<Vec<(S, S)>> = (0..=full)
        .map(|mask| {
            let members: Vec<usize> = (0..m).filter(|&c| mask & (1 << c) != 0).collect();
            robot_front(inst, &chunks, &members)
        })
        .collect();

    // fleet[mask]: best (makespan, energy) for the robots so far serving mask
    let mut fleet = subsets.clone();
    for _ in 1..inst.robot_count() {
        let mut next: Vec<Vec<(S, S)>> = vec![Vec::new(); full + 1];
        for (mask, slot) in next.iter_mut().enumerate() {
            let mut sub = mask;
            loop {
                for &(t1, e1) in &subsets[sub] {
                    for &(t2, e2) in &fleet[mask ^ sub] {
                        insert_nd(slot, (t1.max(t2), e1 + e2));
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        fleet = next;
    }
    let mut front = std::mem::take(&mut fleet[full]);
    front.sort_by(|a, b| total_cmp(&a.0, &b.0).then(total_cmp(&a.1, &b.1)));
    Ok(front)
}

/// Golden-file form: header `makespan_s,energy_kJ`, one point per line.
pub fn front_to_csv<S: Scalar>(front: &[(S, S)]) -> String {
    let mut s = String::from("makespan_s,energy_kJ\n");
    for (t, e) in front {
        s.push_str(&format!("{t},{e}\n"));
    }
    s
}

pub fn front_from_csv(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = || -> Result<f64, String> {
            parts
                .next()
                .ok_or_else(|| format!("line {}: missing field", n + 1))?
                .trim()
                .parse()
                .map_err(|e| format!("line {}: {e}", n + 1))
        };
        out.push((next()?, next()?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{DistanceMatrix, PhysicalParams, TaskId, TaskNode};
    use crate::schedule::{evaluate, Cycle, Solution, Terminator};

    fn inst(yields: &[u32], d: &[f64], robots: usize) -> Instance<f64> {
        let n = yields.len();
        let m = DistanceMatrix::from_fn(n + 1, |i, j| if i == j { 0.0 } else if i == 0 || j == 0 { d[i.max(j) - 1] } else { (d[i - 1] - d[j - 1]).abs() + 2.0 });
        let tasks = yields
            .iter()
            .enumerate()
            .map(|(k, &y)| TaskNode { id: TaskId(k as u32 + 2), yield_fruits: y, position: None })
            .collect();
        Instance::new("o", tasks, robots, m, PhysicalParams::default()).unwrap()
    }

    #[test]
    fn single_task_front_is_its_only_solution() {
        let i = inst(&[7], &[12.0], 1);
        let front = enumerate_pareto(&i, &OracleSpec::default()).unwrap();
        let sol = Solution { routes: vec![vec![Cycle { visits: vec![Visit::new(2, 7)], end: Terminator::EndOfRoute }]] };
        assert_eq!(front, vec![evaluate(&i, &sol).unwrap().objectives()]);
    }

    #[test]
    fn symmetric_pair_on_two_robots() {
        // one task per robot is fastest; one robot doing both in one cycle is cheapest
        let i = inst(&[5, 5], &[10.0, 10.0], 2);
        let front = enumerate_pareto(&i, &OracleSpec::default()).unwrap();
        let one = |t: u32| vec![Cycle { visits: vec![Visit::new(t, 5)], end: Terminator::EndOfRoute }];
        let a = evaluate(&i, &Solution { routes: vec![one(2), one(3)] }).unwrap().objectives();
        let b = evaluate(&i, &Solution { routes: vec![one(3), one(2)] }).unwrap().objectives();
        assert_eq!(a, b);
        assert_eq!(front[0], a);
        assert!(front.len() >= 2);
        assert!(front.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
    }

    #[test]
    fn chunking_and_bounds() {
        let i = inst(&[5, 1], &[3.0, 4.0], 1);
        assert_eq!(chunks(&i, 2), vec![Visit::new(2, 2), Visit::new(2, 3), Visit::new(3, 1)]);
        assert_eq!(candidate_count(1), 2);
        assert_eq!(candidate_count(2), 1 + 2 + 2 * 2);
        let big = inst(&[9; 6], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 2);
        assert!(matches!(enumerate_pareto(&big, &OracleSpec { max_tasks: 6, split_granularity: 3 }), Err(OracleError::BoundExceeded(_))));
        assert!(matches!(enumerate_pareto(&big, &OracleSpec { max_tasks: 4, split_granularity: 1 }), Err(OracleError::TooManyTasks { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let f = vec![(377.0, 0.6253906249999999), (400.5, 0.5)];
        assert_eq!(front_from_csv(&front_to_csv(&f)).unwrap(), f);
    }
}
