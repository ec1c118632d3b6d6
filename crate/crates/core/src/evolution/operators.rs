//! Baseline variation operators on planned cycles.

use rand::Rng;

use crate::schedule::{Plan, Visit};
use crate::work;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    CycleRelocation,
    TaskSwap,
    SplitMutation,
    IntraCycleTwoOpt,
}

impl Operator {
    pub const ALL: [Operator; 4] =
        [Operator::CycleRelocation, Operator::TaskSwap, Operator::SplitMutation, Operator::IntraCycleTwoOpt];
}

fn cycle_refs(plan: &Plan) -> Vec<(usize, usize)> {
    plan.iter()
        .enumerate()
        .flat_map(|(r, cycles)| (0..cycles.len()).map(move |c| (r, c)))
        .collect()
}

fn drop_empty(plan: &mut Plan) {
    for route in plan.iter_mut() {
        route.retain(|c| !c.is_empty());
    }
}

/// Moves a random cycle to a random position of another robot (or of the
/// same robot when there is only one).
pub fn cycle_relocation<R: Rng>(plan: &mut Plan, rng: &mut R) -> bool {
    let refs = cycle_refs(plan);
    if refs.is_empty() {
        return false;
    }
    let (r, c) = refs[rng.gen_range(0..refs.len())];
    let robots = plan.len();
    let to = if robots > 1 {
        (r + rng.gen_range(1..robots)) % robots
    } else {
        if plan[r].len() < 2 {
            return false;
        }
        r
    };
    let cycle = plan[r].remove(c);
    let pos = rng.gen_range(0..=plan[to].len());
    plan[to].insert(pos, cycle);
    true
}

fn place(cycle: &mut Vec<Visit>, at: usize, v: Visit) {
    match cycle.iter_mut().find(|w| w.task == v.task) {
        Some(w) => w.fruits += v.fruits,
        None => cycle.insert(at.min(cycle.len()), v),
    }
}

/// Exchanges two visits between cycles of different robots (different cycles
/// with one robot). A visit landing in a cycle that already serves its task
/// is merged into that visit.
pub fn task_swap<R: Rng>(plan: &mut Plan, rng: &mut R) -> bool {
    let refs = cycle_refs(plan);
    if refs.len() < 2 {
        return false;
    }
    let a = refs[rng.gen_range(0..refs.len())];
    let others: Vec<(usize, usize)> = refs
        .iter()
        .copied()
        .filter(|&(r, c)| if plan.len() > 1 { r != a.0 } else { c != a.1 })
        .collect();
    if others.is_empty() {
        return false;
    }
    let b = others[rng.gen_range(0..others.len())];
    let ia = rng.gen_range(0..plan[a.0][a.1].len());
    let ib = rng.gen_range(0..plan[b.0][b.1].len());
    let va = plan[a.0][a.1].remove(ia);
    let vb = plan[b.0][b.1].remove(ib);
    place(&mut plan[a.0][a.1], ia, vb);
    place(&mut plan[b.0][b.1], ib, va);
    drop_empty(plan);
    true
}

/// Shifts fruits between cycles. Either moves `1..=count` fruits of a task
/// from one of its visits to another visit of the same task in a different
/// cycle (removing the source visit if emptied), or opens a new split by
/// moving part of a visit into another cycle. The two modes are drawn with
/// equal probability when both apply.
pub fn split_mutation<R: Rng>(plan: &mut Plan, rng: &mut R) -> bool {
    let mut visits: Vec<(usize, usize, usize)> = Vec::new();
    for (r, cycles) in plan.iter().enumerate() {
        for (c, cycle) in cycles.iter().enumerate() {
            visits.extend((0..cycle.len()).map(|k| (r, c, k)));
        }
    }
    let task = |&(r, c, k): &(usize, usize, usize)| plan[r][c][k].task;
    let shared: Vec<usize> = (0..visits.len())
        .filter(|&i| visits.iter().enumerate().any(|(j, w)| j != i && task(w) == task(&visits[i])))
        .collect();
    let cycles = cycle_refs(plan);
    let divisible: Vec<usize> = if cycles.len() > 1 {
        (0..visits.len()).filter(|&i| plan[visits[i].0][visits[i].1][visits[i].2].fruits >= 2).collect()
    } else {
        Vec::new()
    };
    let open = match (shared.is_empty(), divisible.is_empty()) {
        (true, true) => return false,
        (true, false) => true,
        (false, true) => false,
        (false, false) => rng.gen_bool(0.5),
    };
    if open {
        let from = visits[divisible[rng.gen_range(0..divisible.len())]];
        let targets: Vec<(usize, usize)> = cycles.into_iter().filter(|&rc| rc != (from.0, from.1)).collect();
        let (r, c) = targets[rng.gen_range(0..targets.len())];
        let v = &mut plan[from.0][from.1][from.2];
        let amount = rng.gen_range(1..v.fruits);
        v.fruits -= amount;
        let moved = Visit { task: v.task, fruits: amount };
        let at = rng.gen_range(0..=plan[r][c].len());
        place(&mut plan[r][c], at, moved);
        return true;
    }
    let from = visits[shared[rng.gen_range(0..shared.len())]];
    let peers: Vec<(usize, usize, usize)> =
        visits.iter().copied().filter(|w| *w != from && task(w) == task(&from)).collect();
    let to = peers[rng.gen_range(0..peers.len())];
    let have = plan[from.0][from.1][from.2].fruits;
    let amount = rng.gen_range(1..=have);
    plan[to.0][to.1][to.2].fruits += amount;
    plan[from.0][from.1][from.2].fruits -= amount;
    if amount == have {
        plan[from.0][from.1].remove(from.2);
        drop_empty(plan);
    }
    true
}

/// Reverses a random stretch of a random cycle with at least two visits.
pub fn intra_cycle_two_opt<R: Rng>(plan: &mut Plan, rng: &mut R) -> bool {
    let refs: Vec<(usize, usize)> = cycle_refs(plan).into_iter().filter(|&(r, c)| plan[r][c].len() >= 2).collect();
    if refs.is_empty() {
        return false;
    }
    let (r, c) = refs[rng.gen_range(0..refs.len())];
    let n = plan[r][c].len();
    let i = rng.gen_range(0..n - 1);
    let j = rng.gen_range(i + 1..n);
    plan[r][c][i..=j].reverse();
    true
}

/// Applies a uniformly drawn operator, trying the others in turn if it does
/// not apply. Returns the operator used, if any.
pub fn mutate<R: Rng>(plan: &mut Plan, rng: &mut R) -> Option<Operator> {
    let visits = plan.iter().flatten().map(Vec::len).sum::<usize>() as u64;
    work::tick(visits * visits / 6);
    let first = rng.gen_range(0..Operator::ALL.len());
    for k in 0..Operator::ALL.len() {
        let op = Operator::ALL[(first + k) % Operator::ALL.len()];
        let applied = match op {
            Operator::CycleRelocation => cycle_relocation(plan, rng),
            Operator::TaskSwap => task_swap(plan, rng),
            Operator::SplitMutation => split_mutation(plan, rng),
            Operator::IntraCycleTwoOpt => intra_cycle_two_opt(plan, rng),
        };
        if applied {
            return Some(op);
        }
    }
    None
}
