use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Cycle, Solution, Terminator, Visit, ENERGY_MARKER, LOAD_MARKER};
use crate::instance::TaskId;

/// File form of a [`Solution`]: marker-delimited routes plus split counts keyed
/// by (robot, cycle ordinal, task).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub routes: Vec<Vec<i64>>,
    pub splits: Vec<SplitEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub robot: usize,
    pub cycle: usize,
    pub task: u32,
    pub count: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("route {robot}: token {token} is neither a task id (>= 2) nor a depot marker (1, -1)")]
    InvalidToken { robot: usize, token: i64 },
    #[error("robot {robot} cycle {cycle}: task {task} visited twice in one cycle")]
    RepeatedTask { robot: usize, cycle: usize, task: u32 },
    #[error("robot {robot} cycle {cycle}: task {task} has no split entry")]
    MissingSplit { robot: usize, cycle: usize, task: u32 },
    #[error("split entry (robot {robot}, cycle {cycle}, task {task}) does not match any route position")]
    OrphanSplit { robot: usize, cycle: usize, task: u32 },
    #[error("split entry (robot {robot}, cycle {cycle}, task {task}) given twice")]
    DuplicateSplit { robot: usize, cycle: usize, task: u32 },
    #[error("split entry (robot {robot}, cycle {cycle}, task {task}) has zero fruits")]
    ZeroSplit { robot: usize, cycle: usize, task: u32 },
    #[error("malformed solution file: {0}")]
    Format(String),
}

/// A cycle of the flat encoding before split counts are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenCycle {
    pub tasks: Vec<u32>,
    pub terminator: Terminator,
}

/// Cuts a marker-delimited route into cycles. Every marker closes the segment
/// before it; tokens after the last marker form the end-of-route cycle.
pub fn split_tokens(tokens: &[i64]) -> Result<Vec<TokenCycle>, i64> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for &tok in tokens {
        let terminator = match tok {
            LOAD_MARKER => Terminator::LoadVisit,
            ENERGY_MARKER => Terminator::EnergyVisit,
            t if t >= i64::from(TaskId::FIRST) && t <= i64::from(u32::MAX) => {
                current.push(t as u32);
                continue;
            }
            bad => return Err(bad),
        };
        out.push(TokenCycle {
            tasks: std::mem::take(&mut current),
            terminator,
        });
    }
    if !current.is_empty() {
        out.push(TokenCycle {
            tasks: current,
            terminator: Terminator::EndOfRoute,
        });
    }
    Ok(out)
}

impl Solution {
    pub fn to_file(&self) -> SolutionFile {
        let mut splits = Vec::new();
        for (robot, route) in self.routes.iter().enumerate() {
            for (cycle, c) in route.iter().enumerate() {
                splits.extend(c.visits.iter().map(|v| SplitEntry {
                    robot,
                    cycle,
                    task: v.task.0,
                    count: v.fruits,
                }));
            }
        }
        SolutionFile {
            routes: (0..self.robot_count()).map(|r| self.tokens(r)).collect(),
            splits,
        }
    }

    pub fn from_file(file: &SolutionFile) -> Result<Self, SolutionError> {
        let mut counts: BTreeMap<(usize, usize, u32), (u32, bool)> = BTreeMap::new();
        for s in &file.splits {
            let key = (s.robot, s.cycle, s.task);
            if s.count == 0 {
                return Err(SolutionError::ZeroSplit { robot: s.robot, cycle: s.cycle, task: s.task });
            }
            if counts.insert(key, (s.count, false)).is_some() {
                return Err(SolutionError::DuplicateSplit { robot: s.robot, cycle: s.cycle, task: s.task });
            }
        }

        let mut routes = Vec::with_capacity(file.routes.len());
        for (robot, tokens) in file.routes.iter().enumerate() {
            let cycles = split_tokens(tokens).map_err(|token| SolutionError::InvalidToken { robot, token })?;
            let mut route = Vec::with_capacity(cycles.len());
            for (ordinal, tc) in cycles.into_iter().enumerate() {
                let mut visits: Vec<Visit> = Vec::with_capacity(tc.tasks.len());
                for task in tc.tasks {
                    if visits.iter().any(|v| v.task.0 == task) {
                        return Err(SolutionError::RepeatedTask { robot, cycle: ordinal, task });
                    }
                    let entry = counts
                        .get_mut(&(robot, ordinal, task))
                        .ok_or(SolutionError::MissingSplit { robot, cycle: ordinal, task })?;
                    entry.1 = true;
                    visits.push(Visit { task: TaskId(task), fruits: entry.0 });
                }
                route.push(Cycle { visits, end: tc.terminator });
            }
            routes.push(route);
        }
        if let Some((&(robot, cycle, task), _)) = counts.iter().find(|(_, (_, used))| !used) {
            return Err(SolutionError::OrphanSplit { robot, cycle, task });
        }
        Ok(Solution { routes })
    }

    /// Single integer vector with `0` between robots, the compact encoding.
    pub fn flat_route_vector(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for r in 0..self.robot_count() {
            if r > 0 {
                out.push(0);
            }
            out.extend(self.tokens(r));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("solution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SolutionError> {
        let file: SolutionFile = serde_json::from_str(text).map_err(|e| SolutionError::Format(e.to_string()))?;
        Self::from_file(&file)
    }
}
