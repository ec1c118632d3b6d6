use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use saba_core::schedule::{evaluate, Solution, Terminator};
use saba_core::{EvaluationReport, Instance};

use crate::error::{read, CliError, CliResult};
use crate::files::Format;
use crate::Global;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    instance: PathBuf,
    solution: PathBuf,
    /// Omit the per-node battery trace from the text report.
    #[arg(long)]
    no_trace: bool,
}

pub fn load_instance(path: &Path) -> CliResult<Instance> {
    Instance::from_json(&read(path)?).map_err(|e| CliError::io(path, e))
}

pub fn load_solution(path: &Path) -> CliResult<Solution> {
    Solution::from_json(&read(path)?).map_err(|e| CliError::io(path, e))
}

pub fn run(g: &Global, a: &EvaluateArgs) -> CliResult<()> {
    let inst = load_instance(&a.instance)?;
    let sol = load_solution(&a.solution)?;
    let report = evaluate(&inst, &sol).map_err(|e| CliError::io(&a.solution, e))?;
    match g.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Csv => print!("{}", render(inst.name(), &report, !a.no_trace)),
    }
    if report.feasible {
        Ok(())
    } else {
        Err(CliError::Infeasible)
    }
}

fn end_name(t: Terminator) -> &'static str {
    match t {
        Terminator::LoadVisit => "load",
        Terminator::EnergyVisit => "energy",
        Terminator::EndOfRoute => "end",
    }
}

pub fn render(name: &str, r: &EvaluationReport, trace: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "instance {name}");
    let _ = writeln!(s, "makespan_s {}", r.makespan_s);
    let _ = writeln!(s, "transport_energy_kJ {}", r.transport_energy_kj);
    let _ = writeln!(s, "feasible {}", r.feasible);
    let _ = writeln!(s, "forced_swaps {}", r.forced_swaps);
    if let Some(b) = r.bottleneck {
        let _ = writeln!(s, "bottleneck robot {b}");
    }
    for (k, robot) in r.per_robot.iter().enumerate() {
        let _ = writeln!(
            s,
            "robot {k}: completion_s {} transport_kJ {} cycles {}",
            robot.completion_time_s,
            robot.transport_kj,
            robot.cycles.len()
        );
        for (c, cy) in robot.cycles.iter().enumerate() {
            let _ = writeln!(
                s,
                "  cycle {c}: travel_s {:.3} pick_s {:.3} swap_s {:.3} transport_kJ {:.6} service_kJ {:.6} battery_kJ {:.6} -> {:.6} end {}{}",
                cy.travel_s,
                cy.pick_s,
                cy.swap_s,
                cy.transport_kj,
                cy.service_kj,
                cy.battery_at_start_kj,
                cy.battery_on_return_kj,
                end_name(cy.terminator),
                if cy.forced_swap { " (forced)" } else { "" }
            );
        }
        if trace && !robot.battery_trace.is_empty() {
            let pts: Vec<String> = robot.battery_trace.iter().map(|p| format!("{}:{:.6}", p.node, p.battery_kj)).collect();
            let _ = writeln!(s, "  battery_trace {}", pts.join(" "));
        }
    }
    for v in &r.violations {
        let _ = writeln!(s, "violation {v}");
    }
    s
}
