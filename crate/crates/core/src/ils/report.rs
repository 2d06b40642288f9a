//! Run statistics as plain text and CSV.

use std::fmt::Write;

use super::{Operator, RunStats};

pub fn operators_csv(stats: &RunStats) -> String {
    let mut out = String::from("operator,calls,improved,moves,screened,improved_share\n");
    let total: u64 = stats.operators.iter().map(|o| o.improved).sum();
    for op in Operator::ALL {
        let o = &stats.operators[op.index()];
        let share = if total == 0 { 0.0 } else { o.improved as f64 / total as f64 };
        writeln!(out, "{},{},{},{},{},{:.6}", op.name(), o.calls, o.improved, o.moves, o.screened, share).unwrap();
    }
    out
}

pub fn trajectory_csv(stats: &RunStats) -> String {
    let mut out = String::from("iteration,evaluations,cost\n");
    for p in &stats.trajectory {
        writeln!(out, "{},{},{:.9}", p.iteration, p.evaluations, p.cost).unwrap();
    }
    out
}

pub fn text_report(stats: &RunStats) -> String {
    let mut out = String::new();
    let e = &stats.eval;
    writeln!(out, "iterations       {}", stats.iterations).unwrap();
    writeln!(out, "accepted         {}", stats.accepted).unwrap();
    writeln!(out, "init draws       {}", stats.init_draws).unwrap();
    writeln!(out, "perturbations    {} ({} fallbacks)", stats.perturbations, stats.perturbation_fallbacks).unwrap();
    writeln!(out, "evaluations      {} ({:.1}% cache hits)", e.requests, 100.0 * e.hit_rate()).unwrap();
    writeln!(out, "vehicle solves   {} ({} reused, {} heuristic)", e.vehicle_solves, e.vehicle_reuses, e.heuristic_solves)
        .unwrap();
    writeln!(out, "elapsed          {:.3} s", stats.elapsed.as_secs_f64()).unwrap();
    writeln!(out, "stopped by       {}", stats.stopped_by.name()).unwrap();
    writeln!(out, "operator         calls  improved  moves  screened").unwrap();
    for op in Operator::ALL {
        let o = &stats.operators[op.index()];
        writeln!(out, "{:<16} {:>5}  {:>8}  {:>5}  {:>8}", op.name(), o.calls, o.improved, o.moves, o.screened).unwrap();
    }
    if let Some(last) = stats.trajectory.last() {
        writeln!(out, "best cost        {:.6}", last.cost).unwrap();
    }
    out
}
