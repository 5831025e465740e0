//! How precision and recall move with the iteration count and alpha.
//! A few iterations are usually enough, and alpha matters little.

use linkprop::classify::Population;
use linkprop::cli::{sweep, SweepRow};
use linkprop::propagation::PropagationConfig;
use linkprop::synth::{generate, PlantedParams};

pub fn run_example() -> linkprop::Result<Vec<SweepRow>> {
    let inst = generate(&PlantedParams::default())?;
    let iterations: Vec<usize> = vec![1, 2, 3, 5, 10, 30];
    let rows = sweep(
        &inst.graph,
        &inst.seeds,
        &inst.truth,
        &PropagationConfig::default(),
        Population::Images,
        &iterations,
        &[0.2, 0.5, 0.8],
        &[0.04],
    )?;
    println!("n\talpha\tprecision\trecall");
    for r in &rows {
        let report = &r.point.report;
        println!("{}\t{}\t{:.4}\t{:.4}", r.iterations, r.alpha, report.precision.unwrap_or(f64::NAN), report.recall.unwrap_or(f64::NAN));
    }
    Ok(rows)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
