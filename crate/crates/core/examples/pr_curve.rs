//! Precision and recall against labeled images, for a grid of cut fractions.

use linkprop::classify::Population;
use linkprop::evaluation::{pr_sweep, SweepPoint, DEFAULT_K_GRID};
use linkprop::propagation::{propagate, PropagationConfig};
use linkprop::synth::{generate, PlantedParams};

pub fn run_example() -> linkprop::Result<Vec<SweepPoint>> {
    let inst = generate(&PlantedParams::default())?;
    let cfg = PropagationConfig::default();
    let (scores, _) = propagate(&inst.graph, &inst.seeds, &cfg)?;
    // ranked once, cut at every k
    let curve = pr_sweep(&inst.graph, &scores, Population::Images, &inst.truth, &DEFAULT_K_GRID, cfg.epsilon)?;
    println!("k\tprecision\trecall");
    for p in &curve {
        println!("{}\t{:.4}\t{:.4}", p.k, p.report.precision.unwrap_or(f64::NAN), p.report.recall.unwrap_or(f64::NAN));
    }
    Ok(curve)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
