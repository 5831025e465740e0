//! Propagation against the any-adult-neighbour rule, at the rule's precision.

use linkprop::classify::Population;
use linkprop::evaluation::{compare_to_baseline, fine_k_grid};
use linkprop::propagation::PropagationConfig;
use linkprop::synth::{generate, PlantedParams};

pub fn run_example() -> linkprop::Result<Vec<f64>> {
    let mut deltas = Vec::new();
    for seed in 42..47 {
        let inst = generate(&PlantedParams::default().with_seed(seed))?;
        let c = compare_to_baseline(
            &inst.graph,
            &inst.seeds,
            &inst.truth,
            &PropagationConfig::default(),
            Population::Images,
            &fine_k_grid(),
        )?;
        println!(
            "seed {seed}: baseline P={:.3} R={:.3} | propagation k={:.2} P={:.3} R={:.3} | recall {:+.3}",
            c.baseline.precision.unwrap_or(f64::NAN),
            c.baseline.recall.unwrap_or(f64::NAN),
            c.matched.k,
            c.matched.report.precision.unwrap_or(f64::NAN),
            c.matched.report.recall.unwrap_or(f64::NAN),
            c.recall_delta
        );
        deltas.push(c.recall_delta);
    }
    Ok(deltas)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
