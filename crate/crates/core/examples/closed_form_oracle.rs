//! The iteration converges to `(1 - alpha) (I - alpha A)^-1 Y`. On small
//! graphs the dense solve checks it directly.

use linkprop::propagation::{closed_form_solve, objective, propagate, PropagationConfig};
use linkprop::synth::{generate, PlantedParams};

pub fn run_example() -> linkprop::Result<f64> {
    let params = PlantedParams {
        adult_sites: 10,
        decent_sites: 10,
        adult_images: 40,
        decent_images: 40,
        p_in: 0.2,
        p_out: 0.02,
        ..PlantedParams::default()
    };
    let inst = generate(&params)?;
    let alpha = 0.5;
    let exact = closed_form_solve(&inst.graph, &inst.seeds, alpha)?;

    let mut gap = f64::INFINITY;
    for n in [1, 5, 10, 50] {
        let cfg = PropagationConfig::default().with_alpha(alpha).with_iterations(n);
        let (f, _) = propagate(&inst.graph, &inst.seeds, &cfg)?;
        gap = f.max_abs_diff(&exact);
        println!("n = {n:>2}: max |F(n) - F*| = {gap:.3e}");
    }
    println!("objective at the fixed point: {:.6}", objective(&inst.graph, &exact, &inst.seeds, alpha)?);
    Ok(gap)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
