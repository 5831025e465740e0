//! Ranking by adultness over decentness and labeling the top fraction.

use linkprop::classify::{baseline_classify, classify_top_k, rank, Population};
use linkprop::propagation::{propagate, PropagationConfig};
use linkprop::synth::{generate, PlantedParams};
use linkprop::{Label, Verdict};

pub fn run_example() -> linkprop::Result<Vec<Verdict>> {
    let inst = generate(&PlantedParams::default())?;
    let cfg = PropagationConfig::default().with_k(0.04);
    let (scores, _) = propagate(&inst.graph, &inst.seeds, &cfg)?;

    let ranked = rank(&scores, &Population::Images.vertices(&inst.graph), cfg.epsilon)?;
    for r in &ranked[..5] {
        println!("#{} {} ratio {:.3}", r.rank, inst.graph.vertex_key(r.vertex), r.ratio);
    }
    let verdicts = classify_top_k(&ranked, cfg.k)?;
    let adult = |v: &[Verdict]| v.iter().filter(|x| x.label == Label::Adult).count();
    println!("propagation labels {} of {} images adult", adult(&verdicts), verdicts.len());

    let baseline = baseline_classify(&inst.graph, &inst.seeds)?;
    println!("the any-adult-neighbour rule labels {} adult", adult(&baseline));
    Ok(verdicts)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
