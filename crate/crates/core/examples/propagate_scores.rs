//! Spreading seed labels from a few known sites to every image.

use linkprop::propagation::{propagate_with_objective, PropagationConfig};
use linkprop::{BipartiteGraph, Label, ScoreMatrix, SeedLabels};

pub fn run_example() -> linkprop::Result<ScoreMatrix> {
    let graph = BipartiteGraph::from_edges(
        vec!["adult.com".into(), "mixed.com".into(), "news.com".into()],
        vec!["p1".into(), "p2".into(), "p3".into(), "p4".into()],
        [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3)],
    )?;
    let (seeds, unknown) =
        SeedLabels::from_site_labels(&graph, [("adult.com", Label::Adult), ("news.com", Label::Decent)]);
    assert_eq!(unknown, 0);

    let cfg = PropagationConfig::default();
    let (scores, trace) = propagate_with_objective(&graph, &seeds, &cfg)?;
    for step in &trace.steps {
        println!("iteration {} update {:.3e} objective {:.6}", step.iteration, step.update_norm, step.objective.unwrap_or(f64::NAN));
    }
    for (i, key) in graph.image_keys().iter().enumerate() {
        let v = graph.image_vertex(i);
        println!("{key}: adultness {:.4} decentness {:.4}", scores.adultness(v), scores.decentness(v));
    }
    Ok(scores)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
