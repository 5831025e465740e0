//! Synthetic planted-community graphs, written out in the same text formats
//! the command line reads.

use linkprop::synth::{generate, PlantedInstance, PlantedParams};

pub fn run_example(out_dir: &std::path::Path) -> linkprop::Result<PlantedInstance> {
    let params = PlantedParams {
        label_noise: 0.2,
        ..PlantedParams::default().with_seed(7)
    };
    println!(
        "expecting {:.0} +/- {:.0} edges",
        params.expected_edges(),
        params.edge_std_dev()
    );
    let inst = generate(&params)?;
    println!(
        "{} sites, {} images, {} edges, {} adult images",
        inst.graph.site_count(),
        inst.graph.image_count(),
        inst.graph.edge_count(),
        inst.truth.positives()
    );
    let flipped = (0..inst.graph.site_count())
        .filter(|&s| linkprop::Seed::from(inst.site_communities[s]) != inst.seeds.get(inst.graph.site_vertex(s)))
        .count();
    println!("{flipped} site seeds flipped by noise");

    linkprop::cli::write_dataset(out_dir, &inst)?;
    println!("wrote edges.tsv, seeds.tsv and truth.tsv to {}", out_dir.display());
    Ok(inst)
}

fn main() -> linkprop::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "planted".into());
    run_example(dir.as_ref()).map(drop)
}
