#![allow(dead_code)]

use linkprop::{BipartiteGraph, Seed, SeedLabels};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random bipartite graph plus seeds on a random subset of sites.
pub fn random_instance(seed: u64, max_vertices: usize) -> (BipartiteGraph, SeedLabels) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = rng.gen_range(1..max_vertices / 2);
    let images = rng.gen_range(1..=max_vertices - sites);
    let density: f64 = rng.gen_range(0.01..0.3);
    let mut edges = Vec::new();
    for s in 0..sites {
        for i in 0..images {
            if rng.gen_bool(density) {
                edges.push((s as u32, i as u32));
            }
        }
    }
    let g = BipartiteGraph::from_edges(
        (0..sites).map(|s| format!("s{s:04}.com")).collect(),
        (0..images).map(|i| format!("i{i:04}")).collect(),
        edges,
    )
    .unwrap();
    let mut seeds = SeedLabels::unlabeled(g.vertex_count());
    for s in 0..sites {
        let seed = match rng.gen_range(0..3) {
            0 => Seed::Adult,
            1 => Seed::Decent,
            _ => Seed::Unlabeled,
        };
        seeds.set(g.site_vertex(s), seed).unwrap();
    }
    (g, seeds)
}

/// Dense normalized adjacency built straight from the edge list.
pub fn dense_operator(g: &BipartiteGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    let deg: Vec<f64> = (0..n).map(|v| g.degree(v).unwrap() as f64).collect();
    for (s, i) in g.edges() {
        let (u, v) = (g.site_vertex(s), g.image_vertex(i));
        let w = 1.0 / (deg[u].sqrt() * deg[v].sqrt());
        a[u][v] = w;
        a[v][u] = w;
    }
    a
}

/// (1 - alpha)(I - alpha A)^-1 Y by Gauss-Jordan elimination with partial
/// pivoting, one column at a time.
pub fn dense_fixed_point(g: &BipartiteGraph, seeds: &SeedLabels, alpha: f64) -> Vec<[f64; 2]> {
    let n = g.vertex_count();
    let a = dense_operator(g);
    let mut out = vec![[0.0; 2]; n];
    for col in 0..2 {
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|r| {
                let mut row: Vec<f64> = (0..n)
                    .map(|c| if r == c { 1.0 } else { 0.0 } - alpha * a[r][c])
                    .collect();
                row.push(seeds.get(r).row()[col]);
                row
            })
            .collect();
        for p in 0..n {
            let pivot = (p..n).max_by(|&x, &y| m[x][p].abs().total_cmp(&m[y][p].abs())).unwrap();
            m.swap(p, pivot);
            let d = m[p][p];
            for c in p..=n {
                m[p][c] /= d;
            }
            for r in 0..n {
                if r != p && m[r][p] != 0.0 {
                    let f = m[r][p];
                    for c in p..=n {
                        m[r][c] -= f * m[p][c];
                    }
                }
            }
        }
        for r in 0..n {
            out[r][col] = (1.0 - alpha) * m[r][n];
        }
    }
    out
}
