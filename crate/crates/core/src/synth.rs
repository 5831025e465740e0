//! Planted-partition site/image graphs with noisy site seeds.
//!
//! # Draw order
//!
//! A single ChaCha8 stream, seeded with `ChaCha8Rng::seed_from_u64(rng_seed)`,
//! supplies every random number. Each uniform draw is
//! `(next_u64() >> 11) * 2^-53`. Sites are ordered adult first, then decent;
//! images likewise. The stream is consumed as:
//!
//! 1. for each site, for each image: one draw `u`; the edge exists when
//!    `u < p_in` (same community) or `u < p_out` (different communities);
//! 2. for each site: one draw `u`; its seed label is flipped when
//!    `u < label_noise`.
//!
//! Site `s` is keyed `s{s:07}.test` and image `i` is keyed `img{i:09}`, so
//! key order equals generation order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::Label;
use crate::error::{Error, Result};
use crate::evaluation::GroundTruth;
use crate::graph::BipartiteGraph;
use crate::propagation::SeedLabels;

/// Default refusal threshold for the expected number of edges.
pub const DEFAULT_EDGE_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedParams {
    pub adult_sites: usize,
    pub decent_sites: usize,
    pub adult_images: usize,
    pub decent_images: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub label_noise: f64,
    pub rng_seed: u64,
    pub edge_cap: u64,
}

impl Default for PlantedParams {
    fn default() -> Self {
        Self {
            adult_sites: 50,
            decent_sites: 50,
            adult_images: 500,
            decent_images: 500,
            p_in: 0.05,
            p_out: 0.005,
            label_noise: 0.1,
            rng_seed: 42,
            edge_cap: DEFAULT_EDGE_CAP,
        }
    }
}

impl PlantedParams {
    pub fn with_seed(mut self, rng_seed: u64) -> Self {
        self.rng_seed = rng_seed;
        self
    }

    pub fn site_count(&self) -> usize {
        self.adult_sites + self.decent_sites
    }

    pub fn image_count(&self) -> usize {
        self.adult_images + self.decent_images
    }

    /// Mean edge count of the model.
    pub fn expected_edges(&self) -> f64 {
        let (within, across) = self.pair_counts();
        within * self.p_in + across * self.p_out
    }

    /// Standard deviation of the edge count.
    pub fn edge_std_dev(&self) -> f64 {
        let (within, across) = self.pair_counts();
        (within * self.p_in * (1.0 - self.p_in) + across * self.p_out * (1.0 - self.p_out)).sqrt()
    }

    fn pair_counts(&self) -> (f64, f64) {
        let within = self.adult_sites as f64 * self.adult_images as f64
            + self.decent_sites as f64 * self.decent_images as f64;
        let across = self.adult_sites as f64 * self.decent_images as f64
            + self.decent_sites as f64 * self.adult_images as f64;
        (within, across)
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("adult_sites", self.adult_sites),
            ("decent_sites", self.decent_sites),
            ("adult_images", self.adult_images),
            ("decent_images", self.decent_images),
        ];
        for (name, count) in counts {
            if count == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out), ("label_noise", self.label_noise)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        let expected = self.expected_edges();
        if expected > self.edge_cap as f64 {
            return Err(Error::EdgeCapExceeded {
                expected,
                cap: self.edge_cap,
            });
        }
        Ok(())
    }
}

/// A generated instance.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub graph: BipartiteGraph,
    /// Image communities.
    pub truth: GroundTruth,
    /// Noisy site communities; images unlabeled.
    pub seeds: SeedLabels,
    /// Site communities before noise, indexed by site.
    pub site_communities: Vec<Label>,
}

pub fn site_key(s: usize) -> String {
    format!("s{s:07}.test")
}

pub fn image_key(i: usize) -> String {
    format!("img{i:09}")
}

struct Uniforms(ChaCha8Rng);

impl Uniforms {
    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

pub fn generate(params: &PlantedParams) -> Result<PlantedInstance> {
    params.validate()?;
    let mut rng = Uniforms(ChaCha8Rng::seed_from_u64(params.rng_seed));
    let community = |n: usize, adult: usize| if n < adult { Label::Adult } else { Label::Decent };

    let mut edges = Vec::with_capacity(params.expected_edges() as usize);
    for s in 0..params.site_count() {
        let site_side = community(s, params.adult_sites);
        for i in 0..params.image_count() {
            let p = if community(i, params.adult_images) == site_side {
                params.p_in
            } else {
                params.p_out
            };
            if rng.next() < p {
                edges.push((s as u32, i as u32));
            }
        }
    }

    let site_keys: Vec<String> = (0..params.site_count()).map(site_key).collect();
    let image_keys: Vec<String> = (0..params.image_count()).map(image_key).collect();
    let graph = BipartiteGraph::from_edges(site_keys, image_keys, edges)?;

    let site_communities: Vec<Label> = (0..params.site_count())
        .map(|s| community(s, params.adult_sites))
        .collect();
    let mut seeds = SeedLabels::unlabeled(graph.vertex_count());
    for (s, &label) in site_communities.iter().enumerate() {
        let flipped = rng.next() < params.label_noise;
        let seed = match (label, flipped) {
            (Label::Adult, false) | (Label::Decent, true) => Label::Adult,
            _ => Label::Decent,
        };
        seeds.set(graph.site_vertex(s), seed.into())?;
    }

    let truth = GroundTruth::from_pairs(
        (0..params.image_count()).map(|i| (image_key(i), community(i, params.adult_images))),
    )?;
    Ok(PlantedInstance {
        graph,
        truth,
        seeds,
        site_communities,
    })
}
