//! Ratio ranking, top-k cut and the any-adult-neighbour baseline.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::propagation::{ScoreMatrix, Seed, SeedLabels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Adult,
    Decent,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Adult => "adult",
            Label::Decent => "decent",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adult" | "1" => Ok(Label::Adult),
            "decent" | "0" => Ok(Label::Decent),
            other => Err(Error::InvalidParameter(format!("unknown label {other:?}"))),
        }
    }
}

/// Which vertices are ranked and cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Population {
    /// The image partition only.
    #[default]
    Images,
    /// Sites and images together.
    All,
}

impl Population {
    pub fn vertices(self, graph: &BipartiteGraph) -> Vec<usize> {
        match self {
            Population::Images => graph.image_vertices().collect(),
            Population::All => (0..graph.vertex_count()).collect(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Population::Images => "images",
            Population::All => "all",
        }
    }
}

impl FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "images" => Ok(Population::Images),
            "all" => Ok(Population::All),
            other => Err(Error::InvalidParameter(format!(
                "population must be `images` or `all`, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedVertex {
    pub vertex: usize,
    pub ratio: f64,
    /// 1-based position.
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub vertex: usize,
    pub label: Label,
}

/// Orders `population` by `F1 / (F2 + epsilon)` descending. Ties go to the
/// lower vertex index, which within a partition is the lower key.
pub fn rank(scores: &ScoreMatrix, population: &[usize], epsilon: f64) -> Result<Vec<RankedVertex>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if population.is_empty() {
        return Err(Error::EmptyInput("ranking population".into()));
    }
    if let Some(&v) = population.iter().find(|&&v| v >= scores.len()) {
        return Err(Error::VertexOutOfRange {
            index: v,
            count: scores.len(),
        });
    }
    let mut ranked: Vec<RankedVertex> = population
        .iter()
        .map(|&vertex| {
            let [adult, decent] = scores.row(vertex);
            RankedVertex {
                vertex,
                ratio: adult / (decent + epsilon),
                rank: 0,
            }
        })
        .collect();
    ranked.sort_unstable_by(|a, b| match b.ratio.total_cmp(&a.ratio) {
        Ordering::Equal => a.vertex.cmp(&b.vertex),
        other => other,
    });
    for (pos, r) in ranked.iter_mut().enumerate() {
        r.rank = pos + 1;
    }
    Ok(ranked)
}

pub(crate) fn check_fraction(k: f64) -> Result<()> {
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("k must lie in (0, 1), got {k}")))
    }
}

/// `floor(population * k)`, tolerant of `k` carrying decimal rounding error
/// (0.29 * 100 evaluates to 28.999999999999996 in binary floating point).
pub fn adult_count(population: usize, k: f64) -> usize {
    let exact = population as f64 * k;
    ((exact * (1.0 + 1e-12)).floor() as usize).min(population)
}

/// Labels the first `floor(len * k)` ranked vertices adult, the rest decent.
pub fn classify_top_k(ranked: &[RankedVertex], k: f64) -> Result<Vec<Verdict>> {
    check_fraction(k)?;
    let cut = adult_count(ranked.len(), k);
    Ok(ranked
        .iter()
        .enumerate()
        .map(|(pos, r)| Verdict {
            vertex: r.vertex,
            label: if pos < cut { Label::Adult } else { Label::Decent },
        })
        .collect())
}

/// An image is adult iff at least one linking site is seeded adult.
pub fn baseline_classify(graph: &BipartiteGraph, seeds: &SeedLabels) -> Result<Vec<Verdict>> {
    if seeds.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            actual: seeds.len(),
        });
    }
    Ok((0..graph.image_count())
        .map(|i| {
            let adult = graph
                .image_neighbors(i)
                .iter()
                .any(|&s| seeds.get(graph.site_vertex(s as usize)) == Seed::Adult);
            Verdict {
                vertex: graph.image_vertex(i),
                label: if adult { Label::Adult } else { Label::Decent },
            }
        })
        .collect())
}
