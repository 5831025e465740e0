//! Precision/recall against hand-labeled images, k sweeps and the baseline
//! comparison.

use std::collections::{BTreeMap, HashMap};

use crate::classify::{self, Label, Population, Verdict};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, ClusterMap, VertexKind};
use crate::propagation::{self, PropagationConfig, ScoreMatrix, SeedLabels};

/// Default cut fractions for the PR curve.
pub const DEFAULT_K_GRID: [f64; 8] = [0.01, 0.02, 0.03, 0.04, 0.06, 0.08, 0.10, 0.12];

/// `0.01, 0.02, ..., 0.99`.
pub fn fine_k_grid() -> Vec<f64> {
    (1..100).map(|p| p as f64 / 100.0).collect()
}

/// Manual image labels, keyed by image key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: BTreeMap<String, Label>,
    clusters: Option<ClusterMap>,
}

impl GroundTruth {
    pub fn from_pairs<I, K>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Label)>,
        K: Into<String>,
    {
        let mut labels = BTreeMap::new();
        for (key, label) in pairs {
            let key = key.into();
            if labels.insert(key.clone(), label).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate ground-truth key {key:?}")));
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput("ground truth".into()));
        }
        Ok(Self {
            labels,
            clusters: None,
        })
    }

    /// Looks images up through a cluster map, so each labeled image is judged
    /// by the verdict of its cluster vertex.
    pub fn with_clusters(mut self, clusters: ClusterMap) -> Self {
        self.clusters = Some(clusters);
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<Label> {
        self.labels.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Label)> {
        self.labels.iter().map(|(k, &l)| (k.as_str(), l))
    }

    pub fn positives(&self) -> usize {
        self.labels.values().filter(|&&l| l == Label::Adult).count()
    }

    fn vertex_key<'a>(&'a self, key: &'a str) -> &'a str {
        match &self.clusters {
            Some(map) => map.cluster_of(key),
            None => key,
        }
    }
}

/// Confusion counts plus the two ratios. A ratio with a zero denominator
/// is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        Self {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            true_negatives: tn,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
        }
    }

    pub fn evaluated(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }

    pub fn predicted_adult(&self) -> usize {
        self.true_positives + self.false_positives
    }
}

/// Scores keyed verdicts against `truth`. Every truth entry is evaluated;
/// one without a verdict counts as classified decent. Verdicts for keys
/// outside the truth set are ignored. Fails if no truth key has a verdict.
pub fn precision_recall<'a, I>(verdicts: I, truth: &GroundTruth) -> Result<EvalReport>
where
    I: IntoIterator<Item = (&'a str, Label)>,
{
    let predicted: HashMap<&str, Label> = verdicts.into_iter().collect();
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    let mut covered = 0usize;
    for (key, actual) in truth.iter() {
        let guess = match predicted.get(truth.vertex_key(key)) {
            Some(&label) => {
                covered += 1;
                label
            }
            None => Label::Decent,
        };
        match (guess, actual) {
            (Label::Adult, Label::Adult) => tp += 1,
            (Label::Adult, Label::Decent) => fp += 1,
            (Label::Decent, Label::Adult) => fn_ += 1,
            (Label::Decent, Label::Decent) => tn += 1,
        }
    }
    if covered == 0 {
        return Err(Error::EmptyEvaluation);
    }
    Ok(EvalReport::from_counts(tp, fp, fn_, tn))
}

/// Image verdicts paired with their keys. Site verdicts are dropped.
pub fn keyed_verdicts<'g>(
    graph: &'g BipartiteGraph,
    verdicts: &'g [Verdict],
) -> impl Iterator<Item = (&'g str, Label)> + 'g {
    verdicts
        .iter()
        .filter(move |v| graph.kind(v.vertex) == VertexKind::Image)
        .map(move |v| (graph.vertex_key(v.vertex), v.label))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub k: f64,
    pub report: EvalReport,
}

/// Ranks `population` once and evaluates the top-k cut for every `k`.
pub fn pr_sweep(
    graph: &BipartiteGraph,
    scores: &ScoreMatrix,
    population: Population,
    truth: &GroundTruth,
    k_grid: &[f64],
    epsilon: f64,
) -> Result<Vec<SweepPoint>> {
    for &k in k_grid {
        classify::check_fraction(k)?;
    }
    let members = population.vertices(graph);
    let ranked = classify::rank(scores, &members, epsilon)?;
    let mut position = vec![usize::MAX; graph.vertex_count()];
    for (pos, r) in ranked.iter().enumerate() {
        position[r.vertex] = pos;
    }

    let mut adult_positions = Vec::new();
    let mut decent_positions = Vec::new();
    let (mut adults, mut decents) = (0usize, 0usize);
    for (key, actual) in truth.iter() {
        let pos = graph
            .image_index(truth.vertex_key(key))
            .map(|i| position[graph.image_vertex(i)])
            .filter(|&p| p != usize::MAX);
        match actual {
            Label::Adult => adults += 1,
            Label::Decent => decents += 1,
        }
        if let Some(p) = pos {
            match actual {
                Label::Adult => adult_positions.push(p),
                Label::Decent => decent_positions.push(p),
            }
        }
    }
    if adult_positions.is_empty() && decent_positions.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    adult_positions.sort_unstable();
    decent_positions.sort_unstable();

    Ok(k_grid
        .iter()
        .map(|&k| {
            let cut = classify::adult_count(ranked.len(), k);
            let tp = adult_positions.partition_point(|&p| p < cut);
            let fp = decent_positions.partition_point(|&p| p < cut);
            SweepPoint {
                k,
                report: EvalReport::from_counts(tp, fp, adults - tp, decents - fp),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineComparison {
    pub baseline: EvalReport,
    /// The sweep point matched to the baseline's precision.
    pub matched: SweepPoint,
    pub curve: Vec<SweepPoint>,
    /// Propagation recall minus baseline recall at the matched point.
    pub recall_delta: f64,
    /// `recall_delta / baseline recall`, when the baseline recall is nonzero.
    pub relative_recall_gain: Option<f64>,
}

/// Picks the sweep point whose precision is closest to `target`, preferring
/// points at or above it; among equals the higher recall wins.
pub fn match_precision(curve: &[SweepPoint], target: f64) -> Option<SweepPoint> {
    let with_precision = || curve.iter().filter_map(|p| p.report.precision.map(|pr| (p, pr)));
    let better = |a: &(&SweepPoint, f64), b: &(&SweepPoint, f64)| {
        let (da, db) = ((a.1 - target).abs(), (b.1 - target).abs());
        da.total_cmp(&db).then_with(|| {
            b.0.report
                .recall
                .unwrap_or(0.0)
                .total_cmp(&a.0.report.recall.unwrap_or(0.0))
        })
    };
    with_precision()
        .filter(|&(_, pr)| pr >= target)
        .min_by(better)
        .or_else(|| with_precision().min_by(better))
        .map(|(p, _)| *p)
}

/// Runs the baseline and the propagation pipeline on the same inputs and
/// reports propagation at the baseline's precision.
pub fn compare_to_baseline(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    truth: &GroundTruth,
    cfg: &PropagationConfig,
    population: Population,
    k_grid: &[f64],
) -> Result<BaselineComparison> {
    if truth.positives() == 0 {
        return Err(Error::Undefined("recall needs at least one adult ground-truth image"));
    }
    let baseline_verdicts = classify::baseline_classify(graph, seeds)?;
    let baseline = precision_recall(keyed_verdicts(graph, &baseline_verdicts), truth)?;
    let target = baseline
        .precision
        .ok_or(Error::Undefined("baseline labeled no evaluated image adult"))?;

    let (scores, _) = propagation::propagate(graph, seeds, cfg)?;
    let curve = pr_sweep(graph, &scores, population, truth, k_grid, cfg.epsilon)?;
    let matched = match_precision(&curve, target)
        .ok_or(Error::Undefined("no sweep point labeled any evaluated image adult"))?;

    let base_recall = baseline.recall.unwrap_or(0.0);
    let recall_delta = matched.report.recall.unwrap_or(0.0) - base_recall;
    Ok(BaselineComparison {
        baseline,
        matched,
        curve,
        recall_delta,
        relative_recall_gain: (base_recall > 0.0).then(|| recall_delta / base_recall),
    })
}
