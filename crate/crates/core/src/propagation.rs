//! Regularized label propagation on the degree-normalized adjacency
//! `A = D^-1/2 W D^-1/2`.
//!
//! The production path iterates `F <- alpha*A*F + (1 - alpha)*Y` from
//! `F = Y`. After the first step the update itself obeys
//! `dF <- alpha*A*dF`, so the engine carries the update vector forward and
//! adds it to `F`. One sparse product per iteration either way; the recorded
//! update norms then contract by `alpha` to rounding precision instead of
//! stalling at the noise floor of `F`.
//!
//! [`closed_form_solve`] computes the same fixed point by dense LU and exists
//! for cross-checking on small graphs.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::classify::Label;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Seed label of one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Seed {
    #[default]
    Unlabeled,
    Adult,
    Decent,
}

impl Seed {
    pub fn row(self) -> [f64; 2] {
        match self {
            Seed::Unlabeled => [0.0, 0.0],
            Seed::Adult => [1.0, 0.0],
            Seed::Decent => [0.0, 1.0],
        }
    }
}

impl From<Label> for Seed {
    fn from(label: Label) -> Self {
        match label {
            Label::Adult => Seed::Adult,
            Label::Decent => Seed::Decent,
        }
    }
}

/// Initial label matrix, one row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedLabels {
    rows: Vec<Seed>,
}

impl SeedLabels {
    pub fn unlabeled(vertices: usize) -> Self {
        Self {
            rows: vec![Seed::Unlabeled; vertices],
        }
    }

    pub fn from_rows(rows: Vec<Seed>) -> Self {
        Self { rows }
    }

    /// Labels sites of `graph` by key. Returns the labels and the number of
    /// keys that matched no site.
    pub fn from_site_labels<'a, I>(graph: &BipartiteGraph, labels: I) -> (Self, usize)
    where
        I: IntoIterator<Item = (&'a str, Label)>,
    {
        let mut seeds = Self::unlabeled(graph.vertex_count());
        let mut unknown = 0;
        for (key, label) in labels {
            match graph.site_index(key) {
                Some(s) => seeds.rows[graph.site_vertex(s)] = label.into(),
                None => unknown += 1,
            }
        }
        (seeds, unknown)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, v: usize) -> Seed {
        self.rows[v]
    }

    pub fn set(&mut self, v: usize, seed: Seed) -> Result<()> {
        let count = self.rows.len();
        let slot = self
            .rows
            .get_mut(v)
            .ok_or(Error::VertexOutOfRange { index: v, count })?;
        *slot = seed;
        Ok(())
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.rows
    }

    /// Same labels with one class removed.
    pub fn keep_only(&self, keep: Seed) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|&s| if s == keep { s } else { Seed::Unlabeled })
                .collect(),
        }
    }

    fn matrix(&self) -> Vec<[f64; 2]> {
        self.rows.iter().map(|s| s.row()).collect()
    }
}

/// Per-vertex (adultness, decentness) scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    rows: Vec<[f64; 2]>,
}

impl ScoreMatrix {
    pub fn zeros(vertices: usize) -> Self {
        Self {
            rows: vec![[0.0; 2]; vertices],
        }
    }

    pub fn from_rows(rows: Vec<[f64; 2]>) -> Self {
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    pub fn row(&self, v: usize) -> [f64; 2] {
        self.rows[v]
    }

    pub fn adultness(&self, v: usize) -> f64 {
        self.rows[v][0]
    }

    pub fn decentness(&self, v: usize) -> f64 {
        self.rows[v][1]
    }

    /// Largest absolute entrywise difference. Panics on length mismatch.
    pub fn max_abs_diff(&self, other: &ScoreMatrix) -> f64 {
        assert_eq!(self.len(), other.len());
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()])
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        frobenius(&self.rows)
    }
}

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_ITERATIONS: usize = 5;
pub const DEFAULT_EPSILON: f64 = 0.001;
pub const DEFAULT_K: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    /// Mixing weight in (0, 1); the regularizer is `mu = (1 - alpha) / alpha`.
    pub alpha: f64,
    pub iterations: usize,
    /// Stop early once an update's Frobenius norm falls to this value.
    pub residual_tolerance: Option<f64>,
    /// Ranking smoother for `F1 / (F2 + epsilon)`.
    pub epsilon: f64,
    /// Fraction of the ranked population labeled adult.
    pub k: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            iterations: DEFAULT_ITERATIONS,
            residual_tolerance: None,
            epsilon: DEFAULT_EPSILON,
            k: DEFAULT_K,
        }
    }
}

impl PropagationConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn mu(&self) -> f64 {
        mu_of(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if let Some(tol) = self.residual_tolerance {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "residual tolerance must be nonnegative, got {tol}"
                )));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        crate::classify::check_fraction(self.k)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn mu_of(alpha: f64) -> f64 {
    (1.0 - alpha) / alpha
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    /// 1-based iteration number.
    pub iteration: usize,
    /// `||F(n) - F(n-1)||` (Frobenius).
    pub update_norm: f64,
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub steps: Vec<TraceStep>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last_update_norm(&self) -> Option<f64> {
        self.steps.last().map(|s| s.update_norm)
    }

    /// Ratios of consecutive update norms, skipping pairs whose earlier norm
    /// is zero.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.steps
            .windows(2)
            .filter(|w| w[0].update_norm > 0.0)
            .map(|w| w[1].update_norm / w[0].update_norm)
            .collect()
    }
}

/// `A = D^-1/2 W D^-1/2` over a graph, applied without materializing `A`.
/// Rows of isolated vertices are zero.
pub struct NormalizedOperator<'g> {
    graph: &'g BipartiteGraph,
    inv_sqrt_degree: Vec<f64>,
}

const PAR_MIN_ROWS: usize = 4096;

impl<'g> NormalizedOperator<'g> {
    pub fn new(graph: &'g BipartiteGraph) -> Self {
        let inv_sqrt_degree = (0..graph.vertex_count())
            .map(|v| match graph.degree_unchecked(v) {
                0 => 0.0,
                d => 1.0 / (d as f64).sqrt(),
            })
            .collect();
        Self {
            graph,
            inv_sqrt_degree,
        }
    }

    /// `dst = scale * A * src`.
    pub fn apply_into(&self, src: &[[f64; 2]], dst: &mut [[f64; 2]], scale: f64) {
        let g = self.graph;
        let sites = g.site_count();
        let inv = &self.inv_sqrt_degree;
        let (site_rows, image_rows) = dst.split_at_mut(sites);
        let image_src = &src[sites..];
        let image_inv = &inv[sites..];
        site_rows
            .par_iter_mut()
            .with_min_len(PAR_MIN_ROWS)
            .enumerate()
            .for_each(|(s, out)| {
                *out = reduce(g.site_neighbors(s), image_src, image_inv, scale * inv[s]);
            });
        image_rows
            .par_iter_mut()
            .with_min_len(PAR_MIN_ROWS)
            .enumerate()
            .for_each(|(i, out)| {
                *out = reduce(g.image_neighbors(i), src, inv, scale * image_inv[i]);
            });
    }

    pub fn apply(&self, scores: &ScoreMatrix) -> Result<ScoreMatrix> {
        check_rows(self.graph, scores.len())?;
        let mut out = ScoreMatrix::zeros(scores.len());
        self.apply_into(&scores.rows, &mut out.rows, 1.0);
        Ok(out)
    }
}

#[inline]
fn reduce(neighbors: &[u32], src: &[[f64; 2]], inv: &[f64], factor: f64) -> [f64; 2] {
    let mut acc = [0.0f64; 2];
    for &j in neighbors {
        let j = j as usize;
        let w = inv[j];
        acc[0] += src[j][0] * w;
        acc[1] += src[j][1] * w;
    }
    [acc[0] * factor, acc[1] * factor]
}

/// Computes `A * F`.
pub fn apply_normalized_operator(graph: &BipartiteGraph, scores: &ScoreMatrix) -> Result<ScoreMatrix> {
    NormalizedOperator::new(graph).apply(scores)
}

/// Runs the iteration for `cfg.iterations` steps, or fewer when the residual
/// tolerance is reached.
pub fn propagate(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    cfg: &PropagationConfig,
) -> Result<(ScoreMatrix, IterationTrace)> {
    run(graph, seeds, cfg, false, |_, _| {})
}

/// Like [`propagate`], also recording the objective after every iteration.
pub fn propagate_with_objective(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    cfg: &PropagationConfig,
) -> Result<(ScoreMatrix, IterationTrace)> {
    run(graph, seeds, cfg, true, |_, _| {})
}

/// Like [`propagate`], handing every iterate `F(n)` to `observer`.
pub fn propagate_each<O>(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    cfg: &PropagationConfig,
    observer: O,
) -> Result<(ScoreMatrix, IterationTrace)>
where
    O: FnMut(usize, &ScoreMatrix),
{
    run(graph, seeds, cfg, false, observer)
}

fn run<O>(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    cfg: &PropagationConfig,
    with_objective: bool,
    mut observer: O,
) -> Result<(ScoreMatrix, IterationTrace)>
where
    O: FnMut(usize, &ScoreMatrix),
{
    cfg.validate()?;
    check_rows(graph, seeds.len())?;
    let alpha = cfg.alpha;
    let op = NormalizedOperator::new(graph);
    let y = seeds.matrix();
    let n = y.len();

    let mut scores = ScoreMatrix::from_rows(y.clone());
    let mut delta = vec![[0.0f64; 2]; n];
    let mut next_delta = vec![[0.0f64; 2]; n];
    let mut trace = IterationTrace::default();

    for iteration in 1..=cfg.iterations {
        if iteration == 1 {
            let mut first = vec![[0.0f64; 2]; n];
            op.apply_into(&y, &mut first, alpha);
            for ((f, yv), (d, cur)) in first
                .iter_mut()
                .zip(&y)
                .zip(delta.iter_mut().zip(&scores.rows))
            {
                f[0] += (1.0 - alpha) * yv[0];
                f[1] += (1.0 - alpha) * yv[1];
                *d = [f[0] - cur[0], f[1] - cur[1]];
            }
            scores.rows = first;
        } else {
            op.apply_into(&delta, &mut next_delta, alpha);
            std::mem::swap(&mut delta, &mut next_delta);
            for (f, d) in scores.rows.iter_mut().zip(&delta) {
                f[0] += d[0];
                f[1] += d[1];
            }
        }
        if let Some(vertex) = scores
            .rows
            .iter()
            .position(|r| !(r[0].is_finite() && r[1].is_finite()))
        {
            return Err(Error::NonFinite { vertex, iteration });
        }
        let update_norm = frobenius(&delta);
        let objective = if with_objective {
            Some(objective_unchecked(graph, &op, &scores.rows, &y, mu_of(alpha)))
        } else {
            None
        };
        trace.steps.push(TraceStep {
            iteration,
            update_norm,
            objective,
        });
        observer(iteration, &scores);
        if cfg.residual_tolerance.is_some_and(|tol| update_norm <= tol) {
            break;
        }
    }
    Ok((scores, trace))
}

/// Largest graph [`closed_form_solve`] accepts.
pub const DENSE_SOLVER_CAP: usize = 2000;

/// `F* = (1 - alpha)(I - alpha*A)^-1 Y` by dense LU factorization.
pub fn closed_form_solve(graph: &BipartiteGraph, seeds: &SeedLabels, alpha: f64) -> Result<ScoreMatrix> {
    closed_form_solve_capped(graph, seeds, alpha, DENSE_SOLVER_CAP)
}

pub fn closed_form_solve_capped(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    alpha: f64,
    cap: usize,
) -> Result<ScoreMatrix> {
    check_alpha(alpha)?;
    check_rows(graph, seeds.len())?;
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { vertices: n, cap });
    }
    let op = NormalizedOperator::new(graph);
    let mut system = DMatrix::<f64>::identity(n, n);
    for (s, i) in graph.edges() {
        let (a, b) = (graph.site_vertex(s), graph.image_vertex(i));
        let w = -alpha * op.inv_sqrt_degree[a] * op.inv_sqrt_degree[b];
        system[(a, b)] = w;
        system[(b, a)] = w;
    }
    let rhs = DMatrix::from_fn(n, 2, |r, c| seeds.get(r).row()[c]);
    let solution = system.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok(ScoreMatrix::from_rows(
        (0..n)
            .map(|r| [(1.0 - alpha) * solution[(r, 0)], (1.0 - alpha) * solution[(r, 1)]])
            .collect(),
    ))
}

/// The propagation criterion
/// `sum over edges ||F_s/sqrt(D_s) - F_i/sqrt(D_i)||^2 + mu * sum_v ||F_v - Y_v||^2`
/// with `mu = (1 - alpha) / alpha`. Each undirected edge is counted once.
pub fn objective(
    graph: &BipartiteGraph,
    scores: &ScoreMatrix,
    seeds: &SeedLabels,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_rows(graph, scores.len())?;
    check_rows(graph, seeds.len())?;
    let op = NormalizedOperator::new(graph);
    Ok(objective_unchecked(
        graph,
        &op,
        &scores.rows,
        &seeds.matrix(),
        mu_of(alpha),
    ))
}

fn objective_unchecked(
    graph: &BipartiteGraph,
    op: &NormalizedOperator<'_>,
    f: &[[f64; 2]],
    y: &[[f64; 2]],
    mu: f64,
) -> f64 {
    let inv = &op.inv_sqrt_degree;
    let smoothness: f64 = graph
        .edges()
        .map(|(s, i)| {
            let (a, b) = (graph.site_vertex(s), graph.image_vertex(i));
            let d0 = f[a][0] * inv[a] - f[b][0] * inv[b];
            let d1 = f[a][1] * inv[a] - f[b][1] * inv[b];
            d0 * d0 + d1 * d1
        })
        .sum();
    let fit: f64 = f
        .iter()
        .zip(y)
        .map(|(fv, yv)| {
            let d0 = fv[0] - yv[0];
            let d1 = fv[1] - yv[1];
            d0 * d0 + d1 * d1
        })
        .sum();
    smoothness + mu * fit
}

fn check_rows(graph: &BipartiteGraph, rows: usize) -> Result<()> {
    if rows == graph.vertex_count() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            actual: rows,
        })
    }
}

fn frobenius(rows: &[[f64; 2]]) -> f64 {
    rows.iter()
        .map(|r| r[0] * r[0] + r[1] * r[1])
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i:03}")).collect()
    }

    fn single_edge() -> BipartiteGraph {
        BipartiteGraph::from_edges(vec!["s.com".into()], vec!["i".into()], [(0, 0)]).unwrap()
    }

    fn adult_site_seed() -> SeedLabels {
        SeedLabels::from_rows(vec![Seed::Adult, Seed::Unlabeled])
    }

    fn cfg(alpha: f64, iterations: usize) -> PropagationConfig {
        PropagationConfig::default()
            .with_alpha(alpha)
            .with_iterations(iterations)
    }

    #[test]
    fn operator_swaps_across_single_edge() {
        let f = ScoreMatrix::from_rows(vec![[1.0, 0.0], [0.0, 0.0]]);
        let out = apply_normalized_operator(&single_edge(), &f).unwrap();
        assert_eq!(out.rows(), &[[0.0, 0.0], [1.0, 0.0]]);
    }

    #[test]
    fn operator_is_zero_on_edgeless_graph() {
        let g = BipartiteGraph::isolated(keys("s", 2), keys("i", 3)).unwrap();
        let f = ScoreMatrix::from_rows(vec![[0.3, 0.7]; 5]);
        let out = apply_normalized_operator(&g, &f).unwrap();
        assert_eq!(out, ScoreMatrix::zeros(5));
    }

    #[test]
    fn operator_on_star() {
        // hub degree 4, leaves degree 1: weight 1 / (sqrt(4) * sqrt(1)) = 0.5
        let g = BipartiteGraph::from_edges(
            vec!["hub.com".into()],
            keys("i", 4),
            (0..4).map(|i| (0, i)),
        )
        .unwrap();
        let mut rows = vec![[0.0, 0.0]; 5];
        rows[0] = [1.0, 0.0];
        let out = apply_normalized_operator(&g, &ScoreMatrix::from_rows(rows)).unwrap();
        assert_eq!(out.row(0), [0.0, 0.0]);
        for v in 1..5 {
            assert_eq!(out.row(v), [0.5, 0.0]);
        }
    }

    #[test]
    fn operator_rejects_wrong_dimensions() {
        let err = apply_normalized_operator(&single_edge(), &ScoreMatrix::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, actual: 3 }));
    }

    #[test]
    fn edgeless_graph_settles_at_scaled_seeds() {
        let g = BipartiteGraph::isolated(keys("s", 2), keys("i", 1)).unwrap();
        let seeds = SeedLabels::from_rows(vec![Seed::Adult, Seed::Decent, Seed::Unlabeled]);
        for n in [1, 2, 7] {
            let (f, _) = propagate(&g, &seeds, &cfg(0.3, n)).unwrap();
            assert_eq!(f.rows(), &[[0.7, 0.0], [0.0, 0.7], [0.0, 0.0]]);
        }
        let closed = closed_form_solve(&g, &seeds, 0.3).unwrap();
        assert!(closed.max_abs_diff(&ScoreMatrix::from_rows(vec![[0.7, 0.0], [0.0, 0.7], [0.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn single_edge_fixed_point() {
        // (1 - a)(I - aA)^-1 Y with a = 0.5: (4/3)[[1, .5], [.5, 1]] * (1, 0) * 0.5
        let expected = ScoreMatrix::from_rows(vec![[2.0 / 3.0, 0.0], [1.0 / 3.0, 0.0]]);
        let closed = closed_form_solve(&single_edge(), &adult_site_seed(), 0.5).unwrap();
        assert!(closed.max_abs_diff(&expected) <= 1e-12);
        let (iterated, _) = propagate(&single_edge(), &adult_site_seed(), &cfg(0.5, 80)).unwrap();
        assert!(iterated.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn one_iteration_is_one_unrolled_step() {
        let g = BipartiteGraph::from_edges(
            keys("s", 3),
            keys("i", 4),
            [(0, 0), (0, 1), (1, 1), (1, 2), (2, 3), (2, 0)],
        )
        .unwrap();
        let seeds = SeedLabels::from_rows(vec![
            Seed::Adult,
            Seed::Decent,
            Seed::Adult,
            Seed::Unlabeled,
            Seed::Unlabeled,
            Seed::Unlabeled,
            Seed::Unlabeled,
        ]);
        let y = ScoreMatrix::from_rows(seeds.matrix());
        let ay = apply_normalized_operator(&g, &y).unwrap();
        let (f, trace) = propagate(&g, &seeds, &cfg(0.5, 1)).unwrap();
        for v in 0..g.vertex_count() {
            for c in 0..2 {
                assert_eq!(f.row(v)[c], 0.5 * ay.row(v)[c] + 0.5 * y.row(v)[c]);
            }
        }
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn residual_tolerance_stops_early() {
        let mut c = cfg(0.5, 500);
        c.residual_tolerance = Some(1e-6);
        let (_, trace) = propagate(&single_edge(), &adult_site_seed(), &c).unwrap();
        assert!(trace.len() < 500);
        assert!(trace.last_update_norm().unwrap() <= 1e-6);
        let before = trace.steps[trace.len() - 2].update_norm;
        assert!(before > 1e-6);
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0.0, 5).validate().is_err());
        assert!(cfg(1.0, 5).validate().is_err());
        assert!(cfg(0.5, 0).validate().is_err());
        assert!(PropagationConfig { epsilon: 0.0, ..Default::default() }.validate().is_err());
        assert!(PropagationConfig { k: 1.0, ..Default::default() }.validate().is_err());
        assert!(PropagationConfig { residual_tolerance: Some(-1.0), ..Default::default() }.validate().is_err());
        assert!(PropagationConfig::default().validate().is_ok());
        assert!((cfg(0.2, 1).mu() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn propagate_rejects_mismatched_seeds() {
        let err = propagate(&single_edge(), &SeedLabels::unlabeled(3), &cfg(0.5, 1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn objective_examples() {
        let g = BipartiteGraph::isolated(keys("s", 1), keys("i", 1)).unwrap();
        let y = SeedLabels::from_rows(vec![Seed::Adult, Seed::Unlabeled]);
        let f = ScoreMatrix::from_rows(y.matrix());
        assert_eq!(objective(&g, &f, &y, 0.5).unwrap(), 0.0);

        // mu = 1 at alpha = 0.5; edge term ||(1,0) - (0,0)||^2 = 1
        let f = ScoreMatrix::from_rows(adult_site_seed().matrix());
        assert_eq!(objective(&single_edge(), &f, &adult_site_seed(), 0.5).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_refuses_large_graphs() {
        let g = BipartiteGraph::isolated(keys("s", 3), keys("i", 3)).unwrap();
        let err = closed_form_solve_capped(&g, &SeedLabels::unlabeled(6), 0.5, 5).unwrap_err();
        assert!(matches!(err, Error::DenseCapExceeded { vertices: 6, cap: 5 }));
    }

    #[test]
    fn symmetric_sites_get_equal_scores() {
        let g = BipartiteGraph::from_edges(keys("s", 2), keys("i", 1), [(0, 0), (1, 0)]).unwrap();
        let seeds = SeedLabels::from_rows(vec![Seed::Adult, Seed::Adult, Seed::Unlabeled]);
        let f = closed_form_solve(&g, &seeds, 0.5).unwrap();
        assert_eq!(f.row(0), f.row(1));
    }

    #[test]
    fn site_labels_by_key() {
        let g = BipartiteGraph::from_edges(keys("s", 2), keys("i", 1), [(0, 0)]).unwrap();
        let (seeds, unknown) =
            SeedLabels::from_site_labels(&g, [("s001", Label::Decent), ("nope.com", Label::Adult)]);
        assert_eq!(unknown, 1);
        assert_eq!(seeds.seeds(), &[Seed::Unlabeled, Seed::Decent, Seed::Unlabeled]);
    }
}
