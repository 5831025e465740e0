//! Semi-supervised classification of images from the sites that link to them.
//!
//! Sites carry (possibly noisy) adult/decent seed labels; images start
//! unlabeled. Scores spread across the bipartite site-image graph by
//! regularized label propagation, and images are ranked by the ratio of
//! their adultness to decentness scores.
//!
//! | module          | role                                                   |
//! |-----------------|--------------------------------------------------------|
//! | [`graph`]       | URL normalization, record ingestion, sparse graph      |
//! | [`propagation`] | normalized operator, iteration, dense oracle, objective |
//! | [`classify`]    | ratio ranking, top-k cut, any-adult-link baseline      |
//! | [`evaluation`]  | precision/recall, k sweeps, baseline comparison        |
//! | [`synth`]       | planted-partition instances                            |
//! | [`io`]          | text file formats                                      |
//! | [`cli`]         | the `linkprop` command                                 |
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classify;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod propagation;
pub mod synth;

pub use classify::{Label, Population, RankedVertex, Verdict};
pub use error::{Error, Result};
pub use evaluation::{EvalReport, GroundTruth};
pub use graph::{BipartiteGraph, HostingExceptions, IngestOptions, RawRecord};
pub use propagation::{IterationTrace, PropagationConfig, ScoreMatrix, Seed, SeedLabels};
pub use synth::PlantedParams;
