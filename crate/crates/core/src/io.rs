//! Text file formats.
//!
//! | file            | line format                                        |
//! |-----------------|----------------------------------------------------|
//! | edges           | `site_url TAB image_key [TAB width TAB height]`    |
//! | clusters        | `image_key TAB cluster_id`                         |
//! | exceptions      | `domain`                                           |
//! | seeds / truth   | `key TAB adult|decent`                             |
//! | scores          | `vertex_kind TAB vertex_key TAB F1 TAB F2`         |
//! | trace           | `iteration TAB update_norm [TAB objective]`        |
//! | verdicts        | `vertex_key TAB label TAB ratio TAB rank`          |
//! | curve           | `k TAB precision TAB recall`                       |
//!
//! Input files skip blank lines and lines starting with `#`. Floats are
//! written with 17 significant digits so they read back bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::classify::{Label, RankedVertex, Verdict};
use crate::error::{Error, Result};
use crate::evaluation::{GroundTruth, SweepPoint};
use crate::graph::{
    BipartiteGraph, ClusterMap, GraphBuilder, HostingExceptions, ImageMeta, IngestOptions,
    IngestSummary, RawRecord, VertexKind,
};
use crate::propagation::{IterationTrace, ScoreMatrix};

pub const SNAPSHOT_MAGIC: &str = "linkprop-graph";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "NA".into())
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Content lines of a text file as `(1-based line number, line)`.
fn content_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let mut text = String::new();
    open(path)?
        .read_to_string(&mut text)
        .map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim_end_matches('\r').to_string()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .collect())
}

/// Parses one edge-file line.
pub fn parse_edge_line(line: &str) -> std::result::Result<RawRecord, &'static str> {
    let fields: Vec<&str> = line.split('\t').collect();
    let (site, image) = match fields.as_slice() {
        [site, image] | [site, image, _, _] => (*site, *image),
        _ => return Err("expected 2 or 4 tab-separated fields"),
    };
    if site.trim().is_empty() || image.trim().is_empty() {
        return Err("empty field");
    }
    let meta = if let [_, _, w, h] = fields.as_slice() {
        let dim = |s: &str| s.trim().parse::<u32>().map_err(|_| "width/height must be nonnegative integers");
        Some(ImageMeta::new(dim(w)?, dim(h)?))
    } else {
        None
    };
    Ok(RawRecord {
        site: site.to_string(),
        image: image.trim().to_string(),
        meta,
    })
}

/// Streams an edge file into a graph. Malformed or non-UTF-8 lines are
/// counted as skipped records.
pub fn ingest_edge_file(path: &Path, options: &IngestOptions) -> Result<(BipartiteGraph, IngestSummary)> {
    let mut reader = open(path)?;
    let mut builder = GraphBuilder::new(options.clone());
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        let Ok(line) = std::str::from_utf8(&buf) else {
            builder.skip();
            continue;
        };
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_edge_line(line) {
            Ok(record) => builder.push(&record),
            Err(_) => builder.skip(),
        }
    }
    Ok(builder.finish())
}

pub fn read_cluster_map(path: &Path) -> Result<ClusterMap> {
    let mut map = ClusterMap::new();
    for (n, line) in content_lines(path)? {
        match line.split('\t').collect::<Vec<_>>().as_slice() {
            [image, cluster] if !image.trim().is_empty() && !cluster.trim().is_empty() => {
                map.insert(image.trim(), cluster.trim())
            }
            _ => return Err(Error::parse(path, n, "expected `image_key<TAB>cluster_id`")),
        }
    }
    Ok(map)
}

pub fn read_exceptions(path: &Path) -> Result<HostingExceptions> {
    let lines = content_lines(path)?;
    for (n, line) in &lines {
        HostingExceptions::from_domains([line.trim()])
            .map_err(|e| Error::parse(path, *n, e.to_string()))?;
    }
    HostingExceptions::from_domains(lines.iter().map(|(_, l)| l.trim()))
}

/// Reads `key<TAB>label` lines.
pub fn read_labels(path: &Path) -> Result<Vec<(String, Label)>> {
    content_lines(path)?
        .into_iter()
        .map(|(n, line)| match line.split('\t').collect::<Vec<_>>().as_slice() {
            [key, label] if !key.trim().is_empty() => label
                .parse::<Label>()
                .map(|l| (key.trim().to_string(), l))
                .map_err(|e| Error::parse(path, n, e.to_string())),
            _ => Err(Error::parse(path, n, "expected `key<TAB>adult|decent`")),
        })
        .collect()
}

pub fn read_truth(path: &Path) -> Result<GroundTruth> {
    GroundTruth::from_pairs(read_labels(path)?)
}

pub fn write_labels<'a, W, I>(mut w: W, labels: I) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, Label)>,
{
    for (key, label) in labels {
        writeln!(w, "{key}\t{label}")?;
    }
    w.flush()
}

pub fn write_snapshot<W: Write>(mut w: W, graph: &BipartiteGraph) -> std::io::Result<()> {
    writeln!(w, "{SNAPSHOT_MAGIC}\t{SNAPSHOT_VERSION}")?;
    writeln!(w, "sites\t{}", graph.site_count())?;
    writeln!(w, "images\t{}", graph.image_count())?;
    writeln!(w, "edges\t{}", graph.edge_count())?;
    for key in graph.site_keys() {
        writeln!(w, "site\t{key}")?;
    }
    for key in graph.image_keys() {
        writeln!(w, "image\t{key}")?;
    }
    for (s, i) in graph.edges() {
        writeln!(w, "edge\t{s}\t{i}")?;
    }
    w.flush()
}

pub fn read_snapshot<R: BufRead>(reader: R, path: &Path) -> Result<BipartiteGraph> {
    let mut lines = reader.lines().enumerate();
    let mut next = |expect: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(line))) => Ok((n + 1, line)),
            Some((_, Err(e))) => Err(Error::io(path, e)),
            None => Err(Error::parse(path, 0, format!("truncated snapshot, expected {expect}"))),
        }
    };
    let (n, header) = next("header")?;
    match header.split_once('\t') {
        Some((SNAPSHOT_MAGIC, version)) => {
            let version: u32 = version
                .parse()
                .map_err(|_| Error::parse(path, n, "bad snapshot version"))?;
            if version != SNAPSHOT_VERSION {
                return Err(Error::SnapshotVersion(version));
            }
        }
        _ => return Err(Error::parse(path, n, "not a linkprop graph snapshot")),
    }
    let mut count = |name: &str| -> Result<usize> {
        let (n, line) = next(name)?;
        match line.split_once('\t') {
            Some((tag, value)) if tag == name => value
                .parse()
                .map_err(|_| Error::parse(path, n, format!("bad {name} count"))),
            _ => Err(Error::parse(path, n, format!("expected `{name}<TAB>count`"))),
        }
    };
    let (sites, images, edges) = (count("sites")?, count("images")?, count("edges")?);
    let mut keys = |tag: &str, total: usize| -> Result<Vec<String>> {
        (0..total)
            .map(|_| {
                let (n, line) = next(tag)?;
                match line.split_once('\t') {
                    Some((t, key)) if t == tag => Ok(key.to_string()),
                    _ => Err(Error::parse(path, n, format!("expected `{tag}<TAB>key`"))),
                }
            })
            .collect()
    };
    let site_keys = keys("site", sites)?;
    let image_keys = keys("image", images)?;
    let mut pairs = Vec::with_capacity(edges);
    for _ in 0..edges {
        let (n, line) = next("edge")?;
        let fields: Vec<&str> = line.split('\t').collect();
        let pair = match fields.as_slice() {
            ["edge", s, i] => s.parse::<u32>().ok().zip(i.parse::<u32>().ok()),
            _ => None,
        };
        pairs.push(pair.ok_or_else(|| Error::parse(path, n, "expected `edge<TAB>site<TAB>image`"))?);
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(path, n + 1, "trailing data after edges"));
    }
    let graph = BipartiteGraph::from_edges(site_keys.clone(), image_keys.clone(), pairs)?;
    if graph.site_keys() != site_keys || graph.image_keys() != image_keys || graph.edge_count() != edges {
        return Err(Error::parse(path, 0, "snapshot is not in canonical order"));
    }
    Ok(graph)
}

pub fn save_snapshot(path: &Path, graph: &BipartiteGraph) -> Result<()> {
    write_snapshot(create(path)?, graph).map_err(|e| Error::io(path, e))
}

pub fn load_snapshot(path: &Path) -> Result<BipartiteGraph> {
    read_snapshot(open(path)?, path)
}

pub fn write_scores<W: Write>(mut w: W, graph: &BipartiteGraph, scores: &ScoreMatrix) -> std::io::Result<()> {
    for (v, [f1, f2]) in scores.rows().iter().enumerate() {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            graph.kind(v).as_str(),
            graph.vertex_key(v),
            fmt_f64(*f1),
            fmt_f64(*f2)
        )?;
    }
    w.flush()
}

/// Reads a score file; every vertex of `graph` must appear exactly once.
pub fn read_scores(path: &Path, graph: &BipartiteGraph) -> Result<ScoreMatrix> {
    let mut rows = vec![None; graph.vertex_count()];
    for (n, line) in content_lines(path)? {
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, key, f1, f2] = fields.as_slice() else {
            return Err(Error::parse(path, n, "expected 4 tab-separated fields"));
        };
        let kind: VertexKind = kind.parse().map_err(|e: Error| Error::parse(path, n, e.to_string()))?;
        let v = graph
            .vertex_of(kind, key)
            .ok_or_else(|| Error::parse(path, n, format!("unknown {} {key:?}", kind.as_str())))?;
        let value = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| Error::parse(path, n, format!("bad score {s:?}")))
        };
        if rows[v].replace([value(f1)?, value(f2)?]).is_some() {
            return Err(Error::parse(path, n, format!("duplicate vertex {key:?}")));
        }
    }
    let present = rows.iter().filter(|r| r.is_some()).count();
    if present != rows.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            actual: present,
        });
    }
    Ok(ScoreMatrix::from_rows(rows.into_iter().map(Option::unwrap).collect()))
}

pub fn write_trace<W: Write>(mut w: W, trace: &IterationTrace) -> std::io::Result<()> {
    for step in &trace.steps {
        write!(w, "{}\t{}", step.iteration, fmt_f64(step.update_norm))?;
        if let Some(obj) = step.objective {
            write!(w, "\t{}", fmt_f64(obj))?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn write_verdicts<W: Write>(
    mut w: W,
    graph: &BipartiteGraph,
    ranked: &[RankedVertex],
    verdicts: &[Verdict],
) -> std::io::Result<()> {
    for (r, v) in ranked.iter().zip(verdicts) {
        debug_assert_eq!(r.vertex, v.vertex);
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            graph.vertex_key(r.vertex),
            v.label,
            fmt_f64(r.ratio),
            r.rank
        )?;
    }
    w.flush()
}

pub fn write_curve<W: Write>(mut w: W, curve: &[SweepPoint]) -> std::io::Result<()> {
    for p in curve {
        writeln!(
            w,
            "{}\t{}\t{}",
            p.k,
            fmt_opt(p.report.precision),
            fmt_opt(p.report.recall)
        )?;
    }
    w.flush()
}
