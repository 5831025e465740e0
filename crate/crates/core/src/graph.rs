//! Site/image link graph: URL normalization, record ingestion and the
//! compressed bipartite adjacency everything else runs on.
//!
//! Vertices are addressed by a single global index. Sites occupy
//! `0..site_count` and images `site_count..vertex_count`; within each
//! partition indices follow ascending key order, so a graph is fully
//! determined by its key sets and edge set regardless of input order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A normalized website identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteKey(String);

impl SiteKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for SiteKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Second-level domains whose subdomains stay distinct sites
/// (`user1.livejournal.com` and `user2.livejournal.com`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HostingExceptions {
    domains: HashSet<String>,
}

impl HostingExceptions {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the list from raw entries. Each entry is reduced to a bare
    /// lowercase host and must have at most two labels.
    pub fn from_domains<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut domains = HashSet::new();
        for entry in entries {
            let raw = entry.as_ref();
            let host = extract_host(raw)?;
            if host.split('.').count() > 2 {
                return Err(Error::InvalidParameter(format!(
                    "hosting exception {raw:?} is not a second-level domain"
                )));
            }
            domains.insert(host);
        }
        Ok(Self { domains })
    }

    pub fn contains(&self, domain: &str) -> bool {
        self.domains.contains(domain)
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }
}

/// Reduces a URL or bare host to its site key: the last two labels of the
/// lowercase host, or the whole host when those two labels are a listed
/// hosting.
pub fn normalize_site_url(raw: &str, exceptions: &HostingExceptions) -> Result<SiteKey> {
    let host = extract_host(raw)?;
    if is_ipv4(&host) {
        return Ok(SiteKey(host));
    }
    let labels: Vec<&str> = host.split('.').collect();
    if labels.len() <= 2 {
        return Ok(SiteKey(host));
    }
    let suffix = labels[labels.len() - 2..].join(".");
    if exceptions.contains(&suffix) {
        Ok(SiteKey(host))
    } else {
        Ok(SiteKey(suffix))
    }
}

fn reject(raw: &str, reason: &'static str) -> Error {
    Error::RejectedRecord {
        raw: raw.to_string(),
        reason,
    }
}

fn extract_host(raw: &str) -> Result<String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(reject(raw, "empty site"));
    }
    let rest = match trimmed.find("://") {
        Some(pos) => &trimmed[pos + 3..],
        None => trimmed.strip_prefix("//").unwrap_or(trimmed),
    };
    let authority = rest
        .split(['/', '?', '#'])
        .next()
        .unwrap_or_default();
    let authority = authority.rsplit('@').next().unwrap_or_default();
    if authority.starts_with('[') {
        return Err(reject(raw, "IPv6 literal hosts are not supported"));
    }
    let host = match authority.rsplit_once(':') {
        Some((host, port)) if port.chars().all(|c| c.is_ascii_digit()) => host,
        Some(_) => return Err(reject(raw, "malformed port")),
        None => authority,
    };
    let host = host.trim_end_matches('.').to_ascii_lowercase();
    if host.is_empty() {
        return Err(reject(raw, "no host"));
    }
    let valid = host.split('.').all(|label| {
        !label.is_empty()
            && label
                .chars()
                .all(|c| c.is_alphanumeric() || c == '-' || c == '_')
    });
    if !valid {
        return Err(reject(raw, "malformed host"));
    }
    Ok(host)
}

fn is_ipv4(host: &str) -> bool {
    let labels: Vec<&str> = host.split('.').collect();
    labels.len() == 4
        && labels
            .iter()
            .all(|l| !l.is_empty() && l.len() <= 3 && l.chars().all(|c| c.is_ascii_digit()))
}

/// Optional pixel dimensions attached to a link record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageMeta {
    pub width: Option<u32>,
    pub height: Option<u32>,
}

impl ImageMeta {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width: Some(width),
            height: Some(height),
        }
    }

    /// Pixel area, known only when both dimensions are.
    pub fn area(&self) -> Option<u64> {
        Some(u64::from(self.width?) * u64::from(self.height?))
    }
}

/// Default small-image threshold, 100×50 pixels.
pub const DEFAULT_MIN_AREA: u64 = 100 * 50;

/// Image key → cluster id. Images without an entry are their own cluster.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterMap {
    map: HashMap<String, String>,
}

impl ClusterMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, image: impl Into<String>, cluster: impl Into<String>) {
        self.map.insert(image.into(), cluster.into());
    }

    pub fn cluster_of<'a>(&'a self, image: &'a str) -> &'a str {
        self.map.get(image).map(String::as_str).unwrap_or(image)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for ClusterMap {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut map = ClusterMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

/// One raw link from a page on `site` to `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub site: String,
    pub image: String,
    pub meta: Option<ImageMeta>,
}

impl RawRecord {
    pub fn new(site: impl Into<String>, image: impl Into<String>) -> Self {
        Self {
            site: site.into(),
            image: image.into(),
            meta: None,
        }
    }

    pub fn with_meta(mut self, width: u32, height: u32) -> Self {
        self.meta = Some(ImageMeta::new(width, height));
        self
    }
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub exceptions: HostingExceptions,
    pub clusters: ClusterMap,
    pub min_area: u64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            exceptions: HostingExceptions::default(),
            clusters: ClusterMap::default(),
            min_area: DEFAULT_MIN_AREA,
        }
    }
}

/// Counters reported after ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestSummary {
    pub records_read: u64,
    pub records_skipped: u64,
    pub small_image_records: u64,
    pub small_images: u64,
    pub duplicate_edges: u64,
    pub imageless_sites_dropped: u64,
    pub sites: u64,
    pub images: u64,
    pub edges: u64,
}

impl IngestSummary {
    /// Refreshes the vertex and edge counts from a (possibly pruned) graph.
    pub fn record_graph(&mut self, graph: &BipartiteGraph) {
        self.sites = graph.site_count() as u64;
        self.images = graph.image_count() as u64;
        self.edges = graph.edge_count() as u64;
    }
}

impl fmt::Display for IngestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records_read={}", self.records_read)?;
        writeln!(f, "records_skipped={}", self.records_skipped)?;
        writeln!(f, "small_image_records={}", self.small_image_records)?;
        writeln!(f, "small_images={}", self.small_images)?;
        writeln!(f, "duplicate_edges={}", self.duplicate_edges)?;
        writeln!(f, "imageless_sites_dropped={}", self.imageless_sites_dropped)?;
        writeln!(f, "sites={}", self.sites)?;
        writeln!(f, "images={}", self.images)?;
        write!(f, "edges={}", self.edges)
    }
}

/// Accumulates link records. Builders fed disjoint shards of a stream can be
/// merged; the finished graph depends only on the union of their records.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    options: IngestOptions,
    sites: Interner,
    images: Interner,
    small: HashSet<u32>,
    pairs: Vec<(u32, u32)>,
    records_read: u64,
    records_skipped: u64,
    small_image_records: u64,
}

impl GraphBuilder {
    pub fn new(options: IngestOptions) -> Self {
        Self {
            options,
            sites: Interner::default(),
            images: Interner::default(),
            small: HashSet::new(),
            pairs: Vec::new(),
            records_read: 0,
            records_skipped: 0,
            small_image_records: 0,
        }
    }

    /// Adds one record; a record that cannot be normalized is counted as
    /// skipped.
    pub fn push(&mut self, record: &RawRecord) {
        self.records_read += 1;
        if record.image.trim().is_empty() {
            self.records_skipped += 1;
            return;
        }
        let site = match normalize_site_url(&record.site, &self.options.exceptions) {
            Ok(site) => site,
            Err(_) => {
                self.records_skipped += 1;
                return;
            }
        };
        let site = self.sites.intern(site.as_str());
        let image = self.images.intern(record.image.trim());
        if let Some(area) = record.meta.and_then(|m| m.area()) {
            if area < self.options.min_area {
                self.small_image_records += 1;
                self.small.insert(image);
                return;
            }
        }
        self.pairs.push((site, image));
    }

    /// Counts an unreadable record.
    pub fn skip(&mut self) {
        self.records_read += 1;
        self.records_skipped += 1;
    }

    pub fn merge(&mut self, other: GraphBuilder) {
        let site_map: Vec<u32> = other
            .sites
            .keys
            .iter()
            .map(|k| self.sites.intern(k))
            .collect();
        let image_map: Vec<u32> = other
            .images
            .keys
            .iter()
            .map(|k| self.images.intern(k))
            .collect();
        self.pairs.extend(
            other
                .pairs
                .into_iter()
                .map(|(s, i)| (site_map[s as usize], image_map[i as usize])),
        );
        self.small
            .extend(other.small.into_iter().map(|i| image_map[i as usize]));
        self.records_read += other.records_read;
        self.records_skipped += other.records_skipped;
        self.small_image_records += other.small_image_records;
    }

    pub fn finish(self) -> (BipartiteGraph, IngestSummary) {
        let clusters = &self.options.clusters;
        // Small images disappear entirely, even from records without metadata.
        let mut cluster_ids = Interner::default();
        let image_to_cluster: Vec<Option<u32>> = self
            .images
            .keys
            .iter()
            .enumerate()
            .map(|(idx, key)| {
                if self.small.contains(&(idx as u32)) {
                    None
                } else {
                    Some(cluster_ids.intern(clusters.cluster_of(key)))
                }
            })
            .collect();
        let mut dropped_small_records = 0u64;
        let edges: Vec<(u32, u32)> = self
            .pairs
            .iter()
            .filter_map(|&(s, i)| match image_to_cluster[i as usize] {
                Some(c) => Some((s, c)),
                None => {
                    dropped_small_records += 1;
                    None
                }
            })
            .collect();
        let raw_edges = edges.len() as u64;
        let graph = BipartiteGraph::build(self.sites.keys, cluster_ids.keys, edges);
        let mut summary = IngestSummary {
            records_read: self.records_read,
            records_skipped: self.records_skipped,
            small_image_records: self.small_image_records + dropped_small_records,
            small_images: self.small.len() as u64,
            duplicate_edges: raw_edges - graph.edge_count() as u64,
            ..IngestSummary::default()
        };
        summary.record_graph(&graph);
        (graph, summary)
    }
}

/// Builds a graph from link records. Records that fail to parse arrive as
/// `Err` and are counted, never fatal.
pub fn ingest_edges<I, E>(records: I, options: &IngestOptions) -> (BipartiteGraph, IngestSummary)
where
    I: IntoIterator<Item = std::result::Result<RawRecord, E>>,
{
    let mut builder = GraphBuilder::new(options.clone());
    for record in records {
        match record {
            Ok(record) => builder.push(&record),
            Err(_) => builder.skip(),
        }
    }
    builder.finish()
}

#[derive(Debug, Clone, Default)]
struct Interner {
    ids: HashMap<String, u32>,
    keys: Vec<String>,
}

impl Interner {
    fn intern(&mut self, key: &str) -> u32 {
        if let Some(&id) = self.ids.get(key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.ids.insert(key.to_string(), id);
        self.keys.push(key.to_string());
        id
    }
}

/// Which partition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Site,
    Image,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Site => "site",
            VertexKind::Image => "image",
        }
    }
}

impl std::str::FromStr for VertexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "site" => Ok(VertexKind::Site),
            "image" => Ok(VertexKind::Image),
            other => Err(Error::InvalidParameter(format!("unknown vertex kind {other:?}"))),
        }
    }
}

/// Immutable, deduplicated site↔image graph in compressed sparse form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    site_keys: Vec<String>,
    image_keys: Vec<String>,
    site_index: HashMap<String, u32>,
    image_index: HashMap<String, u32>,
    site_offsets: Vec<usize>,
    site_adj: Vec<u32>,
    image_offsets: Vec<usize>,
    image_adj: Vec<u32>,
}

impl BipartiteGraph {
    /// Builds a graph from key lists and `(site, image)` positions into them.
    /// Keys must be unique within each partition; edges may repeat.
    pub fn from_edges<I>(site_keys: Vec<String>, image_keys: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        check_unique(&site_keys, "site")?;
        check_unique(&image_keys, "image")?;
        let (ns, ni) = (site_keys.len(), image_keys.len());
        let edges: Vec<(u32, u32)> = edges.into_iter().collect();
        if let Some(&(s, i)) = edges
            .iter()
            .find(|&&(s, i)| s as usize >= ns || i as usize >= ni)
        {
            return Err(Error::InvalidParameter(format!(
                "edge ({s}, {i}) outside {ns} sites x {ni} images"
            )));
        }
        Ok(Self::build(site_keys, image_keys, edges))
    }

    /// An edgeless graph.
    pub fn isolated(site_keys: Vec<String>, image_keys: Vec<String>) -> Result<Self> {
        Self::from_edges(site_keys, image_keys, std::iter::empty())
    }

    fn build(site_keys: Vec<String>, image_keys: Vec<String>, mut edges: Vec<(u32, u32)>) -> Self {
        let (site_keys, site_remap) = canonical_order(site_keys);
        let (image_keys, image_remap) = canonical_order(image_keys);
        for e in &mut edges {
            *e = (site_remap[e.0 as usize], image_remap[e.1 as usize]);
        }
        edges.sort_unstable();
        edges.dedup();

        let site_offsets = offsets(site_keys.len(), edges.iter().map(|e| e.0));
        let site_adj: Vec<u32> = edges.iter().map(|e| e.1).collect();

        let image_offsets = offsets(image_keys.len(), edges.iter().map(|e| e.1));
        let mut cursor = image_offsets.clone();
        let mut image_adj = vec![0u32; edges.len()];
        // Site-major edge order keeps each reverse row sorted.
        for &(s, i) in &edges {
            image_adj[cursor[i as usize]] = s;
            cursor[i as usize] += 1;
        }

        let site_index = index_of(&site_keys);
        let image_index = index_of(&image_keys);
        Self {
            site_keys,
            image_keys,
            site_index,
            image_index,
            site_offsets,
            site_adj,
            image_offsets,
            image_adj,
        }
    }

    pub fn site_count(&self) -> usize {
        self.site_keys.len()
    }

    pub fn image_count(&self) -> usize {
        self.image_keys.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.site_count() + self.image_count()
    }

    pub fn edge_count(&self) -> usize {
        self.site_adj.len()
    }

    /// Global vertex index of site `s`.
    pub fn site_vertex(&self, s: usize) -> usize {
        s
    }

    /// Global vertex index of image `i`.
    pub fn image_vertex(&self, i: usize) -> usize {
        self.site_count() + i
    }

    pub fn image_vertices(&self) -> std::ops::Range<usize> {
        self.site_count()..self.vertex_count()
    }

    pub fn site_keys(&self) -> &[String] {
        &self.site_keys
    }

    pub fn image_keys(&self) -> &[String] {
        &self.image_keys
    }

    pub fn site_index(&self, key: &str) -> Option<usize> {
        self.site_index.get(key).map(|&s| s as usize)
    }

    pub fn image_index(&self, key: &str) -> Option<usize> {
        self.image_index.get(key).map(|&i| i as usize)
    }

    /// Global vertex index for a key in the given partition.
    pub fn vertex_of(&self, kind: VertexKind, key: &str) -> Option<usize> {
        match kind {
            VertexKind::Site => self.site_index(key),
            VertexKind::Image => self.image_index(key).map(|i| self.image_vertex(i)),
        }
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if v < self.site_count() {
            VertexKind::Site
        } else {
            VertexKind::Image
        }
    }

    /// Key of a global vertex. Panics when `v` is out of range.
    pub fn vertex_key(&self, v: usize) -> &str {
        match self.kind(v) {
            VertexKind::Site => &self.site_keys[v],
            VertexKind::Image => &self.image_keys[v - self.site_count()],
        }
    }

    /// Image indices linked from site `s`, ascending.
    pub fn site_neighbors(&self, s: usize) -> &[u32] {
        &self.site_adj[self.site_offsets[s]..self.site_offsets[s + 1]]
    }

    /// Site indices linking to image `i`, ascending.
    pub fn image_neighbors(&self, i: usize) -> &[u32] {
        &self.image_adj[self.image_offsets[i]..self.image_offsets[i + 1]]
    }

    /// Number of distinct neighbours of global vertex `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                index: v,
                count: self.vertex_count(),
            });
        }
        Ok(self.degree_unchecked(v))
    }

    pub(crate) fn degree_unchecked(&self, v: usize) -> usize {
        match self.kind(v) {
            VertexKind::Site => self.site_offsets[v + 1] - self.site_offsets[v],
            VertexKind::Image => {
                let i = v - self.site_count();
                self.image_offsets[i + 1] - self.image_offsets[i]
            }
        }
    }

    /// `(site, image)` index pairs in site-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.site_count()).flat_map(move |s| {
            self.site_neighbors(s).iter().map(move |&i| (s, i as usize))
        })
    }

    /// Verifies the structural invariants: sorted unique rows, forward and
    /// reverse adjacency are transposes, degree sums agree.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.site_adj.len() != self.image_adj.len() {
            return fail("forward and reverse edge counts differ".into());
        }
        for s in 0..self.site_count() {
            let row = self.site_neighbors(s);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("site row {s} not strictly ascending"));
            }
            for &i in row {
                if (i as usize) >= self.image_count() {
                    return fail(format!("site {s} links missing image {i}"));
                }
                if self.image_neighbors(i as usize).binary_search(&(s as u32)).is_err() {
                    return fail(format!("edge ({s}, {i}) missing from reverse adjacency"));
                }
            }
        }
        for i in 0..self.image_count() {
            if self.image_neighbors(i).windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("image row {i} not strictly ascending"));
            }
        }
        let site_sum: usize = (0..self.site_count()).map(|v| self.degree_unchecked(v)).sum();
        let image_sum: usize = self
            .image_vertices()
            .map(|v| self.degree_unchecked(v))
            .sum();
        if site_sum != self.edge_count() || image_sum != self.edge_count() {
            return fail("degree sums disagree with edge count".into());
        }
        Ok(())
    }
}

/// Removes sites without any linked image. Image indices are untouched.
pub fn drop_imageless_sites(graph: &BipartiteGraph) -> BipartiteGraph {
    let keep: Vec<usize> = (0..graph.site_count())
        .filter(|&s| !graph.site_neighbors(s).is_empty())
        .collect();
    if keep.len() == graph.site_count() {
        return graph.clone();
    }
    let site_keys: Vec<String> = keep.iter().map(|&s| graph.site_keys[s].clone()).collect();
    let edges: Vec<(u32, u32)> = keep
        .iter()
        .enumerate()
        .flat_map(|(new, &old)| graph.site_neighbors(old).iter().map(move |&i| (new as u32, i)))
        .collect();
    // Surviving keys are already sorted, so canonical order leaves image and
    // site positions as given.
    BipartiteGraph::build(site_keys, graph.image_keys.clone(), edges)
}

fn check_unique(keys: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(keys.len());
    for k in keys {
        if !seen.insert(k.as_str()) {
            return Err(Error::InvalidParameter(format!("duplicate {what} key {k:?}")));
        }
    }
    Ok(())
}

/// Sorts keys and returns, for each original position, its sorted position.
fn canonical_order(keys: Vec<String>) -> (Vec<String>, Vec<u32>) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_unstable_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut remap = vec![0u32; keys.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new as u32;
    }
    let mut slots: Vec<Option<String>> = keys.into_iter().map(Some).collect();
    let sorted = order.iter().map(|&old| slots[old].take().unwrap()).collect();
    (sorted, remap)
}

fn offsets(rows: usize, row_of_edge: impl Iterator<Item = u32>) -> Vec<usize> {
    let mut offsets = vec![0usize; rows + 1];
    for r in row_of_edge {
        offsets[r as usize + 1] += 1;
    }
    for r in 0..rows {
        offsets[r + 1] += offsets[r];
    }
    offsets
}

fn index_of(keys: &[String]) -> HashMap<String, u32> {
    keys.iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exceptions(list: &[&str]) -> HostingExceptions {
        HostingExceptions::from_domains(list.iter().copied()).unwrap()
    }

    fn norm(raw: &str, ex: &[&str]) -> String {
        normalize_site_url(raw, &exceptions(ex)).unwrap().into_string()
    }

    #[test]
    fn truncates_to_second_level_domain() {
        assert_eq!(norm("http://1.regularhost.com/a.html", &[]), "regularhost.com");
        assert_eq!(norm("2.regularhost.com", &[]), "regularhost.com");
        assert_eq!(norm("regularhost.com", &[]), "regularhost.com");
    }

    #[test]
    fn hosting_exceptions_keep_full_host() {
        let ex = ["livejournal.com"];
        assert_eq!(norm("user1.livejournal.com", &ex), "user1.livejournal.com");
        assert_eq!(norm("user2.livejournal.com", &ex), "user2.livejournal.com");
        assert_eq!(norm("livejournal.com", &ex), "livejournal.com");
    }

    #[test]
    fn strips_scheme_port_path_and_case() {
        assert_eq!(norm("EXAMPLE.com", &[]), "example.com");
        assert_eq!(norm("https://WWW.Example.COM:8080/x?y=1#z", &[]), "example.com");
        assert_eq!(norm("  www.example.com.  ", &[]), "example.com");
        assert_eq!(norm("//cdn.example.org/img.png", &[]), "example.org");
        assert_eq!(norm("ftp://user:pw@files.example.net", &[]), "example.net");
        assert_eq!(norm("localhost", &[]), "localhost");
        assert_eq!(norm("http://10.0.0.1/page", &[]), "10.0.0.1");
    }

    #[test]
    fn rejects_unparsable_hosts() {
        let ex = HostingExceptions::new();
        for raw in ["", "   ", "http://", "http:///path", "a..b.com", "http://[::1]/", "bad host.com", "h.com:x"] {
            match normalize_site_url(raw, &ex) {
                Err(Error::RejectedRecord { raw: r, .. }) => assert_eq!(r, raw),
                other => panic!("{raw:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn exception_entries_must_be_second_level() {
        assert!(HostingExceptions::from_domains(["a.b.com"]).is_err());
        let ex = exceptions(&["LiveJournal.com."]);
        assert!(ex.contains("livejournal.com"));
    }

    fn build(records: &[RawRecord], options: &IngestOptions) -> (BipartiteGraph, IngestSummary) {
        ingest_edges(records.iter().cloned().map(Ok::<_, ()>), options)
    }

    #[test]
    fn duplicate_links_collapse_to_one_edge() {
        let records = [
            RawRecord::new("a.com", "img1"),
            RawRecord::new("a.com", "img1"),
            RawRecord::new("b.com", "img1"),
        ];
        let (g, summary) = build(&records, &IngestOptions::default());
        assert_eq!((g.site_count(), g.image_count(), g.edge_count()), (2, 1, 2));
        assert_eq!(summary.duplicate_edges, 1);
        g.check_invariants().unwrap();
    }

    #[test]
    fn small_images_are_excluded() {
        let records = [
            RawRecord::new("a.com", "icon").with_meta(80, 40),
            RawRecord::new("a.com", "icon"),
            RawRecord::new("a.com", "photo").with_meta(640, 480),
            RawRecord::new("a.com", "unknown"),
        ];
        let (g, summary) = build(&records, &IngestOptions::default());
        assert_eq!(g.image_keys(), ["photo", "unknown"]);
        assert_eq!(summary.small_images, 1);
        assert_eq!(summary.small_image_records, 2);
        // exactly at the threshold is kept
        let (g, _) = build(&[RawRecord::new("a.com", "x").with_meta(100, 50)], &IngestOptions::default());
        assert_eq!(g.image_count(), 1);
    }

    #[test]
    fn cluster_map_merges_images() {
        let options = IngestOptions {
            clusters: [("img1", "c1"), ("img2", "c1")].into_iter().collect(),
            ..IngestOptions::default()
        };
        let records = [RawRecord::new("a.com", "img1"), RawRecord::new("b.com", "img2")];
        let (g, _) = build(&records, &options);
        assert_eq!((g.site_count(), g.image_count(), g.edge_count()), (2, 1, 2));
        assert_eq!(g.image_keys(), ["c1"]);
    }

    #[test]
    fn bad_records_are_counted_not_fatal() {
        let records = vec![
            Ok(RawRecord::new("a.com", "img1")),
            Err("unreadable"),
            Ok(RawRecord::new("http://", "img2")),
            Ok(RawRecord::new("b.com", " ")),
        ];
        let (g, summary) = ingest_edges(records, &IngestOptions::default());
        assert_eq!(summary.records_read, 4);
        assert_eq!(summary.records_skipped, 3);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn degree_counts_distinct_neighbours() {
        let mut records: Vec<RawRecord> = Vec::new();
        for img in ["c1", "c2", "c3", "c1", "c2", "c3", "c1"] {
            records.push(RawRecord::new("a.com", img));
        }
        records.push(RawRecord::new("b.com", "c1"));
        let (g, _) = build(&records, &IngestOptions::default());
        let a = g.vertex_of(VertexKind::Site, "a.com").unwrap();
        assert_eq!(g.degree(a).unwrap(), 3);
        let c1 = g.vertex_of(VertexKind::Image, "c1").unwrap();
        assert_eq!(g.degree(c1).unwrap(), 2);
        assert!(matches!(g.degree(99), Err(Error::VertexOutOfRange { index: 99, count: 5 })));
    }

    #[test]
    fn degree_of_isolated_and_path_vertices() {
        let g = BipartiteGraph::from_edges(
            vec!["s.com".into()],
            vec!["i".into(), "lonely".into()],
            [(0, 0)],
        )
        .unwrap();
        assert_eq!(g.degree(0).unwrap(), 1);
        assert_eq!(g.degree(g.image_vertex(0)).unwrap(), 1);
        assert_eq!(g.degree(g.image_vertex(1)).unwrap(), 0);
    }

    #[test]
    fn drop_imageless_sites_removes_only_degree_zero_sites() {
        let g = BipartiteGraph::from_edges(
            vec!["a.com".into(), "b.com".into()],
            vec!["x".into(), "y".into(), "z".into()],
            [(1, 0), (1, 1), (1, 2)],
        )
        .unwrap();
        let pruned = drop_imageless_sites(&g);
        assert_eq!(pruned.site_keys(), ["b.com"]);
        assert_eq!(pruned.edge_count(), 3);
        assert_eq!(pruned.image_keys(), g.image_keys());
        pruned.check_invariants().unwrap();
        assert_eq!(drop_imageless_sites(&pruned), pruned);
    }

    #[test]
    fn sites_whose_images_were_all_small_become_imageless() {
        let records = [
            RawRecord::new("icons.com", "btn").with_meta(16, 16),
            RawRecord::new("photos.com", "pic"),
        ];
        let (g, _) = build(&records, &IngestOptions::default());
        assert_eq!(g.site_count(), 2);
        let pruned = drop_imageless_sites(&g);
        assert_eq!(pruned.site_keys(), ["photos.com"]);
    }

    #[test]
    fn builder_merge_matches_single_pass() {
        let records: Vec<RawRecord> = (0..40)
            .map(|n| RawRecord::new(format!("s{}.site{}.com", n, n % 7), format!("img{}", n % 11)))
            .collect();
        let options = IngestOptions::default();
        let (whole, whole_summary) = build(&records, &options);
        let mut left = GraphBuilder::new(options.clone());
        let mut right = GraphBuilder::new(options.clone());
        for (n, r) in records.iter().enumerate() {
            if n % 3 == 0 { left.push(r) } else { right.push(r) }
        }
        right.merge(left);
        let (merged, merged_summary) = right.finish();
        assert_eq!(merged, whole);
        assert_eq!(merged_summary, whole_summary);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(BipartiteGraph::from_edges(vec!["a".into(), "a".into()], vec![], []).is_err());
        assert!(BipartiteGraph::from_edges(vec!["a".into()], vec!["x".into()], [(0, 1)]).is_err());
    }
}
