//! Turning raw link records into a site/image graph.
//!
//! Page URLs are collapsed to their registered domain, except under hosting
//! domains listed as exceptions, where each subdomain stays its own site.
//! Icons below the minimum area are dropped.

use linkprop::graph::{ingest_edges, normalize_site_url, ClusterMap, HostingExceptions, IngestOptions, RawRecord};
use linkprop::BipartiteGraph;

pub fn run_example() -> linkprop::Result<BipartiteGraph> {
    let exceptions = HostingExceptions::from_domains(["livejournal.com"])?;
    assert_eq!(normalize_site_url("http://1.regularhost.com/a/b.html", &exceptions)?.as_str(), "regularhost.com");
    assert_eq!(normalize_site_url("https://user1.livejournal.com/", &exceptions)?.as_str(), "user1.livejournal.com");

    // near-duplicate pictures can be folded into one cluster
    let clusters: ClusterMap = [("img-a-copy", "img-a")].into_iter().collect();
    let options = IngestOptions { exceptions, clusters, ..IngestOptions::default() };

    let records: Vec<Result<RawRecord, ()>> = vec![
        Ok(RawRecord::new("http://1.regularhost.com/index.html", "img-a")),
        Ok(RawRecord::new("http://2.regularhost.com/", "img-a-copy")),
        Ok(RawRecord::new("user1.livejournal.com", "img-b").with_meta(800, 600)),
        Ok(RawRecord::new("user2.livejournal.com", "img-b")),
        Ok(RawRecord::new("user2.livejournal.com", "favicon").with_meta(16, 16)),
        Err(()),
    ];
    let (graph, summary) = ingest_edges(records, &options);
    println!("{summary}");
    for (s, i) in graph.edges() {
        println!("{}\t{}", graph.site_keys()[s], graph.image_keys()[i]);
    }
    Ok(graph)
}

fn main() -> linkprop::Result<()> {
    run_example().map(drop)
}
