use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{AssignmentResult, PagePool};
use crate::corpus::load_profiles;
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, NodeId, SocialGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub edges: PathBuf,
    pub profiles: PathBuf,
    pub manifest: PathBuf,
}

impl DatasetPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            edges: dir.join("edges.txt"),
            profiles: dir.join("profiles.jsonl"),
            manifest: dir.join("manifest.json"),
        }
    }
}

#[derive(Serialize)]
struct ProfileLine<'a> {
    id: NodeId,
    text: &'a str,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes `edges.txt`, `profiles.jsonl` and `manifest.json` into `dir`.
pub fn emit_dataset<M: Serialize>(
    dir: &Path,
    g: &SocialGraph,
    result: &AssignmentResult,
    pool: &PagePool,
    manifest: &M,
) -> Result<DatasetPaths> {
    if result.mapping.len() != g.node_count() {
        return Err(Error::param("assignment", "does not cover the graph"));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = DatasetPaths::in_dir(dir);

    let mut w = create(&paths.edges)?;
    let io = |e| Error::io(&paths.edges, e);
    writeln!(w, "# nodes: {} edges: {}", g.node_count(), g.edge_count()).map_err(io)?;
    g.write_edge_list(&mut w).map_err(io)?;

    let mut w = create(&paths.profiles)?;
    for &(node, page) in &result.mapping {
        let text = &pool.pages[page].text;
        serde_json::to_writer(&mut w, &ProfileLine { id: node, text })?;
        w.write_all(b"\n").map_err(|e| Error::io(&paths.profiles, e))?;
    }
    w.flush().map_err(|e| Error::io(&paths.profiles, e))?;

    let mut w = create(&paths.manifest)?;
    serde_json::to_writer_pretty(&mut w, manifest)?;
    w.write_all(b"\n").map_err(|e| Error::io(&paths.manifest, e))?;
    w.flush().map_err(|e| Error::io(&paths.manifest, e))?;
    Ok(paths)
}

/// Reads an emitted dataset back. Profile ids join the node set, so
/// isolated nodes survive the round trip.
pub fn load_dataset(dir: &Path) -> Result<(SocialGraph, Vec<(NodeId, String)>)> {
    let paths = DatasetPaths::in_dir(dir);
    let f = File::open(&paths.edges).map_err(|e| Error::io(&paths.edges, e))?;
    let g = load_edge_list(BufReader::new(f))?;
    let profiles = load_profiles(&paths.profiles)?;
    let g = SocialGraph::from_nodes_and_edges(profiles.iter().map(|(id, _)| *id), g.edges().collect::<Vec<_>>());
    Ok((g, profiles))
}
