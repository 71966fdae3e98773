//! Text and JSON formats.
//!
//! Hypergraph text format: header `k n`, then one edge per line as
//! space-separated ascending 1-based vertex ids. Partite hosts use the
//! header `k n m`; class X occupies ids `n+1..=n+m`. Blank lines and `#`
//! comments are ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::Family;
use crate::exact::Witness;
use crate::hypergraph::{Edge, Hypergraph, PartiteGraph, Vertex};
use crate::lp::WeightVector;
use crate::num::{parse_rat, rat_to_string};
use crate::{Error, Result};

/// A parsed graph file: plain `k`-graph or partite host.
#[derive(Debug, Clone)]
pub enum GraphFile {
    Plain(Hypergraph),
    Partite(PartiteGraph),
}

impl GraphFile {
    pub fn base(&self) -> &Hypergraph {
        match self {
            GraphFile::Plain(h) => h,
            GraphFile::Partite(p) => p.base(),
        }
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> Result<String> {
    if !h.removed().is_empty() {
        return Err(Error::InvalidInput(
            "text format cannot express masked vertices".into(),
        ));
    }
    let mut out = format!("{} {}\n", h.k(), h.n());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_partite(h: &PartiteGraph) -> Result<String> {
    if !h.base().removed().is_empty() {
        return Err(Error::InvalidInput(
            "text format cannot express masked vertices".into(),
        ));
    }
    let mut out = format!("{} {} {}\n", h.k(), h.n_v(), h.m());
    for e in h.base().edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let mut edges: Vec<Edge> = Vec::new();
    for line in lines {
        let e: Vec<Vertex> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad vertex {t:?}")))
            })
            .collect::<Result<_>>()?;
        edges.push(e);
    }
    match nums.as_slice() {
        [k, n] => {
            let mut h = Hypergraph::new(*n as Vertex, *k as usize)?;
            for e in edges {
                h.add_edge(e)?;
            }
            Ok(GraphFile::Plain(h))
        }
        [k, n, m] => {
            let mut h = PartiteGraph::new(*n as Vertex, *m as Vertex, *k as usize)?;
            for e in edges {
                h.add_edge(e)?;
            }
            Ok(GraphFile::Partite(h))
        }
        _ => Err(Error::Parse(format!(
            "header must be `k n` or `k n m`, got {header:?}"
        ))),
    }
}

/// JSON family file: `{n, k, graphs: [[[v, ...], ...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct FamilyFile {
    n: Vertex,
    k: usize,
    graphs: Vec<Vec<Edge>>,
}

pub fn write_family(f: &Family) -> Result<String> {
    let file = FamilyFile {
        n: f.n(),
        k: f.k(),
        graphs: f
            .graphs()
            .iter()
            .map(|g| g.edges().cloned().collect())
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn parse_family(text: &str) -> Result<Family> {
    let file: FamilyFile = serde_json::from_str(text)?;
    let mut graphs = Vec::with_capacity(file.graphs.len());
    for edges in file.graphs {
        let mut g = Hypergraph::new(file.n, file.k)?;
        for e in edges {
            g.add_edge(e)?;
        }
        graphs.push(g);
    }
    Family::new(graphs)
}

/// Witness JSON: a list of edges, or a color-to-edge map keyed by the
/// 0-based color index.
pub fn write_witness(w: &Witness) -> Result<String> {
    let value = match w {
        Witness::Edges(es) => serde_json::to_value(es)?,
        Witness::Rainbow(map) => {
            let string_keys: BTreeMap<String, &Edge> =
                map.iter().map(|(c, e)| (c.to_string(), e)).collect();
            serde_json::to_value(string_keys)?
        }
    };
    Ok(serde_json::to_string_pretty(&value)?)
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.is_array() {
        let edges: Vec<Edge> = serde_json::from_value(value)?;
        Ok(Witness::Edges(edges))
    } else {
        let map: BTreeMap<String, Edge> = serde_json::from_value(value)?;
        let mut out = BTreeMap::new();
        for (key, e) in map {
            let color: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad color key {key:?}")))?;
            out.insert(color, e);
        }
        Ok(Witness::Rainbow(out))
    }
}

/// Cover sidecar: vertex weights as exact `p/q` strings plus the total.
pub fn write_cover_sidecar(omega: &WeightVector) -> Result<String> {
    let weights = omega
        .vertex_weights()
        .ok_or_else(|| Error::InvalidInput("sidecar wants a vertex weighting".into()))?;
    let as_strings: BTreeMap<String, String> = weights
        .iter()
        .map(|(v, w)| (v.to_string(), rat_to_string(w)))
        .collect();
    let doc = serde_json::json!({
        "weights": as_strings,
        "value": rat_to_string(&omega.total()),
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn parse_cover_sidecar(text: &str) -> Result<WeightVector> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let weights = value
        .get("weights")
        .and_then(|w| w.as_object())
        .ok_or_else(|| Error::Parse("missing weights object".into()))?;
    let mut out = BTreeMap::new();
    for (k, v) in weights {
        let vertex: Vertex = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex {k:?}")))?;
        let s = v
            .as_str()
            .ok_or_else(|| Error::Parse("weight must be a string".into()))?;
        out.insert(vertex, parse_rat(s)?);
    }
    Ok(WeightVector::Vertices(out))
}
