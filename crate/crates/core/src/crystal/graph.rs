//! Serialized crystal graphs: deduplicated nodes keyed by canonical key,
//! colored edges, JSON and DOT export, and rooted color-respecting
//! isomorphism.

use crate::cartan::{CartanKind, CartanSpec};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub kind: CartanKind,
    pub rank: usize,
    /// Dominant weight coefficients in vertex order.
    pub weight: Vec<i64>,
    pub model: String,
    /// Maximal total drop, when generation was depth-bounded.
    pub depth: Option<i64>,
}

impl GraphSpec {
    pub fn cartan(&self) -> Result<CartanSpec> {
        CartanSpec::new(self.kind, self.rank)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NodeRec {
    pub key: String,
    pub model: String,
    pub payload: serde_json::Value,
    pub drop: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct EdgeRec {
    pub src: String,
    pub dst: String,
    pub i: usize,
}

/// A generated crystal graph. Nodes are sorted by key and edges by
/// (src, dst, i), so serialization is deterministic by construction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub spec: GraphSpec,
    pub root: String,
    pub nodes: Vec<NodeRec>,
    pub edges: Vec<EdgeRec>,
}

impl CrystalGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, key: &str) -> Option<&NodeRec> {
        self.nodes
            .binary_search_by(|n| n.key.as_str().cmp(key))
            .ok()
            .map(|i| &self.nodes[i])
    }

    /// Outgoing edges per node and color; at most one by the crystal axioms.
    pub fn out_edge(&self, key: &str, i: usize) -> Option<&EdgeRec> {
        self.edges.iter().find(|e| e.src == key && e.i == i)
    }

    pub fn in_edge(&self, key: &str, i: usize) -> Option<&EdgeRec> {
        self.edges.iter().find(|e| e.dst == key && e.i == i)
    }

    /// Node count per drop vector, for comparison against character tables.
    pub fn counts_by_drop(&self) -> BTreeMap<Vec<i64>, i64> {
        let mut m = BTreeMap::new();
        for n in &self.nodes {
            *m.entry(n.drop.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<CrystalGraph> {
        serde_json::from_str(s).map_err(|e| Error::Payload(e.to_string()))
    }

    /// DOT rendering with the node payload as label and the color as edge
    /// label. Node and edge order follow the stored (sorted) order.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph crystal {\n");
        out.push_str("  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n");
        let idx: BTreeMap<&str, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.key.as_str(), i)).collect();
        for (i, n) in self.nodes.iter().enumerate() {
            let label = render_label(n);
            let _ = writeln!(out, "  n{} [label=\"{}\"];", i, escape(&label));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", idx[e.src.as_str()], idx[e.dst.as_str()], e.i);
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn render_label(n: &NodeRec) -> String {
    if let Some(label) = n.payload.get("label").and_then(|v| v.as_str()) {
        return label.to_string();
    }
    n.key.clone()
}

/// True iff the color-respecting relabeling fixed by simultaneous BFS from
/// the roots matches node weights and the full edge sets. Unique because
/// out-degree per color is at most one.
pub fn graphs_isomorphic(g1: &CrystalGraph, g2: &CrystalGraph) -> Result<bool> {
    if g1.spec.kind != g2.spec.kind || g1.spec.rank != g2.spec.rank {
        return Err(Error::SpecMismatch);
    }
    if g1.node_count() != g2.node_count() || g1.edges.len() != g2.edges.len() {
        return Ok(false);
    }
    let spec = g1.spec.cartan()?;
    let root1 = match g1.node(&g1.root) {
        Some(n) => n,
        None => return Ok(false),
    };
    let root2 = match g2.node(&g2.root) {
        Some(n) => n,
        None => return Ok(false),
    };
    if g1.spec.weight != g2.spec.weight || root1.drop != root2.drop {
        return Ok(false);
    }
    // out-edge maps keyed by (src, i)
    let mut out1: BTreeMap<(&str, usize), &str> = BTreeMap::new();
    for e in &g1.edges {
        if out1.insert((e.src.as_str(), e.i), e.dst.as_str()).is_some() {
            return Ok(false);
        }
    }
    let mut out2: BTreeMap<(&str, usize), &str> = BTreeMap::new();
    for e in &g2.edges {
        if out2.insert((e.src.as_str(), e.i), e.dst.as_str()).is_some() {
            return Ok(false);
        }
    }
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    let mut seen_rhs: BTreeMap<&str, &str> = BTreeMap::new();
    let mut queue = VecDeque::new();
    map.insert(g1.root.as_str(), g2.root.as_str());
    seen_rhs.insert(g2.root.as_str(), g1.root.as_str());
    queue.push_back((g1.root.as_str(), g2.root.as_str()));
    while let Some((u1, u2)) = queue.pop_front() {
        for i in spec.vertices() {
            match (out1.get(&(u1, i)), out2.get(&(u2, i))) {
                (None, None) => {}
                (Some(v1), Some(v2)) => {
                    let n1 = g1.node(v1).ok_or(Error::Payload("dangling edge".into()))?;
                    let n2 = g2.node(v2).ok_or(Error::Payload("dangling edge".into()))?;
                    if n1.drop != n2.drop {
                        return Ok(false);
                    }
                    match (map.get(v1), seen_rhs.get(v2)) {
                        (None, None) => {
                            map.insert(v1, v2);
                            seen_rhs.insert(v2, v1);
                            queue.push_back((v1, v2));
                        }
                        (Some(w2), Some(w1)) => {
                            if *w2 != *v2 || *w1 != *v1 {
                                return Ok(false);
                            }
                        }
                        _ => return Ok(false),
                    }
                }
                _ => return Ok(false),
            }
        }
    }
    Ok(map.len() == g1.node_count())
}
