//! Breadth-first closure of a highest-weight element under all lowering
//! operators, deduplicated by canonical key. The node store behaves as a set
//! keyed by canonical key and the final ordering is by key, so the result is
//! byte-identical across runs and thread counts.

use crate::cartan::WeightCoords;
use crate::crystal::element::CrystalElement;
use crate::crystal::graph::{CrystalGraph, EdgeRec, GraphSpec, NodeRec};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Expands `root` under every f~_i. `depth` bounds the total drop and is
/// required for affine types (the graph is infinite otherwise); `threads`
/// caps the worker count used to expand each frontier level.
pub fn generate<E: CrystalElement>(
    root: E,
    depth: Option<i64>,
    threads: usize,
) -> Result<CrystalGraph> {
    let spec = root.cartan();
    if spec.is_affine() && depth.is_none() {
        return Err(Error::DepthRequired);
    }
    for i in spec.vertices() {
        if root.string_lengths(i)?.0 != 0 {
            return Err(Error::NotHighestWeight);
        }
    }
    let lambda = root.weight().lambda.clone();
    let model = root.model().to_string();

    let mut nodes: BTreeMap<String, (E, WeightCoords)> = BTreeMap::new();
    let mut edges: Vec<EdgeRec> = Vec::new();
    let root_key = root.canonical_key();
    nodes.insert(root_key.clone(), (root.clone(), root.weight()));

    let colors: Vec<usize> = spec.vertices().collect();
    let expand = |elems: &[(String, E)]| -> Result<Vec<(String, usize, E)>> {
        let step = |(key, e): &(String, E)| -> Result<Vec<(String, usize, E)>> {
            let mut out = Vec::new();
            for &i in &colors {
                if let Some(child) = e.lower(i)? {
                    out.push((key.clone(), i, child));
                }
            }
            Ok(out)
        };
        let nested: Result<Vec<Vec<_>>> = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Payload(e.to_string()))?;
            pool.install(|| elems.par_iter().map(step).collect())
        } else {
            elems.iter().map(step).collect()
        };
        Ok(nested?.into_iter().flatten().collect())
    };

    let mut frontier: Vec<(String, E)> = vec![(root_key.clone(), root)];
    while !frontier.is_empty() {
        if let Some(d) = depth {
            frontier.retain(|(_, e)| e.weight().total_drop() < d);
        }
        let produced = expand(&frontier)?;
        let mut next: Vec<(String, E)> = Vec::new();
        for (src, i, child) in produced {
            let key = child.canonical_key();
            edges.push(EdgeRec { src, dst: key.clone(), i });
            if !nodes.contains_key(&key) {
                let w = child.weight();
                nodes.insert(key.clone(), (child.clone(), w));
                next.push((key, child));
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        frontier = next;
    }

    edges.sort();
    edges.dedup();
    let node_recs = nodes
        .into_iter()
        .map(|(key, (e, w))| NodeRec {
            key,
            model: model.clone(),
            payload: e.payload(),
            drop: w.drop,
        })
        .collect();
    Ok(CrystalGraph {
        spec: GraphSpec { kind: spec.kind, rank: spec.rank, weight: lambda, model, depth },
        root: root_key,
        nodes: node_recs,
        edges,
    })
}
