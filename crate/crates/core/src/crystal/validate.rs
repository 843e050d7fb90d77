//! Crystal axiom validation over a serialized graph, re-instantiating
//! elements from node payloads. Stored node weights are validated through the
//! root weight plus the per-edge weight relation; all string statistics are
//! recomputed from the payload elements.
//!
//! The Stembridge local checks are advisory and run on vertex pairs with
//! a_{ij} in {0,-1}; the A_1^(1) pair (a_{01} = -2) falls outside the
//! simply-laced axioms and is skipped.

use crate::cartan::CartanSpec;
use crate::crystal::element::CrystalElement;
use crate::crystal::graph::CrystalGraph;
use crate::error::Result;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub check: String,
    pub at: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] at {}: {}", self.check, self.at, self.detail)
    }
}

pub struct Validator<'a, E, P>
where
    E: CrystalElement,
    P: Fn(&serde_json::Value) -> Result<E>,
{
    graph: &'a CrystalGraph,
    parse: P,
    spec: CartanSpec,
    violations: Vec<Violation>,
}

impl<'a, E, P> Validator<'a, E, P>
where
    E: CrystalElement,
    P: Fn(&serde_json::Value) -> Result<E>,
{
    pub fn new(graph: &'a CrystalGraph, parse: P) -> Result<Self> {
        let spec = graph.spec.cartan()?;
        Ok(Validator { graph, parse, spec, violations: Vec::new() })
    }

    fn push(&mut self, check: &str, at: &str, detail: String) {
        self.violations.push(Violation { check: check.into(), at: at.into(), detail });
    }

    fn elements(&mut self) -> BTreeMap<String, E> {
        let mut elems = BTreeMap::new();
        for n in &self.graph.nodes {
            match (self.parse)(&n.payload) {
                Ok(e) => {
                    if e.canonical_key() != n.key {
                        self.push("key", &n.key, "payload key differs from stored key".into());
                    }
                    elems.insert(n.key.clone(), e);
                }
                Err(err) => self.push("payload", &n.key, err.to_string()),
            }
        }
        elems
    }

    /// Hard crystal axioms. Returns all violations found.
    pub fn check_axioms(mut self) -> Vec<Violation> {
        let elems = self.elements();
        let g = self.graph;
        let spec = self.spec.clone();

        // Root: zero drop stored, eps_i = 0 recomputed.
        match g.node(&g.root) {
            None => self.push("root", &g.root, "root key missing from node set".into()),
            Some(n) => {
                if n.drop.iter().any(|&k| k != 0) {
                    self.push("root", &g.root, "root drop vector is not zero".into());
                }
                if let Some(e) = elems.get(&g.root) {
                    for i in spec.vertices() {
                        match e.string_lengths(i) {
                            Ok((eps, _)) if eps != 0 => {
                                self.push("root", &g.root, format!("eps_{} = {} at root", i, eps));
                            }
                            Ok(_) => {}
                            Err(err) => self.push("root", &g.root, err.to_string()),
                        }
                    }
                }
            }
        }

        // Reachability and per-color degree bounds.
        let mut reached: BTreeSet<&str> = BTreeSet::new();
        let mut queue = VecDeque::new();
        reached.insert(g.root.as_str());
        queue.push_back(g.root.as_str());
        let mut out_seen: BTreeSet<(&str, usize)> = BTreeSet::new();
        let mut in_seen: BTreeSet<(&str, usize)> = BTreeSet::new();
        for e in &g.edges {
            if !out_seen.insert((e.src.as_str(), e.i)) {
                self.push("degree", &e.src, format!("two outgoing edges of color {}", e.i));
            }
            if !in_seen.insert((e.dst.as_str(), e.i)) {
                self.push("degree", &e.dst, format!("two incoming edges of color {}", e.i));
            }
        }
        let adjacency: BTreeMap<&str, Vec<&str>> = {
            let mut m: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
            for e in &g.edges {
                m.entry(e.src.as_str()).or_default().push(e.dst.as_str());
            }
            m
        };
        while let Some(u) = queue.pop_front() {
            if let Some(vs) = adjacency.get(u) {
                for v in vs {
                    if reached.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
        }
        for n in &g.nodes {
            if !reached.contains(n.key.as_str()) {
                self.push("reachability", &n.key, "node not reachable from root".into());
            }
        }

        // Per-node: phi_i - eps_i = <h_i, wt>, with the weight recomputed
        // from the element itself.
        for (key, e) in &elems {
            let w = e.weight();
            for i in spec.vertices() {
                let (eps, phi) = match e.string_lengths(i) {
                    Ok(v) => v,
                    Err(err) => {
                        self.push("stats", key, err.to_string());
                        continue;
                    }
                };
                match spec.pairing(&w, i) {
                    Ok(p) if phi - eps != p => {
                        self.push(
                            "pairing",
                            key,
                            format!("phi_{i} - eps_{i} = {} but <h_{i},wt> = {}", phi - eps, p),
                        );
                    }
                    Ok(_) => {}
                    Err(err) => self.push("pairing", key, err.to_string()),
                }
            }
        }

        // Per-edge bundle: recomputed f~_i matches, e~_i inverts, stored
        // drops differ by e_i, and eps/phi shift by +1/-1. At most one
        // violation is reported per edge.
        for edge in &g.edges {
            let at = format!("{} -{}-> {}", edge.src, edge.i, edge.dst);
            if g.node(&edge.src).is_none() || g.node(&edge.dst).is_none() {
                self.push("edge", &at, "edge references a missing node".into());
                continue;
            }
            let (Some(src), Some(dst)) = (elems.get(&edge.src), elems.get(&edge.dst)) else {
                continue;
            };
            let violation =
                edge_violation(g, src, dst, edge.src.as_str(), edge.dst.as_str(), edge.i);
            if let Some(detail) = violation {
                self.push("edge", &at, detail);
            }
        }

        // Completeness: an outgoing i-edge exists exactly when phi_i > 0 and
        // the child stays within the depth bound; an incoming i-edge exists
        // exactly when eps_i > 0 (highest-weight crystals are closed under
        // raising).
        for (key, e) in &elems {
            let total: i64 = e.weight().total_drop();
            for i in spec.vertices() {
                let Ok((eps, phi)) = e.string_lengths(i) else { continue };
                let child_allowed = match g.spec.depth {
                    Some(d) => total + 1 <= d,
                    None => true,
                };
                let has_out = g.out_edge(key, i).is_some();
                if phi > 0 && child_allowed && !has_out {
                    self.push("completeness", key, format!("missing f~_{} edge", i));
                }
                if (phi == 0 || !child_allowed) && has_out {
                    self.push("completeness", key, format!("unexpected f~_{} edge", i));
                }
                let has_in = g.in_edge(key, i).is_some();
                if (eps > 0) != has_in {
                    self.push(
                        "completeness",
                        key,
                        format!("eps_{} = {} but incoming edge present = {}", i, eps, has_in),
                    );
                }
            }
        }

        self.violations
    }

    /// Stembridge local axioms on all color pairs with a_{ij} in {0,-1}.
    /// Advisory; separate from the hard axioms.
    pub fn check_stembridge(mut self) -> Vec<Violation> {
        let elems = self.elements();
        let spec = self.spec.clone();
        let pairs: Vec<(usize, usize)> = {
            let labels: Vec<usize> = spec.vertices().collect();
            let mut v = Vec::new();
            for (a, &i) in labels.iter().enumerate() {
                for &j in &labels[a + 1..] {
                    if matches!(spec.a(i, j), Ok(0) | Ok(-1)) {
                        v.push((i, j));
                    }
                }
            }
            v
        };
        for (key, x) in &elems {
            for &(i, j) in &pairs {
                if let Err(d) = stembridge_pair(&spec, x, i, j) {
                    self.push("stembridge", key, d);
                }
                if let Err(d) = stembridge_pair(&spec, x, j, i) {
                    self.push("stembridge", key, d);
                }
            }
        }
        self.violations
    }
}

fn edge_violation<E: CrystalElement>(
    g: &CrystalGraph,
    src: &E,
    dst: &E,
    src_key: &str,
    dst_key: &str,
    i: usize,
) -> Option<String> {
    let lowered = match src.lower(i) {
        Ok(Some(l)) => l,
        Ok(None) => return Some(format!("f~_{} kills the source", i)),
        Err(e) => return Some(e.to_string()),
    };
    if lowered.canonical_key() != dst_key {
        return Some(format!("f~_{} lands on {}", i, lowered.canonical_key()));
    }
    match dst.raise(i) {
        Ok(Some(r)) if r.canonical_key() == src_key => {}
        Ok(_) => return Some(format!("e~_{} does not invert the edge", i)),
        Err(e) => return Some(e.to_string()),
    }
    let (sn, dn) = (g.node(src_key)?, g.node(dst_key)?);
    let spec = src.cartan();
    let pos = spec.pos(i).ok()?;
    let mut expected = sn.drop.clone();
    expected[pos] += 1;
    if dn.drop != expected {
        return Some("stored weights do not differ by alpha_i".into());
    }
    let (se, sp) = src.string_lengths(i).ok()?;
    let (de, dp) = dst.string_lengths(i).ok()?;
    if de != se + 1 {
        return Some(format!("eps_{}: {} -> {}", i, se, de));
    }
    if dp != sp - 1 {
        return Some(format!("phi_{}: {} -> {}", i, sp, dp));
    }
    None
}

/// Local axioms for the ordered pair (i, j), i acting: for any x with e_i
/// (resp. f_i) defined, the j-string statistics change by one of the two
/// allowed patterns; when both operators of a commuting (resp. braiding)
/// configuration are defined, the corresponding square (resp. octagon)
/// closes.
fn stembridge_pair<E: CrystalElement>(
    spec: &CartanSpec,
    x: &E,
    i: usize,
    j: usize,
) -> std::result::Result<(), String> {
    let a = spec.a(i, j).map_err(|e| e.to_string())?;
    let stats = |e: &E, c: usize| e.string_lengths(c).map_err(|e| e.to_string());
    let (eps_j, phi_j) = stats(x, j)?;

    if let Some(up) = x.raise(i).map_err(|e| e.to_string())? {
        let (ue, up_) = stats(&up, j)?;
        let delta = (ue - eps_j, up_ - phi_j);
        let allowed = [(0, a), (-a, 0)];
        if !allowed.contains(&delta) {
            return Err(format!(
                "raising {} changes ({}-string stats) by {:?}, allowed {:?}",
                i, j, delta, allowed
            ));
        }
    }
    if let Some(down) = x.lower(i).map_err(|e| e.to_string())? {
        let (de, dp) = stats(&down, j)?;
        let delta = (de - eps_j, dp - phi_j);
        let allowed = [(0, -a), (a, 0)];
        if !allowed.contains(&delta) {
            return Err(format!(
                "lowering {} changes ({}-string stats) by {:?}, allowed {:?}",
                i, j, delta, allowed
            ));
        }
    }

    // P5/P6 on raising.
    let (ei, ej) = (x.raise(i).map_err(|e| e.to_string())?, x.raise(j).map_err(|e| e.to_string())?);
    if let (Some(ei), Some(ej)) = (&ei, &ej) {
        let di = stats(ej, i)?.0 - stats(x, i)?.0;
        let dj = stats(ei, j)?.0 - eps_j;
        if di == 0 && dj == 0 {
            let a_ = raise_path(ei, &[j]).ok_or("e_j e_i x undefined")?;
            let b_ = raise_path(ej, &[i]).ok_or("e_i e_j x undefined")?;
            if a_.canonical_key() != b_.canonical_key() {
                return Err(format!("raising square {},{} does not commute", i, j));
            }
        }
        if a == -1 && di == 1 && dj == 1 {
            let a_ = raise_path(ei, &[j, j, i]).ok_or("e_i e_j e_j e_i x undefined")?;
            let b_ = raise_path(ej, &[i, i, j]).ok_or("e_j e_i e_i e_j x undefined")?;
            if a_.canonical_key() != b_.canonical_key() {
                return Err(format!("raising octagon {},{} does not close", i, j));
            }
        }
    }
    // Dual axioms on lowering.
    let (fi, fj) = (x.lower(i).map_err(|e| e.to_string())?, x.lower(j).map_err(|e| e.to_string())?);
    if let (Some(fi), Some(fj)) = (&fi, &fj) {
        let di = stats(fj, i)?.1 - stats(x, i)?.1;
        let dj = stats(fi, j)?.1 - phi_j;
        if di == 0 && dj == 0 {
            let a_ = lower_path(fi, &[j]).ok_or("f_j f_i x undefined")?;
            let b_ = lower_path(fj, &[i]).ok_or("f_i f_j x undefined")?;
            if a_.canonical_key() != b_.canonical_key() {
                return Err(format!("lowering square {},{} does not commute", i, j));
            }
        }
        if a == -1 && di == 1 && dj == 1 {
            let a_ = lower_path(fi, &[j, j, i]).ok_or("f_i f_j f_j f_i x undefined")?;
            let b_ = lower_path(fj, &[i, i, j]).ok_or("f_j f_i f_i f_j x undefined")?;
            if a_.canonical_key() != b_.canonical_key() {
                return Err(format!("lowering octagon {},{} does not close", i, j));
            }
        }
    }
    Ok(())
}

fn raise_path<E: CrystalElement>(x: &E, colors: &[usize]) -> Option<E> {
    let mut cur = x.clone();
    for &c in colors {
        cur = cur.raise(c).ok()??;
    }
    Some(cur)
}

fn lower_path<E: CrystalElement>(x: &E, colors: &[usize]) -> Option<E> {
    let mut cur = x.clone();
    for &c in colors {
        cur = cur.lower(c).ok()??;
    }
    Some(cur)
}
