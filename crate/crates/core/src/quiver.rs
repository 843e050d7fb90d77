//! Explicit representations of the doubled quiver with exact rational
//! coefficients: string and branched-string representations attached to
//! tableau entries, pyramid stacks and wall columns, the moment-map /
//! nilpotency / stability predicates, cross-map solving by exact linear
//! algebra, and the matching-based geometric crystal statistics.

use crate::cartan::{CartanKind, CartanSpec};
use crate::crystal::CrystalElement;
use crate::error::{Error, Result};
use crate::linalg::{Gf5, Mat, Rat, Scalar};
use crate::pyramids::Pyramid;
use crate::tableaux_a::Tableau;
use crate::tableaux_d::{DLetter, DTableau};
use crate::walls::Wall;
use std::collections::BTreeMap;

/// An arrow of the doubled quiver: an edge index into
/// `CartanSpec::edges()` plus a direction flag (true = the fixed forward
/// orientation, with epsilon = +1).
pub type Arrow = (usize, bool);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BasisVec {
    pub id: usize,
    pub deg: usize,
}

/// A finite-dimensional I-graded representation of the doubled quiver.
#[derive(Clone, Debug)]
pub struct QuiverRep {
    pub spec: CartanSpec,
    pub basis: Vec<BasisVec>,
    /// Arrow matrices, sized (dim at head) x (dim at tail); absent arrows
    /// are zero.
    pub arrows: BTreeMap<Arrow, Mat<Rat>>,
    /// Declared summand decomposition, as basis ids.
    pub summands: Vec<Vec<usize>>,
}

impl QuiverRep {
    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis ids of a given degree, in id order.
    pub fn degree_ids(&self, deg: usize) -> Vec<usize> {
        self.basis.iter().filter(|b| b.deg == deg).map(|b| b.id).collect()
    }

    pub fn dim_at(&self, deg: usize) -> usize {
        self.basis.iter().filter(|b| b.deg == deg).count()
    }

    /// Graded dimension by vertex position.
    pub fn dim_vector(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.spec.num_vertices()];
        for b in &self.basis {
            v[self.spec.pos(b.deg).expect("degree is a vertex")] += 1;
        }
        v
    }

    fn head(&self, a: Arrow) -> usize {
        let (from, to) = self.spec.edges()[a.0];
        if a.1 {
            to
        } else {
            from
        }
    }

    fn tail(&self, a: Arrow) -> usize {
        let (from, to) = self.spec.edges()[a.0];
        if a.1 {
            from
        } else {
            to
        }
    }

    fn epsilon(a: Arrow) -> Rat {
        if a.1 {
            Rat::from_integer(1)
        } else {
            Rat::from_integer(-1)
        }
    }

    fn all_arrows(&self) -> Vec<Arrow> {
        let mut v = Vec::with_capacity(2 * self.spec.edges().len());
        for e in 0..self.spec.edges().len() {
            v.push((e, true));
            v.push((e, false));
        }
        v
    }

    pub fn arrow_matrix(&self, a: Arrow) -> Mat<Rat> {
        match self.arrows.get(&a) {
            Some(m) => m.clone(),
            None => Mat::zero(self.dim_at(self.head(a)), self.dim_at(self.tail(a))),
        }
    }

    /// Per-vertex moment map psi_i = sum over incoming arrows of
    /// epsilon(h) x_h x_{h-bar}.
    pub fn moment_map(&self) -> BTreeMap<usize, Mat<Rat>> {
        let mut out = BTreeMap::new();
        for v in self.spec.vertices() {
            let d = self.dim_at(v);
            let mut psi: Mat<Rat> = Mat::zero(d, d);
            for a in self.all_arrows() {
                if self.head(a) != v {
                    continue;
                }
                let m = self.arrow_matrix(a);
                let back = self.arrow_matrix((a.0, !a.1));
                psi = psi.add(&m.mul(&back).scale(&Self::epsilon(a)));
            }
            out.insert(v, psi);
        }
        out
    }

    pub fn moment_map_is_zero(&self) -> bool {
        self.moment_map().values().all(|m| m.is_zero())
    }

    /// Nilpotency by iterating the span of all path images: the chain of
    /// subspaces W_{k+1} = sum_a x_a(W_k) must reach zero within dim V
    /// steps.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.total_dim();
        if n == 0 {
            return true;
        }
        // columns spanning the current subspace of the total space
        let mut span: Mat<Rat> = Mat::identity(n);
        for _ in 0..=n {
            let cols = span.cols;
            if cols == 0 {
                return true;
            }
            let mut images: Vec<Vec<Rat>> = Vec::new();
            for a in self.all_arrows() {
                let m = self.arrows.get(&a);
                let Some(m) = m else { continue };
                let tail_ids = self.degree_ids(self.tail(a));
                let head_ids = self.degree_ids(self.head(a));
                for c in 0..cols {
                    let mut img = vec![Rat::from_integer(0); n];
                    let mut nonzero = false;
                    for (col_in_block, &tid) in tail_ids.iter().enumerate() {
                        let coeff = span.get(tid, c).clone();
                        if Scalar::is_zero(&coeff) {
                            continue;
                        }
                        for (row_in_block, &hid) in head_ids.iter().enumerate() {
                            let entry = m.get(row_in_block, col_in_block);
                            if !Scalar::is_zero(entry) {
                                img[hid] += *entry * coeff;
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero {
                        images.push(img);
                    }
                }
            }
            if images.is_empty() {
                return true;
            }
            // column-space basis of the images
            let rows = images.len();
            let mut m: Mat<Rat> = Mat::from_fn(rows, n, |r, c| images[r][c]);
            let pivots = m.rref();
            let rank = pivots.len();
            span = Mat::from_fn(n, rank, |r, c| *m.get(c, r));
        }
        false
    }

    /// Stability against a framing t (matrices V_i -> W_i by vertex): for
    /// every vertex, the intersection of the kernels of all arrows out of it
    /// with ker t_i must vanish.
    pub fn is_stable(&self, t: &BTreeMap<usize, Mat<Rat>>) -> Result<bool> {
        for v in self.spec.vertices() {
            let d = self.dim_at(v);
            if d == 0 {
                continue;
            }
            let mut stacked: Mat<Rat> = Mat::zero(0, d);
            for a in self.all_arrows() {
                if self.tail(a) == v {
                    stacked = stacked.vstack(&self.arrow_matrix(a));
                }
            }
            if let Some(tv) = t.get(&v) {
                if tv.cols != d {
                    return Err(Error::DimensionMismatch);
                }
                stacked = stacked.vstack(tv);
            }
            if !stacked.kernel_basis().is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same kernel-intersection predicate after reduction mod 5. Fails
    /// when a denominator is divisible by 5.
    pub fn is_stable_gf5(&self, t: &BTreeMap<usize, Mat<Gf5>>) -> Result<bool> {
        for v in self.spec.vertices() {
            let d = self.dim_at(v);
            if d == 0 {
                continue;
            }
            let mut stacked: Mat<Gf5> = Mat::zero(0, d);
            for a in self.all_arrows() {
                if self.tail(a) == v {
                    let m = self
                        .arrow_matrix(a)
                        .map(|x| Gf5::from_rat(x))
                        .ok_or(Error::InexactDivision)?;
                    stacked = stacked.vstack(&m);
                }
            }
            if let Some(tv) = t.get(&v) {
                if tv.cols != d {
                    return Err(Error::DimensionMismatch);
                }
                stacked = stacked.vstack(tv);
            }
            if !stacked.kernel_basis().is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Arrow matrices reduced mod 5, for the brute-force stability oracle.
    pub fn arrows_gf5(&self) -> Option<BTreeMap<Arrow, Mat<Gf5>>> {
        let mut out = BTreeMap::new();
        for a in self.all_arrows() {
            let m = self.arrow_matrix(a).map(|x| Gf5::from_rat(x))?;
            out.insert(a, m);
        }
        Some(out)
    }

    /// Cokernel dimension at a vertex: dim V_i minus the rank of the joint
    /// image of all incoming arrows. This is the geometric epsilon of a
    /// point.
    pub fn coker_dim(&self, v: usize) -> usize {
        let d = self.dim_at(v);
        if d == 0 {
            return 0;
        }
        // rank of [M1 M2 ...] via the stacked transposes
        let mut stacked_t: Mat<Rat> = Mat::zero(0, d);
        for a in self.all_arrows() {
            if self.head(a) == v {
                let m = self.arrow_matrix(a);
                let mt = Mat::from_fn(m.cols, m.rows, |r, c| *m.get(c, r));
                stacked_t = stacked_t.vstack(&mt);
            }
        }
        d - stacked_t.rank()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<serde_json::Value> = self
            .basis
            .iter()
            .map(|b| serde_json::json!({"id": b.id, "deg": b.deg}))
            .collect();
        let mut arrows = Vec::new();
        for (a, m) in &self.arrows {
            if m.is_zero() {
                continue;
            }
            let (from, to) = (self.tail(*a), self.head(*a));
            let mut entries = Vec::new();
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let x = m.get(r, c);
                    if !Scalar::is_zero(x) {
                        entries.push(serde_json::json!([r, c, x.numer(), x.denom()]));
                    }
                }
            }
            arrows.push(serde_json::json!({
                "from": from,
                "to": to,
                "edge": a.0,
                "entries": entries,
            }));
        }
        serde_json::json!({ "basis": basis, "arrows": arrows })
    }
}

/// Builder for string-like representations given a degree list and maps
/// between basis elements.
pub struct RepBuilder {
    spec: CartanSpec,
    degrees: Vec<usize>,
    maps: Vec<(usize, usize, Rat)>,
    summands: Vec<Vec<usize>>,
}

impl RepBuilder {
    pub fn new(spec: &CartanSpec) -> RepBuilder {
        RepBuilder { spec: spec.clone(), degrees: Vec::new(), maps: Vec::new(), summands: Vec::new() }
    }

    pub fn push_vec(&mut self, deg: usize) -> usize {
        self.degrees.push(deg);
        self.degrees.len() - 1
    }

    pub fn push_map(&mut self, src: usize, dst: usize, coeff: i64) {
        self.maps.push((src, dst, Rat::from_integer(coeff)));
    }

    pub fn close_summand(&mut self, ids: Vec<usize>) {
        self.summands.push(ids);
    }

    /// Resolves each map to an arrow of the doubled quiver; a map from
    /// degree u to degree v uses the forward arrow when one points u -> v
    /// and the backward arrow of the (u, v) edge otherwise.
    pub fn build(mut self) -> Result<QuiverRep> {
        let basis: Vec<BasisVec> =
            self.degrees.iter().enumerate().map(|(id, &deg)| BasisVec { id, deg }).collect();
        for b in &basis {
            self.spec.pos(b.deg)?;
        }
        let rep_dims: BTreeMap<usize, Vec<usize>> = {
            let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for b in &basis {
                m.entry(b.deg).or_default().push(b.id);
            }
            m
        };
        let pos_in_degree = |id: usize, deg: usize| -> usize {
            rep_dims[&deg].iter().position(|&x| x == id).expect("basis id present")
        };
        let mut arrows: BTreeMap<Arrow, Mat<Rat>> = BTreeMap::new();
        let edges = self.spec.edges().to_vec();
        for (src, dst, coeff) in std::mem::take(&mut self.maps) {
            let (du, dv) = (self.degrees[src], self.degrees[dst]);
            let arrow = edges
                .iter()
                .position(|&(f, t)| (f, t) == (du, dv))
                .map(|e| (e, true))
                .or_else(|| {
                    edges.iter().position(|&(f, t)| (f, t) == (dv, du)).map(|e| (e, false))
                })
                .ok_or_else(|| {
                    Error::IllegalEntry(format!("no quiver edge between degrees {du} and {dv}"))
                })?;
            let rows = rep_dims.get(&dv).map_or(0, |v| v.len());
            let cols = rep_dims.get(&du).map_or(0, |v| v.len());
            let m = arrows.entry(arrow).or_insert_with(|| Mat::zero(rows, cols));
            let (r, c) = (pos_in_degree(dst, dv), pos_in_degree(src, du));
            let v = *m.get(r, c) + coeff;
            m.set(r, c, v);
        }
        Ok(QuiverRep { spec: self.spec, basis, arrows, summands: self.summands })
    }
}

/// Chain representation with the given degree list; each basis vector maps
/// to the previous one (the head of the list is the sink). Consecutive
/// degrees must be adjacent in the Dynkin graph.
pub fn chain_rep(spec: &CartanSpec, degrees: &[usize]) -> Result<QuiverRep> {
    let mut b = RepBuilder::new(spec);
    let ids: Vec<usize> = degrees.iter().map(|&d| b.push_vec(d)).collect();
    for w in ids.windows(2) {
        b.push_map(w[1], w[0], 1);
    }
    b.close_summand(ids);
    b.build()
}

/// The string V(k', k) of finite type A: degrees k'..k, x: e_r -> e_{r-1}.
pub fn string_a(spec: &CartanSpec, k_prime: usize, k: usize) -> Result<QuiverRep> {
    if spec.kind != CartanKind::FinA {
        return Err(Error::NotFinite);
    }
    if k_prime < 1 || k_prime > k || k >= spec.rank {
        return Err(Error::IndexOutOfRange(format!("V({k_prime},{k})")));
    }
    let degrees: Vec<usize> = (k_prime..=k).collect();
    chain_rep(spec, &degrees)
}

/// The affine string V(k', k): degrees are residues mod n+1.
pub fn string_affine(spec: &CartanSpec, k_prime: i64, k: i64) -> Result<QuiverRep> {
    if spec.kind != CartanKind::AffA {
        return Err(Error::NotAffine);
    }
    if k_prime > k {
        return Err(Error::IndexOutOfRange(format!("V({k_prime},{k})")));
    }
    let modulus = spec.rank as i64 + 1;
    let degrees: Vec<usize> = (k_prime..=k).map(|r| r.rem_euclid(modulus) as usize).collect();
    chain_rep(spec, &degrees)
}

/// Representation of the type-A tableau entry k in row p: the string
/// V(p, k-1), with k = p the zero representation.
pub fn entry_rep_a(spec: &CartanSpec, entry: usize, row: usize) -> Result<QuiverRep> {
    if spec.kind != CartanKind::FinA {
        return Err(Error::NotFinite);
    }
    let n = spec.rank;
    if row < 1 || entry < row || entry > n {
        return Err(Error::IllegalEntry(format!("entry {entry} in row {row}")));
    }
    if entry == row {
        return chain_rep(spec, &[]);
    }
    let degrees: Vec<usize> = (row..entry).collect();
    chain_rep(spec, &degrees)
}

/// Position of a type-D tableau entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DEntryPos {
    /// Full box in rows 1..n-1.
    Body { row: usize },
    /// Full box in the n-th row of the plus or minus shape.
    RowN { plus: bool },
    /// Half box at the given position (1..n) of the spin column.
    Spin { plus: bool, pos: usize },
}

/// Representation of a type-D tableau entry, reconstructed from the
/// branched-chain template: ascend from the row degree to n-2, pass through
/// the two spin vertices, descend to the letter degree. The single dotted
/// (-1) edge sits on the branch into the smaller-degree spin vertex and
/// makes the moment map vanish exactly.
pub fn entry_rep_d(spec: &CartanSpec, letter: DLetter, pos: DEntryPos) -> Result<QuiverRep> {
    if spec.kind != CartanKind::FinD {
        return Err(Error::NotFinite);
    }
    let n = spec.rank;
    if letter.idx < 1 || letter.idx > n {
        return Err(Error::IllegalEntry("letter out of alphabet".into()));
    }
    let zero = || chain_rep(spec, &[]);
    let illegal =
        |msg: &str| -> Result<QuiverRep> { Err(Error::IllegalEntry(msg.to_string())) };

    match pos {
        DEntryPos::Body { row: p } => {
            if p < 1 || p > n - 1 {
                return illegal("body rows are 1..n-1");
            }
            if !letter.barred {
                let i = letter.idx;
                if i < p {
                    return illegal("entry below its row");
                }
                if i == p {
                    return zero();
                }
                // V(p, i-1); for i = n this passes through the n-1 vertex
                let degrees: Vec<usize> = (p..i).collect();
                return chain_rep(spec, &degrees);
            }
            let i = letter.idx;
            if i == n {
                // degrees p..n-2 then n
                let mut degrees: Vec<usize> = (p..=n - 2).collect();
                degrees.push(n);
                return chain_rep(spec, &degrees);
            }
            if i == n - 1 {
                // Y-shape: both spin vertices map into the ascent arm
                let mut b = RepBuilder::new(spec);
                let arm: Vec<usize> = (p..=n - 2).map(|d| b.push_vec(d)).collect();
                for w in arm.windows(2) {
                    b.push_map(w[1], w[0], 1);
                }
                let s1 = b.push_vec(n - 1);
                let s2 = b.push_vec(n);
                if let Some(&top) = arm.last() {
                    b.push_map(s1, top, 1);
                    b.push_map(s2, top, 1);
                }
                let mut ids = arm;
                ids.extend([s1, s2]);
                b.close_summand(ids);
                return b.build();
            }
            // barred i <= n-2: full diamond
            let mut b = RepBuilder::new(spec);
            let arm: Vec<usize> = (p..=n - 2).map(|d| b.push_vec(d)).collect();
            for w in arm.windows(2) {
                b.push_map(w[1], w[0], 1);
            }
            let s1 = b.push_vec(n - 1);
            let s2 = b.push_vec(n);
            if let Some(&top) = arm.last() {
                b.push_map(s1, top, 1);
                b.push_map(s2, top, 1);
            }
            let descent: Vec<usize> = (i..=n - 2).map(|d| b.push_vec(d)).collect();
            for w in descent.windows(2) {
                b.push_map(w[0], w[1], 1);
            }
            if let Some(&dtop) = descent.last() {
                b.push_map(dtop, s1, -1);
                b.push_map(dtop, s2, 1);
            }
            let mut ids = arm;
            ids.extend([s1, s2]);
            ids.extend(descent);
            b.close_summand(ids);
            b.build()
        }
        DEntryPos::RowN { plus } => {
            if plus {
                if !letter.barred && letter.idx == n {
                    return zero();
                }
                if !letter.barred {
                    return illegal("row n of the plus shape holds n or barred letters");
                }
                if letter.idx == n {
                    return illegal("n-bar in row n of the plus shape");
                }
                if letter.idx == n - 1 {
                    return chain_rep(spec, &[n]);
                }
                // degrees i..n-2 then n, sink at the n end
                let mut degrees: Vec<usize> = vec![n];
                degrees.extend((letter.idx..=n - 2).rev());
                return chain_rep(spec, &degrees);
            }
            if letter.barred && letter.idx == n {
                return zero();
            }
            if !letter.barred {
                return illegal("row n of the minus shape holds n-bar or barred letters");
            }
            // barred i <= n-1: degrees i..n-1, sink at the n-1 end
            let degrees: Vec<usize> = (letter.idx..=n - 1).rev().collect();
            chain_rep(spec, &degrees)
        }
        DEntryPos::Spin { plus, pos: p } => {
            if p < 1 || p > n {
                return illegal("spin positions are 1..n");
            }
            if !letter.barred || letter.idx == n {
                return zero();
            }
            let endpoint_low = (plus && (n - p) % 2 == 1) || (!plus && (n - p) % 2 == 0);
            let end = if endpoint_low { n - 1 } else { n };
            if letter.idx == n - 1 {
                return chain_rep(spec, &[end]);
            }
            let mut degrees: Vec<usize> = vec![end];
            degrees.extend((letter.idx..=n - 2).rev());
            chain_rep(spec, &degrees)
        }
    }
}

/// Representation of one wall column: one basis element per added block,
/// each block mapping to the added block(s) of the cell below, with -1 into
/// the smaller half and +1 into the larger half of a pair cell.
pub fn wall_column_rep(wall: &Wall, j: usize) -> Result<QuiverRep> {
    if j >= wall.cols.len() {
        return Err(Error::ColumnOutOfRange(j));
    }
    let st = &wall.cols[j];
    if st.is_empty() {
        return Err(Error::EmptyColumn(j));
    }
    let spec = CartanSpec::new(CartanKind::AffD, wall.spec.n)?;
    let mut b = RepBuilder::new(&spec);
    // blocks per cell, bottom-up
    let mut cells: Vec<Vec<(usize, usize)>> = Vec::new(); // (color, id)
    for m in 0..st.complete {
        let mut cell = Vec::new();
        for c in wall.spec.slots(j, m) {
            cell.push((c, b.push_vec(c)));
        }
        cells.push(cell);
    }
    if !st.frontier.is_empty() {
        let mut cell = Vec::new();
        for &c in &st.frontier {
            cell.push((c, b.push_vec(c)));
        }
        cells.push(cell);
    }
    for m in 1..cells.len() {
        let below = cells[m - 1].clone();
        for &(_, src) in &cells[m] {
            if below.len() == 2 {
                let (small, large) =
                    if below[0].0 < below[1].0 { (below[0], below[1]) } else { (below[1], below[0]) };
                b.push_map(src, small.1, -1);
                b.push_map(src, large.1, 1);
            } else {
                // unit block, or the single added half of the ground cell
                b.push_map(src, below[0].1, 1);
            }
        }
    }
    let ids: Vec<usize> = cells.iter().flatten().map(|&(_, id)| id).collect();
    b.close_summand(ids);
    b.build()
}

/// Representation of a pyramid stack, as the affine string of its
/// endpoints.
pub fn pyramid_stack_rep(p: &Pyramid, row: usize, col: usize) -> Result<QuiverRep> {
    let (k_prime, k) = p.stack_to_string(row, col)?;
    let spec = CartanSpec::new(CartanKind::AffA, p.spec.n)?;
    string_affine(&spec, k_prime, k)
}

/// The space of strictly one-directional cross assignments from `r1` into
/// `r2` keeping the moment map at zero. Components are allowed on the
/// arrows interacting with the diagonal (those whose reverse is in the
/// support of either summand); the system is linear because the composition
/// of two cross components vanishes.
#[derive(Clone, Debug)]
pub struct CrossMapSpace {
    pub dim: usize,
    pub slots: Vec<Arrow>,
    pub basis: Vec<BTreeMap<Arrow, Mat<Rat>>>,
}

pub fn solve_cross_maps(r1: &QuiverRep, r2: &QuiverRep) -> Result<CrossMapSpace> {
    if r1.spec != r2.spec {
        return Err(Error::SpecMismatch);
    }
    let spec = &r1.spec;
    let arrows: Vec<Arrow> = {
        let mut v = Vec::new();
        for e in 0..spec.edges().len() {
            v.push((e, true));
            v.push((e, false));
        }
        v
    };
    let nonzero = |r: &QuiverRep, a: Arrow| r.arrows.get(&a).is_some_and(|m| !m.is_zero());
    // slots: arrows whose reverse carries diagonal structure
    let slots: Vec<Arrow> = arrows
        .iter()
        .copied()
        .filter(|&a| {
            let rev = (a.0, !a.1);
            (nonzero(r1, rev) || nonzero(r2, rev))
                && r2.dim_at(r2.head(a)) > 0
                && r1.dim_at(r1.tail(a)) > 0
        })
        .collect();
    // unknown layout
    let mut offsets = Vec::with_capacity(slots.len());
    let mut total = 0usize;
    for &a in &slots {
        let rows = r2.dim_at(r2.head(a));
        let cols = r1.dim_at(r1.tail(a));
        offsets.push(total);
        total += rows * cols;
    }
    let slot_index = |a: Arrow| slots.iter().position(|&s| s == a);
    // equations: for each vertex v, sum over arrows a with head v of
    // epsilon(a) (x2_a C_{a-bar} + C_a x1_{a-bar}) = 0, a matrix of size
    // dim2(v) x dim1(v)
    let mut rows_of_system: Vec<Vec<Rat>> = Vec::new();
    for v in spec.vertices() {
        let d2 = r2.dim_at(v);
        let d1 = r1.dim_at(v);
        if d1 == 0 || d2 == 0 {
            continue;
        }
        // coefficient accumulation per (r, c) entry of the equation
        let mut eq = vec![vec![vec![Rat::from_integer(0); total]; d1]; d2];
        for &a in &arrows {
            if r2.head(a) != v && r1.head(a) != v {
                continue;
            }
            // epsilon(a) x2_a C_{a-bar}: contributes when head(a) = v
            if r2.head(a) == v {
                let rev = (a.0, !a.1);
                if let Some(k) = slot_index(rev) {
                    let x2 = r2.arrow_matrix(a);
                    // C_rev has shape dim2(head rev) x dim1(tail rev) =
                    // dim2(tail a) x dim1(v)... tail(rev) = head(a) = v
                    let crows = r2.dim_at(r2.head(rev));
                    let ccols = r1.dim_at(r1.tail(rev));
                    debug_assert_eq!(ccols, d1);
                    let eps = QuiverRep::epsilon(a);
                    for r in 0..d2 {
                        for c in 0..d1 {
                            for m in 0..crows {
                                // (x2 C)_{r,c} = sum_m x2[r,m] C[m,c]
                                let coeff = *x2.get(r, m) * eps;
                                if !Scalar::is_zero(&coeff) {
                                    eq[r][c][offsets[k] + m * ccols + c] += coeff;
                                }
                            }
                        }
                    }
                }
            }
            // epsilon(a) C_a x1_{a-bar}: head(a) = v as well
            if r2.head(a) == v {
                if let Some(k) = slot_index(a) {
                    let rev = (a.0, !a.1);
                    let x1 = r1.arrow_matrix(rev);
                    // C_a: dim2(v) x dim1(tail a); x1_rev: dim1(tail a) x dim1(v)
                    let ccols = r1.dim_at(r1.tail(a));
                    let eps = QuiverRep::epsilon(a);
                    for r in 0..d2 {
                        for c in 0..d1 {
                            for m in 0..ccols {
                                let coeff = *x1.get(m, c) * eps;
                                if !Scalar::is_zero(&coeff) {
                                    eq[r][c][offsets[k] + r * ccols + m] += coeff;
                                }
                            }
                        }
                    }
                }
            }
        }
        for r in 0..d2 {
            for c in 0..d1 {
                if eq[r][c].iter().any(|x| !Scalar::is_zero(x)) {
                    rows_of_system.push(eq[r][c].clone());
                }
            }
        }
    }
    let kernel = if total == 0 {
        Vec::new()
    } else if rows_of_system.is_empty() {
        // no constraints: the whole slot space
        Mat::<Rat>::zero(1, total).kernel_basis()
    } else {
        let m = Mat::from_fn(rows_of_system.len(), total, |r, c| rows_of_system[r][c]);
        m.kernel_basis()
    };
    let mut basis = Vec::with_capacity(kernel.len());
    for vec in &kernel {
        let mut assignment = BTreeMap::new();
        for (k, &a) in slots.iter().enumerate() {
            let rows = r2.dim_at(r2.head(a));
            let cols = r1.dim_at(r1.tail(a));
            let m = Mat::from_fn(rows, cols, |r, c| vec[offsets[k] + r * cols + c]);
            if !m.is_zero() {
                assignment.insert(a, m);
            }
        }
        basis.push(assignment);
    }
    Ok(CrossMapSpace { dim: kernel.len(), slots, basis })
}

/// Signature-based geometric statistic: i-removable constituents not
/// i-matched under the model's reading order. Removability and
/// admissibility of each constituent come from its representation (cokernel
/// plus pairing); empty strings fall back to the letter data, as in the
/// source construction.
pub fn geometric_epsilon_tableau(t: &Tableau, i: usize) -> Result<i64> {
    let spec = t.cartan();
    if spec.pos(i).is_err() {
        return Err(Error::UnknownVertex(i));
    }
    let mut word = crate::crystal::SignedWord::new();
    for (p, _, entry) in t.far_eastern() {
        let row = p + 1;
        let rep = entry_rep_a(&spec, entry, row)?;
        let (minus, plus) = if rep.total_dim() == 0 {
            ((entry == i + 1) as u32, (entry == i) as u32)
        } else {
            let coker = rep.coker_dim(i) as i64;
            // <h_i, eps_entry> = delta_{i,entry} - delta_{i,entry-1}
            let pairing = i64::from(entry == i) - i64::from(entry == i + 1);
            ((coker as u32), (coker + pairing).max(0) as u32)
        };
        word.push(minus, plus);
    }
    Ok(crate::crystal::reduce_signature(&word).eps())
}

pub fn geometric_epsilon_dtableau(t: &DTableau, i: usize) -> Result<i64> {
    let spec = t.cartan();
    if spec.pos(i).is_err() {
        return Err(Error::UnknownVertex(i));
    }
    let n = t.n;
    let mut word = crate::crystal::SignedWord::new();
    for (p, _, letter) in t.far_eastern() {
        let pos = if p + 1 == n { DEntryPos::RowN { plus: !t.neg } } else { DEntryPos::Body { row: p + 1 } };
        let rep = entry_rep_d(&spec, letter, pos)?;
        let (minus, plus) = if rep.total_dim() == 0 {
            let minus = crate::tableaux_d::letter_step(n, letter, i, crate::crystal::Direction::Raise)
                .is_some() as u32;
            let plus = crate::tableaux_d::letter_step(n, letter, i, crate::crystal::Direction::Lower)
                .is_some() as u32;
            (minus, plus)
        } else {
            let coker = rep.coker_dim(i) as i64;
            let pairing = rep_pairing_d(&spec, &rep, letter, i)?;
            (coker as u32, (coker + pairing).max(0) as u32)
        };
        word.push(minus, plus);
    }
    if let Some(spin) = &t.spin {
        // the half column comes last and is matched as a single factor
        let minus = spin.step(i, crate::crystal::Direction::Raise).is_some() as u32;
        let plus = spin.step(i, crate::crystal::Direction::Lower).is_some() as u32;
        word.push(minus, plus);
    }
    Ok(crate::crystal::reduce_signature(&word).eps())
}

/// Pairing of h_i against the weight of a full-box entry, recovered from
/// the representation's dimension vector and the row weight.
fn rep_pairing_d(spec: &CartanSpec, rep: &QuiverRep, letter: DLetter, i: usize) -> Result<i64> {
    let _ = rep;
    // wt(letter) = +-eps_idx; <h_i, eps_j> over FinD
    let n = spec.rank;
    let j = letter.idx;
    let sign: i64 = if letter.barred { -1 } else { 1 };
    let v = if i <= n - 1 {
        i64::from(i == j) - i64::from(i + 1 == j)
    } else {
        i64::from(j == n - 1) + i64::from(j == n)
    };
    Ok(sign * v)
}

pub fn geometric_epsilon_pyramid(p: &Pyramid, i: usize) -> Result<i64> {
    if i > p.spec.n {
        return Err(Error::UnknownVertex(i));
    }
    let modulus = p.spec.n as i64 + 1;
    let mut word = crate::crystal::SignedWord::new();
    for (r, c, _) in p.signature(i) {
        // re-derive the flags from the string descriptor of the stack
        let h = p.height(r, c);
        let (minus, plus) = if h == 0 {
            (false, p.is_admissible(r, c, i))
        } else {
            let (_, k) = p.stack_to_string(r, c)?;
            let top = k.rem_euclid(modulus) as usize;
            let next = (k + 1).rem_euclid(modulus) as usize;
            let east_strict = p.height(r, c) > p.height(r, c + 1);
            let west_strict = c == 0 || p.height(r, c) < p.height(r, c - 1);
            (top == i && east_strict, next == i && west_strict)
        };
        debug_assert!(!(minus && plus));
        word.push(minus as u32, plus as u32);
    }
    Ok(crate::crystal::reduce_signature(&word).eps())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::WeightCoords;

    fn fina(n: usize) -> CartanSpec {
        CartanSpec::new(CartanKind::FinA, n).unwrap()
    }

    fn find(n: usize) -> CartanSpec {
        CartanSpec::new(CartanKind::FinD, n).unwrap()
    }

    #[test]
    fn chain_moment_map_and_nilpotency() {
        let s = fina(5);
        let r = string_a(&s, 1, 3).unwrap();
        assert_eq!(r.total_dim(), 3);
        assert!(r.moment_map_is_zero());
        assert!(r.is_nilpotent());
        // entry 3 in row 1 over n=4: degrees {1,2}
        let s = fina(4);
        let r = entry_rep_a(&s, 3, 1).unwrap();
        assert_eq!(r.dim_vector(), vec![1, 1, 0]);
        // empty string
        let r = entry_rep_a(&s, 2, 2).unwrap();
        assert_eq!(r.total_dim(), 0);
        assert!(entry_rep_a(&s, 1, 2).is_err());
    }

    #[test]
    fn non_nilpotent_detected() {
        // an explicit cycle: e0 -> e1 -> e0 with both arrows nonzero
        let s = fina(3);
        let mut b = RepBuilder::new(&s);
        let v1 = b.push_vec(1);
        let v2 = b.push_vec(2);
        b.push_map(v1, v2, 1);
        b.push_map(v2, v1, 1);
        b.close_summand(vec![v1, v2]);
        let r = b.build().unwrap();
        assert!(!r.is_nilpotent());
    }

    /// Expected dimension vector: the root expansion of
    /// (row weight) - wt(letter), computed by exact epsilon arithmetic.
    fn expected_dims(spec: &CartanSpec, row_eps: &[(usize, i64)], letter: DLetter) -> Vec<i64> {
        let n = spec.rank;
        let mut coeffs = vec![crate::linalg::Rat::from_integer(0); n];
        for &(idx, sign) in row_eps {
            coeffs[idx - 1] += crate::linalg::Rat::from_integer(sign);
        }
        let sign = if letter.barred { -1 } else { 1 };
        coeffs[letter.idx - 1] -= crate::linalg::Rat::from_integer(sign);
        // solve sum k_j alpha_j = coeffs via 0 - sum k alpha = -coeffs
        let neg = crate::cartan::EpsWeight { coeffs: coeffs.iter().map(|x| -*x).collect() };
        spec.drop_from_eps(&vec![0i64; n], &neg).unwrap()
    }

    #[test]
    fn d_entry_reps_dims_and_moment_map() {
        for n in [4usize, 5] {
            let s = find(n);
            for p in 1..=n - 1 {
                for idx in 1..=n {
                    for barred in [false, true] {
                        let letter = DLetter::new(idx, barred);
                        if !barred && idx < p {
                            continue;
                        }
                        let rep = entry_rep_d(&s, letter, DEntryPos::Body { row: p }).unwrap();
                        assert!(rep.moment_map_is_zero(), "n={n} p={p} {letter:?}");
                        assert!(rep.is_nilpotent());
                        let expect = expected_dims(&s, &[(p, 1)], letter);
                        assert_eq!(rep.dim_vector(), expect, "n={n} p={p} {letter:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn barred_entry_dim_vector_example() {
        // letter i-bar with i, p <= n-2 over n=4: v_j = 1 on p..i-1, 2 on
        // i..n-2, 1 at n-1 and n
        let s = find(4);
        let rep = entry_rep_d(&s, DLetter::new(2, true), DEntryPos::Body { row: 1 }).unwrap();
        assert_eq!(rep.dim_vector(), vec![1, 2, 1, 1]);
        assert!(rep.moment_map_is_zero());
    }

    #[test]
    fn cross_maps_type_a_condition() {
        let s = fina(5);
        // p<q<=i<j: nonzero
        let r1 = entry_rep_a(&s, 4, 1).unwrap(); // V(1,3)
        let r2 = entry_rep_a(&s, 5, 2).unwrap(); // V(2,4)
        let space = solve_cross_maps(&r1, &r2).unwrap();
        assert_eq!(space.dim, 1);
        // p = q: zero
        let r2 = entry_rep_a(&s, 5, 1).unwrap();
        let space = solve_cross_maps(&r1, &r2).unwrap();
        assert_eq!(space.dim, 0);
        // zero target
        let z = entry_rep_a(&s, 2, 2).unwrap();
        assert_eq!(solve_cross_maps(&r1, &z).unwrap().dim, 0);
    }

    #[test]
    fn stability_examples() {
        let s = fina(4);
        // single chain with framing at its sink vertex
        let r = string_a(&s, 1, 2).unwrap();
        let mut t = BTreeMap::new();
        t.insert(1usize, Mat::from_fn(1, 1, |_, _| Rat::from_integer(1)));
        assert!(r.is_stable(&t).unwrap());
        // no framing: the sink vector is a stable killed subspace
        let empty = BTreeMap::new();
        assert!(!r.is_stable(&empty).unwrap());
        // v = 0 is stable for any framing
        let z = entry_rep_a(&s, 2, 2).unwrap();
        assert!(z.is_stable(&empty).unwrap());
    }

    #[test]
    fn geometric_epsilon_matches_on_worked_example() {
        let t = crate::tableaux_a::Tableau::new(
            6,
            vec![vec![1, 2, 2, 3, 3], vec![2, 3, 4], vec![4, 5], vec![5]],
        )
        .unwrap();
        assert_eq!(geometric_epsilon_tableau(&t, 2).unwrap(), 2);
        use crate::crystal::CrystalElement;
        for i in 1..6 {
            let (eps, _) = t.string_lengths(i).unwrap();
            assert_eq!(geometric_epsilon_tableau(&t, i).unwrap(), eps, "i = {}", i);
        }
    }
}
