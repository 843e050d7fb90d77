//! Level-one Young walls for D_n^(1).
//!
//! Columns follow a doubly periodic cell pattern with period 2n-4 cells
//! (2n-2 blocks): a two-slot {0,1} cell, unit cells 2..n-2, a two-slot
//! {n-1,n} cell, and unit cells n-2..2 again. The two halves of a pair cell
//! are unordered slots; a cell is complete when all of its slots are filled.
//! The bottom cell of every column has one half prefilled as ground-state
//! material (immutable and weightless): for omega_0 the 1-half in even
//! columns and the 0-half in odd columns, and symmetrically for the other
//! level-one fundamental weights. Columns are numbered y_0, y_1, ... from
//! right to left.
//!
//! A block may be placed in a cell of y_j only when the same cell of
//! y_{j-1} is complete (cell-granularity support), the cell below within the
//! column is complete, and the resulting wall is proper: no two full columns
//! (topmost occupied cell complete) share the same positive height.

use crate::cartan::{CartanKind, CartanSpec, WeightCoords};
use crate::crystal::{reduce_signature, tensor_apply, CrystalElement, Direction, SignedWord};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WallSpec {
    pub n: usize,
    /// Level-one fundamental weight index: 0, 1, n-1 or n.
    pub k: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum CellKind {
    Unit(usize),
    /// Pair cell; the ground instance keeps only the non-prefilled slot.
    Pair(usize, usize),
    Ground(usize),
}

impl WallSpec {
    pub fn new(spec: &CartanSpec, lambda: &[i64]) -> Result<WallSpec> {
        if spec.kind != CartanKind::AffD {
            return Err(Error::NotAffine);
        }
        if lambda.len() != spec.num_vertices() {
            return Err(Error::DimensionMismatch);
        }
        let n = spec.rank;
        let mut k = None;
        for (pos, &w) in lambda.iter().enumerate() {
            if w < 0 {
                return Err(Error::NegativeCoefficient);
            }
            if w > 0 {
                if w > 1 || k.is_some() {
                    return Err(Error::NotLevelOne);
                }
                k = Some(pos);
            }
        }
        let k = k.ok_or(Error::ZeroWeight)?;
        if ![0, 1, n - 1, n].contains(&k) {
            return Err(Error::NotLevelOne);
        }
        Ok(WallSpec { n, k })
    }

    pub fn period(&self) -> usize {
        2 * self.n - 4
    }

    pub fn delta_blocks(&self) -> usize {
        2 * self.n - 2
    }

    pub fn lambda(&self) -> Vec<i64> {
        let mut l = vec![0i64; self.n + 1];
        l[self.k] = 1;
        l
    }

    /// Ground prefill color of column j.
    fn prefill(&self, col: usize) -> usize {
        let (a, b) = if self.k <= 1 { (0, 1) } else { (self.n - 1, self.n) };
        // the first addable block of y_0 must be omega_k's color
        let partner = |x: usize| a + b - x;
        if col % 2 == 0 {
            partner(self.k)
        } else {
            self.k
        }
    }

    /// Cell kind at height m of column j.
    fn cell(&self, col: usize, m: usize) -> CellKind {
        let n = self.n;
        let r = m % self.period();
        let ascending = self.k <= 1;
        let kind = if ascending {
            match r {
                0 => CellKind::Pair(0, 1),
                x if x <= n - 3 => CellKind::Unit(x + 1),
                x if x == n - 2 => CellKind::Pair(n - 1, n),
                x => CellKind::Unit(2 * n - 3 - x),
            }
        } else {
            match r {
                0 => CellKind::Pair(n - 1, n),
                x if x <= n - 3 => CellKind::Unit(n - 1 - x),
                x if x == n - 2 => CellKind::Pair(0, 1),
                x => CellKind::Unit(x - n + 3),
            }
        };
        if m == 0 {
            match kind {
                CellKind::Pair(a, b) => {
                    let pre = self.prefill(col);
                    debug_assert!(pre == a || pre == b);
                    CellKind::Ground(a + b - pre)
                }
                _ => unreachable!("pattern starts with a pair cell"),
            }
        } else {
            kind
        }
    }

    /// Addable slot colors of cell m in column j.
    pub fn slots(&self, col: usize, m: usize) -> Vec<usize> {
        match self.cell(col, m) {
            CellKind::Unit(c) => vec![c],
            CellKind::Pair(a, b) => vec![a, b],
            CellKind::Ground(c) => vec![c],
        }
    }
}

/// Occupancy of one column: `complete` cells plus an optional partially
/// filled frontier cell holding the listed added colors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ColumnState {
    pub complete: usize,
    pub frontier: Vec<usize>,
}

impl ColumnState {
    pub fn empty() -> ColumnState {
        ColumnState { complete: 0, frontier: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.complete == 0 && self.frontier.is_empty()
    }

    /// Number of occupied cells.
    pub fn occupied(&self) -> usize {
        self.complete + usize::from(!self.frontier.is_empty())
    }

    /// A column is full when its topmost occupied cell is complete.
    pub fn is_full(&self) -> bool {
        self.frontier.is_empty() && self.complete > 0
    }

    fn normalized(mut self, spec: &WallSpec, col: usize) -> ColumnState {
        self.frontier.sort_unstable();
        self.frontier.dedup();
        while !self.frontier.is_empty() {
            let mut slots = spec.slots(col, self.complete);
            slots.sort_unstable();
            if self.frontier == slots {
                self.complete += 1;
                self.frontier.clear();
            } else {
                break;
            }
        }
        self
    }

    /// The frontier must be a proper subset of the frontier cell's slots.
    fn frontier_legal(&self, spec: &WallSpec, col: usize) -> bool {
        if self.frontier.is_empty() {
            return true;
        }
        let slots = spec.slots(col, self.complete);
        self.frontier.len() < slots.len() && self.frontier.iter().all(|c| slots.contains(c))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wall {
    pub spec: WallSpec,
    /// y_0 first (rightmost); trailing empty columns trimmed.
    pub cols: Vec<ColumnState>,
}

impl Wall {
    pub fn ground(spec: WallSpec) -> Wall {
        Wall { spec, cols: Vec::new() }
    }

    fn col(&self, j: usize) -> ColumnState {
        self.cols.get(j).cloned().unwrap_or_else(ColumnState::empty)
    }

    fn trim(&mut self) {
        while self.cols.last().is_some_and(|c| c.is_empty()) {
            self.cols.pop();
        }
    }

    /// Support plus properness for the whole wall.
    pub fn check(&self) -> bool {
        for (j, st) in self.cols.iter().enumerate() {
            if !st.frontier_legal(&self.spec, j) {
                return false;
            }
        }
        for j in 1..self.cols.len() {
            if self.cols[j].occupied() > self.cols[j - 1].occupied() {
                return false;
            }
        }
        let mut heights: Vec<usize> = self
            .cols
            .iter()
            .filter(|c| c.is_full())
            .map(|c| c.occupied())
            .collect();
        heights.sort_unstable();
        heights.dedup();
        heights.len() == self.cols.iter().filter(|c| c.is_full()).count()
    }

    /// Total added blocks per color.
    pub fn color_counts(&self) -> Vec<i64> {
        let mut counts = vec![0i64; self.spec.n + 1];
        for (j, st) in self.cols.iter().enumerate() {
            for m in 0..st.complete {
                for c in self.spec.slots(j, m) {
                    counts[c] += 1;
                }
            }
            for &c in &st.frontier {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn total_blocks(&self) -> i64 {
        self.color_counts().iter().sum()
    }

    fn with_column(&self, j: usize, st: ColumnState) -> Wall {
        let mut cols = self.cols.clone();
        if cols.len() <= j {
            cols.resize(j + 1, ColumnState::empty());
        }
        cols[j] = st;
        let mut w = Wall { spec: self.spec, cols };
        w.trim();
        w
    }

    /// The wall obtained by adding an i-block to column j, when the pattern,
    /// the support rule and properness all allow it.
    pub fn add_block(&self, j: usize, i: usize) -> Option<Wall> {
        let st = self.col(j);
        let cell = st.complete;
        let slots = self.spec.slots(j, cell);
        if !slots.contains(&i) || st.frontier.contains(&i) {
            return None;
        }
        // support: the receiving cell must be occupied in the column to the
        // right
        if j > 0 && self.col(j - 1).occupied() < cell + 1 {
            return None;
        }
        let mut f = st.frontier.clone();
        f.push(i);
        let new = ColumnState { complete: st.complete, frontier: f }.normalized(&self.spec, j);
        let w = self.with_column(j, new);
        w.check().then_some(w)
    }

    /// The wall obtained by removing an i-block from the top of column j.
    pub fn remove_block(&self, j: usize, i: usize) -> Option<Wall> {
        let st = self.col(j);
        let new = if !st.frontier.is_empty() {
            if !st.frontier.contains(&i) {
                return None;
            }
            let f: Vec<usize> = st.frontier.iter().copied().filter(|&c| c != i).collect();
            ColumnState { complete: st.complete, frontier: f }
        } else {
            if st.complete == 0 {
                return None;
            }
            let cell = st.complete - 1;
            let slots = self.spec.slots(j, cell);
            if !slots.contains(&i) {
                return None;
            }
            let f: Vec<usize> = slots.into_iter().filter(|&c| c != i).collect();
            ColumnState { complete: cell, frontier: f }
        };
        let w = self.with_column(j, new);
        w.check().then_some(w)
    }

    /// Signed columns for color i, read in the order the columns appear on
    /// the page: leftmost (deepest) column first, y_0 last. At most one sign
    /// per column. Returns (column, is_plus).
    pub fn signature(&self, i: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for j in (0..=self.cols.len()).rev() {
            let addable = self.add_block(j, i).is_some();
            let removable = self.remove_block(j, i).is_some();
            debug_assert!(!(addable && removable), "column cannot carry two signs");
            if removable {
                out.push((j, false));
            } else if addable {
                out.push((j, true));
            }
        }
        out
    }

    fn signed_word(&self, i: usize) -> (SignedWord, Vec<usize>) {
        let sig = self.signature(i);
        let mut word = SignedWord::new();
        let mut cols = Vec::with_capacity(sig.len());
        for (j, plus) in sig {
            word.push(!plus as u32, plus as u32);
            cols.push(j);
        }
        (word, cols)
    }

    pub fn apply(&self, i: usize, dir: Direction) -> Result<Option<Wall>> {
        let (word, cols) = self.signed_word(i);
        let Some(idx) = tensor_apply(&word, dir) else {
            return Ok(None);
        };
        let j = cols[idx];
        let res = match dir {
            Direction::Lower => self.add_block(j, i),
            Direction::Raise => self.remove_block(j, i),
        };
        res.map(Some).ok_or_else(|| Error::IllegalEntry("selected column cannot move".into()))
    }

    /// True when lowering column j by one full period leaves a proper wall
    /// and removes exactly the block multiset of delta.
    pub fn delta_removable(&self, j: usize) -> Result<bool> {
        if j >= self.cols.len() {
            return Err(Error::ColumnOutOfRange(j));
        }
        let period = self.spec.period();
        let st = self.col(j);
        if st.complete < period {
            return Ok(false);
        }
        let mut frontier = st.frontier.clone();
        if st.complete == period {
            // frontier halves landing on the ground cell: the prefill half
            // is absorbed into the ground material
            frontier.retain(|&c| c != self.spec.prefill(j));
        }
        let lowered = ColumnState { complete: st.complete - period, frontier }
            .normalized(&self.spec, j);
        if !lowered.frontier_legal(&self.spec, j) {
            return Ok(false);
        }
        let candidate = self.with_column(j, lowered);
        if !candidate.check() {
            return Ok(false);
        }
        // the removed blocks must be exactly one 0, one 1, two of each
        // middle color, one n-1 and one n
        let before = self.color_counts();
        let after = candidate.color_counts();
        let marks = CartanSpec::new(CartanKind::AffD, self.spec.n)?.null_root()?;
        let removed: Vec<i64> = before.iter().zip(&after).map(|(b, a)| b - a).collect();
        Ok(removed == marks)
    }

    pub fn is_reduced(&self) -> Result<bool> {
        for j in 0..self.cols.len() {
            if self.delta_removable(j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl CrystalElement for Wall {
    fn cartan(&self) -> CartanSpec {
        CartanSpec::new(CartanKind::AffD, self.spec.n).expect("valid by construction")
    }

    fn weight(&self) -> WeightCoords {
        WeightCoords { lambda: self.spec.lambda(), drop: self.color_counts() }
    }

    fn string_lengths(&self, i: usize) -> Result<(i64, i64)> {
        if i > self.spec.n {
            return Err(Error::UnknownVertex(i));
        }
        let (word, _) = self.signed_word(i);
        let r = reduce_signature(&word);
        Ok((r.eps(), r.phi()))
    }

    fn lower(&self, i: usize) -> Result<Option<Self>> {
        self.apply(i, Direction::Lower)
    }

    fn raise(&self, i: usize) -> Result<Option<Self>> {
        self.apply(i, Direction::Raise)
    }

    fn canonical_key(&self) -> String {
        let mut s = format!("w{}k{}", self.spec.n, self.spec.k);
        for st in &self.cols {
            s.push('|');
            s.push_str(&st.complete.to_string());
            if !st.frontier.is_empty() {
                s.push(':');
                let f: Vec<String> = st.frontier.iter().map(|c| c.to_string()).collect();
                s.push_str(&f.join(","));
            }
        }
        s
    }

    fn payload(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.spec.k,
            "columns": self.cols,
            "label": self.render(),
        })
    }

    fn model(&self) -> &'static str {
        "wall"
    }

    fn render(&self) -> String {
        if self.cols.is_empty() {
            return "ground".to_string();
        }
        self.cols
            .iter()
            .enumerate()
            .map(|(j, st)| {
                let f = if st.frontier.is_empty() {
                    String::new()
                } else {
                    let f: Vec<String> = st.frontier.iter().map(|c| c.to_string()).collect();
                    format!(" +{{{}}}", f.join(","))
                };
                format!("y{}: {} cells{}", j, st.complete, f)
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn from_payload(spec: WallSpec, payload: &serde_json::Value) -> Result<Wall> {
    let cols: Vec<ColumnState> = serde_json::from_value(
        payload
            .get("columns")
            .cloned()
            .ok_or_else(|| Error::Payload("missing columns".into()))?,
    )
    .map_err(|e| Error::Payload(e.to_string()))?;
    let cols: Vec<ColumnState> = cols
        .into_iter()
        .enumerate()
        .map(|(j, st)| st.normalized(&spec, j))
        .collect();
    let mut w = Wall { spec, cols };
    w.trim();
    if !w.check() {
        return Err(Error::Payload("wall violates support or properness".into()));
    }
    Ok(w)
}

/// All proper walls with at most `max_blocks` added blocks, by direct
/// enumeration over column-state tuples.
pub fn enumerate_proper(spec: WallSpec, max_blocks: i64) -> Vec<Wall> {
    // column states with a given block count
    fn states(spec: &WallSpec, col: usize, max: i64) -> Vec<(ColumnState, i64)> {
        let mut out = vec![(ColumnState::empty(), 0i64)];
        let mut complete = 0usize;
        let mut used = 0i64;
        loop {
            let slots = spec.slots(col, complete);
            // partial frontiers of this cell
            for f in proper_subsets(&slots) {
                let cost = used + f.len() as i64;
                if cost <= max && !f.is_empty() {
                    out.push((ColumnState { complete, frontier: f }, cost));
                }
            }
            used += slots.len() as i64;
            if used > max {
                break;
            }
            complete += 1;
            out.push((ColumnState { complete, frontier: Vec::new() }, used));
        }
        out
    }
    fn proper_subsets(slots: &[usize]) -> Vec<Vec<usize>> {
        if slots.len() == 1 {
            vec![Vec::new()]
        } else {
            vec![Vec::new(), vec![slots[0]], vec![slots[1]]]
        }
    }
    fn rec(spec: WallSpec, j: usize, budget: i64, cols: &mut Vec<ColumnState>, out: &mut Vec<Wall>) {
        // close off the wall here
        let mut w = Wall { spec, cols: cols.clone() };
        w.trim();
        if w.check() {
            out.push(w);
        }
        if budget <= 0 {
            return;
        }
        let support = if j == 0 { usize::MAX } else { cols[j - 1].occupied() };
        for (st, cost) in states(&spec, j, budget) {
            if st.is_empty() || st.occupied() > support {
                continue;
            }
            cols.push(st);
            rec(spec, j + 1, budget - cost, cols, out);
            cols.pop();
        }
    }
    let mut out = Vec::new();
    let mut cols = Vec::new();
    rec(spec, 0, max_blocks, &mut cols, &mut out);
    // the recursion records prefixes at every level, so deduplicate
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|w| seen.insert(w.canonical_key()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{compare, freudenthal};
    use crate::crystal::generate;

    fn setup(n: usize, k: usize) -> (CartanSpec, WallSpec) {
        let spec = CartanSpec::new(CartanKind::AffD, n).unwrap();
        let mut lambda = vec![0i64; n + 1];
        lambda[k] = 1;
        let ws = WallSpec::new(&spec, &lambda).unwrap();
        (spec, ws)
    }

    #[test]
    fn pattern_for_n5() {
        let (_, ws) = setup(5, 0);
        assert_eq!(ws.period(), 6);
        assert_eq!(ws.delta_blocks(), 8);
        // column 0 pattern: ground {0}, 2, 3, {4,5}, 3, 2, then {0,1}
        assert_eq!(ws.slots(0, 0), vec![0]);
        assert_eq!(ws.slots(0, 1), vec![2]);
        assert_eq!(ws.slots(0, 2), vec![3]);
        assert_eq!(ws.slots(0, 3), vec![4, 5]);
        assert_eq!(ws.slots(0, 4), vec![3]);
        assert_eq!(ws.slots(0, 5), vec![2]);
        assert_eq!(ws.slots(0, 6), vec![0, 1]);
        // odd column ground slot is the 1-half
        assert_eq!(ws.slots(1, 0), vec![1]);
    }

    #[test]
    fn ground_wall_statistics() {
        let (spec, ws) = setup(5, 0);
        let g = Wall::ground(ws);
        for i in 0..=5 {
            let (eps, phi) = g.string_lengths(i).unwrap();
            assert_eq!(eps, 0);
            assert_eq!(phi, i64::from(i == 0));
            assert_eq!(phi - eps, spec.pairing(&g.weight(), i).unwrap());
        }
        assert!(g.raise(0).unwrap().is_none());
    }

    #[test]
    fn first_steps_integrability_n5() {
        let (_, ws) = setup(5, 0);
        let g = Wall::ground(ws);
        let a = g.lower(0).unwrap().unwrap();
        // second addable color is 2, in the unit cell above the pair
        assert_eq!(a.string_lengths(2).unwrap(), (0, 1));
        assert!(a.lower(1).unwrap().is_none());
        assert_eq!(a.string_lengths(0).unwrap(), (1, 0));
        let b = a.lower(2).unwrap().unwrap();
        // f_1 f_2 f_0 is nonzero: the 1-block goes into the second column
        let c = b.lower(1).unwrap().unwrap();
        assert_eq!(c.cols.len(), 2);
        assert_eq!(c.cols[1], ColumnState { complete: 1, frontier: vec![] });
        // phi_0 = 0 there: the third column's 0-slot is properness-blocked
        assert_eq!(c.string_lengths(0).unwrap(), (0, 0));
        // and f_3(b), then both spin colors open up
        let d = b.lower(3).unwrap().unwrap();
        assert_eq!(d.string_lengths(4).unwrap(), (0, 1));
        assert_eq!(d.string_lengths(5).unwrap(), (0, 1));
        let e = d.lower(4).unwrap().unwrap();
        assert_eq!(e.string_lengths(5).unwrap(), (0, 1));
        assert!(e.lower(4).unwrap().is_none());
    }

    #[test]
    fn pairing_consistency_along_generation() {
        let (spec, ws) = setup(4, 0);
        let g = generate(Wall::ground(ws), Some(4), 1).unwrap();
        for node in &g.nodes {
            let w = from_payload(ws, &node.payload).unwrap();
            for i in 0..=4 {
                let (eps, phi) = w.string_lengths(i).unwrap();
                assert_eq!(phi - eps, spec.pairing(&w.weight(), i).unwrap(), "{:?} i={}", node.key, i);
            }
        }
    }

    #[test]
    fn walls_match_oracle_depth_five() {
        for k in [0usize, 1] {
            let (spec, ws) = setup(4, k);
            let g = generate(Wall::ground(ws), Some(5), 1).unwrap();
            let table = freudenthal(&spec, &ws.lambda(), 5).unwrap();
            let diff = compare(&g, &table).unwrap();
            assert!(diff.is_empty(), "k={}: {:?}", k, diff);
        }
    }

    #[test]
    fn spin_ground_walls() {
        for k in [3usize, 4] {
            let (spec, ws) = setup(4, k);
            let g = generate(Wall::ground(ws), Some(4), 1).unwrap();
            let table = freudenthal(&spec, &ws.lambda(), 4).unwrap();
            let diff = compare(&g, &table).unwrap();
            assert!(diff.is_empty(), "k={}: {:?}", k, diff);
        }
    }

    #[test]
    fn delta_removal() {
        let (_, ws) = setup(4, 0);
        let ground = Wall::ground(ws);
        assert!(ground.is_reduced().unwrap());
        assert!(ground.delta_removable(0).is_err());
        // fewer than 2n-2 added blocks: never removable
        let small = Wall { spec: ws, cols: vec![ColumnState { complete: 2, frontier: vec![] }] };
        assert!(!small.delta_removable(0).unwrap());
        // one full period plus the extra pair half is exactly delta
        let full = Wall {
            spec: ws,
            cols: vec![ColumnState { complete: ws.period(), frontier: vec![1] }],
        };
        assert!(full.check());
        assert_eq!(full.total_blocks() as usize, ws.delta_blocks());
        assert!(full.delta_removable(0).unwrap());
        assert!(!full.is_reduced().unwrap());
        // the same column without the 1-half is one block short of delta
        let short = Wall {
            spec: ws,
            cols: vec![ColumnState { complete: ws.period(), frontier: vec![] }],
        };
        assert!(!short.delta_removable(0).unwrap());
    }

    #[test]
    fn generated_walls_stay_reduced() {
        let (_, ws) = setup(4, 0);
        let g = generate(Wall::ground(ws), Some(6), 1).unwrap();
        for node in &g.nodes {
            let w = from_payload(ws, &node.payload).unwrap();
            assert!(w.is_reduced().unwrap(), "{}", node.key);
        }
    }

    #[test]
    fn enumeration_matches_generation() {
        let (_, ws) = setup(4, 0);
        let depth = 5;
        let g = generate(Wall::ground(ws), Some(depth), 1).unwrap();
        let mut from_enum: Vec<String> = enumerate_proper(ws, depth)
            .into_iter()
            .filter(|w| w.is_reduced().unwrap())
            .map(|w| w.canonical_key())
            .collect();
        from_enum.sort();
        let mut from_gen: Vec<String> = g.nodes.iter().map(|n| n.key.clone()).collect();
        from_gen.sort();
        assert_eq!(from_enum, from_gen);
    }
}
