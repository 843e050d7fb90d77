//! Young pyramids for A_n^(1) at arbitrary level.
//!
//! A pyramid is a stack arrangement over `l` rows of ground slots, one row
//! per fundamental-weight multiplicity of the dominant weight. Each row is a
//! partition (stack heights weakly decrease eastward) whose ground colors
//! cycle as `charge - column (mod n+1)`; a block at level h of stack (r, c)
//! has color `charge_r - c + h - 1 (mod n+1)`.
//!
//! Rows are coupled cylindrically: consecutive rows align with the column
//! offset `d_r = charge_{r+1} - charge_r` (charges are kept weakly increasing
//! north to south) and the southernmost row wraps onto the northernmost one
//! with offset `n + 1 - (charge_l - charge_1)`, so the total shift around the
//! cylinder is one full color period. Equal charges reproduce the plain
//! "weakly taller than south and east" rule with an (n+1)-column wrap.

use crate::cartan::{CartanKind, CartanSpec, WeightCoords};
use crate::crystal::{reduce_signature, CrystalElement, Direction};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PyramidSpec {
    pub n: usize,
    /// Dominant weight coefficients over vertices 0..n.
    pub lambda: Vec<i64>,
    /// Ground colors of the rows, weakly increasing north to south; color i
    /// appears lambda_i times.
    pub charges: Vec<usize>,
}

impl PyramidSpec {
    pub fn new(spec: &CartanSpec, lambda: &[i64]) -> Result<Arc<PyramidSpec>> {
        if spec.kind != CartanKind::AffA {
            return Err(Error::NotAffine);
        }
        if lambda.len() != spec.num_vertices() {
            return Err(Error::DimensionMismatch);
        }
        if lambda.iter().any(|&x| x < 0) {
            return Err(Error::NegativeCoefficient);
        }
        let mut charges = Vec::new();
        for (color, &mult) in lambda.iter().enumerate() {
            for _ in 0..mult {
                charges.push(color);
            }
        }
        if charges.is_empty() {
            return Err(Error::ZeroWeight);
        }
        Ok(Arc::new(PyramidSpec { n: spec.rank, lambda: lambda.to_vec(), charges }))
    }

    pub fn levels(&self) -> usize {
        self.charges.len()
    }

    pub fn colors(&self) -> usize {
        self.n + 1
    }

    /// Column offset between row r-1 and row r (0-based target row).
    fn south_offset(&self, r: usize) -> usize {
        self.charges[r] - self.charges[r - 1]
    }

    /// Column offset wrapping the southernmost row onto the northernmost.
    fn wrap_offset(&self) -> usize {
        let l = self.levels();
        self.n + 1 - (self.charges[l - 1] - self.charges[0])
    }

    fn color(&self, value: i64) -> usize {
        value.rem_euclid(self.colors() as i64) as usize
    }

    /// Ground color of slot (row, col); rows and cols 0-based.
    fn ground_color(&self, row: usize, col: usize) -> usize {
        self.color(self.charges[row] as i64 - col as i64)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pyramid {
    pub spec: Arc<PyramidSpec>,
    /// One partition per row: positive heights, weakly decreasing in c.
    pub heights: Vec<Vec<u32>>,
}

impl Pyramid {
    pub fn empty(spec: Arc<PyramidSpec>) -> Pyramid {
        let l = spec.levels();
        Pyramid { spec, heights: vec![Vec::new(); l] }
    }

    pub fn height(&self, row: usize, col: usize) -> u32 {
        self.heights[row].get(col).copied().unwrap_or(0)
    }

    fn row_len(&self, row: usize) -> usize {
        self.heights[row].len()
    }

    pub fn total_blocks(&self) -> i64 {
        self.heights.iter().flatten().map(|&h| h as i64).sum()
    }

    /// Color of the top block of a nonempty stack.
    pub fn top_color(&self, row: usize, col: usize) -> Option<usize> {
        let h = self.height(row, col);
        if h == 0 {
            None
        } else {
            Some(self.spec.color(self.spec.ground_color(row, col) as i64 + h as i64 - 1))
        }
    }

    /// Color of the next slot above stack (row, col).
    pub fn next_color(&self, row: usize, col: usize) -> usize {
        let h = self.height(row, col);
        self.spec.color(self.spec.ground_color(row, col) as i64 + h as i64)
    }

    /// Building rules: rows weakly decrease eastward and row r dominates row
    /// r+1 shifted by the charge offset.
    pub fn check_rules(&self) -> bool {
        let l = self.spec.levels();
        for row in &self.heights {
            if row.last() == Some(&0) {
                return false;
            }
            for c in 1..row.len() {
                if row[c] > row[c - 1] {
                    return false;
                }
            }
        }
        for r in 1..l {
            let d = self.spec.south_offset(r);
            for c in 0..self.row_len(r) {
                // stacks west of the offset have no northern counterpart
                if c < d {
                    continue;
                }
                if self.height(r - 1, c - d) < self.height(r, c) {
                    return false;
                }
            }
        }
        true
    }

    /// Properness: the southernmost row dominates the northernmost one
    /// shifted by the wrap offset.
    pub fn is_proper(&self) -> bool {
        let l = self.spec.levels();
        let d = self.spec.wrap_offset();
        for c in d..self.row_len(0).max(d) {
            if self.height(l - 1, c - d) < self.height(0, c) {
                return false;
            }
        }
        true
    }

    /// No height carries all n+1 top colors.
    pub fn is_n_reduced(&self) -> bool {
        let mut tops: std::collections::BTreeMap<u32, BTreeSet<usize>> = Default::default();
        for r in 0..self.spec.levels() {
            for c in 0..self.row_len(r) {
                if let Some(color) = self.top_color(r, c) {
                    tops.entry(self.height(r, c)).or_default().insert(color);
                }
            }
        }
        tops.values().all(|colors| colors.len() < self.spec.colors())
    }

    pub fn is_valid(&self) -> bool {
        self.check_rules() && self.is_proper()
    }

    pub fn is_removable(&self, row: usize, col: usize, i: usize) -> bool {
        self.top_color(row, col) == Some(i) && self.height(row, col) > self.height(row, col + 1)
    }

    pub fn is_admissible(&self, row: usize, col: usize, i: usize) -> bool {
        self.next_color(row, col) == i
            && (col == 0 || self.height(row, col) < self.height(row, col - 1))
    }

    /// Signed stacks for color i in signature order: taller stacks first,
    /// removable before admissible at equal height, then west to east and
    /// north to south in the staircase (absolute) column coordinate.
    /// Returns (row, col, is_plus).
    pub fn signature(&self, i: usize) -> Vec<(usize, usize, bool)> {
        let mut slots: Vec<(i64, u8, i64, usize, usize, bool)> = Vec::new();
        for r in 0..self.spec.levels() {
            for c in 0..=self.row_len(r) {
                let h = self.height(r, c) as i64;
                let absolute = c as i64 - self.spec.charges[r] as i64;
                if self.is_removable(r, c, i) {
                    slots.push((-h, 0, absolute, r, c, false));
                } else if self.is_admissible(r, c, i) {
                    slots.push((-h, 1, absolute, r, c, true));
                }
            }
        }
        slots.sort();
        slots.into_iter().map(|(_, _, _, r, c, plus)| (r, c, plus)).collect()
    }

    fn signed_word(&self, i: usize) -> (crate::crystal::SignedWord, Vec<(usize, usize)>) {
        let slots = self.signature(i);
        let mut word = crate::crystal::SignedWord::new();
        let mut positions = Vec::with_capacity(slots.len());
        for (r, c, plus) in slots {
            word.push(!plus as u32, plus as u32);
            positions.push((r, c));
        }
        (word, positions)
    }

    pub fn apply(&self, i: usize, dir: Direction) -> Result<Option<Pyramid>> {
        let (word, positions) = self.signed_word(i);
        let Some(idx) = crate::crystal::tensor_apply(&word, dir) else {
            return Ok(None);
        };
        let (r, c) = positions[idx];
        let mut heights = self.heights.clone();
        match dir {
            Direction::Lower => {
                if c == heights[r].len() {
                    heights[r].push(1);
                } else {
                    heights[r][c] += 1;
                }
            }
            Direction::Raise => {
                heights[r][c] -= 1;
                while heights[r].last() == Some(&0) {
                    heights[r].pop();
                }
            }
        }
        let p = Pyramid { spec: self.spec.clone(), heights };
        if !p.is_valid() {
            return Err(Error::IllegalEntry("pyramid left the proper set".into()));
        }
        Ok(Some(p))
    }

    /// Number of blocks of each color.
    pub fn color_counts(&self) -> Vec<i64> {
        let mut counts = vec![0i64; self.spec.colors()];
        for r in 0..self.spec.levels() {
            for c in 0..self.row_len(r) {
                let ground = self.spec.ground_color(r, c) as i64;
                for h in 0..self.height(r, c) as i64 {
                    counts[self.spec.color(ground + h)] += 1;
                }
            }
        }
        counts
    }

    /// String descriptor of a nonempty stack: degrees k'..k with k' the
    /// ground color lifted to the integers. Translating both endpoints by
    /// n+1 fixes the isomorphism class.
    pub fn stack_to_string(&self, row: usize, col: usize) -> Result<(i64, i64)> {
        let h = self.height(row, col);
        if h == 0 {
            return Err(Error::EmptyStack(row + 1, col));
        }
        let k_prime = self.spec.charges[row] as i64 - col as i64;
        Ok((k_prime, k_prime + h as i64 - 1))
    }
}

impl CrystalElement for Pyramid {
    fn cartan(&self) -> CartanSpec {
        CartanSpec::new(CartanKind::AffA, self.spec.n).expect("valid by construction")
    }

    fn weight(&self) -> WeightCoords {
        WeightCoords { lambda: self.spec.lambda.clone(), drop: self.color_counts() }
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
        let mut s = format!("p{}|{}", self.spec.n, self.spec.levels());
        for row in &self.heights {
            s.push('|');
            let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
            s.push_str(&cells.join(","));
        }
        s
    }

    fn payload(&self) -> serde_json::Value {
        let mut triples: Vec<(usize, usize, u32)> = Vec::new();
        for (r, row) in self.heights.iter().enumerate() {
            for (c, &h) in row.iter().enumerate() {
                triples.push((r + 1, c, h));
            }
        }
        serde_json::json!({
            "charges": self.spec.charges,
            "heights": triples,
            "label": self.render(),
        })
    }

    fn model(&self) -> &'static str {
        "pyramid"
    }

    fn render(&self) -> String {
        if self.heights.iter().all(|r| r.is_empty()) {
            return "empty".to_string();
        }
        self.heights
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
                format!("g{}: {}", self.spec.charges[r], cells.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn from_payload(spec: Arc<PyramidSpec>, payload: &serde_json::Value) -> Result<Pyramid> {
    let triples: Vec<(usize, usize, u32)> = serde_json::from_value(
        payload
            .get("heights")
            .cloned()
            .ok_or_else(|| Error::Payload("missing heights".into()))?,
    )
    .map_err(|e| Error::Payload(e.to_string()))?;
    let mut heights = vec![Vec::new(); spec.levels()];
    for (r, c, h) in triples {
        if r < 1 || r > spec.levels() {
            return Err(Error::Payload("row out of range".into()));
        }
        let row: &mut Vec<u32> = &mut heights[r - 1];
        if row.len() <= c {
            row.resize(c + 1, 0);
        }
        row[c] = h;
    }
    let p = Pyramid { spec, heights };
    if !p.is_valid() {
        return Err(Error::Payload("pyramid violates the building rules".into()));
    }
    Ok(p)
}

/// All proper pyramids with at most `max_blocks` blocks, by direct
/// enumeration over per-row partitions under the cylindric constraints.
pub fn enumerate_proper(spec: &Arc<PyramidSpec>, max_blocks: i64) -> Vec<Pyramid> {
    fn partitions(budget: i64, cap: &dyn Fn(usize) -> u32, out: &mut Vec<Vec<u32>>) {
        fn rec(budget: i64, cap: &dyn Fn(usize) -> u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(cur.clone());
            let c = cur.len();
            let prev = if c == 0 { u32::MAX } else { cur[c - 1] };
            let limit = cap(c).min(prev).min(budget.max(0) as u32);
            for h in 1..=limit {
                cur.push(h);
                rec(budget - h as i64, cap, cur, out);
                cur.pop();
            }
        }
        let mut cur = Vec::new();
        rec(budget, cap, &mut cur, out);
    }
    fn rec(
        spec: &Arc<PyramidSpec>,
        r: usize,
        budget: i64,
        rows: &mut Vec<Vec<u32>>,
        out: &mut Vec<Pyramid>,
    ) {
        let l = spec.levels();
        if r == l {
            let p = Pyramid { spec: spec.clone(), heights: rows.clone() };
            debug_assert!(p.check_rules());
            if p.is_proper() {
                out.push(p);
            }
            return;
        }
        let mut candidates = Vec::new();
        if r == 0 {
            partitions(budget, &|_| u32::MAX, &mut candidates);
        } else {
            let d = spec.south_offset(r);
            let prev = rows[r - 1].clone();
            let cap = move |c: usize| {
                if c < d {
                    u32::MAX
                } else {
                    prev.get(c - d).copied().unwrap_or(0)
                }
            };
            partitions(budget, &cap, &mut candidates);
        }
        for cand in candidates {
            let used: i64 = cand.iter().map(|&h| h as i64).sum();
            rows[r] = cand;
            rec(spec, r + 1, budget - used, rows, out);
            rows[r] = Vec::new();
        }
    }
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); spec.levels()];
    rec(spec, 0, max_blocks, &mut rows, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{compare, freudenthal};
    use crate::crystal::generate;

    fn setup(n: usize, lambda: &[i64]) -> (CartanSpec, Arc<PyramidSpec>) {
        let spec = CartanSpec::new(CartanKind::AffA, n).unwrap();
        let ps = PyramidSpec::new(&spec, lambda).unwrap();
        (spec, ps)
    }

    #[test]
    fn empty_pyramid_statistics() {
        let (spec, ps) = setup(2, &[1, 0, 0]);
        let p = Pyramid::empty(ps);
        assert!(p.is_proper() && p.is_n_reduced());
        for i in 0..=2 {
            let (eps, phi) = p.string_lengths(i).unwrap();
            assert_eq!(eps, 0);
            assert_eq!(phi, spec.pairing(&p.weight(), i).unwrap());
        }
    }

    #[test]
    fn single_block_signature_n2() {
        let (_, ps) = setup(2, &[1, 0, 0]);
        let p = Pyramid::empty(ps).lower(0).unwrap().unwrap();
        assert_eq!(p.heights, vec![vec![1]]);
        // + for 1 on top of the block, + for 2 east of it, - for 0
        assert_eq!(p.string_lengths(1).unwrap(), (0, 1));
        assert_eq!(p.string_lengths(2).unwrap(), (0, 1));
        assert_eq!(p.string_lengths(0).unwrap(), (1, 0));
        assert!(p.is_admissible(0, 0, 1));
        assert!(p.is_admissible(0, 1, 2));
        assert!(p.is_removable(0, 0, 0));
    }

    #[test]
    fn not_reduced_example_n1() {
        let (_, ps) = setup(1, &[1, 0]);
        let p = Pyramid { spec: ps, heights: vec![vec![1, 1]] };
        assert!(p.check_rules() && p.is_proper());
        assert!(!p.is_n_reduced());
    }

    #[test]
    fn level_two_tie_break_and_double_zero() {
        let (spec, ps) = setup(1, &[2, 0]);
        let empty = Pyramid::empty(ps);
        let sig = empty.signature(0);
        assert_eq!(sig, vec![(0, 0, true), (1, 0, true)]);
        let one = empty.lower(0).unwrap().unwrap();
        assert_eq!(one.heights, vec![vec![1], vec![]]);
        assert_eq!(one.string_lengths(0).unwrap(), (1, 1));
        let two = one.lower(0).unwrap().unwrap();
        assert_eq!(two.heights, vec![vec![1], vec![1]]);
        assert_eq!(two.string_lengths(0).unwrap(), (2, 0));
        assert_eq!(spec.pairing(&two.weight(), 0).unwrap(), -2);
        assert!(two.raise(0).unwrap().is_some());
    }

    #[test]
    fn mixed_level_two_charges() {
        // lambda = Lambda_0 + Lambda_1 for A_1^(1): integrability at the
        // first steps forces the staircase alignment
        let (_, ps) = setup(1, &[1, 1]);
        assert_eq!(ps.charges, vec![0, 1]);
        let empty = Pyramid::empty(ps);
        assert_eq!(empty.string_lengths(0).unwrap(), (0, 1));
        assert_eq!(empty.string_lengths(1).unwrap(), (0, 1));
        let a = empty.lower(0).unwrap().unwrap();
        assert_eq!(a.heights, vec![vec![1], vec![]]);
        // phi_1 = 3 at lambda - alpha_0
        assert_eq!(a.string_lengths(1).unwrap(), (0, 3));
        let b = a.lower(1).unwrap().unwrap();
        assert_eq!(b.heights, vec![vec![2], vec![]]);
    }

    #[test]
    fn stack_string_descriptors() {
        let (_, ps) = setup(2, &[1, 0, 0]);
        let p = Pyramid { spec: ps, heights: vec![vec![3, 2]] };
        assert!(p.check_rules());
        assert_eq!(p.stack_to_string(0, 0).unwrap(), (0, 2));
        assert_eq!(p.stack_to_string(0, 1).unwrap(), (-1, 0));
        assert!(p.stack_to_string(0, 2).is_err());
        let q = Pyramid { spec: p.spec.clone(), heights: vec![vec![1]] };
        assert_eq!(q.stack_to_string(0, 0).unwrap(), (0, 0));
    }

    #[test]
    fn basic_rep_a2_matches_oracle_depth_four() {
        let (spec, ps) = setup(2, &[1, 0, 0]);
        let g = generate(Pyramid::empty(ps), Some(4), 1).unwrap();
        let table = freudenthal(&spec, &[1, 0, 0], 4).unwrap();
        assert!(compare(&g, &table).unwrap().is_empty());
        for node in &g.nodes {
            let ps2 = PyramidSpec::new(&spec, &[1, 0, 0]).unwrap();
            let p = from_payload(ps2, &node.payload).unwrap();
            assert!(p.is_n_reduced());
        }
    }

    #[test]
    fn level_two_matches_oracle() {
        for lambda in [vec![2i64, 0], vec![1, 1]] {
            let (spec, ps) = setup(1, &lambda);
            let g = generate(Pyramid::empty(ps), Some(4), 1).unwrap();
            let table = freudenthal(&spec, &lambda, 4).unwrap();
            let diff = compare(&g, &table).unwrap();
            assert!(diff.is_empty(), "lambda {:?}: {:?}", lambda, diff);
        }
    }

    #[test]
    fn enumeration_matches_generation_basic_a2() {
        let (spec, ps) = setup(2, &[1, 0, 0]);
        let depth = 4;
        let g = generate(Pyramid::empty(ps.clone()), Some(depth), 1).unwrap();
        let mut from_enum: Vec<String> = enumerate_proper(&ps, depth)
            .into_iter()
            .filter(|p| p.is_n_reduced())
            .map(|p| p.canonical_key())
            .collect();
        from_enum.sort();
        let mut from_gen: Vec<String> = g.nodes.iter().map(|n| n.key.clone()).collect();
        from_gen.sort();
        assert_eq!(from_enum, from_gen);
        let _ = spec;
    }
}
