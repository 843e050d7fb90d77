//! Semistandard Young tableaux over {1..n} as the crystal of type A_{n-1},
//! read by the Far-Eastern reading (down columns, rightmost column first).

use crate::cartan::{CartanKind, CartanSpec, WeightCoords};
use crate::crystal::{reduce_signature, tensor_apply, CrystalElement, Direction, SignedWord};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Partition shape for a dominant weight: lambda_i = w_i + ... + w_{n-1},
/// kept with trailing zeros (length n-1).
pub fn shape_from_weight(spec: &CartanSpec, w: &[i64]) -> Result<Vec<i64>> {
    if spec.kind != CartanKind::FinA {
        return Err(Error::NotFinite);
    }
    if w.len() != spec.num_vertices() {
        return Err(Error::DimensionMismatch);
    }
    if w.iter().any(|&x| x < 0) {
        return Err(Error::NegativeCoefficient);
    }
    let mut shape = Vec::with_capacity(w.len());
    let mut suffix = 0;
    for &x in w.iter().rev() {
        suffix += x;
        shape.push(suffix);
    }
    shape.reverse();
    Ok(shape)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Tableau {
    pub n: usize,
    pub rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Tableau> {
        let t = Tableau { n, rows };
        t.check()?;
        Ok(t)
    }

    /// Highest tableau of the shape of `w`: row p filled with p.
    pub fn highest(spec: &CartanSpec, w: &[i64]) -> Result<Tableau> {
        let shape = shape_from_weight(spec, w)?;
        let rows = shape
            .iter()
            .enumerate()
            .filter(|(_, &len)| len > 0)
            .map(|(p, &len)| vec![p + 1; len as usize])
            .collect();
        Ok(Tableau { n: spec.rank, rows })
    }

    fn check(&self) -> Result<()> {
        for (p, row) in self.rows.iter().enumerate() {
            if p + 1 < self.rows.len() && self.rows[p + 1].len() > row.len() {
                return Err(Error::IllegalEntry("row lengths must weakly decrease".into()));
            }
            for (c, &x) in row.iter().enumerate() {
                if x < 1 || x > self.n {
                    return Err(Error::IllegalEntry(format!("entry {} out of alphabet", x)));
                }
                if x < p + 1 {
                    return Err(Error::IllegalEntry("entry above its row number".into()));
                }
                if c > 0 && row[c - 1] > x {
                    return Err(Error::IllegalEntry("row not weakly increasing".into()));
                }
                if p > 0 && self.rows[p - 1][c] >= x {
                    return Err(Error::IllegalEntry("column not strictly increasing".into()));
                }
            }
        }
        Ok(())
    }

    /// Entries in the Far-Eastern reading: rightmost column first, top to
    /// bottom within each column. Returned with their (row, col) positions.
    pub fn far_eastern(&self) -> Vec<(usize, usize, usize)> {
        let width = self.rows.first().map_or(0, |r| r.len());
        let mut out = Vec::new();
        for c in (0..width).rev() {
            for (p, row) in self.rows.iter().enumerate() {
                if c < row.len() {
                    out.push((p, c, row[c]));
                }
            }
        }
        out
    }

    pub fn far_eastern_word(&self) -> Vec<usize> {
        self.far_eastern().into_iter().map(|(_, _, x)| x).collect()
    }

    fn signed_word(&self, i: usize) -> SignedWord {
        let mut w = SignedWord::new();
        for (_, _, x) in self.far_eastern() {
            let minus = (x == i + 1) as u32;
            let plus = (x == i) as u32;
            w.push(minus, plus);
        }
        w
    }

    pub fn apply(&self, i: usize, dir: Direction) -> Result<Option<Tableau>> {
        let word = self.signed_word(i);
        let Some(idx) = tensor_apply(&word, dir) else {
            return Ok(None);
        };
        let (p, c, x) = self.far_eastern()[idx];
        let mut rows = self.rows.clone();
        rows[p][c] = match dir {
            Direction::Lower => {
                debug_assert_eq!(x, i);
                i + 1
            }
            Direction::Raise => {
                debug_assert_eq!(x, i + 1);
                i
            }
        };
        let t = Tableau { n: self.n, rows };
        t.check()?;
        Ok(Some(t))
    }

    /// f_T(k',k) = number of entries equal to k+1 in row k', plus the graded
    /// dimension v_i = sum over strings through vertex i.
    pub fn dimension_vector(&self) -> (BTreeMap<(usize, usize), i64>, Vec<i64>) {
        let mut f = BTreeMap::new();
        let mut v = vec![0i64; self.n - 1];
        for (p, row) in self.rows.iter().enumerate() {
            for &x in row {
                if x > p + 1 {
                    *f.entry((p + 1, x - 1)).or_insert(0) += 1;
                    for item in v.iter_mut().take(x - 1).skip(p) {
                        *item += 1;
                    }
                }
            }
        }
        (f, v)
    }

    /// Dominant part recovered from the shape.
    pub fn lambda(&self) -> Vec<i64> {
        let mut lambda = vec![0i64; self.n - 1];
        for (p, row) in self.rows.iter().enumerate() {
            let below = self.rows.get(p + 1).map_or(0, |r| r.len());
            if p < self.n - 1 {
                lambda[p] = (row.len() - below) as i64;
            }
        }
        lambda
    }
}

impl CrystalElement for Tableau {
    fn cartan(&self) -> CartanSpec {
        CartanSpec::new(CartanKind::FinA, self.n).expect("valid by construction")
    }

    fn weight(&self) -> WeightCoords {
        let (_, v) = self.dimension_vector();
        WeightCoords { lambda: self.lambda(), drop: v }
    }

    fn string_lengths(&self, i: usize) -> Result<(i64, i64)> {
        if i < 1 || i >= self.n {
            return Err(Error::UnknownVertex(i));
        }
        let r = reduce_signature(&self.signed_word(i));
        Ok((r.eps(), r.phi()))
    }

    fn lower(&self, i: usize) -> Result<Option<Self>> {
        self.apply(i, Direction::Lower)
    }

    fn raise(&self, i: usize) -> Result<Option<Self>> {
        self.apply(i, Direction::Raise)
    }

    fn canonical_key(&self) -> String {
        let mut s = format!("t{}|{}", self.n, self.rows.len());
        for row in &self.rows {
            s.push('|');
            s.push_str(&row.len().to_string());
            s.push(':');
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&cells.join(","));
        }
        s
    }

    fn payload(&self) -> serde_json::Value {
        serde_json::json!({ "rows": self.rows, "label": self.render() })
    }

    fn model(&self) -> &'static str {
        "tableaux"
    }

    fn render(&self) -> String {
        self.rows
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn from_payload(n: usize, payload: &serde_json::Value) -> Result<Tableau> {
    let rows: Vec<Vec<usize>> = serde_json::from_value(
        payload.get("rows").cloned().ok_or_else(|| Error::Payload("missing rows".into()))?,
    )
    .map_err(|e| Error::Payload(e.to_string()))?;
    Tableau::new(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::generate;

    fn spec(n: usize) -> CartanSpec {
        CartanSpec::new(CartanKind::FinA, n).unwrap()
    }

    #[test]
    fn shape_examples() {
        assert_eq!(shape_from_weight(&spec(4), &[1, 1, 0]).unwrap(), vec![2, 1, 0]);
        assert_eq!(shape_from_weight(&spec(4), &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(shape_from_weight(&spec(3), &[0, 2]).unwrap(), vec![2, 2]);
        assert!(shape_from_weight(&spec(3), &[-1, 2]).is_err());
    }

    #[test]
    fn far_eastern_reading_of_paper_tableau() {
        let t = Tableau::new(5, vec![vec![1, 1, 2, 3], vec![2, 3, 4], vec![4, 4], vec![5]]).unwrap();
        assert_eq!(t.far_eastern_word(), vec![3, 2, 4, 1, 3, 4, 1, 2, 4, 5]);
        let single = Tableau::new(3, vec![vec![2]]).unwrap();
        assert_eq!(single.far_eastern_word(), vec![2]);
    }

    #[test]
    fn restricted_word_from_worked_example() {
        let t =
            Tableau::new(6, vec![vec![1, 2, 2, 3, 3], vec![2, 3, 4], vec![4, 5], vec![5]]).unwrap();
        let restricted: Vec<usize> =
            t.far_eastern_word().into_iter().filter(|&x| x == 2 || x == 3).collect();
        assert_eq!(restricted, vec![3, 3, 2, 2, 3, 2]);
    }

    #[test]
    fn kashiwara_on_worked_example() {
        let t =
            Tableau::new(6, vec![vec![1, 2, 2, 3, 3], vec![2, 3, 4], vec![4, 5], vec![5]]).unwrap();
        let lowered = t.apply(2, Direction::Lower).unwrap().unwrap();
        assert_eq!(lowered.rows, vec![vec![1, 2, 3, 3, 3], vec![2, 3, 4], vec![4, 5], vec![5]]);
        let raised = t.apply(2, Direction::Raise).unwrap().unwrap();
        assert_eq!(raised.rows, vec![vec![1, 2, 2, 2, 3], vec![2, 3, 4], vec![4, 5], vec![5]]);
        // highest tableau killed by every raise
        let hw = Tableau::highest(&spec(6), &[1, 1, 0, 0, 0]).unwrap();
        for i in 1..6 {
            assert!(hw.apply(i, Direction::Raise).unwrap().is_none());
        }
    }

    #[test]
    fn dimension_vector_examples() {
        let hw = Tableau::highest(&spec(5), &[1, 1, 1, 0]).unwrap();
        let (f, v) = hw.dimension_vector();
        assert!(f.is_empty());
        assert_eq!(v, vec![0; 4]);
        let t = Tableau::new(5, vec![vec![1, 1, 2, 3], vec![2, 3, 4], vec![4, 4], vec![5]]).unwrap();
        let (f, _) = t.dimension_vector();
        assert_eq!(f.get(&(1, 2)), Some(&1));
        let single = Tableau::new(4, vec![vec![3]]).unwrap();
        let (f, v) = single.dimension_vector();
        assert_eq!(f.get(&(1, 2)), Some(&1));
        assert_eq!(v, vec![1, 1, 0]);
    }

    #[test]
    fn weight_matches_box_counts() {
        let t = Tableau::new(5, vec![vec![1, 1, 2, 3], vec![2, 3, 4], vec![4, 4], vec![5]]).unwrap();
        let s = spec(5);
        let w = t.weight();
        let eps = s.eps_convert(&w).unwrap();
        // box counts: 2 ones, 2 twos, 2 threes, 3 fours, 1 five
        let counts = [2i64, 2, 2, 3, 1];
        for (i, &c) in counts.iter().enumerate() {
            assert_eq!(eps.coeffs[i], crate::linalg::Rat::from_integer(c));
        }
    }

    #[test]
    fn generate_vector_representation() {
        let hw = Tableau::highest(&spec(3), &[1, 0]).unwrap();
        let g = generate(hw, None, 1).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges.len(), 2);
        let colors: Vec<usize> = g.edges.iter().map(|e| e.i).collect();
        assert_eq!(colors.len(), 2);
        assert!(colors.contains(&1) && colors.contains(&2));
    }

    #[test]
    fn generate_adjoint_of_a2() {
        let hw = Tableau::highest(&spec(3), &[1, 1]).unwrap();
        let g = generate(hw, None, 1).unwrap();
        assert_eq!(g.node_count(), 8);
    }

    #[test]
    fn generate_depth_zero() {
        let hw = Tableau::highest(&spec(3), &[1, 1]).unwrap();
        let g = generate(hw, Some(0), 1).unwrap();
        assert_eq!(g.node_count(), 1);
        assert!(g.edges.is_empty());
    }
}
