//! Type D_n tableaux: bodies over the alphabet 1 < 2 < ... < {n, n-bar} <
//! ... < 1-bar (with n and n-bar incomparable) plus an optional spin
//! half-column, read Far-Eastern with the spin column as a single final
//! tensor factor.

use crate::cartan::{CartanKind, CartanSpec, EpsWeight, WeightCoords};
use crate::crystal::{reduce_signature, tensor_apply, CrystalElement, Direction, SignedWord};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use serde::{Deserialize, Serialize};

/// A letter of the type-D alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DLetter {
    pub idx: usize,
    pub barred: bool,
}

impl DLetter {
    pub fn new(idx: usize, barred: bool) -> DLetter {
        DLetter { idx, barred }
    }

    pub fn from_signed(v: i64) -> Result<DLetter> {
        if v == 0 {
            return Err(Error::IllegalEntry("letter 0".into()));
        }
        Ok(DLetter { idx: v.unsigned_abs() as usize, barred: v < 0 })
    }

    pub fn signed(&self) -> i64 {
        if self.barred {
            -(self.idx as i64)
        } else {
            self.idx as i64
        }
    }

    /// Rank in the linear order; n and n-bar share the middle slot and are
    /// incomparable.
    fn rank(&self, n: usize) -> usize {
        if self.barred {
            2 * n + 1 - self.idx
        } else {
            self.idx
        }
    }

    fn comparable(&self, other: &DLetter, n: usize) -> bool {
        !(self.idx == n && other.idx == n && self.barred != other.barred)
    }

    fn lt(&self, other: &DLetter, n: usize) -> bool {
        self.comparable(other, n) && self.rank(n) < other.rank(n)
    }
}

/// One Kashiwara step in the vector crystal of D_n.
pub fn letter_step(n: usize, v: DLetter, i: usize, dir: Direction) -> Option<DLetter> {
    let u = |idx: usize| DLetter::new(idx, false);
    let b = |idx: usize| DLetter::new(idx, true);
    match (dir, i < n) {
        (Direction::Lower, true) => {
            if v == u(i) {
                Some(u(i + 1))
            } else if v == b(i + 1) {
                Some(b(i))
            } else {
                None
            }
        }
        (Direction::Raise, true) => {
            if v == u(i + 1) {
                Some(u(i))
            } else if v == b(i) {
                Some(b(i + 1))
            } else {
                None
            }
        }
        (Direction::Lower, false) => {
            if v == u(n - 1) {
                Some(b(n))
            } else if v == u(n) {
                Some(b(n - 1))
            } else {
                None
            }
        }
        (Direction::Raise, false) => {
            if v == b(n) {
                Some(u(n - 1))
            } else if v == b(n - 1) {
                Some(u(n))
            } else {
                None
            }
        }
    }
}

/// A spin half-column, stored as the sign vector of the weight
/// (1/2) sum s_j eps_j. `signs[j-1]` true means letter j is unbarred.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpinColumn {
    pub signs: Vec<bool>,
}

impl SpinColumn {
    pub fn highest(n: usize, plus: bool) -> SpinColumn {
        let mut signs = vec![true; n];
        signs[n - 1] = plus;
        SpinColumn { signs }
    }

    /// True for the plus class B_sp^+ (even number of barred letters).
    pub fn plus_class(&self) -> bool {
        self.signs.iter().filter(|&&s| !s).count() % 2 == 0
    }

    pub fn contains(&self, l: DLetter) -> bool {
        self.signs[l.idx - 1] == !l.barred
    }

    /// Letters in index order; the display order sorts by the alphabet with
    /// the n-before-n-bar tie break, which index order already realizes.
    pub fn letters(&self) -> Vec<DLetter> {
        self.signs
            .iter()
            .enumerate()
            .map(|(j, &s)| DLetter::new(j + 1, !s))
            .collect()
    }

    pub fn step(&self, i: usize, dir: Direction) -> Option<SpinColumn> {
        let n = self.signs.len();
        let mut s = self.signs.clone();
        if i < n {
            match dir {
                Direction::Lower => {
                    if s[i - 1] && !s[i] {
                        s[i - 1] = false;
                        s[i] = true;
                    } else {
                        return None;
                    }
                }
                Direction::Raise => {
                    if !s[i - 1] && s[i] {
                        s[i - 1] = true;
                        s[i] = false;
                    } else {
                        return None;
                    }
                }
            }
        } else {
            match dir {
                Direction::Lower => {
                    if s[n - 2] && s[n - 1] {
                        s[n - 2] = false;
                        s[n - 1] = false;
                    } else {
                        return None;
                    }
                }
                Direction::Raise => {
                    if !s[n - 2] && !s[n - 1] {
                        s[n - 2] = true;
                        s[n - 1] = true;
                    } else {
                        return None;
                    }
                }
            }
        }
        Some(SpinColumn { signs: s })
    }

    /// Position (1-based) of a letter in the sorted column display.
    pub fn position(&self, l: DLetter) -> Option<usize> {
        self.letters()
            .iter()
            .enumerate()
            .find(|(_, &x)| x == l)
            .map(|(k, _)| {
                // sorted display: unbarred ascending then barred descending;
                // position = index among letters ordered by rank with the
                // n-before-n-bar tie break
                let n = self.signs.len();
                let mut ranked: Vec<(usize, usize)> = self
                    .letters()
                    .iter()
                    .map(|x| (x.rank(n), x.idx))
                    .collect();
                ranked.sort();
                let target = (self.letters()[k].rank(n), self.letters()[k].idx);
                ranked.iter().position(|&r| r == target).unwrap() + 1
            })
    }
}

/// Shape data of a dominant D_n weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DShape {
    pub n: usize,
    /// lambda_1 >= ... >= lambda_{n-1} >= |lambda_n|, half-integers when the
    /// spin column is present.
    pub lambdas: Vec<Rat>,
    pub spin: bool,
    /// Negative lambda_n.
    pub neg: bool,
}

impl DShape {
    pub fn from_weight(spec: &CartanSpec, w: &[i64]) -> Result<DShape> {
        if spec.kind != CartanKind::FinD {
            return Err(Error::NotFinite);
        }
        if w.len() != spec.num_vertices() {
            return Err(Error::DimensionMismatch);
        }
        if w.iter().any(|&x| x < 0) {
            return Err(Error::NegativeCoefficient);
        }
        let n = spec.rank;
        let half = Rat::new(1, 2);
        let spin_part = Rat::from_integer(w[n - 2] + w[n - 1]) * half;
        let mut lambdas = Vec::with_capacity(n);
        let mut suffix = 0i64;
        for i in (1..=n - 1).rev() {
            if i <= n - 2 {
                suffix += w[i - 1];
            }
            lambdas.push(Rat::from_integer(suffix) + spin_part);
        }
        lambdas.reverse();
        let last = Rat::from_integer(w[n - 1] - w[n - 2]) * half;
        lambdas.push(last);
        Ok(DShape {
            n,
            neg: last < Rat::from_integer(0),
            spin: (w[n - 2] + w[n - 1]) % 2 != 0,
            lambdas,
        })
    }

    /// Body row lengths (spin half-column removed).
    pub fn body_rows(&self) -> Vec<usize> {
        let half = if self.spin { Rat::new(1, 2) } else { Rat::from_integer(0) };
        let mut rows = Vec::with_capacity(self.n);
        for (p, l) in self.lambdas.iter().enumerate() {
            let v = if p == self.n - 1 {
                let abs = if self.neg { -*l } else { *l };
                abs - half
            } else {
                *l - half
            };
            debug_assert!(v.is_integer());
            rows.push(v.to_integer() as usize);
        }
        while rows.last() == Some(&0) {
            rows.pop();
        }
        rows
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DTableau {
    pub n: usize,
    /// Sign of lambda_n: row-n boxes carry barred letters at the highest
    /// weight and the spin class is minus.
    pub neg: bool,
    pub rows: Vec<Vec<DLetter>>,
    pub spin: Option<SpinColumn>,
}

impl DTableau {
    pub fn highest(spec: &CartanSpec, w: &[i64]) -> Result<DTableau> {
        let shape = DShape::from_weight(spec, w)?;
        let n = shape.n;
        let rows: Vec<Vec<DLetter>> = shape
            .body_rows()
            .iter()
            .enumerate()
            .map(|(p, &len)| {
                let letter = if p == n - 1 {
                    DLetter::new(n, shape.neg)
                } else {
                    DLetter::new(p + 1, false)
                };
                vec![letter; len]
            })
            .collect();
        let spin = shape.spin.then(|| SpinColumn::highest(n, !shape.neg));
        let t = DTableau { n, neg: shape.neg, rows, spin };
        t.check()?;
        // The construction is validated by the weight oracle: the highest
        // tableau must weigh exactly lambda.
        let eps = t.eps_weight();
        let expected = spec.eps_convert(&WeightCoords::highest(w.to_vec()))?;
        if eps != expected {
            return Err(Error::IllegalEntry("highest tableau weight mismatch".into()));
        }
        Ok(t)
    }

    pub fn shape(&self) -> DShape {
        let half = if self.spin.is_some() { Rat::new(1, 2) } else { Rat::from_integer(0) };
        let mut lambdas = Vec::with_capacity(self.n);
        for p in 0..self.n {
            let len = self.rows.get(p).map_or(0, |r| r.len());
            let mut v = Rat::from_integer(len as i64) + half;
            if p == self.n - 1 && self.neg {
                v = -v;
            }
            lambdas.push(v);
        }
        DShape { n: self.n, lambdas, spin: self.spin.is_some(), neg: self.neg }
    }

    /// Dominant weight coefficients recovered from the shape.
    pub fn lambda(&self) -> Vec<i64> {
        let s = self.shape();
        let n = self.n;
        let mut w = vec![0i64; n];
        for i in 1..=n - 2 {
            let d = s.lambdas[i - 1] - s.lambdas[i];
            debug_assert!(d.is_integer());
            w[i - 1] = d.to_integer();
        }
        let wn1 = s.lambdas[n - 2] - s.lambdas[n - 1];
        let wn = s.lambdas[n - 2] + s.lambdas[n - 1];
        debug_assert!(wn1.is_integer() && wn.is_integer());
        w[n - 2] = wn1.to_integer();
        w[n - 1] = wn.to_integer();
        w
    }

    pub fn check(&self) -> Result<()> {
        let n = self.n;
        for (p, row) in self.rows.iter().enumerate() {
            if p + 1 < self.rows.len() && self.rows[p + 1].len() > row.len() {
                return Err(Error::IllegalEntry("row lengths must weakly decrease".into()));
            }
            if p >= n {
                return Err(Error::IllegalEntry("more than n rows".into()));
            }
            let has_n = row.iter().any(|l| l.idx == n && !l.barred);
            let has_nbar = row.iter().any(|l| l.idx == n && l.barred);
            if has_n && has_nbar {
                return Err(Error::IllegalEntry("n and n-bar in one row".into()));
            }
            for (c, l) in row.iter().enumerate() {
                if l.idx < 1 || l.idx > n {
                    return Err(Error::IllegalEntry("letter out of alphabet".into()));
                }
                if c > 0 {
                    let prev = row[c - 1];
                    if !(prev == *l || prev.lt(l, n)) {
                        return Err(Error::IllegalEntry("row not weakly increasing".into()));
                    }
                }
                if p > 0 {
                    let above = self.rows[p - 1][c];
                    let adjacent_pair = above.idx == n && l.idx == n && above.barred != l.barred;
                    if !(above.lt(l, n) || adjacent_pair) {
                        return Err(Error::IllegalEntry("column not strictly increasing".into()));
                    }
                }
            }
        }
        if let Some(spin) = &self.spin {
            if spin.signs.len() != n {
                return Err(Error::IllegalEntry("spin column of wrong height".into()));
            }
            if spin.plus_class() != !self.neg {
                return Err(Error::IllegalEntry("spin column in the wrong class".into()));
            }
        }
        Ok(())
    }

    /// Body boxes in Far-Eastern order with their (row, col) positions.
    pub fn far_eastern(&self) -> Vec<(usize, usize, DLetter)> {
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

    fn signed_word(&self, i: usize) -> SignedWord {
        let mut w = SignedWord::new();
        for (_, _, l) in self.far_eastern() {
            let minus = letter_step(self.n, l, i, Direction::Raise).is_some() as u32;
            let plus = letter_step(self.n, l, i, Direction::Lower).is_some() as u32;
            w.push(minus, plus);
        }
        if let Some(spin) = &self.spin {
            let minus = spin.step(i, Direction::Raise).is_some() as u32;
            let plus = spin.step(i, Direction::Lower).is_some() as u32;
            w.push(minus, plus);
        }
        w
    }

    pub fn apply(&self, i: usize, dir: Direction) -> Result<Option<DTableau>> {
        let word = self.signed_word(i);
        let Some(idx) = tensor_apply(&word, dir) else {
            return Ok(None);
        };
        let boxes = self.far_eastern();
        let mut t = self.clone();
        if idx < boxes.len() {
            let (p, c, l) = boxes[idx];
            let stepped = letter_step(self.n, l, i, dir)
                .ok_or_else(|| Error::IllegalEntry("selected box cannot step".into()))?;
            t.rows[p][c] = stepped;
        } else {
            let spin = t.spin.as_ref().expect("factor index points at the spin column");
            t.spin = Some(
                spin.step(i, dir)
                    .ok_or_else(|| Error::IllegalEntry("selected spin column cannot step".into()))?,
            );
        }
        t.check()?;
        Ok(Some(t))
    }

    /// Weight in epsilon coordinates: full boxes contribute +-eps, the spin
    /// column half-weights.
    pub fn eps_weight(&self) -> EpsWeight {
        let mut c = vec![Rat::from_integer(0); self.n];
        for row in &self.rows {
            for l in row {
                let v = if l.barred { -1 } else { 1 };
                c[l.idx - 1] += Rat::from_integer(v);
            }
        }
        if let Some(spin) = &self.spin {
            let half = Rat::new(1, 2);
            for (j, &s) in spin.signs.iter().enumerate() {
                c[j] += if s { half } else { -half };
            }
        }
        EpsWeight { coeffs: c }
    }
}

impl CrystalElement for DTableau {
    fn cartan(&self) -> CartanSpec {
        CartanSpec::new(CartanKind::FinD, self.n).expect("valid by construction")
    }

    fn weight(&self) -> WeightCoords {
        let spec = self.cartan();
        let lambda = self.lambda();
        let drop = spec
            .drop_from_eps(&lambda, &self.eps_weight())
            .expect("tableau weight lies under its shape weight");
        WeightCoords { lambda, drop }
    }

    fn string_lengths(&self, i: usize) -> Result<(i64, i64)> {
        if i < 1 || i > self.n {
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
        let mut s = format!("d{}{}|{}", self.n, if self.neg { "-" } else { "+" }, self.rows.len());
        for row in &self.rows {
            s.push('|');
            s.push_str(&row.len().to_string());
            s.push(':');
            let cells: Vec<String> = row.iter().map(|l| l.signed().to_string()).collect();
            s.push_str(&cells.join(","));
        }
        if let Some(spin) = &self.spin {
            s.push_str("|s:");
            for &b in &spin.signs {
                s.push(if b { '+' } else { '-' });
            }
        }
        s
    }

    fn payload(&self) -> serde_json::Value {
        let rows: Vec<Vec<i64>> =
            self.rows.iter().map(|r| r.iter().map(|l| l.signed()).collect()).collect();
        let spin = self.spin.as_ref().map(|sp| {
            serde_json::json!({
                "letters": sp.letters().iter().map(|l| l.signed()).collect::<Vec<_>>(),
                "sign": if sp.plus_class() { "+" } else { "-" },
            })
        });
        serde_json::json!({
            "rows": rows,
            "spin": spin,
            "neg": self.neg,
            "label": self.render(),
        })
    }

    fn model(&self) -> &'static str {
        "dtableaux"
    }

    fn render(&self) -> String {
        let mut lines: Vec<String> = self
            .rows
            .iter()
            .map(|row| row.iter().map(render_letter).collect::<Vec<_>>().join(" "))
            .collect();
        if let Some(spin) = &self.spin {
            lines.push(format!(
                "sp: {}",
                spin.letters().iter().map(render_letter).collect::<Vec<_>>().join(" ")
            ));
        }
        lines.join("\n")
    }
}

fn render_letter(l: &DLetter) -> String {
    if l.barred {
        format!("{}b", l.idx)
    } else {
        l.idx.to_string()
    }
}

pub fn from_payload(n: usize, payload: &serde_json::Value) -> Result<DTableau> {
    let rows_raw: Vec<Vec<i64>> = serde_json::from_value(
        payload.get("rows").cloned().ok_or_else(|| Error::Payload("missing rows".into()))?,
    )
    .map_err(|e| Error::Payload(e.to_string()))?;
    let mut rows = Vec::with_capacity(rows_raw.len());
    for r in rows_raw {
        let mut row = Vec::with_capacity(r.len());
        for v in r {
            row.push(DLetter::from_signed(v)?);
        }
        rows.push(row);
    }
    let neg = payload.get("neg").and_then(|v| v.as_bool()).unwrap_or(false);
    let spin = match payload.get("spin") {
        Some(serde_json::Value::Null) | None => None,
        Some(v) => {
            let letters: Vec<i64> = serde_json::from_value(
                v.get("letters")
                    .cloned()
                    .ok_or_else(|| Error::Payload("missing spin letters".into()))?,
            )
            .map_err(|e| Error::Payload(e.to_string()))?;
            let mut signs = vec![true; n];
            for v in letters {
                let l = DLetter::from_signed(v)?;
                if l.idx < 1 || l.idx > n {
                    return Err(Error::Payload("spin letter out of range".into()));
                }
                signs[l.idx - 1] = !l.barred;
            }
            Some(SpinColumn { signs })
        }
    };
    let t = DTableau { n, neg, rows, spin };
    t.check()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::weyl_dim;
    use crate::crystal::generate;

    fn spec(n: usize) -> CartanSpec {
        CartanSpec::new(CartanKind::FinD, n).unwrap()
    }

    #[test]
    fn shape_examples() {
        // n=4, w = omega_4: pure spin plus
        let s = DShape::from_weight(&spec(4), &[0, 0, 0, 1]).unwrap();
        assert_eq!(s.lambdas, vec![Rat::new(1, 2); 4]);
        assert!(s.spin && !s.neg);
        assert!(s.body_rows().is_empty());
        // n=4, w = omega_1: one box
        let s = DShape::from_weight(&spec(4), &[1, 0, 0, 0]).unwrap();
        assert_eq!(s.body_rows(), vec![1]);
        assert!(!s.spin);
        // n=4, w = omega_3 + omega_4: height-3 column
        let s = DShape::from_weight(&spec(4), &[0, 0, 1, 1]).unwrap();
        assert_eq!(s.body_rows(), vec![1, 1, 1]);
        assert!(!s.spin && !s.neg);
        assert!(DShape::from_weight(&spec(4), &[-1, 0, 0, 0]).is_err());
    }

    #[test]
    fn highest_tableaux_weigh_lambda() {
        for w in [
            vec![1i64, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 1],
            vec![1, 0, 0, 1],
            vec![0, 0, 2, 0],
            vec![2, 1, 1, 3],
        ] {
            // construction already cross-checks the weight oracle
            let t = DTableau::highest(&spec(4), &w).unwrap();
            assert_eq!(t.lambda(), w);
        }
    }

    #[test]
    fn highest_spin_minus_uses_nbar() {
        let t = DTableau::highest(&spec(4), &[0, 0, 1, 0]).unwrap();
        let sp = t.spin.unwrap();
        assert!(!sp.plus_class());
        assert_eq!(sp.signs, vec![true, true, true, false]);
    }

    #[test]
    fn vector_steps() {
        let n = 4;
        // lower i=n on n-1 gives n-bar
        assert_eq!(
            letter_step(n, DLetter::new(3, false), 4, Direction::Lower),
            Some(DLetter::new(4, true))
        );
        assert_eq!(
            letter_step(n, DLetter::new(1, false), 1, Direction::Lower),
            Some(DLetter::new(2, false))
        );
        assert_eq!(letter_step(n, DLetter::new(1, false), 1, Direction::Raise), None);
    }

    #[test]
    fn spin_steps() {
        let c = SpinColumn::highest(4, true);
        let d = c.step(4, Direction::Lower).unwrap();
        assert_eq!(d.signs, vec![true, true, false, false]);
        assert!(d.plus_class());
        assert!(c.step(1, Direction::Lower).is_none());
        for i in 1..=4 {
            assert!(c.step(i, Direction::Raise).is_none());
        }
    }

    #[test]
    fn vector_crystal_has_2n_elements() {
        let hw = DTableau::highest(&spec(4), &[1, 0, 0, 0]).unwrap();
        let g = generate(hw, None, 1).unwrap();
        assert_eq!(g.node_count(), 8);
        // f_4 on the single box 3 gives 4-bar; on 4 gives 3-bar
        let hw = DTableau::highest(&spec(4), &[1, 0, 0, 0]).unwrap();
        let three = hw
            .lower(1).unwrap().unwrap()
            .lower(2).unwrap().unwrap();
        let fourbar = three.lower(4).unwrap().unwrap();
        assert_eq!(fourbar.rows[0][0], DLetter::new(4, true));
    }

    #[test]
    fn spin_crystals_have_8_elements() {
        for w in [[0, 0, 0, 1], [0, 0, 1, 0]] {
            let hw = DTableau::highest(&spec(4), &w).unwrap();
            let plus = !hw.neg;
            let g = generate(hw, None, 1).unwrap();
            assert_eq!(g.node_count(), 8);
            // every node stays in its class
            for node in &g.nodes {
                let t = from_payload(4, &node.payload).unwrap();
                assert_eq!(t.spin.unwrap().plus_class(), plus);
            }
        }
    }

    #[test]
    fn sizes_match_weyl_dim() {
        for w in [
            vec![0i64, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 0, 1],
            vec![0, 0, 2, 0],
        ] {
            let s = spec(4);
            let hw = DTableau::highest(&s, &w).unwrap();
            let g = generate(hw, None, 1).unwrap();
            assert_eq!(g.node_count() as i128, weyl_dim(&s, &w).unwrap(), "w = {:?}", w);
        }
    }
}
