//! Cartan data and weight bookkeeping for the four supported algebra types.
//!
//! A weight is stored as a dominant part `lambda` (coefficients over the
//! fundamental weights) together with a nonnegative `drop` vector `k`, so the
//! actual weight is `lambda - sum_j k_j alpha_j`. Every crystal formula
//! downstream needs only the pairings `<h_i, .>`, which this representation
//! supplies exactly for finite and affine types alike. Epsilon-coordinates
//! exist for finite-type reporting only and are exact rationals.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Rat};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum CartanKind {
    /// A_{n-1}, vertices 1..n-1 (alphabet size n).
    FinA,
    /// D_n, vertices 1..n, n >= 4.
    FinD,
    /// A_n^(1), vertices 0..n.
    AffA,
    /// D_n^(1), vertices 0..n, n >= 4.
    AffD,
}

impl CartanKind {
    pub fn is_affine(self) -> bool {
        matches!(self, CartanKind::AffA | CartanKind::AffD)
    }

    pub fn name(self) -> &'static str {
        match self {
            CartanKind::FinA => "FinA",
            CartanKind::FinD => "FinD",
            CartanKind::AffA => "AffA",
            CartanKind::AffD => "AffD",
        }
    }

    pub fn parse(s: &str) -> Option<CartanKind> {
        match s {
            "FinA" => Some(CartanKind::FinA),
            "FinD" => Some(CartanKind::FinD),
            "AffA" => Some(CartanKind::AffA),
            "AffD" => Some(CartanKind::AffD),
            _ => None,
        }
    }
}

/// Symmetric Cartan matrix plus the vertex set of the Dynkin graph.
///
/// Vertices are addressed by their conventional labels (1-based for finite
/// types, 0-based for affine types); vectors are indexed by position in label
/// order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanSpec {
    pub kind: CartanKind,
    pub rank: usize,
    labels: Vec<usize>,
    cartan: Vec<Vec<i64>>,
    /// Undirected edges with a fixed forward orientation, as (from, to)
    /// vertex labels; epsilon(forward) = +1. A_1^(1) has two parallel edges.
    edges: Vec<(usize, usize)>,
}

impl CartanSpec {
    pub fn new(kind: CartanKind, rank: usize) -> Result<CartanSpec> {
        let labels: Vec<usize> = match kind {
            CartanKind::FinA => {
                if rank < 2 {
                    return Err(Error::InvalidRank { kind: "FinA", rank });
                }
                (1..rank).collect()
            }
            CartanKind::FinD => {
                if rank < 4 {
                    return Err(Error::InvalidRank { kind: "FinD", rank });
                }
                (1..=rank).collect()
            }
            CartanKind::AffA => {
                if rank < 1 {
                    return Err(Error::InvalidRank { kind: "AffA", rank });
                }
                (0..=rank).collect()
            }
            CartanKind::AffD => {
                if rank < 4 {
                    return Err(Error::InvalidRank { kind: "AffD", rank });
                }
                (0..=rank).collect()
            }
        };
        let n = rank;
        let edges: Vec<(usize, usize)> = match kind {
            CartanKind::FinA => (2..n).map(|i| (i, i - 1)).collect(),
            CartanKind::FinD => {
                let mut e: Vec<(usize, usize)> = (2..n).map(|i| (i, i - 1)).collect();
                e.push((n, n - 2));
                e
            }
            CartanKind::AffA => {
                if n == 1 {
                    // Two parallel edges between 0 and 1; one forward
                    // orientation each so that strings live in the chosen
                    // orientation class.
                    vec![(1, 0), (0, 1)]
                } else {
                    let mut e: Vec<(usize, usize)> = (1..=n).map(|i| (i, i - 1)).collect();
                    e.push((0, n));
                    e
                }
            }
            CartanKind::AffD => {
                let mut e = vec![(2, 0), (2, 1)];
                e.extend((3..n).map(|i| (i, i - 1)));
                e.push((n, n - 2));
                e
            }
        };
        let m = labels.len();
        let mut cartan = vec![vec![0i64; m]; m];
        for (p, &_l) in labels.iter().enumerate() {
            cartan[p][p] = 2;
        }
        for &(u, v) in &edges {
            let (pu, pv) = (
                labels.iter().position(|&l| l == u).unwrap(),
                labels.iter().position(|&l| l == v).unwrap(),
            );
            cartan[pu][pv] -= 1;
            cartan[pv][pu] -= 1;
        }
        Ok(CartanSpec { kind, rank, labels, cartan, edges })
    }

    pub fn is_affine(&self) -> bool {
        self.kind.is_affine()
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().copied()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn pos(&self, vertex: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == vertex)
            .ok_or(Error::UnknownVertex(vertex))
    }

    pub fn label(&self, pos: usize) -> usize {
        self.labels[pos]
    }

    /// Cartan matrix entry a_{ij} by vertex labels.
    pub fn a(&self, i: usize, j: usize) -> Result<i64> {
        Ok(self.cartan[self.pos(i)?][self.pos(j)?])
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Oriented edges of the underlying graph with the fixed forward
    /// orientation, as (from, to) labels.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Marks of the null root delta, by vertex position. Affine only.
    pub fn null_root(&self) -> Result<Vec<i64>> {
        match self.kind {
            CartanKind::AffA => Ok(vec![1; self.rank + 1]),
            CartanKind::AffD => {
                let n = self.rank;
                let mut marks = vec![2i64; n + 1];
                marks[0] = 1;
                marks[1] = 1;
                marks[n - 1] = 1;
                marks[n] = 1;
                Ok(marks)
            }
            _ => Err(Error::NotAffine),
        }
    }

    /// `<h_i, lambda - sum_j k_j alpha_j>`.
    pub fn pairing(&self, w: &WeightCoords, i: usize) -> Result<i64> {
        let p = self.pos(i)?;
        let mut acc = w.lambda[p];
        for (q, &k) in w.drop.iter().enumerate() {
            acc -= k * self.cartan[p][q];
        }
        Ok(acc)
    }

    /// Expansion of `lambda - sum k_j alpha_j` over the epsilon basis.
    /// Finite types only. For FinA the n coordinates are the representative
    /// of the sl_n weight class with `lambda_n = 0` before the drop is
    /// subtracted; on elements of B(lambda) this is the box-count vector, so
    /// all coordinates stay nonnegative.
    pub fn eps_convert(&self, w: &WeightCoords) -> Result<EpsWeight> {
        match self.kind {
            CartanKind::FinA => {
                let n = self.rank;
                let mut c = vec![Rat::from_integer(0); n];
                // lambda part: c_i = w_i + ... + w_{n-1}, c_n = 0
                let mut suffix = 0i64;
                for i in (1..n).rev() {
                    suffix += w.lambda[i - 1];
                    c[i - 1] = Rat::from_integer(suffix);
                }
                // alpha_j = e_j - e_{j+1}
                for j in 1..n {
                    let k = Rat::from_integer(w.drop[j - 1]);
                    c[j - 1] -= k;
                    c[j] += k;
                }
                Ok(EpsWeight { coeffs: c })
            }
            CartanKind::FinD => {
                let n = self.rank;
                let mut c = vec![Rat::from_integer(0); n];
                let half = Rat::new(1, 2);
                let spin = Rat::from_integer(w.lambda[n - 2] + w.lambda[n - 1]) * half;
                let mut suffix = 0i64;
                for i in (1..=n - 1).rev() {
                    if i <= n - 2 {
                        suffix += w.lambda[i - 1];
                    }
                    c[i - 1] = Rat::from_integer(suffix) + spin;
                }
                c[n - 1] = Rat::from_integer(w.lambda[n - 1] - w.lambda[n - 2]) * half;
                // alpha_j = e_j - e_{j+1} for j <= n-1; alpha_n = e_{n-1} + e_n
                for j in 1..=n {
                    let k = Rat::from_integer(w.drop[j - 1]);
                    if j <= n - 1 {
                        c[j - 1] -= k;
                        c[j] += k;
                    } else {
                        c[n - 2] -= k;
                        c[n - 1] -= k;
                    }
                }
                Ok(EpsWeight { coeffs: c })
            }
            _ => Err(Error::NotFinite),
        }
    }

    /// Inverse of [`eps_convert`] on the weight lattice: recovers the vector
    /// of pairings `<h_i, .>` from epsilon coordinates.
    pub fn pairings_from_eps(&self, e: &EpsWeight) -> Result<Vec<Rat>> {
        match self.kind {
            CartanKind::FinA => {
                let n = self.rank;
                let mut m = Vec::with_capacity(n - 1);
                for i in 1..n {
                    m.push(e.coeffs[i - 1] - e.coeffs[i]);
                }
                Ok(m)
            }
            CartanKind::FinD => {
                let n = self.rank;
                let mut m = Vec::with_capacity(n);
                for i in 1..n {
                    m.push(e.coeffs[i - 1] - e.coeffs[i]);
                }
                m.push(e.coeffs[n - 2] + e.coeffs[n - 1]);
                Ok(m)
            }
            _ => Err(Error::NotFinite),
        }
    }

    /// Solves `C k = lambda-pairings - target-pairings` for the drop vector
    /// turning the dominant part into the given epsilon weight. Finite types.
    pub fn drop_from_eps(&self, lambda: &[i64], e: &EpsWeight) -> Result<Vec<i64>> {
        let m = self.num_vertices();
        let target = self.pairings_from_eps(e)?;
        let mut rhs = Vec::with_capacity(m);
        for p in 0..m {
            rhs.push(Rat::from_integer(lambda[p]) - target[p]);
        }
        let a = Mat::from_fn(m, m, |r, c| Rat::from_integer(self.cartan[r][c]));
        let k = a
            .solve(&rhs)
            .ok_or_else(|| Error::Payload("weight not in the root lattice shift".into()))?;
        let mut out = Vec::with_capacity(m);
        for x in k {
            if !x.is_integer() {
                return Err(Error::Payload("non-integral drop vector".into()));
            }
            out.push(x.to_integer());
        }
        Ok(out)
    }

    /// Positive roots of a finite type, as drop vectors by position.
    pub fn positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        if self.is_affine() {
            return Err(Error::NotFinite);
        }
        let m = self.num_vertices();
        let mut roots: Vec<Vec<i64>> = Vec::new();
        for p in 0..m {
            let mut v = vec![0i64; p];
            v.push(1);
            v.resize(m, 0);
            roots.push(v);
        }
        // Closure under adding a simple root when the pairing is negative.
        let mut frontier = roots.clone();
        while let Some(beta) = frontier.pop() {
            for p in 0..m {
                let pairing: i64 = (0..m).map(|q| beta[q] * self.cartan[p][q]).sum();
                if pairing <= -1 {
                    let mut gamma = beta.clone();
                    gamma[p] += 1;
                    if !roots.contains(&gamma) {
                        roots.push(gamma.clone());
                        frontier.push(gamma);
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// Total drop height of `lambda - w0(lambda)`: the depth of the full
    /// finite crystal of highest weight `lambda`.
    pub fn full_depth(&self, lambda: &[i64]) -> Result<i64> {
        if self.is_affine() {
            return Err(Error::NotFinite);
        }
        let m = self.num_vertices();
        // <h_i, lambda - w0 lambda> = w_i + w_{sigma(i)} for the diagram
        // automorphism sigma induced by -w0.
        let sigma = |p: usize| -> usize {
            match self.kind {
                CartanKind::FinA => m - 1 - p,
                CartanKind::FinD => {
                    let n = self.rank;
                    if n % 2 == 1 && p >= n - 2 {
                        // swap the two spin nodes
                        if p == n - 2 {
                            n - 1
                        } else {
                            n - 2
                        }
                    } else {
                        p
                    }
                }
                _ => unreachable!(),
            }
        };
        let a = Mat::from_fn(m, m, |r, c| Rat::from_integer(self.cartan[r][c]));
        let rhs: Vec<Rat> = (0..m)
            .map(|p| Rat::from_integer(lambda[p] + lambda[sigma(p)]))
            .collect();
        let k = a.solve(&rhs).ok_or(Error::InexactDivision)?;
        let mut total = Rat::from_integer(0);
        for x in k {
            total += x;
        }
        if !total.is_integer() {
            return Err(Error::InexactDivision);
        }
        Ok(total.to_integer())
    }
}

/// A weight `lambda - sum_j k_j alpha_j` stored as the dominant part plus the
/// drop vector, both indexed by vertex position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightCoords {
    pub lambda: Vec<i64>,
    pub drop: Vec<i64>,
}

impl WeightCoords {
    pub fn highest(lambda: Vec<i64>) -> WeightCoords {
        let n = lambda.len();
        WeightCoords { lambda, drop: vec![0; n] }
    }

    pub fn total_drop(&self) -> i64 {
        self.drop.iter().sum()
    }

    pub fn sub_alpha(&self, pos: usize) -> WeightCoords {
        let mut w = self.clone();
        w.drop[pos] += 1;
        w
    }
}

/// Rational coefficients over the epsilon basis (finite types only).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsWeight {
    pub coeffs: Vec<Rat>,
}

impl EpsWeight {
    pub fn zero(m: usize) -> EpsWeight {
        EpsWeight { coeffs: vec![Rat::from_integer(0); m] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.numer() == &0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lambda: Vec<i64>, drop: Vec<i64>) -> WeightCoords {
        WeightCoords { lambda, drop }
    }

    #[test]
    fn cartan_matrices_symmetric_and_off_diagonal() {
        for (kind, rank) in [
            (CartanKind::FinA, 4),
            (CartanKind::FinD, 5),
            (CartanKind::AffA, 3),
            (CartanKind::AffD, 4),
        ] {
            let s = CartanSpec::new(kind, rank).unwrap();
            let m = s.num_vertices();
            for p in 0..m {
                assert_eq!(s.cartan_matrix()[p][p], 2);
                for q in 0..m {
                    assert_eq!(s.cartan_matrix()[p][q], s.cartan_matrix()[q][p]);
                    if p != q {
                        assert!([0, -1].contains(&s.cartan_matrix()[p][q]));
                    }
                }
            }
        }
        // A_1^(1) carries the -2 entry.
        let s = CartanSpec::new(CartanKind::AffA, 1).unwrap();
        assert_eq!(s.a(0, 1).unwrap(), -2);
    }

    #[test]
    fn affine_matrix_annihilates_marks() {
        for (kind, rank) in [
            (CartanKind::AffA, 1),
            (CartanKind::AffA, 2),
            (CartanKind::AffD, 4),
            (CartanKind::AffD, 5),
        ] {
            let s = CartanSpec::new(kind, rank).unwrap();
            let marks = s.null_root().unwrap();
            for i in s.vertices() {
                let w0 = w(vec![0; s.num_vertices()], marks.clone());
                // pairing of -delta against h_i must vanish, so the drop of
                // delta pairs to zero
                assert_eq!(s.pairing(&w0, i).unwrap(), 0, "kind {:?} i {}", kind, i);
            }
        }
        // AffD n=5 marks on vertices 0..5
        let s = CartanSpec::new(CartanKind::AffD, 5).unwrap();
        assert_eq!(s.null_root().unwrap(), vec![1, 1, 2, 2, 1, 1]);
        let s = CartanSpec::new(CartanKind::AffA, 2).unwrap();
        assert_eq!(s.null_root().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn pairing_examples() {
        // FinA n=3, lambda = omega_1, i = 1 -> 1
        let s = CartanSpec::new(CartanKind::FinA, 3).unwrap();
        assert_eq!(s.pairing(&w(vec![1, 0], vec![0, 0]), 1).unwrap(), 1);
        // AffD n=4, lambda = Lambda_1, drop k_1 = 1, i = 2 -> 1
        let s = CartanSpec::new(CartanKind::AffD, 4).unwrap();
        assert_eq!(s.pairing(&w(vec![0, 1, 0, 0, 0], vec![0, 1, 0, 0, 0]), 2).unwrap(), 1);
        // AffA n=2, lambda = Lambda_0, drop k_0 = 1, i = 0 -> -1
        let s = CartanSpec::new(CartanKind::AffA, 2).unwrap();
        assert_eq!(s.pairing(&w(vec![1, 0, 0], vec![1, 0, 0]), 0).unwrap(), -1);
        // pairing(Lambda_0 - delta, i) = pairing(Lambda_0, i)
        let marks = s.null_root().unwrap();
        for i in s.vertices() {
            assert_eq!(
                s.pairing(&w(vec![1, 0, 0], marks.clone()), i).unwrap(),
                s.pairing(&w(vec![1, 0, 0], vec![0, 0, 0]), i).unwrap()
            );
        }
    }

    #[test]
    fn eps_convert_examples() {
        // FinA n=4, omega_1 + omega_2 -> (2, 1, 0) with the trailing
        // representative coordinate zero
        let s = CartanSpec::new(CartanKind::FinA, 4).unwrap();
        let e = s.eps_convert(&w(vec![1, 1, 0], vec![0, 0, 0])).unwrap();
        assert_eq!(
            e.coeffs,
            vec![
                Rat::from_integer(2),
                Rat::from_integer(1),
                Rat::from_integer(0),
                Rat::from_integer(0)
            ]
        );
        // FinD n=4, omega_4 -> (1/2, 1/2, 1/2, 1/2)
        let s = CartanSpec::new(CartanKind::FinD, 4).unwrap();
        let e = s.eps_convert(&w(vec![0, 0, 0, 1], vec![0; 4])).unwrap();
        assert_eq!(e.coeffs, vec![Rat::new(1, 2); 4]);
        // zero weight -> zero coefficients
        let e = s.eps_convert(&w(vec![0; 4], vec![0; 4])).unwrap();
        assert!(e.is_zero());
        // affine rejected
        let s = CartanSpec::new(CartanKind::AffA, 2).unwrap();
        assert!(s.eps_convert(&w(vec![1, 0, 0], vec![0; 3])).is_err());
    }

    #[test]
    fn eps_roundtrip_matches_pairings() {
        for (kind, rank, lambda, drop) in [
            (CartanKind::FinD, 5, vec![1i64, 0, 2, 1, 0], vec![0i64, 1, 3, 1, 2]),
            (CartanKind::FinA, 5, vec![1, 2, 0, 1], vec![2, 0, 1, 3]),
        ] {
            let s = CartanSpec::new(kind, rank).unwrap();
            let wc = w(lambda, drop);
            let e = s.eps_convert(&wc).unwrap();
            let m = s.pairings_from_eps(&e).unwrap();
            for (p, i) in s.vertices().enumerate() {
                assert_eq!(m[p], Rat::from_integer(s.pairing(&wc, i).unwrap()));
            }
            let k = s.drop_from_eps(&wc.lambda, &e).unwrap();
            assert_eq!(k, wc.drop);
        }
    }

    #[test]
    fn positive_root_counts() {
        let s = CartanSpec::new(CartanKind::FinA, 5).unwrap();
        assert_eq!(s.positive_roots().unwrap().len(), 10);
        let s = CartanSpec::new(CartanKind::FinD, 4).unwrap();
        assert_eq!(s.positive_roots().unwrap().len(), 12);
        let s = CartanSpec::new(CartanKind::FinD, 5).unwrap();
        assert_eq!(s.positive_roots().unwrap().len(), 20);
    }

    #[test]
    fn full_depth_adjoint_a2() {
        let s = CartanSpec::new(CartanKind::FinA, 3).unwrap();
        // adjoint of A_2: lambda - w0 lambda = 2 rho drop = (2,2)
        assert_eq!(s.full_depth(&[1, 1]).unwrap(), 4);
    }
}
