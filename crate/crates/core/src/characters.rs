//! Independent character oracles: Weyl dimension formula, Freudenthal
//! multiplicity recursion for finite types, and the depth-truncated affine
//! variant with imaginary roots k*delta of multiplicity equal to the rank of
//! the finite part. All arithmetic is exact; the recursion's division is
//! checked and aborts on a remainder.

use crate::cartan::{CartanKind, CartanSpec};
use crate::crystal::CrystalGraph;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Weight multiplicities of the module of highest weight `lambda`, keyed by
/// drop vector, for all weights of total drop at most `depth`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MultiplicityTable {
    pub kind: CartanKind,
    pub rank: usize,
    pub lambda: Vec<i64>,
    pub depth: i64,
    pub mults: BTreeMap<Vec<i64>, i64>,
}

impl MultiplicityTable {
    pub fn mult(&self, drop: &[i64]) -> i64 {
        self.mults.get(drop).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.mults.values().sum()
    }

    /// JSON rows sorted by drop height then lexicographically.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            drop: &'a [i64],
            mult: i64,
        }
        let mut rows: Vec<(&Vec<i64>, &i64)> = self.mults.iter().collect();
        rows.sort_by_key(|(d, _)| (d.iter().sum::<i64>(), (*d).clone()));
        let rows: Vec<Row> = rows.into_iter().map(|(d, m)| Row { drop: d, mult: *m }).collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "kind": self.kind.name(),
            "rank": self.rank,
            "weight": self.lambda,
            "depth": self.depth,
            "rows": rows,
        }))
        .expect("table serialization cannot fail")
    }
}

fn checked(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::InexactDivision)
}

/// Weyl dimension formula over the positive roots, exact.
pub fn weyl_dim(spec: &CartanSpec, lambda: &[i64]) -> Result<i128> {
    if spec.is_affine() {
        return Err(Error::NotFinite);
    }
    if lambda.len() != spec.num_vertices() {
        return Err(Error::DimensionMismatch);
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::NegativeCoefficient);
    }
    let roots = spec.positive_roots()?;
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for alpha in &roots {
        let mut top: i128 = 0;
        let mut bottom: i128 = 0;
        for (p, &c) in alpha.iter().enumerate() {
            top += (c as i128) * ((lambda[p] + 1) as i128);
            bottom += c as i128;
        }
        num = checked(num.checked_mul(top))?;
        den = checked(den.checked_mul(bottom))?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    if den != 1 {
        return Err(Error::InexactDivision);
    }
    Ok(num)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// A positive root as a drop vector, with its multiplicity.
struct Root {
    drop: Vec<i64>,
    mult: i64,
}

fn positive_roots_with_mult(spec: &CartanSpec, depth: i64) -> Result<Vec<Root>> {
    if !spec.is_affine() {
        return Ok(spec
            .positive_roots()?
            .into_iter()
            .map(|drop| Root { drop, mult: 1 })
            .collect());
    }
    // Finite part: vertices 1..=n of the affine diagram.
    let fin_kind = match spec.kind {
        CartanKind::AffA => {
            if spec.rank == 1 {
                None
            } else {
                Some(CartanKind::FinA)
            }
        }
        CartanKind::AffD => Some(CartanKind::FinD),
        _ => unreachable!(),
    };
    let m = spec.num_vertices();
    let fin_roots: Vec<Vec<i64>> = match fin_kind {
        Some(CartanKind::FinA) => CartanSpec::new(CartanKind::FinA, spec.rank + 1)?
            .positive_roots()?,
        Some(CartanKind::FinD) => CartanSpec::new(CartanKind::FinD, spec.rank)?.positive_roots()?,
        _ => vec![vec![1]], // A_1 inside A_1^(1)
    };
    // Embed finite drop vectors (positions for vertices 1..n) into affine
    // positions 0..n.
    let embed = |v: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; m];
        out[1..(v.len() + 1)].copy_from_slice(v);
        out
    };
    let marks = spec.null_root()?;
    let delta_height: i64 = marks.iter().sum();
    let rank_mult = spec.rank as i64;
    let mut roots = Vec::new();
    for alpha in &fin_roots {
        roots.push(Root { drop: embed(alpha), mult: 1 });
    }
    let mut k = 1i64;
    while k * delta_height <= depth + delta_height {
        // alpha + k delta and -alpha + k delta
        for alpha in &fin_roots {
            let e = embed(alpha);
            let plus: Vec<i64> = e.iter().zip(&marks).map(|(a, m)| a + k * m).collect();
            roots.push(Root { drop: plus, mult: 1 });
            let minus: Vec<i64> = e.iter().zip(&marks).map(|(a, m)| k * m - a).collect();
            roots.push(Root { drop: minus, mult: 1 });
        }
        // imaginary k delta
        roots.push(Root { drop: marks.iter().map(|m| m * k).collect(), mult: rank_mult });
        k += 1;
    }
    Ok(roots)
}

/// Freudenthal recursion, solved bottom-up by total drop height.
pub fn freudenthal(spec: &CartanSpec, lambda: &[i64], depth: i64) -> Result<MultiplicityTable> {
    if lambda.len() != spec.num_vertices() {
        return Err(Error::DimensionMismatch);
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::NegativeCoefficient);
    }
    let m = spec.num_vertices();
    let cartan = spec.cartan_matrix();
    let roots = positive_roots_with_mult(spec, depth)?;

    // (lambda + rho, beta) = sum_j k_j (w_j + 1); (beta, gamma) via the
    // Cartan matrix in the simply-laced normalization.
    let form_with_lambda_rho =
        |beta: &[i64]| -> i128 { beta.iter().enumerate().map(|(j, &k)| (k as i128) * ((lambda[j] + 1) as i128)).sum() };
    let form = |beta: &[i64], gamma: &[i64]| -> i128 {
        let mut acc: i128 = 0;
        for (j, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (l, &g) in gamma.iter().enumerate() {
                if g != 0 {
                    acc += (b as i128) * (g as i128) * (cartan[j][l] as i128);
                }
            }
        }
        acc
    };
    let form_with_lambda = |beta: &[i64]| -> i128 {
        beta.iter().enumerate().map(|(j, &k)| (k as i128) * (lambda[j] as i128)).sum()
    };

    let mut mults: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    mults.insert(vec![0; m], 1);
    // Enumerate candidate drops by height.
    let mut by_height: Vec<Vec<Vec<i64>>> = vec![Vec::new(); (depth + 1) as usize];
    by_height[0].push(vec![0; m]);
    for h in 1..=depth {
        let mut level = Vec::new();
        enumerate_drops(m, h, &mut vec![0; m], 0, &mut level);
        by_height[h as usize] = level;
    }

    for h in 1..=depth {
        for beta in &by_height[h as usize] {
            // denominator: (lambda+rho, lambda+rho) - (mu+rho, mu+rho)
            //            = 2 (lambda+rho, beta) - (beta, beta)
            let denom = 2 * form_with_lambda_rho(beta) - form(beta, beta);
            if denom <= 0 {
                continue; // not a weight
            }
            // numerator: 2 sum_{alpha>0} mult(alpha) sum_{k>=1}
            //            mult(mu + k alpha) (mu + k alpha, alpha)
            let mut num: i128 = 0;
            for root in &roots {
                let mut k = 1i64;
                loop {
                    // beta' = beta - k alpha must be a nonnegative drop
                    let mut higher = Vec::with_capacity(m);
                    let mut ok = true;
                    for (j, &b) in beta.iter().enumerate() {
                        let v = b - k * root.drop[j];
                        if v < 0 {
                            ok = false;
                            break;
                        }
                        higher.push(v);
                    }
                    if !ok {
                        break;
                    }
                    let mu_mult = mults.get(&higher).copied().unwrap_or(0);
                    if mu_mult != 0 {
                        // (mu + k alpha, alpha) with mu = lambda - beta'
                        let inner = form_with_lambda(&root.drop) - form(&higher, &root.drop);
                        num += (root.mult as i128) * (mu_mult as i128) * inner;
                    }
                    k += 1;
                }
            }
            num *= 2;
            if num == 0 {
                continue;
            }
            if num % denom != 0 {
                return Err(Error::InexactDivision);
            }
            let v = num / denom;
            if v < 0 {
                return Err(Error::InexactDivision);
            }
            if v > 0 {
                mults.insert(beta.clone(), v as i64);
            }
        }
    }
    Ok(MultiplicityTable { kind: spec.kind, rank: spec.rank, lambda: lambda.to_vec(), depth, mults })
}

fn enumerate_drops(m: usize, total: i64, cur: &mut Vec<i64>, pos: usize, out: &mut Vec<Vec<i64>>) {
    if pos == m - 1 {
        cur[pos] = total;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for v in 0..=total {
        cur[pos] = v;
        enumerate_drops(m, total - v, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Discrepancy {
    pub drop: Vec<i64>,
    pub graph_count: i64,
    pub oracle_mult: i64,
}

/// Per-weight node counts of a generated graph against the oracle table.
/// Compares every weight of total drop at most `min(graph depth, table
/// depth)`; for finite full graphs the table depth is the bound.
pub fn compare(graph: &CrystalGraph, table: &MultiplicityTable) -> Result<Vec<Discrepancy>> {
    if graph.spec.kind != table.kind
        || graph.spec.rank != table.rank
        || graph.spec.weight != table.lambda
    {
        return Err(Error::SpecMismatch);
    }
    let bound = match graph.spec.depth {
        Some(d) => d.min(table.depth),
        None => table.depth,
    };
    let counts = graph.counts_by_drop();
    let mut report = Vec::new();
    let mut keys: Vec<Vec<i64>> = counts.keys().cloned().collect();
    for k in table.mults.keys() {
        if !counts.contains_key(k) {
            keys.push(k.clone());
        }
    }
    keys.sort();
    keys.dedup();
    for k in keys {
        let h: i64 = k.iter().sum();
        if h > bound {
            continue;
        }
        let g = counts.get(&k).copied().unwrap_or(0);
        let o = table.mult(&k);
        if g != o {
            report.push(Discrepancy { drop: k, graph_count: g, oracle_mult: o });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_dims() {
        let a2 = CartanSpec::new(CartanKind::FinA, 3).unwrap();
        assert_eq!(weyl_dim(&a2, &[1, 0]).unwrap(), 3);
        assert_eq!(weyl_dim(&a2, &[1, 1]).unwrap(), 8);
        let d4 = CartanSpec::new(CartanKind::FinD, 4).unwrap();
        assert_eq!(weyl_dim(&d4, &[0, 0, 0, 1]).unwrap(), 8);
        assert_eq!(weyl_dim(&d4, &[1, 0, 0, 0]).unwrap(), 8);
        assert_eq!(weyl_dim(&d4, &[0, 1, 0, 0]).unwrap(), 28);
        let d5 = CartanSpec::new(CartanKind::FinD, 5).unwrap();
        assert_eq!(weyl_dim(&d5, &[0, 0, 0, 0, 1]).unwrap(), 16);
        assert_eq!(weyl_dim(&d5, &[1, 0, 0, 0, 0]).unwrap(), 10);
    }

    #[test]
    fn finite_freudenthal_total_matches_weyl_dim() {
        for (kind, rank, lambda) in [
            (CartanKind::FinA, 3, vec![1i64, 1]),
            (CartanKind::FinA, 4, vec![1, 0, 1]),
            (CartanKind::FinD, 4, vec![0, 1, 0, 0]),
            (CartanKind::FinD, 4, vec![0, 0, 1, 1]),
        ] {
            let s = CartanSpec::new(kind, rank).unwrap();
            let depth = s.full_depth(&lambda).unwrap();
            let t = freudenthal(&s, &lambda, depth).unwrap();
            assert_eq!(t.total() as i128, weyl_dim(&s, &lambda).unwrap(), "{:?} {:?}", kind, lambda);
        }
    }

    #[test]
    fn adjoint_multiplicities_a2() {
        let s = CartanSpec::new(CartanKind::FinA, 3).unwrap();
        let t = freudenthal(&s, &[1, 1], 4).unwrap();
        assert_eq!(t.mult(&[0, 0]), 1);
        assert_eq!(t.mult(&[1, 0]), 1);
        assert_eq!(t.mult(&[1, 1]), 2); // zero weight in the adjoint
        assert_eq!(t.mult(&[2, 2]), 1); // lowest weight
    }

    #[test]
    fn affine_basic_delta_multiplicities() {
        // A_2^(1): mult(Lambda_0 - delta) = 2
        let s = CartanSpec::new(CartanKind::AffA, 2).unwrap();
        let t = freudenthal(&s, &[1, 0, 0], 3).unwrap();
        assert_eq!(t.mult(&[1, 1, 1]), 2);
        assert_eq!(t.mult(&[1, 0, 0]), 1);
        assert_eq!(t.mult(&[1, 1, 0]), 1);
        // D_4^(1): mult(Lambda_0 - delta) = 4
        let s = CartanSpec::new(CartanKind::AffD, 4).unwrap();
        let t = freudenthal(&s, &[1, 0, 0, 0, 0], 6).unwrap();
        assert_eq!(t.mult(&[1, 1, 2, 1, 1]), 4);
    }

    #[test]
    fn level_two_a1_delta_multiplicity() {
        // A_1^(1), lambda = Lambda_0 + Lambda_1: mult(lambda - delta) = 2
        let s = CartanSpec::new(CartanKind::AffA, 1).unwrap();
        let t = freudenthal(&s, &[1, 1], 4).unwrap();
        assert_eq!(t.mult(&[1, 1]), 2);
        assert_eq!(t.mult(&[1, 0]), 1);
    }

    #[test]
    fn compare_negative_control() {
        use crate::crystal::generate;
        use crate::tableaux_a::Tableau;
        let s = CartanSpec::new(CartanKind::FinA, 3).unwrap();
        let hw = Tableau::highest(&s, &[1, 0]).unwrap();
        let g = generate(hw, None, 1).unwrap();
        let t = freudenthal(&s, &[1, 0], s.full_depth(&[1, 0]).unwrap()).unwrap();
        assert!(compare(&g, &t).unwrap().is_empty());
        let mut corrupted = t.clone();
        corrupted.mults.insert(vec![1, 0], 7);
        assert!(!compare(&g, &corrupted).unwrap().is_empty());
    }
}
