//! Exact dense linear algebra over a field, used for moment maps, kernel
//! intersections, cross-map systems and the finite-field stability oracle.
//! No floating point anywhere.

use std::fmt;

pub type Rat = num_rational::Rational64;

/// Exact field scalar. Implemented for rationals and for GF(5).
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat::from_integer(0)
    }
    fn one() -> Self {
        Rat::from_integer(1)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
}

/// The field with five elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gf5(pub u8);

impl Gf5 {
    pub fn from_i64(x: i64) -> Gf5 {
        Gf5(x.rem_euclid(5) as u8)
    }

    /// Reduction of a rational mod 5; fails when the denominator is
    /// divisible by 5.
    pub fn from_rat(r: &Rat) -> Option<Gf5> {
        let den = r.denom().rem_euclid(5);
        if den == 0 {
            return None;
        }
        let num = Gf5::from_i64(*r.numer());
        let den = Gf5::from_i64(den);
        Some(num.mul(&den.inv().unwrap()))
    }
}

impl Scalar for Gf5 {
    fn zero() -> Self {
        Gf5(0)
    }
    fn one() -> Self {
        Gf5(1)
    }
    fn add(&self, o: &Self) -> Self {
        Gf5((self.0 + o.0) % 5)
    }
    fn sub(&self, o: &Self) -> Self {
        Gf5((5 + self.0 - o.0) % 5)
    }
    fn mul(&self, o: &Self) -> Self {
        Gf5((self.0 * o.0) % 5)
    }
    fn neg(&self) -> Self {
        Gf5((5 - self.0) % 5)
    }
    fn inv(&self) -> Option<Self> {
        match self.0 {
            0 => None,
            1 => Some(Gf5(1)),
            2 => Some(Gf5(3)),
            3 => Some(Gf5(2)),
            4 => Some(Gf5(4)),
            _ => unreachable!(),
        }
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    a: Vec<F>,
}

impl<F: Scalar> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Mat<F> {
        Mat { rows, cols, a: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat<F> {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Mat<F> {
        let mut a = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                a.push(f(r, c));
            }
        }
        Mat { rows, cols, a }
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.a[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, a: self.a.iter().map(|x| x.mul(s)).collect() }
    }

    pub fn mul(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out: Mat<F> = Mat::zero(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let y = o.get(k, c);
                    if y.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&x.mul(y));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `o` (same column count).
    pub fn vstack(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.cols);
        let mut a = self.a.clone();
        a.extend(o.a.iter().cloned());
        Mat { rows: self.rows + o.rows, cols: self.cols, a }
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                let tmp = self.get(row, c).clone();
                let v = self.get(p, c).clone();
                self.set(row, c, v);
                self.set(p, c, tmp);
            }
            let inv = self.get(row, col).inv().expect("pivot must be invertible");
            for c in 0..self.cols {
                let v = self.get(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in 0..self.cols {
                        let v = self.get(r, c).sub(&factor.mul(self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : Ax = 0}, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves Ax = b when a solution exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Mat<G>> {
        let mut a = Vec::with_capacity(self.a.len());
        for x in &self.a {
            a.push(f(x)?);
        }
        Some(Mat { rows: self.rows, cols: self.cols, a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> Mat<Rat> {
        Mat::from_fn(rows, cols, |r, c| Rat::from_integer(v[r * cols + c]))
    }

    #[test]
    fn kernel_of_singular_matrix() {
        // rank-1 matrix, kernel dim 2
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in 0..2 {
                let s: Rat = (0..3).map(|c| *a.get(r, c) * v[c]).sum();
                assert_eq!(s, Rat::from_integer(0));
            }
        }
    }

    #[test]
    fn solve_exact() {
        let a = m(2, 2, &[2, 1, 1, 3]);
        let x = a.solve(&[Rat::from_integer(5), Rat::from_integer(10)]).unwrap();
        assert_eq!(x, vec![Rat::from_integer(1), Rat::from_integer(3)]);
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn gf5_field_axioms() {
        for x in 1..5u8 {
            let g = Gf5(x);
            assert_eq!(g.mul(&g.inv().unwrap()), Gf5(1));
        }
        assert_eq!(Gf5::from_rat(&Rat::new(1, 2)).unwrap(), Gf5(3));
        assert!(Gf5::from_rat(&Rat::new(1, 5)).is_none());
    }
}
