//! Dense matrices over any [`Scalar`].

use std::fmt;

use super::scalar::Scalar;

pub struct Mat<S: Scalar> {
    ctx: S::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Clone for Mat<S> {
    fn clone(&self) -> Self {
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data: self.data.clone() }
    }
}

impl<S: Scalar> PartialEq for Mat<S> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}
impl<S: Scalar> Eq for Mat<S> {}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(ctx: &S::Ctx, rows: usize, cols: usize) -> Self {
        Mat { ctx: ctx.clone(), rows, cols, data: vec![S::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &S::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one(ctx);
        }
        m
    }

    pub fn scalar(ctx: &S::Ctx, n: usize, c: &S) -> Self {
        Self::identity(ctx, n).scale(c)
    }

    /// Builds from rows; all rows must have equal length and there must be at least one.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let ctx = rows[0][0].ctx();
        Self::from_rows_ctx(&ctx, rows)
    }

    pub fn from_rows_ctx(ctx: &S::Ctx, rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Mat { ctx: ctx.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(ctx: &S::Ctx, rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise map into another scalar type.
    pub fn map_into<T: Scalar>(&self, ctx: &T::Ctx, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat::from_fn(ctx, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        Self::from_fn(&self.ctx, self.rows, o.cols, |i, j| {
            let mut acc = S::zero(&self.ctx);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero(&self.ctx);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon reduction in place; returns pivot columns and the determinant sign/scale factor.
    fn rref(&mut self) -> (Vec<usize>, S) {
        let mut factor = S::one(&self.ctx);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                factor = factor.neg();
            }
            let piv = self.get(r, c).clone();
            factor = factor.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, factor)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().0.len()
    }

    pub fn det(&self) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let (piv, factor) = m.rref();
        if piv.len() < self.rows {
            S::zero(&self.ctx)
        } else {
            factor
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::from_fn(&self.ctx, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                S::one(&self.ctx)
            } else {
                S::zero(&self.ctx)
            }
        });
        let (piv, _) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(&self.ctx, n, n, |i, j| aug.get(i, j + n).clone()))
    }

    /// Basis of the right kernel `{v : M v = 0}`; one vector per free column,
    /// with that free coordinate set to one.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let (piv, _) = m.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![S::zero(&self.ctx); self.cols];
            v[free] = S::one(&self.ctx);
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = m.get(r, free).neg();
            }
            out.push(v);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.ctx, self.rows)
    }
}

/// True iff `m = c·n` for a nonzero scalar `c`, tested by cross products of entries.
pub fn pgl_equal<S: Scalar>(m: &Mat<S>, n: &Mat<S>) -> bool {
    if m.rows() != n.rows() || m.cols() != n.cols() || m.is_zero() || n.is_zero() {
        return false;
    }
    let a = m.entries();
    let b = n.entries();
    for i in 0..a.len() {
        if a[i].is_zero() != b[i].is_zero() {
            return false;
        }
    }
    // Compare every entry against one fixed nonzero pair: a_i b_k = a_k b_i.
    let k = a.iter().position(|x| !x.is_zero()).unwrap();
    (0..a.len()).all(|i| a[i].mul(&b[k]) == a[k].mul(&b[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Elem, Field};

    fn m(f: &Field, rows: &[&[i64]]) -> Mat<Elem> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
    }

    #[test]
    fn pgl_examples() {
        let q = Field::rationals();
        assert!(pgl_equal(&m(&q, &[&[1, 2], &[3, 4]]), &m(&q, &[&[2, 4], &[6, 8]])));
        assert!(!pgl_equal(&m(&q, &[&[1, 0], &[0, 1]]), &m(&q, &[&[1, 0], &[0, 2]])));
    }

    #[test]
    fn inverse_det_nullspace() {
        let q = Field::rationals();
        let a = m(&q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), q.from_i64(18));
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
        let s = m(&q, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(s.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }
}
