//! Dense matrices over a `Scalar`.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Twist};

#[derive(Clone, Debug)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: PartialEq> PartialEq for Mat<S> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(like: &S, rows: usize, cols: usize) -> Mat<S> {
        Mat { rows, cols, data: vec![like.zero_like(); rows * cols] }
    }
    pub fn identity(like: &S, n: usize) -> Mat<S> {
        let mut m = Mat::zeros(like, n, n);
        for i in 0..n {
            m.set(i, i, like.one_like());
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<S>>) -> Mat<S> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }
    pub fn column(v: Vec<S>) -> Mat<S> {
        let n = v.len();
        Mat { rows: n, cols: 1, data: v }
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[S] {
        &self.data
    }
    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn try_map<T, F: Fn(&S) -> Result<T>>(&self, f: F) -> Result<Mat<T>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<T>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.vanishes())
    }

    pub fn add(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }
    pub fn sub(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }
    pub fn neg(&self) -> Mat<S> {
        self.map(|x| x.negate())
    }
    pub fn scale(&self, c: &S) -> Mat<S> {
        self.map(|x| if x.exact_zero() { x.clone() } else { c.times(x) })
    }
    pub fn mul(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let like = self.data.first().or(o.data.first()).expect("empty matrix");
        let mut acc: Vec<Option<S>> = vec![None; self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.exact_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.exact_zero() {
                        continue;
                    }
                    let t = a.times(b);
                    let slot = &mut acc[i * o.cols + j];
                    *slot = Some(match slot.take() {
                        None => t,
                        Some(s) => s.plus(&t),
                    });
                }
            }
        }
        let zero = like.zero_like();
        let data = acc.into_iter().map(|x| x.unwrap_or_else(|| zero.clone())).collect();
        Mat { rows: self.rows, cols: o.cols, data }
    }
    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        let m = self.mul(&Mat::column(v.to_vec()));
        m.data
    }
    pub fn transpose(&self) -> Mat<S> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }
    pub fn pow(&self, k: u32) -> Mat<S> {
        let mut r = Mat::identity(&self.data[0], self.rows);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }
    /// Copy `b` into the block starting at (r0, c0).
    pub fn put_block(&mut self, r0: usize, c0: usize, b: &Mat<S>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<S> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        Mat { rows, cols, data }
    }
    pub fn cap(&self, prec: i64) -> Mat<S> {
        self.map(|x| x.cap(prec))
    }
    pub fn min_ord(&self) -> i64 {
        self.data.iter().map(|x| x.ord_lower()).min().unwrap_or(i64::MAX)
    }
    pub fn check_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::Invalid(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        Ok(self.rows)
    }
}

impl<S: Scalar + Twist> Twist for Mat<S> {
    fn twist(&self, n: u32) -> Self {
        self.map(|x| x.twist(n))
    }
}
