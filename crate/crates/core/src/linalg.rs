//! Dense linear algebra over `F_q`.
//!
//! Row reduction always takes the leftmost pivot column and the first row with a nonzero
//! entry there, so echelon forms and kernel bases are deterministic.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, Frobenius};

/// Element of `V`, a column vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColVec(pub Vec<Elem>);

/// Element of `V*`, a row vector (functional).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowVec(pub Vec<Elem>);

impl Deref for ColVec {
    type Target = [Elem];
    fn deref(&self) -> &[Elem] {
        &self.0
    }
}

impl Deref for RowVec {
    type Target = [Elem];
    fn deref(&self) -> &[Elem] {
        &self.0
    }
}

impl ColVec {
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        ColVec(v)
    }

    pub fn sigma(&self, sigma: &Frobenius) -> Self {
        ColVec(sigma.apply_slice(&self.0))
    }
}

impl RowVec {
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        RowVec(v)
    }

    pub fn sigma(&self, sigma: &Frobenius) -> Self {
        RowVec(sigma.apply_slice(&self.0))
    }

    /// `xi * A`.
    pub fn mul_mat(&self, f: &Field, a: &Mat) -> RowVec {
        debug_assert_eq!(self.len(), a.rows);
        let mut out = vec![0; a.cols];
        row_times(f, &self.0, &a.data, a.cols, &mut out);
        RowVec(out)
    }

    /// The scalar `xi * x`.
    pub fn apply(&self, f: &Field, x: &ColVec) -> Elem {
        dot(f, &self.0, &x.0)
    }
}

/// `sum a_i b_i`.
#[inline]
pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `out = v * A` for a row-major `A` with `cols` columns.
#[inline]
pub fn row_times(f: &Field, v: &[Elem], a: &[Elem], cols: usize, out: &mut [Elem]) {
    out.iter_mut().for_each(|o| *o = 0);
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        let row = &a[i * cols..(i + 1) * cols];
        for (o, &aij) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(vi, aij));
        }
    }
}

pub fn is_zero(v: &[Elem]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(n: usize, a: Elem) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    /// The elementary matrix `e_{ij}` (0-based indices).
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = 1;
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Elem> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            row_times(
                f,
                self.row(i),
                &other.data,
                other.cols,
                &mut out.data[i * other.cols..(i + 1) * other.cols],
            );
        }
        Ok(out)
    }

    pub fn mul_col(&self, f: &Field, x: &ColVec) -> ColVec {
        ColVec((0..self.rows).map(|i| dot(f, self.row(i), x)).collect())
    }

    pub fn add(&self, f: &Field, other: &Mat) -> Result<Mat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("addition of different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Mat { data, ..*self })
    }

    pub fn scale(&self, f: &Field, a: Elem) -> Mat {
        Mat {
            data: self.data.iter().map(|&x| f.mul(a, x)).collect(),
            ..*self
        }
    }

    pub fn trace(&self, f: &Field) -> Elem {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Entrywise `sigma`.
    pub fn sigma(&self, sigma: &Frobenius) -> Mat {
        Mat {
            data: sigma.apply_slice(&self.data),
            ..*self
        }
    }

    /// Scales so the first nonzero entry in row-major order is 1. Returns the scale factor
    /// applied, or `None` for the zero matrix.
    pub fn normalize(&mut self, f: &Field) -> Option<Elem> {
        let lead = normalize_slice(f, &mut self.data)?;
        Some(f.inv(lead))
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self, f: &Field) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        rank_of(f, self.data.clone(), self.rows, self.cols)
    }

    pub fn invert(&self, f: &Field) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = rref_in_place(f, &mut aug.data, n, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Basis of `{xi : xi A = 0}` in reduced row-echelon form.
    pub fn left_kernel(&self, f: &Field) -> Vec<RowVec> {
        let (r, pivots) = self.transpose().rref(f);
        let width = self.rows;
        let mut basis = Vec::new();
        for free in (0..width).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; width];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return Vec::new();
        }
        let k = basis.len();
        let (b, _) = Mat::from_rows(&basis).expect("uniform rows").rref(f);
        (0..k).map(|i| RowVec(b.row(i).to_vec())).collect()
    }

    pub fn parse(f: &Field, text: &str) -> Result<Mat> {
        let rows: Vec<Vec<Elem>> = text
            .trim()
            .split(';')
            .map(|row| row.split(',').map(|e| f.parse_elem(e)).collect())
            .collect::<Result<_>>()?;
        let m = Mat::from_rows(&rows)?;
        if m.rows == 0 || m.cols == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        Ok(m)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(out, ";")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Scales `v` so its first nonzero entry is 1; returns that entry's original value.
pub fn normalize_slice(f: &Field, v: &mut [Elem]) -> Option<Elem> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    if lead != 1 {
        let li = f.inv(lead);
        v.iter_mut().for_each(|x| *x = f.mul(*x, li));
    }
    Some(lead)
}

/// In-place RREF of a row-major buffer; returns pivot columns.
pub fn rref_in_place(f: &Field, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let li = f.inv(data[r * cols + c]);
        for j in 0..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], li);
        }
        for i in 0..rows {
            let factor = data[i * cols + c];
            if i == r || factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in 0..cols {
                data[i * cols + j] = f.add(data[i * cols + j], f.mul(nf, data[r * cols + j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_of(f: &Field, mut data: Vec<Elem>, rows: usize, cols: usize) -> usize {
    rref_in_place(f, &mut data, rows, cols).len()
}

/// `x xi`, the rank-1 matrix with entries `x_i xi_j`.
pub fn pure_tensor(f: &Field, x: &ColVec, xi: &RowVec) -> Result<Mat> {
    if x.len() != xi.len() {
        return Err(Error::Shape("vector lengths differ".into()));
    }
    if is_zero(x) || is_zero(xi) {
        return Err(Error::ZeroInput);
    }
    Ok(outer(f, x, xi))
}

pub(crate) fn outer(f: &Field, x: &[Elem], xi: &[Elem]) -> Mat {
    let n = x.len();
    let mut data = Vec::with_capacity(n * n);
    for &a in x {
        data.extend(xi.iter().map(|&b| f.mul(a, b)));
    }
    Mat {
        rows: n,
        cols: xi.len(),
        data,
    }
}

/// `Tr(X M)` without forming the product.
pub fn trace_product(f: &Field, x: &Mat, m: &Mat) -> Result<Elem> {
    if !x.is_square() || (x.rows, x.cols) != (m.rows, m.cols) {
        return Err(Error::Shape("trace product needs equal square shapes".into()));
    }
    Ok(trace_product_raw(f, &x.data, &m.data, x.rows))
}

#[inline]
pub(crate) fn trace_product_raw(f: &Field, x: &[Elem], m: &[Elem], n: usize) -> Elem {
    let mut acc = 0;
    for i in 0..n {
        for k in 0..n {
            let a = x[i * n + k];
            if a != 0 {
                acc = f.add(acc, f.mul(a, m[k * n + i]));
            }
        }
    }
    acc
}

/// Incremental row-echelon basis used for span and rank-growth checks.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, f: &Field, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                let nc = f.neg(c);
                for (wj, &rj) in w.iter_mut().zip(row) {
                    *wj = f.add(*wj, f.mul(nc, rj));
                }
            }
        }
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let li = f.inv(w[pc]);
        w.iter_mut().for_each(|x| *x = f.mul(*x, li));
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, f: &Field, v: &[Elem]) -> bool {
        let mut probe = self.clone();
        !probe.insert(f, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::with_order(4).unwrap()
    }

    #[test]
    fn rank_basics() {
        let f = f4();
        assert_eq!(Mat::zeros(3, 3).rank(&f), 0);
        assert_eq!(Mat::identity(3).rank(&f), 3);
        let x = ColVec(vec![1, 2, 3]);
        let xi = RowVec(vec![3, 0, 1]);
        assert_eq!(pure_tensor(&f, &x, &xi).unwrap().rank(&f), 1);
        assert_eq!(pure_tensor(&f, &ColVec(vec![0; 3]), &xi), Err(Error::ZeroInput));
    }

    #[test]
    fn pure_tensor_basis() {
        let f = f4();
        let e = pure_tensor(&f, &ColVec::basis(3, 0), &RowVec::basis(3, 1)).unwrap();
        assert_eq!(e, Mat::elementary(3, 0, 1));
        let e11 = pure_tensor(&f, &ColVec::basis(3, 0), &RowVec::basis(3, 0)).unwrap();
        assert_eq!(e11.trace(&f), 1);
    }

    #[test]
    fn trace_of_identity() {
        let f = f4();
        let i3 = Mat::identity(3);
        // 3 mod 2 = 1
        assert_eq!(trace_product(&f, &i3, &i3).unwrap(), 1);
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(trace_product(&f9, &i3, &i3).unwrap(), 0);
        assert!(trace_product(&f, &i3, &Mat::identity(2)).is_err());
    }

    #[test]
    fn invert_cases() {
        let f = f4();
        let w = f.primitive();
        assert_eq!(Mat::identity(3).invert(&f).unwrap(), Mat::identity(3));
        let mut d = Mat::identity(3);
        d.set(0, 0, w);
        let mut expected = Mat::identity(3);
        expected.set(0, 0, f.mul(w, w));
        assert_eq!(d.invert(&f).unwrap(), expected);
        assert_eq!(Mat::elementary(3, 0, 0).invert(&f), Err(Error::Singular));
    }

    #[test]
    fn left_kernel_cases() {
        let f = f4();
        assert!(Mat::identity(3).left_kernel(&f).is_empty());
        let k = Mat::elementary(3, 0, 0).left_kernel(&f);
        assert_eq!(k, vec![RowVec::basis(3, 1), RowVec::basis(3, 2)]);
        assert_eq!(Mat::zeros(3, 3).left_kernel(&f).len(), 3);
    }

    #[test]
    fn parse_and_display() {
        let f = f4();
        let m = Mat::parse(&f, "1,0,0;0,1,0;0,0,1").unwrap();
        assert_eq!(m, Mat::identity(3));
        assert_eq!(m.to_string(), "1,0,0;0,1,0;0,0,1");
        assert!(Mat::parse(&f, "1,0;4,0").is_err());
        assert!(Mat::parse(&f, "1,0;0").is_err());
    }

    #[test]
    fn saturation_form_nondegenerate() {
        let f = f4();
        let basis: Vec<Mat> = (0..9).map(|k| Mat::elementary(3, k / 3, k % 3)).collect();
        let gram: Vec<Elem> = basis
            .iter()
            .flat_map(|a| basis.iter().map(|b| trace_product(&f, a, b).unwrap()))
            .collect();
        assert_eq!(rank_of(&f, gram, 9, 9), 9);
    }

    #[test]
    fn echelon_basis_tracks_rank() {
        let f = f4();
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&f, &[1, 2, 0]));
        assert!(!b.insert(&f, &[2, 3, 0]));
        assert!(b.contains(&f, &[3, 1, 0]));
        assert!(b.insert(&f, &[0, 0, 1]));
        assert_eq!(b.rank(), 2);
    }
}
