//! Exact rational scalars and dense matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Schema(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Integer value of a scalar, if it is an integer fitting in `i64`.
pub fn to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadDir {
    Up,
    Down,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Z,
    E,
    C,
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", format_scalar(self.get(r, c)))?;
            }
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_ints(rows: &[Vec<i64>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_fn(rows.len(), cols, |r, c| int(rows[r][c]))
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Mat> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Schema(format!("matrix row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Mat { rows: nrows, cols, data })
    }

    pub fn column(v: &[Scalar]) -> Mat {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn row_vector(v: &[Scalar]) -> Mat {
        Mat { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    /// A 1×n row with a single one at position `pos`.
    pub fn unit_row(n: usize, pos: usize) -> Mat {
        let mut m = Mat::zeros(1, n);
        m.set(0, pos, Scalar::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(i, x)| (i / self.cols.max(1), i % self.cols.max(1), x))
    }

    /// True when every entry is 0 or 1.
    pub fn is_01(&self) -> bool {
        self.data.iter().all(|x| x.is_zero() || x.is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn neg(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = Scalar::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    /// Submatrix with the given row and column ranges.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        Mat::from_fn(r1 - r0, c1 - c0, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Mat]) -> Mat {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.put(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Mat]) -> Mat {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.put(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.put(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Row-reduced echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(row, c).clone();
                    if !v.is_zero() {
                        let idx = r * m.cols + c;
                        m.data[idx] -= &f * v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Mat::hstack(&[self, &Mat::identity(n)]);
        let (r, piv) = aug.rref();
        if piv.len() < n || (n > 0 && piv[n - 1] != n - 1) {
            return None;
        }
        Some(r.slice(0, n, n, 2 * n))
    }

    /// Solves `self · x = b`, returning one solution when the system is consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let aug = Mat::hstack(&[self, &Mat::column(b)]);
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn pad(&self, dir: PadDir) -> Mat {
        match dir {
            PadDir::Up => Mat::vstack(&[&Mat::zeros(1, self.cols), self]),
            PadDir::Down => Mat::vstack(&[self, &Mat::zeros(1, self.cols)]),
            PadDir::Left => Mat::hstack(&[&Mat::zeros(self.rows, 1), self]),
            PadDir::Right => Mat::hstack(&[self, &Mat::zeros(self.rows, 1)]),
        }
    }

    /// Integer entries, when every entry is an integer.
    pub fn to_ints(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|r| self.row(r).iter().map(to_i64).collect()).collect()
    }

    fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(format_scalar).collect()).collect()
    }

    /// Parses an array of rows of "p/q" strings (bare integers are accepted too).
    pub fn from_json(v: &serde_json::Value) -> Result<Mat> {
        let rows = v.as_array().ok_or_else(|| Error::Schema("matrix must be an array of rows".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Schema(format!("matrix row {i} is not an array")))?;
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                out.push(match x {
                    serde_json::Value::String(s) => parse_scalar(s)?,
                    serde_json::Value::Number(n) if n.is_i64() => int(n.as_i64().unwrap_or_default()),
                    other => return Err(Error::Schema(format!("matrix entry {other} is not a \"p/q\" string"))),
                });
            }
            parsed.push(out);
        }
        let cols = parsed.first().map_or(0, |r| r.len());
        Mat::from_rows(parsed, cols)
    }

    /// Reinterprets a matrix parsed from JSON with the expected shape; empty matrices get their shape here.
    pub fn with_shape(self, rows: usize, cols: usize) -> Result<Mat> {
        if self.shape() == (rows, cols) {
            return Ok(self);
        }
        if self.data.is_empty() && rows * cols == 0 {
            return Ok(Mat::zeros(rows, cols));
        }
        Err(Error::Schema(format!("matrix is {}x{}, expected {rows}x{cols}", self.rows, self.cols)))
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Mat::from_json(&v).map_err(D::Error::custom)
    }
}

/// Rank and a kernel basis (as column vectors) of a matrix.
pub fn rank_kernel(m: &Mat) -> (usize, Vec<Vec<Scalar>>) {
    let (r, piv) = m.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); m.cols()];
        v[free] = Scalar::one();
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        basis.push(v);
    }
    (piv.len(), basis)
}

pub fn pad(m: &Mat, dir: PadDir) -> Mat {
    m.pad(dir)
}

/// The zero block Z(a,b), the diagonal block E(a,b) and the stack C(a,b) = [E(a,b); Z(a,b)].
pub fn block(kind: BlockKind, a: usize, b: usize) -> Mat {
    match kind {
        BlockKind::Z => Mat::zeros(a, b),
        BlockKind::E => Mat::from_fn(a, b, |r, c| if r == c { Scalar::one() } else { Scalar::zero() }),
        BlockKind::C => Mat::vstack(&[&block(BlockKind::E, a, b), &Mat::zeros(a, b)]),
    }
}

/// Identity with a zero row added at the bottom (`I^↓`).
pub fn i_down(n: usize) -> Mat {
    Mat::identity(n).pad(PadDir::Down)
}

/// Identity with a zero row added at the top (`I^↑`).
pub fn i_up(n: usize) -> Mat {
    Mat::identity(n).pad(PadDir::Up)
}

/// Identity with a zero column added at the left (`I^←`).
pub fn i_left(n: usize) -> Mat {
    Mat::identity(n).pad(PadDir::Left)
}

/// Identity with a zero column added at the right (`I^→`).
pub fn i_right(n: usize) -> Mat {
    Mat::identity(n).pad(PadDir::Right)
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| int(x)).collect()
}

/// Absolute-value maximum of a matrix, used for quick sanity bounds.
pub fn max_abs(m: &Mat) -> Scalar {
    m.data.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero)
}
