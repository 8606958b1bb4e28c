//! Dense matrices over `Q(√−d)`.

use std::fmt;

use thiserror::Error;

use crate::scalars::{QuadField, QuadScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("{op}: shape mismatch {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ragged rows: expected {expected} columns, row {row} has {found}")]
    Ragged {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadMatrix {
    field: QuadField,
    rows: usize,
    cols: usize,
    data: Vec<QuadScalar>,
}

impl QuadMatrix {
    pub fn zeros(field: QuadField, rows: usize, cols: usize) -> Self {
        QuadMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: QuadField, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: QuadField, n: usize, s: QuadScalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    /// Builds a matrix from rows, checking that every entry lives in `field`.
    pub fn from_rows(field: QuadField, rows: Vec<Vec<QuadScalar>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(MatrixError::Ragged {
                    expected: n_cols,
                    row: i,
                    found: row.len(),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(ScalarError::DiscriminantMismatch {
                        left: field.d(),
                        right: x.field().d(),
                    }
                    .into());
                }
                data.push(x);
            }
        }
        Ok(QuadMatrix {
            field,
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn from_fn(
        field: QuadField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> QuadScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.field(), field, "entry ({i},{j}) has the wrong field");
                data.push(x);
            }
        }
        QuadMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
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

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: QuadScalar) {
        assert_eq!(x.field(), self.field);
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[QuadScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<QuadScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &QuadScalar> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QuadScalar::is_zero)
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(ScalarError::DiscriminantMismatch {
                left: self.field.d(),
                right: other.field.d(),
            }
            .into());
        }
        if self.shape() != other.shape() {
            return Err(MatrixError::Shape {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other, "add")?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other, "sub")?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(&self, other: &Self, f: impl Fn(&QuadScalar, &QuadScalar) -> QuadScalar) -> Self {
        QuadMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scale(&self, s: &QuadScalar) -> Self {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(&QuadScalar) -> QuadScalar) -> Self {
        QuadMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.field != other.field {
            return Err(ScalarError::DiscriminantMismatch {
                left: self.field.d(),
                right: other.field.d(),
            }
            .into());
        }
        if self.cols != other.rows {
            return Err(MatrixError::Shape {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn pow(&self, k: u32) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape {
                op: "pow",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let mut acc = Self::identity(self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Result<Self, MatrixError> {
        if a.field != b.field {
            return Err(ScalarError::DiscriminantMismatch {
                left: a.field.d(),
                right: b.field.d(),
            }
            .into());
        }
        let field = a.field;
        Ok(Self::from_fn(
            field,
            a.rows + b.rows,
            a.cols + b.cols,
            |i, j| match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (false, false) => b.get(i - a.rows, j - a.cols).clone(),
                _ => field.zero(),
            },
        ))
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self, MatrixError> {
        if top.cols != bottom.cols || top.field != bottom.field {
            return Err(MatrixError::Shape {
                op: "vstack",
                left: top.shape(),
                right: bottom.shape(),
            });
        }
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        Ok(QuadMatrix {
            field: top.field,
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        })
    }

    /// Some solution `X` of `self · X = rhs`, or `None` if the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>, MatrixError> {
        if self.field != rhs.field || self.rows != rhs.rows {
            return Err(MatrixError::Shape {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let field = self.field;
        let n = self.cols;
        let k = rhs.cols;
        let mut aug: Vec<Vec<QuadScalar>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(rhs.row(i));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..aug.len()).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][c].inverse()?;
            for x in aug[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..aug.len() {
                if i != r && !aug[i][c].is_zero() {
                    let factor = aug[i][c].clone();
                    for j in 0..n + k {
                        let t = &factor * &aug[r][j];
                        aug[i][j] = &aug[i][j] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == aug.len() {
                break;
            }
        }
        if aug[r..].iter().any(|row| row[n..].iter().any(|x| !x.is_zero())) {
            return Ok(None);
        }
        let mut x = Self::zeros(field, n, k);
        for (row, &c) in pivots.iter().enumerate() {
            for j in 0..k {
                x.set(c, j, aug[row][n + j].clone());
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Display for QuadMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
