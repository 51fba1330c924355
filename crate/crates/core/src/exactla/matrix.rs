use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

/// Sparse exact matrix stored by rows. Absent entries are zero and stored
/// entries are never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds from dense rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds from sparse columns given as `(row, value)` lists. Repeated
    /// rows within a column are summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                m.add_to(i, j, &v);
            }
        }
        m
    }

    /// A single dense column.
    pub fn column(v: &[Scalar]) -> Self {
        Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Nonzero entries of row `i` in column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.data[i].iter().map(|(&j, v)| (j, v))
    }

    /// Nonzero entries of column `j` in row order.
    pub fn column_entries(&self, j: usize) -> Vec<(usize, Scalar)> {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&j).map(|v| (i, v.clone())))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, v) in r {
                t.data[j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (&k, a) in r {
                for (&j, b) in &other.data[k] {
                    let e = acc.entry(j).or_insert_with(Scalar::zero);
                    *e += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().fold(Scalar::zero(), |acc, (&j, a)| acc + a * &v[j]))
            .collect()
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply_sparse(&self, v: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out = BTreeMap::new();
        for (i, r) in self.data.iter().enumerate() {
            let s = v.iter().fold(Scalar::zero(), |acc, (j, x)| match r.get(j) {
                Some(a) => acc + a * x,
                None => acc,
            });
            if !s.is_zero() {
                out.insert(i, s);
            }
        }
        out
    }

    /// Column concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = self.clone();
        m.cols += other.cols;
        for (i, r) in other.data.iter().enumerate() {
            for (&j, v) in r {
                m.data[i].insert(j + self.cols, v.clone());
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_columns(self.rows, cols.iter().map(|&j| self.column_entries(j)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut m = self.clone();
        for r in &mut m.data {
            if c.is_zero() {
                r.clear();
            } else {
                for v in r.values_mut() {
                    *v *= c;
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && self.first_identity_defect().is_none()
    }

    /// First column `j` where the matrix differs from the identity.
    pub fn first_identity_defect(&self) -> Option<usize> {
        let t = self.transpose();
        (0..t.rows).find(|&j| {
            let col = &t.data[j];
            !(col.len() == 1 && col.get(&j).is_some_and(One::is_one))
        })
    }

    /// Text dump: `ROWS COLS`, then one line per row of whitespace
    /// separated canonical entries.
    pub fn to_dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.rows, self.cols).unwrap();
        for r in &self.data {
            let line: Vec<String> = (0..self.cols)
                .map(|j| r.get(&j).map_or_else(|| "0".to_string(), ToString::to_string))
                .collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    pub fn from_dump(text: &str) -> Result<Matrix> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty dump".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: entries.len() });
            }
            for (j, e) in entries.into_iter().enumerate() {
                m.set(i, j, parse_scalar(e)?);
            }
        }
        Ok(m)
    }
}

/// Parses `num` or `num/den`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    s.parse::<Scalar>().map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}
