use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            data: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&BigInt> {
        if r < self.rows && c < self.cols {
            self.data.get(r * self.cols + c)
        } else {
            None
        }
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Columns `range` of `self`.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(self.row(r));
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for c in 0..n {
                            a.swap(k * n + c, i * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * &a[n * n - 1])
    }

    pub fn to_sparse(&self) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::new(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = &self[(r, c)];
                if !v.is_zero() {
                    m.row_data[r].push((c, v.clone()));
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> String {
        self.to_sparse().to_json()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse integer matrix stored by rows; each row sorted by column, no
/// explicit zeros.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    row_data: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            row_data: vec![Vec::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.row_data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<BigInt> {
        if r >= self.rows || c >= self.cols {
            return None;
        }
        let row = &self.row_data[r];
        Some(match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => row[i].1.clone(),
            Err(_) => BigInt::zero(),
        })
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let row = &mut self.row_data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1.is_zero() {
                    row.remove(i);
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_sparse_columns(rows: usize, columns: &[Vec<(usize, BigInt)>]) -> Self {
        let mut m = SparseIntMatrix::new(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                m.add_to(*i, j, v.clone());
            }
        }
        m
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut t = SparseIntMatrix::new(self.cols, self.rows);
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                t.row_data[*c].push((r, v.clone()));
            }
        }
        t
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, LinalgError> {
        let j: MatrixJson = serde_json::from_str(s).map_err(|e| LinalgError::Parse(e.to_string()))?;
        j.try_into()
    }
}

/// Wire form: `{rows, cols, entries: [[r, c, "value"], ...]}`, row-major.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl From<&SparseIntMatrix> for MatrixJson {
    fn from(m: &SparseIntMatrix) -> Self {
        let entries = m
            .row_data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.to_string())))
            .collect();
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> Self {
        MatrixJson::from(&m.to_sparse())
    }
}

impl From<IntMatrix> for MatrixJson {
    fn from(m: IntMatrix) -> Self {
        MatrixJson::from(&m)
    }
}

impl From<SparseIntMatrix> for MatrixJson {
    fn from(m: SparseIntMatrix) -> Self {
        MatrixJson::from(&m)
    }
}

impl TryFrom<MatrixJson> for IntMatrix {
    type Error = LinalgError;

    fn try_from(j: MatrixJson) -> Result<Self, LinalgError> {
        SparseIntMatrix::try_from(j).map(|m| m.to_dense())
    }
}

impl TryFrom<MatrixJson> for SparseIntMatrix {
    type Error = LinalgError;

    fn try_from(j: MatrixJson) -> Result<Self, LinalgError> {
        let mut m = SparseIntMatrix::new(j.rows, j.cols);
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in j.entries {
            if r >= j.rows || c >= j.cols {
                return Err(LinalgError::Parse(format!("entry ({r},{c}) out of bounds")));
            }
            if last.is_some_and(|l| l >= (r, c)) {
                return Err(LinalgError::Parse("entries not sorted row-major".into()));
            }
            last = Some((r, c));
            let value: BigInt = v
                .parse()
                .map_err(|_| LinalgError::Parse(format!("bad integer {v:?}")))?;
            if value.is_zero() {
                return Err(LinalgError::Parse(format!("explicit zero at ({r},{c})")));
            }
            m.row_data[r].push((c, value));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree() {
        let a = IntMatrix::from_i64(3, 4, &[0, 1, 0, -5, 2, 0, 0, 0, 0, 0, 7, 9]);
        let s = a.to_sparse();
        assert_eq!(s.nnz(), 5);
        for r in 0..3 {
            for c in 0..4 {
                assert_eq!(s.get(r, c).unwrap(), a[(r, c)]);
            }
        }
        assert_eq!(s.to_dense(), a);
        assert_eq!(s.get(3, 0), None);
        assert_eq!(a.get(0, 4), None);
    }

    #[test]
    fn json_round_trip_and_format() {
        let a = IntMatrix::from_i64(2, 3, &[0, -3, 0, 12, 0, 1]);
        let json = a.to_json();
        assert_eq!(
            json,
            r#"{"rows":2,"cols":3,"entries":[[0,1,"-3"],[1,0,"12"],[1,2,"1"]]}"#
        );
        let back = SparseIntMatrix::from_json(&json).unwrap();
        assert_eq!(back.to_dense(), a);
    }

    #[test]
    fn json_rejects_unsorted_entries() {
        let bad = r#"{"rows":2,"cols":2,"entries":[[1,0,"1"],[0,0,"1"]]}"#;
        assert!(SparseIntMatrix::from_json(bad).is_err());
        let oob = r#"{"rows":1,"cols":1,"entries":[[0,3,"1"]]}"#;
        assert!(SparseIntMatrix::from_json(oob).is_err());
    }

    #[test]
    fn bareiss_determinant() {
        let a = IntMatrix::from_i64(3, 3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(4));
        let b = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(b.determinant().unwrap(), BigInt::from(-1));
    }
}
