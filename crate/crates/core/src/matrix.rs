//! Dense integer matrices over arbitrary-precision integers, with Smith
//! normal form, determinants and inverses of unimodular matrices.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows<T: Into<BigInt> + Copy>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {i}");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
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

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_i64()).collect()).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).map(|j| &self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let add = &self[(src, j)] * k;
            self[(dst, j)] += add;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let add = &self[(i, src)] * k;
            self[(i, dst)] += add;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = -&self[(r, j)];
            self[(r, j)] = x;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Inverse of a unimodular matrix, `None` otherwise.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if !self.is_square() {
            return None;
        }
        let snf = smith_normal_form(self);
        if (0..self.rows).any(|i| !snf.d[(i, i)].is_one()) {
            return None;
        }
        // U·M·V = I  ⇒  M⁻¹ = V·U
        Some(&snf.v * &snf.u)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// with each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | …` (zeros included, trailing).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Checks every postcondition against the input matrix.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let product = &(&self.u * m) * &self.v;
        if product != self.d || !self.d.is_diagonal() || !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let diag = self.diagonal();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|p| if p[0].is_zero() { p[1].is_zero() } else { p[1].is_multiple_of(&p[0]) })
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t..rows, t..cols) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                // A nonzero remainder is smaller than the pivot; move it into place.
                let col_min = min_abs_entry(&d, t..rows, t..t + 1);
                let row_min = min_abs_entry(&d, t..t + 1, t..cols);
                let (pi, pj) = match (col_min, row_min) {
                    (Some(a), Some(b)) => {
                        if d[a].abs() <= d[b].abs() {
                            a
                        } else {
                            b
                        }
                    }
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("pivot is nonzero"),
                };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let offending = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match offending {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let snf = SmithForm { u, d, v };
    debug_assert!(snf.verify(m), "Smith normal form postcondition failed");
    snf
}

fn min_abs_entry(d: &IntMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|b| x.abs() < d[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).diagonal().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn examples() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        assert_eq!(diag_of(&m), [1, 6]);
        assert_eq!(diag_of(&IntMatrix::identity(2)), [1, 1]);
        let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![4, 8]]);
        assert!(smith_normal_form(&m).verify(&m));
        assert_eq!(diag_of(&m), [2, 0]);
    }

    #[test]
    fn empty_and_rectangular() {
        let e = IntMatrix::zeros(0, 0);
        assert!(smith_normal_form(&e).diagonal().is_empty());
        let m = IntMatrix::from_rows(3, &[vec![6, 4, 2], vec![3, 9, 12]]);
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        assert_eq!(snf.rank(), 2);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(3, &[vec![2, 3, 1], vec![1, 2, 1], vec![0, 0, 1]]);
        assert_eq!(m.determinant(), BigInt::from(1));
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(3));
        let sing = IntMatrix::from_rows(2, &[vec![1, 1], vec![1, -1]]);
        assert_eq!(sing.determinant(), BigInt::from(-2));
        assert!(sing.unimodular_inverse().is_none());
        let zero_pivot = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(zero_pivot.determinant(), BigInt::from(-1));
    }
}
