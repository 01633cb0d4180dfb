//! Dense matrices over the rationals and the exact elimination routines
//! everything else is built on.
//!
//! Row reduction is fraction-free (Bareiss): rows are first scaled to
//! integers, forward elimination keeps every intermediate entry an integer
//! minor of the input, and only the final back substitution divides.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A column vector.
pub type Vector = Vec<Scalar>;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRows", try_from = "MatrixRows")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRows {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl From<ExactMatrix> for MatrixRows {
    fn from(m: ExactMatrix) -> Self {
        MatrixRows { rows: m.rows, cols: m.cols, entries: m.to_rows() }
    }
}

impl TryFrom<MatrixRows> for ExactMatrix {
    type Error = String;

    fn try_from(raw: MatrixRows) -> Result<Self, Self::Error> {
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(format!("matrix entries do not match shape {}x{}", raw.rows, raw.cols));
        }
        Ok(ExactMatrix {
            rows: raw.rows,
            cols: raw.cols,
            data: raw.entries.into_iter().flatten().collect(),
        })
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// The nonzero rows of the RREF, one per pivot.
    pub rref: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.rref.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.rref.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` modulo the row space: subtracts multiples of the RREF
    /// rows so that all pivot coordinates vanish.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for c in 0..self.rref.cols {
                let e = self.rref.get(r, c);
                if !e.is_zero() {
                    out[c] -= &(&f * e);
                }
            }
        }
        out
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Shape-explicit constructor; handy when `rows` or `cols` is zero.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        ExactMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect(),
        )
    }

    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn column_vector(v: &[Scalar]) -> Self {
        ExactMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other` (row index of `self` is major).
    pub fn kron(&self, other: &ExactMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                for rr in 0..other.rows {
                    for cc in 0..other.cols {
                        let b = other.get(rr, cc);
                        if !b.is_zero() {
                            out.set(r * other.rows + rr, c * other.cols + cc, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn block_diagonal(blocks: &[ExactMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Gauss-Jordan reduction to reduced row echelon form. Rows with a zero in
    /// the pivot column are never touched, so sparse systems stay small.
    pub fn echelon(&self) -> Echelon {
        let (nr, nc) = (self.rows, self.cols);
        let mut a: Vec<Vec<Scalar>> =
            (0..nr).map(|r| self.row(r).to_vec()).filter(|row| row.iter().any(|x| !x.is_zero())).collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..nc {
            if top == a.len() {
                break;
            }
            // smallest nonzero pivot keeps entries small
            let Some(p) = (top..a.len())
                .filter(|&r| !a[r][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))
            else {
                continue;
            };
            a.swap(top, p);
            let inv = a[top][col].recip().expect("pivot is nonzero");
            let support: Vec<usize> = (col..nc).filter(|&c| !a[top][c].is_zero()).collect();
            if !inv.is_one() {
                for &c in &support {
                    a[top][c] = &a[top][c] * &inv;
                }
            }
            let pivot_row = std::mem::take(&mut a[top]);
            for (r, row) in a.iter_mut().enumerate() {
                if r == top || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for &c in &support {
                    row[c] = &row[c] - &(&f * &pivot_row[c]);
                }
            }
            a[top] = pivot_row;
            pivots.push(col);
            top += 1;
        }
        a.truncate(top);
        let rref = ExactMatrix { rows: top, cols: nc, data: a.into_iter().flatten().collect() };
        Echelon { rref, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the null space. Each basis vector has a 1 in its own free
    /// column and 0 in every other free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let ech = self.echelon();
        kernel_from_echelon(&ech, self.cols)
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.rref.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &ExactMatrix) -> Option<ExactMatrix> {
        assert_eq!(rhs.rows, self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + rhs.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, self.cols, rhs);
        let ech = aug.echelon();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (r, &p) in ech.pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, ech.rref.get(r, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(ech.rref.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A left inverse `L` (so `L * self = I`) of a matrix with full column rank.
    pub fn left_inverse(&self) -> Option<ExactMatrix> {
        // pick linearly independent rows via the echelon form of the transpose
        let ech = self.transpose().echelon();
        if ech.rank() != self.cols {
            return None;
        }
        let sub = self.submatrix(&ech.pivots, &(0..self.cols).collect::<Vec<_>>());
        let inv = sub.inverse()?;
        let mut out = Self::zeros(self.cols, self.rows);
        for (j, &r) in ech.pivots.iter().enumerate() {
            for i in 0..self.cols {
                out.set(i, r, inv.get(i, j).clone());
            }
        }
        Some(out)
    }

    /// True when every entry is a nonnegative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer() && !x.is_negative())
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(Scalar::to_i64).collect::<Option<Vec<_>>>())
            .collect()
    }
}

/// Null space of a sparse system given as rows of `(column, value)` pairs,
/// in the same normalization as [`ExactMatrix::kernel_basis`].
pub fn sparse_kernel(cols: usize, rows: impl IntoIterator<Item = Vec<(usize, Scalar)>>) -> Vec<Vector> {
    // pivot column -> row with leading entry 1 at that column
    let mut pivots: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for row in rows {
        let mut work: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, v) in row {
            let e = work.entry(c).or_insert_with(Scalar::zero);
            *e += &v;
        }
        work.retain(|_, v| !v.is_zero());
        let mut from = 0;
        loop {
            let Some((&c, _)) = work.range(from..).next() else { break };
            match pivots.get(&c) {
                Some(prow) => {
                    let f = work.remove(&c).expect("present");
                    for (pc, pv) in &prow[1..] {
                        let e = work.entry(*pc).or_insert_with(Scalar::zero);
                        *e -= &(&f * pv);
                        if e.is_zero() {
                            work.remove(pc);
                        }
                    }
                    from = c + 1;
                }
                None => {
                    let inv = work[&c].recip().expect("nonzero");
                    let prow = work.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                    pivots.insert(c, prow);
                    break;
                }
            }
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Scalar::zero(); cols];
            x[f] = Scalar::one();
            for (&p, prow) in pivots.iter().rev() {
                let v: Scalar = prow[1..].iter().filter(|(c, _)| !x[*c].is_zero()).map(|(c, e)| e * &x[*c]).sum();
                x[p] = -v;
            }
            x
        })
        .collect()
}

pub(crate) fn kernel_from_echelon(ech: &Echelon, cols: usize) -> Vec<Vector> {
    ech.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                let e = ech.rref.get(r, f);
                if !e.is_zero() {
                    v[p] = -e;
                }
            }
            v
        })
        .collect()
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl Mul for ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: ExactMatrix) -> ExactMatrix {
        &self * &rhs
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in matrix sum");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in matrix difference");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} ", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows)
    }

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(2).rank(), 2);
        assert_eq!(ExactMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(ExactMatrix::identity(2).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 2).kernel_basis().len(), 2);
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], Scalar::zero());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = vec![s(3), s(-4)];
        assert_eq!(ExactMatrix::identity(2).solve(&b), Some(b.clone()));
        assert_eq!(ExactMatrix::zeros(2, 2).solve(&b), None);
        assert_eq!(m(&[&[2]]).solve(&[s(1)]), Some(vec![Scalar::new(1, 2)]));
    }

    #[test]
    fn inverse_and_left_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let tall = m(&[&[1, 0], &[1, 1], &[0, 3]]);
        let l = tall.left_inverse().unwrap();
        assert!((&l * &tall).is_identity());
    }

    #[test]
    fn rational_entries_reduce() {
        let a = ExactMatrix::from_rows(vec![
            vec![Scalar::new(1, 2), Scalar::new(1, 3)],
            vec![Scalar::new(3, 2), Scalar::one()],
        ]);
        assert_eq!(a.rank(), 1);
    }

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                ExactMatrix::from_vec(r, c, v.into_iter().map(Scalar::from_int).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            let kernel = a.kernel_basis();
            prop_assert_eq!(a.rank() + kernel.len(), a.cols());
            for v in &kernel {
                prop_assert!(a.mul_vec(v).iter().all(Scalar::is_zero));
            }
            let k = ExactMatrix::from_columns(a.cols(), &kernel);
            prop_assert_eq!(k.rank(), kernel.len());
        }

        #[test]
        fn solve_is_exact(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 7)) {
            let x0: Vec<Scalar> = seed.iter().take(a.cols()).map(|&v| s(v)).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn rank_of_transpose(a in small_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }
    }
}
