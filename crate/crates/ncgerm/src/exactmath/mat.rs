//! Dense matrices over the rationals with exact elimination kernels.
//!
//! Elimination pivots on the first nonzero entry in column order, so ranks,
//! kernels and particular solutions are deterministic and reproducible.

use super::scalar::Scalar;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// A rows x cols matrix of [`Scalar`]s, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    /// Matrix unit E_{p,q} (zero-based indices).
    pub fn unit(n: usize, p: usize, q: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        *m.at_mut(p, q) = Scalar::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            entries,
        }
    }

    /// Integer-literal constructor, convenient in tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[Scalar]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
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

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols))
            .map(|i| self.at(i, i).clone())
            .sum()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Matrix product. Skips zero entries of the left factor, which matters a
    /// lot for the sparse block-bidiagonal points built by jet evaluation.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "product dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let p = a * b;
                        *out.at_mut(i, j) += &p;
                    }
                }
            }
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        Mat::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.at(i / other.rows, j / other.cols) * other.at(i % other.rows, j % other.cols)
        })
    }

    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                *self.at_mut(r0 + i, c0 + j) = block.at(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |i, j| self.at(r0 + i, c0 + j).clone())
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if piv != rank {
                for j in 0..m.cols {
                    let a = m.at(piv, j).clone();
                    let b = m.at(rank, j).clone();
                    *m.at_mut(piv, j) = b;
                    *m.at_mut(rank, j) = a;
                }
            }
            let inv = m.at(rank, col).inverse().expect("pivot nonzero");
            for j in col..m.cols {
                let v = m.at(rank, j) * &inv;
                *m.at_mut(rank, j) = v;
            }
            for r in 0..m.rows {
                if r != rank && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for j in col..m.cols {
                        let v = m.at(r, j) - &(&f * m.at(rank, j));
                        *m.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        (m, pivots)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as column vectors. One basis vector per
    /// free column: that column's variable is 1, other free variables 0.
    pub fn kernel_basis(&self) -> Vec<Mat> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.at(r, free);
            }
            basis.push(Mat::col_vec(&v));
        }
        basis
    }

    /// Exact inverse; `Err(Singular)` when rank-deficient.
    pub fn inverse(&self) -> Result<Mat, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Mat::identity(n));
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(MatError::Singular);
        }
        Ok(red.block(0, n, n, n))
    }

    /// Apply to a coordinate vector (self.cols entries), returning coordinates.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = self.at(i, j);
                        if !a.is_zero() {
                            acc += &(a * x);
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// Result of [`solve_linear`]: an exact particular solution plus a kernel
/// basis, or a witness that the system is inconsistent.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Solution { x: Mat, kernel: Vec<Mat> },
    Inconsistent,
}

/// Solve `a * x = b` exactly. Free variables of the particular solution are
/// set to zero; the kernel basis describes the full solution set.
pub fn solve_linear(a: &Mat, b: &Mat) -> Result<SolveOutcome, MatError> {
    if a.rows() != b.rows() {
        return Err(MatError::DimensionMismatch(format!(
            "lhs has {} rows, rhs has {}",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let mut aug = Mat::zeros(a.rows(), n + b.cols());
    aug.set_block(0, 0, a);
    aug.set_block(0, n, b);
    let (red, pivots) = aug.rref();
    if pivots.iter().any(|&c| c >= n) {
        return Ok(SolveOutcome::Inconsistent);
    }
    let mut x = Mat::zeros(n, b.cols());
    for (r, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            *x.at_mut(pc, j) = red.at(r, n + j).clone();
        }
    }
    Ok(SolveOutcome::Solution {
        x,
        kernel: a.kernel_basis(),
    })
}

/// Exact rank of a matrix.
pub fn rank(m: &Mat) -> usize {
    m.rank()
}

/// Exact inverse of a square matrix.
pub fn matrix_inverse(m: &Mat) -> Result<Mat, MatError> {
    m.inverse()
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect())
            .collect();
        MatRepr {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("entry grid does not match rows x cols"));
        }
        let mut rows = Vec::with_capacity(repr.rows);
        for row in repr.entries {
            let parsed: Result<Vec<Scalar>, _> = row.iter().map(|s| Scalar::from_str(s)).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        Ok(Mat::from_rows(rows))
    }
}

/// A point of the nc space: a g-tuple of square matrices of equal size.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatTuple {
    size: usize,
    components: Vec<Mat>,
}

impl MatTuple {
    pub fn new(components: Vec<Mat>) -> Result<Self, MatError> {
        let Some(first) = components.first() else {
            return Err(MatError::DimensionMismatch("empty tuple".into()));
        };
        if !first.is_square() {
            return Err(MatError::NotSquare {
                rows: first.rows(),
                cols: first.cols(),
            });
        }
        let size = first.rows();
        for c in &components {
            if !c.is_square() || c.rows() != size {
                return Err(MatError::DimensionMismatch(
                    "tuple components must be square of equal size".into(),
                ));
            }
        }
        Ok(MatTuple { size, components })
    }

    pub fn zeros(g: usize, size: usize) -> Self {
        MatTuple {
            size,
            components: vec![Mat::zeros(size, size); g],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn g(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &Mat {
        &self.components[j]
    }

    pub fn components(&self) -> &[Mat] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Mat::is_zero)
    }

    pub fn direct_sum(&self, other: &MatTuple) -> MatTuple {
        assert_eq!(self.g(), other.g(), "letter-count mismatch");
        MatTuple {
            size: self.size + other.size,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        }
    }

    /// n-fold direct sum with itself.
    pub fn ampliate(&self, n: usize) -> MatTuple {
        assert!(n >= 1);
        let mut out = self.clone();
        for _ in 1..n {
            out = out.direct_sum(self);
        }
        out
    }

    pub fn sub(&self, other: &MatTuple) -> MatTuple {
        assert_eq!(self.g(), other.g());
        assert_eq!(self.size, other.size);
        MatTuple {
            size: self.size,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Simultaneous conjugation `S X S^{-1}`.
    pub fn conjugate(&self, s: &Mat) -> Result<MatTuple, MatError> {
        let sinv = s.inverse()?;
        Ok(MatTuple {
            size: self.size,
            components: self
                .components
                .iter()
                .map(|c| s.mul(c).mul(&sinv))
                .collect(),
        })
    }

    /// Componentwise left multiplication `(S Z_1, ..., S Z_g)`.
    pub fn left_mul(&self, s: &Mat) -> MatTuple {
        MatTuple {
            size: self.size,
            components: self.components.iter().map(|c| s.mul(c)).collect(),
        }
    }

    /// Componentwise right multiplication `(Z_1 S, ..., Z_g S)`.
    pub fn right_mul(&self, s: &Mat) -> MatTuple {
        MatTuple {
            size: self.size,
            components: self.components.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Commutator tuple `[S, Y] = (S Y_1 - Y_1 S, ..., S Y_g - Y_g S)`.
    pub fn commutator_with(&self, s: &Mat) -> MatTuple {
        MatTuple {
            size: self.size,
            components: self.components.iter().map(|y| s.commutator(y)).collect(),
        }
    }

    /// Flatten to coordinates over the standard basis of (M_s)^g, ordered by
    /// (letter, row, col).
    pub fn to_coords(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.g() * self.size * self.size);
        for c in &self.components {
            v.extend(c.entries().iter().cloned());
        }
        v
    }

    pub fn from_coords(g: usize, size: usize, coords: &[Scalar]) -> MatTuple {
        assert_eq!(coords.len(), g * size * size);
        let sq = size * size;
        MatTuple {
            size,
            components: (0..g)
                .map(|j| Mat::from_fn(size, size, |p, q| coords[j * sq + p * size + q].clone()))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatTupleRepr {
    s: usize,
    g: usize,
    components: Vec<Mat>,
}

impl Serialize for MatTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatTupleRepr {
            s: self.size,
            g: self.g(),
            components: self.components.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatTupleRepr::deserialize(deserializer)?;
        if repr.components.len() != repr.g {
            return Err(D::Error::custom("component count does not match g"));
        }
        let t = MatTuple::new(repr.components).map_err(D::Error::custom)?;
        if t.size() != repr.s {
            return Err(D::Error::custom("component size does not match s"));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Mat::identity(2).rank(), 2);
        assert_eq!(Mat::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn rank_of_dependent_rows() {
        // hand elimination: second row is twice the first
        let m = Mat::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_identity() {
        let a = Mat::identity(2);
        let b = Mat::from_ints(&[&[3], &[5]]);
        match solve_linear(&a, &b).unwrap() {
            SolveOutcome::Solution { x, kernel } => {
                assert_eq!(x, b);
                assert!(kernel.is_empty());
            }
            SolveOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn solve_underdetermined() {
        // x1 + x2 = 2: particular solution (2,0), kernel spanned by (1,-1)
        let a = Mat::from_ints(&[&[1, 1]]);
        let b = Mat::from_ints(&[&[2]]);
        match solve_linear(&a, &b).unwrap() {
            SolveOutcome::Solution { x, kernel } => {
                assert_eq!(x, Mat::from_ints(&[&[2], &[0]]));
                assert_eq!(kernel.len(), 1);
                assert!(a.mul(&kernel[0]).is_zero());
                let k = &kernel[0];
                assert_eq!(k.at(0, 0) + k.at(1, 0), Scalar::zero());
            }
            SolveOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_ints(&[&[1], &[1]]);
        let b = Mat::from_ints(&[&[0], &[1]]);
        assert_eq!(solve_linear(&a, &b).unwrap(), SolveOutcome::Inconsistent);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = Mat::from_ints(&[&[1]]);
        let b = Mat::from_ints(&[&[1], &[2]]);
        assert!(matches!(
            solve_linear(&a, &b),
            Err(MatError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(Mat::identity(3).inverse().unwrap(), Mat::identity(3));
        let swap = Mat::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.inverse().unwrap(), swap);
        let rank1 = Mat::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(rank1.inverse(), Err(MatError::Singular));
    }

    #[test]
    fn rank_nullity() {
        let m = Mat::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        for k in m.kernel_basis() {
            assert!(m.mul(&k).is_zero());
        }
    }

    #[test]
    fn tuple_coords_round_trip() {
        let t = MatTuple::new(vec![Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)]).unwrap();
        let v = t.to_coords();
        assert_eq!(MatTuple::from_coords(2, 2, &v), t);
    }

    #[test]
    fn mat_json_format() {
        let m = Mat::from_rows(vec![vec!["1/2".parse().unwrap(), "3".parse().unwrap()]]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"rows":1,"cols":2,"entries":[["1/2","3"]]}"#);
        let back: Mat = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }
}
