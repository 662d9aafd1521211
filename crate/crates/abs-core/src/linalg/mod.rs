//! Dense row-major matrices and vectors over `f64`, plus the exact
//! arbitrary-precision integer analogues in [`int`].
//!
//! This is deliberately plain storage: every solver in the crate works on
//! full dense matrices. All comparisons against zero take a caller-supplied
//! relative tolerance; nothing in this module embeds its own epsilon. The
//! only hard guard is division by an exact zero.

pub mod int;

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Entry count above which the rank-one and matrix-vector kernels switch to
/// the rayon path. Below this the sequential loop wins.
#[cfg(feature = "parallel")]
const PAR_MIN_ENTRIES: usize = 32_768;

/// Dense real vector. Finite entries, length at least one.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector {
    data: Vec<f64>,
}

impl RealVector {
    pub fn from_vec(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("vector entries"));
        }
        Ok(Self { data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { data: vec![1.0; n] }
    }

    /// k-th coordinate vector of length n.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = 1.0;
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn dot(&self, other: &RealVector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// self += alpha * x
    pub fn axpy(&mut self, alpha: f64, x: &RealVector) {
        debug_assert_eq!(self.len(), x.len());
        for (y, &v) in self.data.iter_mut().zip(&x.data) {
            *y += alpha * v;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for y in &mut self.data {
            *y *= alpha;
        }
    }

    pub fn scaled(&self, alpha: f64) -> RealVector {
        let mut out = self.clone();
        out.scale(alpha);
        out
    }

    pub fn sub(&self, other: &RealVector) -> RealVector {
        debug_assert_eq!(self.len(), other.len());
        RealVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &RealVector) -> RealVector {
        debug_assert_eq!(self.len(), other.len());
        RealVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

impl Index<usize> for RealVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for RealVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Empty);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self {
            rows: data.len() / cols,
            cols,
            data,
        })
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RealVector {
        RealVector {
            data: self.row(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> RealVector {
        RealVector {
            data: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// M * v
    pub fn matvec(&self, v: &RealVector) -> Result<RealVector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "matvec: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let out = self.matvec_kernel(v.as_slice());
        Ok(RealVector { data: out })
    }

    #[cfg(feature = "parallel")]
    fn matvec_kernel(&self, v: &[f64]) -> Vec<f64> {
        if self.data.len() >= PAR_MIN_ENTRIES {
            self.data
                .par_chunks(self.cols)
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        } else {
            self.matvec_seq(v)
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn matvec_kernel(&self, v: &[f64]) -> Vec<f64> {
        self.matvec_seq(v)
    }

    fn matvec_seq(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// M^T * v
    pub fn matvec_t(&self, v: &RealVector) -> Result<RealVector> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!(
                "matvec_t: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, row) in self.data.chunks(self.cols).enumerate() {
            let vi = v[i];
            if vi != 0.0 {
                for (o, &a) in out.iter_mut().zip(row) {
                    *o += vi * a;
                }
            }
        }
        Ok(RealVector { data: out })
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik != 0.0 {
                    for j in 0..other.cols {
                        out.data[i * other.cols + j] += aik * other.get(k, j);
                    }
                }
            }
        }
        Ok(out)
    }

    /// In-place rank-one correction: self -= u * v^T / denom.
    ///
    /// The only guard here is an exact zero divisor; relative tolerance
    /// tests belong to the caller.
    pub fn rank_one_sub(&mut self, u: &RealVector, v: &RealVector, denom: f64) -> Result<()> {
        if denom == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        if u.len() != self.rows || v.len() != self.cols {
            return Err(Error::Shape(format!(
                "rank_one_sub: {}x{} with u {} and v {}",
                self.rows,
                self.cols,
                u.len(),
                v.len()
            )));
        }
        self.rank_one_kernel(u.as_slice(), v.as_slice(), denom);
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn rank_one_kernel(&mut self, u: &[f64], v: &[f64], denom: f64) {
        if self.data.len() >= PAR_MIN_ENTRIES {
            self.data
                .par_chunks_mut(self.cols)
                .zip(u.par_iter())
                .for_each(|(row, &ui)| {
                    let c = ui / denom;
                    if c != 0.0 {
                        for (r, &vj) in row.iter_mut().zip(v) {
                            *r -= c * vj;
                        }
                    }
                });
        } else {
            self.rank_one_seq(u, v, denom);
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn rank_one_kernel(&mut self, u: &[f64], v: &[f64], denom: f64) {
        self.rank_one_seq(u, v, denom);
    }

    fn rank_one_seq(&mut self, u: &[f64], v: &[f64], denom: f64) {
        for (row, &ui) in self.data.chunks_mut(self.cols).zip(u) {
            let c = ui / denom;
            if c != 0.0 {
                for (r, &vj) in row.iter_mut().zip(v) {
                    *r -= c * vj;
                }
            }
        }
    }
}

/// Returns H - u * v^T / denom without touching H.
pub fn outer_update(
    h: &RealMatrix,
    u: &RealVector,
    v: &RealVector,
    denom: f64,
) -> Result<RealMatrix> {
    let mut out = h.clone();
    out.rank_one_sub(u, v, denom)?;
    Ok(out)
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
///
/// A is square. Used as the generic dense fallback for small auxiliary
/// systems (closed-form inner matrices, KKT multipliers) and as an
/// independent check on the projection solvers in tests.
pub fn solve_dense(a: &RealMatrix, b: &RealVector) -> Result<RealVector> {
    if a.rows() != a.cols() {
        return Err(Error::Shape(format!("solve_dense: {}x{}", a.rows(), a.cols())));
    }
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "solve_dense: {}x{} with rhs {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut rhs = b.clone();
    for k in 0..n {
        let mut piv = k;
        let mut best = m.get(k, k).abs();
        for i in k + 1..n {
            let cand = m.get(i, k).abs();
            if cand > best {
                best = cand;
                piv = i;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular);
        }
        if piv != k {
            for j in 0..n {
                let tmp = m.get(k, j);
                m.set(k, j, m.get(piv, j));
                m.set(piv, j, tmp);
            }
            let tmp = rhs[k];
            rhs[k] = rhs[piv];
            rhs[piv] = tmp;
        }
        let pivot = m.get(k, k);
        for i in k + 1..n {
            let factor = m.get(i, k) / pivot;
            if factor != 0.0 {
                for j in k..n {
                    let v = m.get(i, j) - factor * m.get(k, j);
                    m.set(i, j, v);
                }
                rhs[i] -= factor * rhs[k];
            }
        }
    }
    let mut x = RealVector::zeros(n);
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= m.get(i, j) * x[j];
        }
        x[i] = acc / m.get(i, i);
    }
    Ok(x)
}

/// Dense inverse via column-by-column elimination.
pub fn invert(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Shape(format!("invert: {}x{}", a.rows(), a.cols())));
    }
    let mut out = RealMatrix::zeros(n, n);
    for j in 0..n {
        let col = solve_dense(a, &RealVector::unit(n, j))?;
        for i in 0..n {
            out.set(i, j, col[i]);
        }
    }
    Ok(out)
}

/// Cholesky factor L with A = L L^T. Fails if A is not symmetric positive
/// definite; used as the SPD check for metric and initial matrices.
pub fn cholesky(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Shape(format!("cholesky: {}x{}", a.rows(), a.cols())));
    }
    let scale = a.max_abs().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (a.get(i, j) - a.get(j, i)).abs() > 1e-12 * scale {
                return Err(Error::NotPositiveDefinite);
            }
        }
    }
    let mut l = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = a.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if acc <= 0.0 {
                    return Err(Error::NotPositiveDefinite);
                }
                l.set(i, i, acc.sqrt());
            } else {
                l.set(i, j, acc / l.get(j, j));
            }
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matvec_identity_passes_through() {
        let m = RealMatrix::identity(3);
        let v = RealVector::from_vec(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.matvec(&v).unwrap().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn matvec_zero_matrix() {
        let m = RealMatrix::zeros(2, 2);
        let v = RealVector::from_vec(vec![5.0, 7.0]).unwrap();
        assert_eq!(m.matvec(&v).unwrap().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn matvec_hand_dot_products() {
        let m = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let v = RealVector::from_vec(vec![1.0, 1.0]).unwrap();
        assert_eq!(m.matvec(&v).unwrap().as_slice(), &[3.0, 7.0]);
    }

    #[test]
    fn matvec_shape_error() {
        let m = RealMatrix::identity(3);
        let v = RealVector::from_vec(vec![1.0, 2.0]).unwrap();
        assert!(matches!(m.matvec(&v), Err(Error::Shape(_))));
    }

    #[test]
    fn outer_update_unit_projector() {
        let h = RealMatrix::identity(2);
        let u = RealVector::from_vec(vec![1.0, 0.0]).unwrap();
        let out = outer_update(&h, &u, &u, 1.0).unwrap();
        assert_eq!(out.row(0), &[0.0, 0.0]);
        assert_eq!(out.row(1), &[0.0, 1.0]);
    }

    #[test]
    fn outer_update_zero_u_is_noop() {
        let h = RealMatrix::from_rows(vec![vec![2.0, -1.0], vec![0.5, 3.0]]).unwrap();
        let u = RealVector::zeros(2);
        let v = RealVector::from_vec(vec![1.0, 4.0]).unwrap();
        assert_eq!(outer_update(&h, &u, &v, 2.0).unwrap(), h);
    }

    #[test]
    fn outer_update_direct_arithmetic() {
        let h = RealMatrix::identity(2);
        let u = RealVector::from_vec(vec![1.0, 1.0]).unwrap();
        let out = outer_update(&h, &u, &u, 2.0).unwrap();
        assert_eq!(out.row(0), &[0.5, -0.5]);
        assert_eq!(out.row(1), &[-0.5, 0.5]);
    }

    #[test]
    fn outer_update_zero_denominator() {
        let h = RealMatrix::identity(2);
        let u = RealVector::ones(2);
        assert!(matches!(
            outer_update(&h, &u, &u, 0.0),
            Err(Error::ZeroDivisor)
        ));
    }

    #[test]
    fn constructors_reject_nonfinite() {
        assert!(RealVector::from_vec(vec![1.0, f64::NAN]).is_err());
        assert!(RealMatrix::from_rows(vec![vec![f64::INFINITY]]).is_err());
    }

    #[test]
    fn solve_dense_small() {
        let a = RealMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 4.0]]).unwrap();
        let b = RealVector::from_vec(vec![5.0, 6.0]).unwrap();
        let x = solve_dense(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_dense_singular() {
        let a = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let b = RealVector::ones(2);
        assert!(matches!(solve_dense(&a, &b), Err(Error::Singular)));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite)));
    }

    proptest! {
        // Adding u v^T/denom back to the updated matrix recovers H to within
        // 4 eps ||H||_F per entry. The generator keeps the correction term
        // below the matrix scale so cancellation stays benign.
        #[test]
        fn rank_one_reconstruction(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = RealMatrix::from_fn(rows, cols, |_, _| {
                let mag: f64 = rng.random_range(1.0..10.0);
                if rng.random_bool(0.5) { mag } else { -mag }
            });
            let u = RealVector::from_vec((0..rows).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let v = RealVector::from_vec((0..cols).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let denom: f64 = if rng.random_bool(0.5) { rng.random_range(1.0..2.0) } else { -rng.random_range(1.0..2.0) };

            let updated = outer_update(&h, &u, &v, denom).unwrap();
            let bound = 4.0 * f64::EPSILON * h.frobenius_norm();
            for i in 0..rows {
                for j in 0..cols {
                    let recon = updated.get(i, j) + u[i] * v[j] / denom;
                    prop_assert!((recon - h.get(i, j)).abs() <= bound);
                }
            }
        }
    }
}
