//! Arbitrary-precision integer vectors and matrices.
//!
//! The Diophantine solver needs exact arithmetic: the projection matrices it
//! builds are guaranteed to stay integral, not bounded, so fixed-width
//! integers would silently overflow. Entries are `num_bigint::BigInt`.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVector {
    data: Vec<BigInt>,
}

impl IntVector {
    pub fn from_vec(data: Vec<BigInt>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self { data })
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self {
            data: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: vec![BigInt::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.data.iter()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// self -= alpha * x, exactly.
    pub fn sub_scaled(&mut self, alpha: &BigInt, x: &IntVector) {
        debug_assert_eq!(self.len(), x.len());
        for (y, v) in self.data.iter_mut().zip(&x.data) {
            *y -= alpha * v;
        }
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.data[i]
    }
}

impl IndexMut<usize> for IntVector {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.data[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Empty);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data: Vec<BigInt> = rows.into_iter().flatten().collect();
        Ok(Self {
            rows: data.len() / cols,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows[0].len();
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for (i, chunk) in data.chunks_mut(n).enumerate() {
            chunk[i] = BigInt::from(1);
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector {
            data: self.row(i).to_vec(),
        }
    }

    pub fn entries(&self) -> std::slice::Iter<'_, BigInt> {
        self.data.iter()
    }

    /// M * v
    pub fn matvec(&self, v: &IntVector) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "int matvec: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(IntVector {
            data: self
                .data
                .chunks(self.cols)
                .map(|row| row.iter().zip(&v.data).map(|(a, b)| a * b).sum())
                .collect(),
        })
    }

    /// M^T * v
    pub fn matvec_t(&self, v: &IntVector) -> Result<IntVector> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!(
                "int matvec_t: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, row) in self.data.chunks(self.cols).enumerate() {
            if !v.data[i].is_zero() {
                for (o, a) in out.iter_mut().zip(row) {
                    *o += &v.data[i] * a;
                }
            }
        }
        Ok(IntVector { data: out })
    }

    /// self -= u * v^T, exactly.
    pub fn rank_one_sub(&mut self, u: &IntVector, v: &IntVector) -> Result<()> {
        if u.len() != self.rows || v.len() != self.cols {
            return Err(Error::Shape(format!(
                "int rank_one_sub: {}x{} with u {} and v {}",
                self.rows,
                self.cols,
                u.len(),
                v.len()
            )));
        }
        for (row, ui) in self.data.chunks_mut(self.cols).zip(&u.data) {
            if !ui.is_zero() {
                for (r, vj) in row.iter_mut().zip(&v.data) {
                    *r -= ui * vj;
                }
            }
        }
        Ok(())
    }
}

/// Exact division; the divisor must divide the dividend.
pub fn div_exact(num: &BigInt, den: &BigInt) -> Result<BigInt> {
    if den.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let (q, r) = num_integer::Integer::div_rem(num, den);
    if !r.is_zero() {
        return Err(Error::Numerical(format!("{num} is not divisible by {den}")));
    }
    Ok(q)
}

/// gcd over all entries, zero entries ignored; 0 when all entries are zero.
pub fn gcd_of(v: &IntVector) -> BigInt {
    v.iter()
        .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x))
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn div_exact_checks_remainder() {
        assert_eq!(
            div_exact(&BigInt::from(6), &BigInt::from(3)).unwrap(),
            BigInt::from(2)
        );
        assert!(div_exact(&BigInt::from(7), &BigInt::from(3)).is_err());
        assert!(div_exact(&BigInt::from(7), &BigInt::from(0)).is_err());
    }

    proptest! {
        // Row-order and column-order accumulation of A x must agree exactly.
        #[test]
        fn matvec_two_accumulation_paths(
            rows in 1usize..5,
            cols in 1usize..5,
            entries in prop::collection::vec(-50i64..50, 25),
            xs in prop::collection::vec(-50i64..50, 5),
        ) {
            let a = IntMatrix {
                rows, cols,
                data: entries.iter().take(rows * cols).map(|&v| BigInt::from(v)).collect(),
            };
            let x = IntVector::from_i64s(&xs[..cols]);
            let row_order = a.matvec(&x).unwrap();

            // Independent path: accumulate column by column.
            let mut col_order = vec![BigInt::zero(); rows];
            for j in 0..cols {
                for (i, acc) in col_order.iter_mut().enumerate() {
                    *acc += a.get(i, j) * &x[j];
                }
            }
            prop_assert_eq!(row_order.as_slice(), &col_order[..]);
        }
    }
}
