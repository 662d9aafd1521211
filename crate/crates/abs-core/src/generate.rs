//! Reproducible test-problem generators.
//!
//! Everything is seeded; the same seed always produces the same problem,
//! byte for byte once serialized. The conditioned generator composes
//! random orthogonal factors with a log-spaced singular spectrum, so the
//! condition number of the result is prescribed up to rounding.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::int::{IntMatrix, IntVector};
use crate::linalg::{RealMatrix, RealVector};

/// A linear system with a known solution.
#[derive(Clone, Debug)]
pub struct CondSystem {
    pub a: RealMatrix,
    pub b: RealVector,
    pub x_true: RealVector,
}

/// Standard-form LP data: min c.x subject to a x = b, x >= 0.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub a: RealMatrix,
    pub b: RealVector,
    pub c: RealVector,
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; deterministic per seed on a fixed platform.
    loop {
        let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        let v: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let g = (-2.0 * u.ln()).sqrt() * v.cos();
        if g.is_finite() {
            return g;
        }
    }
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RealMatrix {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(gaussian(rng));
    }
    RealMatrix::from_row_major(rows, cols, data).expect("gaussian entries are finite")
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> RealVector {
    RealVector::from_vec((0..n).map(|_| gaussian(rng)).collect())
        .expect("gaussian entries are finite")
}

/// Orthonormal factor of a square Gaussian matrix, via Householder QR.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let g = gaussian_matrix(rng, n, n);
    householder_q(&g)
}

/// Accumulated Q of the Householder QR of a square matrix.
fn householder_q(a: &RealMatrix) -> RealMatrix {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = RealMatrix::identity(n);
    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut norm = 0.0;
        for i in k..n {
            norm += r.get(i, k) * r.get(i, k);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r.get(k, k) >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n];
        for i in k..n {
            v[i] = r.get(i, k);
        }
        v[k] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // Apply I - 2 v v^T / v.v on the left of R and the right of Q.
        for j in 0..n {
            let mut dot = 0.0;
            for i in k..n {
                dot += v[i] * r.get(i, j);
            }
            let c = 2.0 * dot / vnorm2;
            for i in k..n {
                let val = r.get(i, j) - c * v[i];
                r.set(i, j, val);
            }
        }
        for i in 0..n {
            let mut dot = 0.0;
            for j in k..n {
                dot += q.get(i, j) * v[j];
            }
            let c = 2.0 * dot / vnorm2;
            for j in k..n {
                let val = q.get(i, j) - c * v[j];
                q.set(i, j, val);
            }
        }
    }
    q
}

/// m-by-n system with singular values log-spaced from 1 down to 1/cond,
/// x_true = ones, b = A x_true.
pub fn conditioned_system(m: usize, n: usize, cond: f64, seed: u64) -> CondSystem {
    assert!(m >= 1 && n >= 1 && cond >= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_orthogonal(&mut rng, m);
    let v = random_orthogonal(&mut rng, n);
    let k = m.min(n);
    let sigmas: Vec<f64> = (0..k)
        .map(|i| {
            if k == 1 {
                1.0
            } else {
                cond.powf(-(i as f64) / (k as f64 - 1.0))
            }
        })
        .collect();
    let a = RealMatrix::from_fn(m, n, |i, j| {
        (0..k).map(|t| u.get(i, t) * sigmas[t] * v.get(j, t)).sum()
    });
    let x_true = RealVector::ones(n);
    let b = a.matvec(&x_true).expect("shapes match by construction");
    CondSystem { a, b, x_true }
}

/// Well-conditioned square system (condition about 10) with x_true = ones.
pub fn well_conditioned_system(n: usize, seed: u64) -> CondSystem {
    conditioned_system(n, n, 10.0, seed)
}

/// Symmetric positive definite matrix with prescribed condition number.
pub fn spd_matrix(n: usize, cond: f64, seed: u64) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(&mut rng, n);
    let sigmas: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                1.0
            } else {
                cond.powf(-(i as f64) / (n as f64 - 1.0))
            }
        })
        .collect();
    RealMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|t| q.get(i, t) * sigmas[t] * q.get(j, t)).sum()
    })
}

/// Integer system with entries in [-range, range], x_true small, b = A x_true.
pub fn integer_system(
    m: usize,
    n: usize,
    range: i64,
    seed: u64,
) -> (IntMatrix, IntVector, IntVector) {
    assert!(range >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<BigInt>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| BigInt::from(rng.random_range(-range..=range)))
                .collect()
        })
        .collect();
    let a = IntMatrix::from_rows(rows).expect("non-empty by construction");
    let x_true = IntVector::from_vec(
        (0..n)
            .map(|_| BigInt::from(rng.random_range(-3i64..=3)))
            .collect(),
    )
    .expect("non-empty");
    let b = a.matvec(&x_true).expect("shapes match");
    (a, b, x_true)
}

/// Bounded feasible LP: the first constraint fixes the coordinate sum, so
/// the feasible set is a bounded polytope; b comes from a strictly positive
/// feasible point.
pub fn bounded_lp(m: usize, n: usize, seed: u64) -> LpInstance {
    assert!(m >= 1 && n >= m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = RealMatrix::zeros(m, n);
    for j in 0..n {
        a.set(0, j, 1.0);
    }
    for i in 1..m {
        for j in 0..n {
            a.set(i, j, gaussian(&mut rng));
        }
    }
    let x_feas = RealVector::from_vec((0..n).map(|_| rng.random_range(0.2..1.2)).collect())
        .expect("positive entries");
    let b = a.matvec(&x_feas).expect("shapes match");
    let c = gaussian_vector(&mut rng, n);
    LpInstance { a, b, c }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_factor_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_orthogonal(&mut rng, 8);
        let qtq = q.transpose().matmul(&q).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((qtq.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let s1 = conditioned_system(6, 6, 1e6, 99);
        let s2 = conditioned_system(6, 6, 1e6, 99);
        assert_eq!(s1.a, s2.a);
        assert_eq!(s1.b, s2.b);
    }

    #[test]
    fn integer_entries_within_range() {
        let (a, _, _) = integer_system(4, 6, 9, 5);
        for e in a.entries() {
            assert!(e.magnitude() <= &9u32.into());
        }
    }

    #[test]
    fn bounded_lp_is_feasible_at_interior_point() {
        let inst = bounded_lp(3, 6, 17);
        // Row 0 is the coordinate-sum row.
        for j in 0..6 {
            assert_eq!(inst.a.get(0, j), 1.0);
        }
        assert!(inst.b[0] > 0.0);
    }
}
