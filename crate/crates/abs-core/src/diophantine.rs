//! Exact integer solver for A x = b over the integers.
//!
//! The run mirrors the real engine, with unimodular bookkeeping: start from
//! the identity, and at each step pick parameter vectors whose inner
//! product with s = H a_i equals gcd(s). The stepsize tau/gcd(s) is then an
//! exact integer whenever a solution exists, gcd(s) divides every component
//! of s so the rank-one update stays integral, and the final x together
//! with H^T parameterizes every integer solution. A single equation reduces
//! to the classical criterion: solvable iff the gcd of the coefficients
//! divides the right-hand side.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::int::{div_exact, IntMatrix, IntVector};

/// Bezout-style certificate: delta = gcd(s) > 0 together with an integer
/// vector z satisfying z . s = delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdCertificate {
    pub delta: BigInt,
    pub z: IntVector,
}

/// Certificate for a nonzero integer vector.
///
/// Pairwise extended Euclid folded over the nonzero entries, smallest
/// magnitudes first so the largest entry is absorbed last; this keeps the
/// Bezout coefficients from blowing up on skewed inputs.
pub fn gcd_certificate(s: &IntVector) -> Result<GcdCertificate> {
    if s.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let n = s.len();
    let mut order: Vec<usize> = (0..n).filter(|&i| !s[i].is_zero()).collect();
    order.sort_by(|&i, &j| s[i].magnitude().cmp(s[j].magnitude()));

    let mut z = IntVector::zeros(n);
    let first = order[0];
    let mut g = s[first].abs();
    z[first] = if s[first].is_negative() {
        BigInt::from(-1)
    } else {
        BigInt::from(1)
    };
    for &idx in &order[1..] {
        if g.is_one() {
            break; // gcd cannot shrink further
        }
        let ext = g.extended_gcd(&s[idx]);
        // ext.gcd = ext.x * g + ext.y * s[idx]
        for i in 0..n {
            if !z[i].is_zero() {
                let scaled = &z[i] * &ext.x;
                z[i] = scaled;
            }
        }
        z[idx] = ext.y;
        g = ext.gcd;
    }
    debug_assert!(g.is_positive());
    debug_assert_eq!(z.dot(s), g);
    Ok(GcdCertificate { delta: g, z })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DioStatus {
    Solved,
    /// s vanished with a nonzero residual component: no real solution.
    Incompatible(usize),
    /// gcd(s) does not divide the residual component: real solutions exist
    /// but no integer one.
    IntegerInconsistent(usize),
}

#[derive(Clone, Debug)]
pub struct DioReport {
    pub status: DioStatus,
    pub x: IntVector,
    pub h_final: IntMatrix,
    pub redundant: Vec<usize>,
}

impl DioReport {
    pub fn is_solved(&self) -> bool {
        self.status == DioStatus::Solved
    }
}

/// Exact solve of A x = b over the integers, m <= n.
///
/// The update parameter reuses the gcd certificate (w = z), the scalings
/// are coordinate vectors, and every intermediate matrix is exactly
/// integral: gcd(s) divides each component of s, so s (z^T H) / gcd(s) has
/// integer entries by construction, which the update asserts step by step.
pub fn dio_solve(a: &IntMatrix, b: &IntVector) -> Result<DioReport> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::Shape(format!(
            "system is {}x{} but rhs has length {}",
            m,
            n,
            b.len()
        )));
    }
    if m > n {
        return Err(Error::Shape(format!(
            "integer solve requires m <= n, got {m}x{n}"
        )));
    }
    let mut h = IntMatrix::identity(n);
    let mut x = IntVector::zeros(n);
    let mut redundant = Vec::new();

    for i in 0..m {
        let row = a.row_vector(i);
        let tau = row.dot(&x) - &b[i];
        let s = h.matvec(&row)?;
        if s.is_zero() {
            if tau.is_zero() {
                redundant.push(i);
                continue;
            }
            return Ok(DioReport {
                status: DioStatus::Incompatible(i),
                x,
                h_final: h,
                redundant,
            });
        }
        let cert = gcd_certificate(&s)?;
        if !tau.is_multiple_of(&cert.delta) {
            return Ok(DioReport {
                status: DioStatus::IntegerInconsistent(i),
                x,
                h_final: h,
                redundant,
            });
        }
        let alpha = div_exact(&tau, &cert.delta)?;
        let p = h.matvec_t(&cert.z)?;
        x.sub_scaled(&alpha, &p);

        // u = s / delta is integral because delta divides every component.
        let u = IntVector::from_vec(
            s.iter()
                .map(|e| div_exact(e, &cert.delta))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let rho = h.matvec_t(&cert.z)?; // H^T w with w = z
        h.rank_one_sub(&u, &rho, )?;
        let _ = &p;
    }

    Ok(DioReport {
        status: DioStatus::Solved,
        x,
        h_final: h,
        redundant,
    })
}

/// All integer solutions: x_{m+1} + H_{m+1}^T q over integer q.
pub fn dio_general_solution(report: &DioReport, q: &IntVector) -> Result<IntVector> {
    if report.status != DioStatus::Solved {
        return Err(Error::NotSolved);
    }
    let shift = report.h_final.matvec_t(q)?;
    let mut out = report.x.clone();
    out.sub_scaled(&BigInt::from(-1), &shift);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intvec(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    #[test]
    fn certificate_on_pair() {
        let cert = gcd_certificate(&intvec(&[4, 6])).unwrap();
        assert_eq!(cert.delta, BigInt::from(2));
        assert_eq!(cert.z.dot(&intvec(&[4, 6])), BigInt::from(2));
    }

    #[test]
    fn certificate_unit_entry_short_circuits() {
        let cert = gcd_certificate(&intvec(&[1, 123456, -789])).unwrap();
        assert_eq!(cert.delta, BigInt::from(1));
        assert_eq!(cert.z.dot(&intvec(&[1, 123456, -789])), BigInt::from(1));
    }

    #[test]
    fn certificate_normalizes_sign() {
        let cert = gcd_certificate(&intvec(&[-6])).unwrap();
        assert_eq!(cert.delta, BigInt::from(6));
        assert_eq!(cert.z.as_slice(), &[BigInt::from(-1)]);
    }

    #[test]
    fn certificate_rejects_zero() {
        assert!(matches!(
            gcd_certificate(&IntVector::zeros(3)),
            Err(Error::ZeroGcd)
        ));
    }

    #[test]
    fn single_equation_solved_exactly() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        let b = intvec(&[6]);
        let report = dio_solve(&a, &b).unwrap();
        assert!(report.is_solved());
        let ax = a.matvec(&report.x).unwrap();
        assert_eq!(ax.as_slice(), b.as_slice());
    }

    #[test]
    fn single_equation_integer_inconsistent() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        let b = intvec(&[5]);
        let report = dio_solve(&a, &b).unwrap();
        assert_eq!(report.status, DioStatus::IntegerInconsistent(0));
    }

    #[test]
    fn identity_system() {
        let a = IntMatrix::identity(2);
        let b = intvec(&[7, -3]);
        let report = dio_solve(&a, &b).unwrap();
        assert!(report.is_solved());
        assert_eq!(report.x.as_slice(), b.as_slice());
    }

    #[test]
    fn incompatible_duplicate_rows() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let b = intvec(&[1, 2]);
        let report = dio_solve(&a, &b).unwrap();
        assert_eq!(report.status, DioStatus::Incompatible(1));
    }

    #[test]
    fn redundant_duplicate_rows() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let b = intvec(&[2, 2]);
        let report = dio_solve(&a, &b).unwrap();
        assert!(report.is_solved());
        assert_eq!(report.redundant, vec![1]);
    }

    #[test]
    fn general_solution_zero_q_is_particular() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        let b = intvec(&[6]);
        let report = dio_solve(&a, &b).unwrap();
        let q = IntVector::zeros(2);
        assert_eq!(dio_general_solution(&report, &q).unwrap(), report.x);
    }

    #[test]
    fn general_solution_always_solves() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        let b = intvec(&[6]);
        let report = dio_solve(&a, &b).unwrap();
        for q0 in -3..=3i64 {
            for q1 in -3..=3i64 {
                let x = dio_general_solution(&report, &intvec(&[q0, q1])).unwrap();
                assert_eq!(a.matvec(&x).unwrap().as_slice(), b.as_slice());
            }
        }
    }

    #[test]
    fn unimodular_determined_system_has_unique_solution() {
        // det = 1, so H_final annihilates everything and q never matters.
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let b = intvec(&[3, 2]);
        let report = dio_solve(&a, &b).unwrap();
        assert!(report.is_solved());
        for e in report.h_final.entries() {
            assert!(e.is_zero());
        }
        let x1 = dio_general_solution(&report, &intvec(&[5, -9])).unwrap();
        assert_eq!(x1, report.x);
    }

    #[test]
    fn non_solved_report_rejects_general_solution() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        let b = intvec(&[5]);
        let report = dio_solve(&a, &b).unwrap();
        assert!(matches!(
            dio_general_solution(&report, &IntVector::zeros(2)),
            Err(Error::NotSolved)
        ));
    }
}
