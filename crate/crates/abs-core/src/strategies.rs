//! Concrete parameter choices for the engine: Huang and modified Huang,
//! implicit LU and implicit LX, conjugate-direction and orthogonally-scaled
//! members, plus least squares and numerical rank built on top of them.

use crate::engine::{
    abs_step, AbaffianState, SolveReport, SolveStatus, StepContext, StepOutcome, StepParams,
    Storage, Strategy, UpdateForm,
};
use crate::error::{Error, Result};
use crate::linalg::{RealMatrix, RealVector};

/// Huang's method: identity start, scaling by coordinate vectors, search and
/// update parameters equal to the current equation row. From a zero start
/// the iterates are the least-norm solutions of the leading equations, and
/// they approach the least-norm solution monotonically from below. With a
/// symmetric positive definite initial matrix the same holds in the norm
/// weighted by its inverse.
pub struct Huang {
    weighted_h1: Option<RealMatrix>,
}

pub fn huang() -> Huang {
    Huang { weighted_h1: None }
}

/// Huang iteration started from a symmetric positive definite matrix.
pub fn huang_weighted(h1: RealMatrix) -> Huang {
    Huang {
        weighted_h1: Some(h1),
    }
}

impl Strategy for Huang {
    fn name(&self) -> &'static str {
        "huang"
    }

    fn initial_h(&self, n: usize) -> RealMatrix {
        match &self.weighted_h1 {
            Some(h) => h.clone(),
            None => RealMatrix::identity(n),
        }
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        let row = ctx.a.row_vector(ctx.eq);
        Ok(StepParams {
            v: RealVector::unit(ctx.a.rows(), ctx.eq),
            z: row.clone(),
            w: row,
            form: UpdateForm::Oblique,
        })
    }
}

/// Modified Huang: mathematically the same iterates, numerically stabilized
/// by reprojection. The search vector is p = H (H a) and the update is the
/// symmetric rank-one H' = H - p p^T / p.p, which keeps H an (approximate)
/// orthogonal projector even on extremely ill-conditioned rows.
pub struct ModifiedHuang;

pub fn modified_huang() -> ModifiedHuang {
    ModifiedHuang
}

impl Strategy for ModifiedHuang {
    fn name(&self) -> &'static str {
        "modified-huang"
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        let row = ctx.a.row_vector(ctx.eq);
        // z = H a, so the engine's p = H^T z is the reprojected H (H a).
        let z = ctx.state.h_apply(&row)?;
        Ok(StepParams {
            v: RealVector::unit(ctx.a.rows(), ctx.eq),
            z: z.clone(),
            w: z,
            form: UpdateForm::SymmetricRankOne,
        })
    }
}

/// Record of the unit-vector columns chosen by the implicit LU/LX family.
#[derive(Clone, Debug, Default)]
pub struct PivotRecord {
    chosen: Vec<usize>,
    magnitudes: Vec<f64>,
}

impl PivotRecord {
    /// Chosen column indices, in processing order.
    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn contains(&self, k: usize) -> bool {
        self.chosen.contains(&k)
    }

    /// Complement of the chosen set in 0..n.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|k| !self.contains(*k)).collect()
    }
}

/// Implicit LU: unit parameter vectors in natural column order. Valid
/// without pivoting exactly when the leading principal minors are nonzero;
/// when the natural pivot falls below tolerance the choice falls back to
/// the largest remaining column, which keeps the run well defined on any
/// full-rank system.
pub struct ImplicitLu {
    record: PivotRecord,
    pending: Option<(usize, f64)>,
}

pub fn implicit_lu() -> ImplicitLu {
    ImplicitLu {
        record: PivotRecord::default(),
        pending: None,
    }
}

impl ImplicitLu {
    pub fn pivot_record(&self) -> &PivotRecord {
        &self.record
    }
}

fn unit_choice_params(
    ctx: &StepContext<'_>,
    record: &PivotRecord,
    allowed: Option<&[usize]>,
    prefer_natural: bool,
) -> Result<(usize, f64, StepParams)> {
    let n = ctx.a.cols();
    let row = ctx.a.row_vector(ctx.eq);
    let s = ctx.state.h_apply(&row)?;

    let candidates: Vec<usize> = match allowed {
        Some(list) => list.iter().copied().filter(|k| !record.contains(*k)).collect(),
        None => record.complement(n),
    };
    if candidates.is_empty() {
        return Err(Error::RankDeficient(ctx.eq));
    }

    let mut best = candidates[0];
    let mut best_mag = s[best].abs();
    for &k in &candidates[1..] {
        if s[k].abs() > best_mag {
            best_mag = s[k].abs();
            best = k;
        }
    }

    let mut pick = best;
    let mut mag = best_mag;
    if prefer_natural {
        // Natural choice: lowest unchosen column. Pivot only when it fails.
        let natural = candidates.iter().copied().min().unwrap();
        if s[natural].abs() > ctx.tol * s.norm2() {
            pick = natural;
            mag = s[natural].abs();
        }
    }

    let unit = RealVector::unit(n, pick);
    Ok((
        pick,
        mag,
        StepParams {
            v: RealVector::unit(ctx.a.rows(), ctx.eq),
            z: unit.clone(),
            w: unit,
            form: UpdateForm::Oblique,
        },
    ))
}

impl Strategy for ImplicitLu {
    fn name(&self) -> &'static str {
        "implicit-lu"
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        let (pick, mag, params) = unit_choice_params(ctx, &self.record, None, true)?;
        self.pending = Some((pick, mag));
        Ok(params)
    }

    fn note_advanced(&mut self, _eq: usize) {
        if let Some((k, mag)) = self.pending.take() {
            self.record.chosen.push(k);
            self.record.magnitudes.push(mag);
        }
    }
}

/// Implicit LX: unit parameter vectors with the column chosen to maximize
/// the pivot magnitude over the not-yet-chosen set. No condition on the
/// matrix beyond full rank; the search vector has n-i zero components with
/// a unit in the chosen position, so zero-started iterates are basic-type
/// solutions of the leading equations.
pub struct ImplicitLx {
    record: PivotRecord,
    allowed: Option<Vec<usize>>,
    pending: Option<(usize, f64)>,
}

pub fn implicit_lx() -> ImplicitLx {
    ImplicitLx {
        record: PivotRecord::default(),
        allowed: None,
        pending: None,
    }
}

impl ImplicitLx {
    /// Restrict the pivot choice to the given columns. Used by the simplex
    /// front end to rebuild the projector for a prescribed basis.
    pub fn restricted_to(columns: Vec<usize>) -> ImplicitLx {
        ImplicitLx {
            record: PivotRecord::default(),
            allowed: Some(columns),
            pending: None,
        }
    }

    pub fn pivot_record(&self) -> &PivotRecord {
        &self.record
    }
}

impl Strategy for ImplicitLx {
    fn name(&self) -> &'static str {
        "implicit-lx"
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        let (pick, mag, params) =
            unit_choice_params(ctx, &self.record, self.allowed.as_deref(), false)?;
        self.pending = Some((pick, mag));
        Ok(params)
    }

    fn note_advanced(&mut self, _eq: usize) {
        if let Some((k, mag)) = self.pending.take() {
            self.record.chosen.push(k);
            self.record.magnitudes.push(mag);
        }
    }
}

/// Conjugate-direction member: the scaling vector equals the search vector,
/// with the residual as search parameter. Well defined for symmetric
/// positive definite systems, where the search directions come out
/// A-conjugate and the energy norm of the error decreases monotonically.
/// Breakdown of the step denominator on an indefinite matrix surfaces as a
/// strategy-violation error.
pub struct ConjugateDirection;

pub fn conjugate_direction() -> ConjugateDirection {
    ConjugateDirection
}

impl Strategy for ConjugateDirection {
    fn name(&self) -> &'static str {
        "conjugate-direction"
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        if ctx.a.rows() != ctx.a.cols() {
            return Err(Error::Shape(
                "conjugate-direction member requires a square system".into(),
            ));
        }
        let z = ctx.residual.clone();
        let p = ctx.state.h_apply_transpose(&z)?;
        Ok(StepParams {
            v: p,
            z: z.clone(),
            w: z,
            form: UpdateForm::Oblique,
        })
    }
}

/// Orthogonally-scaled member: the scaling vector is A p, with the
/// least-squares gradient A^T r as search parameter. Scaling vectors come
/// out mutually orthogonal and search directions A^T A-conjugate; the
/// residual norm decreases monotonically, which is what makes the
/// least-squares entry point below work for m > n.
pub struct OrthogonallyScaled;

pub fn orthogonally_scaled() -> OrthogonallyScaled {
    OrthogonallyScaled
}

impl Strategy for OrthogonallyScaled {
    fn name(&self) -> &'static str {
        "orthogonally-scaled"
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams> {
        let grad = ctx.a.matvec_t(ctx.residual)?;
        let p = ctx.state.h_apply_transpose(&grad)?;
        let v = ctx.a.matvec(&p)?;
        Ok(StepParams {
            v,
            z: grad.clone(),
            w: grad,
            form: UpdateForm::Oblique,
        })
    }
}

/// Least-squares solve for an overdetermined full-column-rank system using
/// the orthogonally-scaled member: n steps, each minimizing the residual
/// norm along its search direction.
pub fn solve_least_squares(a: &RealMatrix, b: &RealVector, tol: f64) -> Result<SolveReport> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::Shape(format!(
            "system is {}x{} but rhs has length {}",
            m,
            n,
            b.len()
        )));
    }
    if m < n {
        return Err(Error::Shape(
            "least-squares entry point expects m >= n".into(),
        ));
    }
    let mut strat = orthogonally_scaled();
    let mut state = AbaffianState::identity_start(n, Storage::Dense);
    let a_frob = a.frobenius_norm();
    let grad_scale = |x: &RealVector| a_frob * (a_frob * x.norm2() + b.norm2());

    for i in 0..n {
        let r = a.matvec(state.x())?.sub(b);
        let grad = a.matvec_t(&r)?;
        if grad.norm2() <= tol * grad_scale(state.x()) {
            break;
        }
        let ctx = StepContext {
            a,
            b,
            state: &state,
            eq: i.min(m - 1),
            residual: &r,
            tol,
        };
        let params = strat.params(&ctx)?;
        match abs_step(&mut state, a, b, params, i.min(m - 1), tol) {
            Ok(StepOutcome::Advanced) => {}
            Ok(_) => break, // gradient collapsed inside the step
            Err(Error::StrategyViolation { .. }) => return Err(Error::RankDeficient(i)),
            Err(e) => return Err(e),
        }
    }

    let r = a.matvec(state.x())?.sub(b);
    let grad = a.matvec_t(&r)?;
    if grad.norm2() > tol * grad_scale(state.x()) {
        return Err(Error::RankDeficient(state.advanced()));
    }
    let h_final = state.h_dense()?;
    Ok(SolveReport {
        status: SolveStatus::Solved,
        x: state.x().clone(),
        h_final,
        redundant: state.redundant_equations(),
        residual_norm: r.norm2(),
        steps: state.steps(),
        tol,
        history: Vec::new(),
    })
}

/// Numerical rank: the number of non-redundant modified-Huang steps over
/// the rows of A, with the engine's relative zero test deciding redundancy.
pub fn numerical_rank(a: &RealMatrix, tol: f64) -> Result<usize> {
    let m = a.rows();
    let b = RealVector::zeros(m);
    let mut strat = modified_huang();
    let mut state = AbaffianState::identity_start(a.cols(), Storage::Dense);
    for eq in 0..m {
        let r = a.matvec(state.x())?.sub(&b);
        let ctx = StepContext {
            a,
            b: &b,
            state: &state,
            eq,
            residual: &r,
            tol,
        };
        let params = strat.params(&ctx)?;
        abs_step(&mut state, a, &b, params, eq, tol)?;
    }
    Ok(state.advanced())
}
