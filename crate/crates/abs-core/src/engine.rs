//! The scaled ABS iteration.
//!
//! A system `A x = b` with `A` an m-by-n matrix, `m <= n`, is solved in at
//! most `m` rank-one steps. The iteration keeps an n-by-n projection-like
//! matrix `H` (the Abaffian) together with the current estimate `x`. One
//! step processes one scaling vector `v`:
//!
//! ```text
//! s     = H A^T v
//! tau   = v . (A x - b)
//! p     = H^T z
//! x'    = x - (tau / v.Ap) p
//! H'    = H - s (w^T H) / (w . s)
//! ```
//!
//! with `z` and `w` free parameters supplied per step by a [`Strategy`].
//! The choice of `(H_1, v, z, w)` selects the concrete method (Huang,
//! implicit LU, implicit LX, conjugate direction, ...); those live in
//! [`crate::strategies`]. When `s` vanishes the step is classified as
//! redundant (`tau = 0`, the equation repeats earlier information) or
//! incompatible (`tau != 0`, the system has no solution).
//!
//! After a successful run the residual is orthogonal to every processed
//! scaling vector, and `x_{m+1} + H_{m+1}^T q` parameterizes the full
//! solution set.

use crate::error::{Error, Result};
use crate::linalg::{RealMatrix, RealVector};

/// Default relative tolerance for all zero tests.
pub const DEFAULT_TOL: f64 = 1e-11;

/// How the Abaffian is stored during a solve.
///
/// `Dense` keeps the full n-by-n matrix and applies rank-one corrections in
/// place. `Factored` keeps `H_1` plus the correction pairs
/// `(s_j, H_j^T w_j, w_j . s_j)` and applies them term by term; storage is
/// O(i n) after i steps, which wins when m is much smaller than n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Storage {
    #[default]
    Dense,
    Factored,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub storage: Storage,
    /// Starting point; zero when absent.
    pub x0: Option<RealVector>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            storage: Storage::Dense,
            x0: None,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Parameter triple for one step, plus the update form.
#[derive(Clone, Debug)]
pub struct StepParams {
    /// Scaling vector, in R^m.
    pub v: RealVector,
    /// Search parameter, in R^n; the search vector is p = H^T z.
    pub z: RealVector,
    /// Update parameter, in R^n.
    pub w: RealVector,
    pub form: UpdateForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateForm {
    /// H' = H - s (w^T H) / (w . s), the general oblique form.
    Oblique,
    /// H' = H - p p^T / (p . p) with the reprojected search vector p.
    /// Requires a symmetric H (identity start with w = z); this is the
    /// stabilized update used by the modified Huang method.
    SymmetricRankOne,
}

/// Everything a strategy may look at when choosing its parameters.
pub struct StepContext<'a> {
    pub a: &'a RealMatrix,
    pub b: &'a RealVector,
    pub state: &'a AbaffianState,
    /// Index of the equation being processed (0-based).
    pub eq: usize,
    /// Current residual A x - b.
    pub residual: &'a RealVector,
    pub tol: f64,
}

/// Per-step parameter supplier identifying a member of the class.
///
/// Implementations may be stateful (pivot records); `note_advanced` is
/// called exactly when the step consumed the chosen parameters, so redundant
/// equations never commit a pivot.
pub trait Strategy {
    fn name(&self) -> &'static str;

    fn initial_h(&self, n: usize) -> RealMatrix {
        RealMatrix::identity(n)
    }

    fn params(&mut self, ctx: &StepContext<'_>) -> Result<StepParams>;

    fn note_advanced(&mut self, _eq: usize) {}
}

#[derive(Clone, Debug)]
struct FactorTerm {
    u: RealVector,
    rho: RealVector,
    denom: f64,
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(RealMatrix),
    Factored {
        h1: Option<RealMatrix>, // None means identity
        n: usize,
        terms: Vec<FactorTerm>,
    },
}

impl Repr {
    fn apply(&self, q: &RealVector) -> Result<RealVector> {
        match self {
            Repr::Dense(h) => h.matvec(q),
            Repr::Factored { h1, terms, .. } => {
                let mut out = match h1 {
                    Some(m) => m.matvec(q)?,
                    None => q.clone(),
                };
                for t in terms {
                    out.axpy(-(t.rho.dot(q) / t.denom), &t.u);
                }
                Ok(out)
            }
        }
    }

    fn apply_transpose(&self, q: &RealVector) -> Result<RealVector> {
        match self {
            Repr::Dense(h) => h.matvec_t(q),
            Repr::Factored { h1, terms, .. } => {
                let mut out = match h1 {
                    Some(m) => m.matvec_t(q)?,
                    None => q.clone(),
                };
                for t in terms {
                    out.axpy(-(t.u.dot(q) / t.denom), &t.rho);
                }
                Ok(out)
            }
        }
    }

    fn rank_one_sub(&mut self, u: &RealVector, rho: &RealVector, denom: f64) -> Result<()> {
        match self {
            Repr::Dense(h) => h.rank_one_sub(u, rho, denom),
            Repr::Factored { terms, .. } => {
                if denom == 0.0 {
                    return Err(Error::ZeroDivisor);
                }
                terms.push(FactorTerm {
                    u: u.clone(),
                    rho: rho.clone(),
                    denom,
                });
                Ok(())
            }
        }
    }

    /// Upper bound on the Frobenius norm, used only to scale zero tests.
    fn frob_bound(&self) -> f64 {
        match self {
            Repr::Dense(h) => h.frobenius_norm(),
            Repr::Factored { h1, n, terms } => {
                let base = match h1 {
                    Some(m) => m.frobenius_norm(),
                    None => (*n as f64).sqrt(),
                };
                base + terms
                    .iter()
                    .map(|t| t.u.norm2() * t.rho.norm2() / t.denom.abs())
                    .sum::<f64>()
            }
        }
    }

    fn to_dense(&self) -> Result<RealMatrix> {
        match self {
            Repr::Dense(h) => Ok(h.clone()),
            Repr::Factored { h1, n, terms } => {
                let mut h = match h1 {
                    Some(m) => m.clone(),
                    None => RealMatrix::identity(*n),
                };
                for t in terms {
                    h.rank_one_sub(&t.u, &t.rho, t.denom)?;
                }
                Ok(h)
            }
        }
    }
}

/// One processed equation.
#[derive(Clone, Debug)]
pub enum StepRecord {
    Advanced {
        eq: usize,
        p: RealVector,
        v: RealVector,
        w: RealVector,
        /// v . A p, the stepsize denominator.
        step_denom: f64,
        /// Denominator of the H update.
        update_denom: f64,
    },
    /// Redundant equation: no search vector was consumed.
    Skipped { eq: usize },
}

/// The evolving iterate: Abaffian, estimate, and history.
#[derive(Clone, Debug)]
pub struct AbaffianState {
    repr: Repr,
    x: RealVector,
    steps: usize,
    advanced: usize,
    history: Vec<StepRecord>,
}

impl AbaffianState {
    pub fn new(h1: RealMatrix, x0: RealVector, storage: Storage) -> Result<Self> {
        if h1.rows() != h1.cols() {
            return Err(Error::Shape(format!(
                "initial H must be square, got {}x{}",
                h1.rows(),
                h1.cols()
            )));
        }
        if x0.len() != h1.rows() {
            return Err(Error::Shape(format!(
                "x0 length {} does not match H of order {}",
                x0.len(),
                h1.rows()
            )));
        }
        let n = h1.rows();
        let repr = match storage {
            Storage::Dense => Repr::Dense(h1),
            Storage::Factored => {
                let identity = h1 == RealMatrix::identity(n);
                Repr::Factored {
                    h1: if identity { None } else { Some(h1) },
                    n,
                    terms: Vec::new(),
                }
            }
        };
        Ok(Self {
            repr,
            x: x0,
            steps: 0,
            advanced: 0,
            history: Vec::new(),
        })
    }

    pub fn identity_start(n: usize, storage: Storage) -> Self {
        Self::new(RealMatrix::identity(n), RealVector::zeros(n), storage)
            .expect("identity start is always well-formed")
    }

    pub fn x(&self) -> &RealVector {
        &self.x
    }

    /// Number of equations processed, redundant ones included.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of non-redundant steps.
    pub fn advanced(&self) -> usize {
        self.advanced
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn redundant_equations(&self) -> Vec<usize> {
        self.history
            .iter()
            .filter_map(|r| match r {
                StepRecord::Skipped { eq } => Some(*eq),
                _ => None,
            })
            .collect()
    }

    /// H q
    pub fn h_apply(&self, q: &RealVector) -> Result<RealVector> {
        self.repr.apply(q)
    }

    /// H^T q
    pub fn h_apply_transpose(&self, q: &RealVector) -> Result<RealVector> {
        self.repr.apply_transpose(q)
    }

    /// Materialize the current Abaffian.
    pub fn h_dense(&self) -> Result<RealMatrix> {
        self.repr.to_dense()
    }

    pub fn h_frob_bound(&self) -> f64 {
        self.repr.frob_bound()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Advanced,
    Redundant,
    Incompatible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveStatus {
    Solved,
    Inconsistent { equation: usize },
    /// All m equations were processed but the residual check failed.
    MaxedSteps,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: RealVector,
    pub h_final: RealMatrix,
    pub redundant: Vec<usize>,
    pub residual_norm: f64,
    /// Equations processed, redundant skips included.
    pub steps: usize,
    pub tol: f64,
    pub(crate) history: Vec<StepRecord>,
}

impl SolveReport {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }
}

/// Event handed to the observer after every step of [`solve_with`].
pub struct StepEvent<'a> {
    pub eq: usize,
    pub outcome: StepOutcome,
    pub state: &'a AbaffianState,
}

fn residual(a: &RealMatrix, b: &RealVector, x: &RealVector) -> Result<RealVector> {
    Ok(a.matvec(x)?.sub(b))
}

fn residual_scale(a_frob: f64, b: &RealVector, x: &RealVector) -> f64 {
    a_frob * x.norm2() + b.norm2()
}

/// Execute one step on `state` for equation `eq` with explicit parameters.
///
/// Classification happens before any parameter is consumed: a vanishing
/// `s = H A^T v` leaves the state untouched and reports the equation as
/// redundant or incompatible.
pub fn abs_step(
    state: &mut AbaffianState,
    a: &RealMatrix,
    b: &RealVector,
    params: StepParams,
    eq: usize,
    tol: f64,
) -> Result<StepOutcome> {
    let r = residual(a, b, &state.x)?;
    abs_step_with_residual(state, a, b, params, eq, tol, &r)
}

fn abs_step_with_residual(
    state: &mut AbaffianState,
    a: &RealMatrix,
    b: &RealVector,
    params: StepParams,
    eq: usize,
    tol: f64,
    r: &RealVector,
) -> Result<StepOutcome> {
    let StepParams { v, z, w, form } = params;
    if v.len() != a.rows() || z.len() != a.cols() || w.len() != a.cols() {
        return Err(Error::Shape(
            "step parameters do not conform to the system".into(),
        ));
    }

    let atv = a.matvec_t(&v)?;
    let s = state.repr.apply(&atv)?;
    let tau = v.dot(r);

    let s_scale = atv.norm2() * state.repr.frob_bound();
    if s.norm2() <= tol * s_scale {
        let tau_scale = residual_scale(a.frobenius_norm(), b, &state.x);
        if tau.abs() <= tol * tau_scale {
            state.history.push(StepRecord::Skipped { eq });
            state.steps += 1;
            return Ok(StepOutcome::Redundant);
        }
        return Ok(StepOutcome::Incompatible);
    }

    // Non-degeneracy of the search parameter: v^T A H^T z = z . s.
    let sz = s.dot(&z);
    if sz.abs() <= tol * s.norm2() * z.norm2() {
        return Err(Error::StrategyViolation {
            equation: eq,
            condition: "z.s (search parameter)",
        });
    }

    let p = state.repr.apply_transpose(&z)?;
    let alpha = tau / sz;
    state.x.axpy(-alpha, &p);

    let update_denom = match form {
        UpdateForm::Oblique => {
            let sw = s.dot(&w);
            if sw.abs() <= tol * s.norm2() * w.norm2() {
                return Err(Error::StrategyViolation {
                    equation: eq,
                    condition: "w.s (update parameter)",
                });
            }
            let rho = state.repr.apply_transpose(&w)?;
            state.repr.rank_one_sub(&s, &rho, sw)?;
            sw
        }
        UpdateForm::SymmetricRankOne => {
            let pp = p.dot(&p);
            if pp == 0.0 {
                return Err(Error::StrategyViolation {
                    equation: eq,
                    condition: "p.p (reprojected update)",
                });
            }
            state.repr.rank_one_sub(&p, &p, pp)?;
            pp
        }
    };

    state.history.push(StepRecord::Advanced {
        eq,
        p,
        v,
        w,
        step_denom: sz,
        update_denom,
    });
    state.steps += 1;
    state.advanced += 1;
    Ok(StepOutcome::Advanced)
}

/// Solve A x = b with the given strategy. Dense storage, zero start.
pub fn solve(
    a: &RealMatrix,
    b: &RealVector,
    strategy: &mut dyn Strategy,
    tol: f64,
) -> Result<SolveReport> {
    solve_with(a, b, strategy, &SolveOptions::with_tol(tol), |_| {})
}

/// Full-control entry point: storage mode, starting point, per-step observer.
pub fn solve_with(
    a: &RealMatrix,
    b: &RealVector,
    strategy: &mut dyn Strategy,
    opts: &SolveOptions,
    mut observer: impl FnMut(&StepEvent<'_>),
) -> Result<SolveReport> {
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
            "direct solve requires m <= n, got {m}x{n}; use the least-squares entry point"
        )));
    }
    let h1 = strategy.initial_h(n);
    let x0 = match &opts.x0 {
        Some(x) => x.clone(),
        None => RealVector::zeros(n),
    };
    let mut state = AbaffianState::new(h1, x0, opts.storage)?;
    let a_frob = a.frobenius_norm();
    let tol = opts.tol;

    let mut inconsistent_at: Option<usize> = None;
    for eq in 0..m {
        let r = residual(a, b, &state.x)?;
        if r.norm2() <= tol * residual_scale(a_frob, b, &state.x) {
            break; // current iterate already satisfies the whole system
        }
        let ctx = StepContext {
            a,
            b,
            state: &state,
            eq,
            residual: &r,
            tol,
        };
        let params = strategy.params(&ctx)?;
        let outcome = abs_step_with_residual(&mut state, a, b, params, eq, tol, &r)?;
        observer(&StepEvent {
            eq,
            outcome,
            state: &state,
        });
        match outcome {
            StepOutcome::Advanced => strategy.note_advanced(eq),
            StepOutcome::Redundant => {}
            StepOutcome::Incompatible => {
                inconsistent_at = Some(eq);
                break;
            }
        }
    }

    let resid = residual(a, b, &state.x)?.norm2();
    let status = match inconsistent_at {
        Some(eq) => SolveStatus::Inconsistent { equation: eq },
        None => {
            if resid <= tol * residual_scale(a_frob, b, &state.x).max(b.norm2()) {
                SolveStatus::Solved
            } else {
                SolveStatus::MaxedSteps
            }
        }
    };
    let h_final = state.repr.to_dense()?;
    Ok(SolveReport {
        status,
        x: state.x,
        h_final,
        redundant: state
            .history
            .iter()
            .filter_map(|rec| match rec {
                StepRecord::Skipped { eq } => Some(*eq),
                _ => None,
            })
            .collect(),
        residual_norm: resid,
        steps: state.steps,
        tol,
        history: state.history,
    })
}

/// General solution of the solved system: x_{m+1} + H_{m+1}^T q.
pub fn general_solution(report: &SolveReport, q: &RealVector) -> Result<RealVector> {
    if report.status != SolveStatus::Solved {
        return Err(Error::NotSolved);
    }
    let shift = report.h_final.matvec_t(q)?;
    Ok(report.x.add(&shift))
}

/// Closed-form Abaffian from the parameter histories:
/// H_{i+1} = H_1 - H_1 A^T V (W^T H_1 A^T V)^{-1} W^T H_1.
///
/// Serves as an independent route to the recursively updated matrix; the
/// parameters are admissible exactly when the inner i-by-i matrix is
/// nonsingular.
pub fn abaffian_closed_form(
    h1: &RealMatrix,
    a: &RealMatrix,
    v_hist: &[RealVector],
    w_hist: &[RealVector],
) -> Result<RealMatrix> {
    if v_hist.len() != w_hist.len() {
        return Err(Error::Shape("V and W histories differ in length".into()));
    }
    let i = v_hist.len();
    if i == 0 {
        return Ok(h1.clone());
    }
    let n = h1.rows();

    // Columns of H1 A^T V.
    let mut left = Vec::with_capacity(i);
    for v in v_hist {
        left.push(h1.matvec(&a.matvec_t(v)?)?);
    }
    // Rows of W^T H1.
    let mut right = Vec::with_capacity(i);
    for w in w_hist {
        right.push(h1.matvec_t(w)?);
    }
    let inner = RealMatrix::from_fn(i, i, |j, k| w_hist[j].dot(&left[k]));
    let inner_inv = crate::linalg::invert(&inner).map_err(|_| Error::Inadmissible)?;

    let mut h = h1.clone();
    for j in 0..i {
        for k in 0..i {
            let c = inner_inv.get(j, k);
            if c != 0.0 {
                // h -= left_j * c * right_k^T
                h.rank_one_sub(&left[j], &right[k].scaled(c), 1.0)?;
            }
        }
    }
    let _ = n;
    Ok(h)
}

/// Re-solve for the residual correction, reusing the stored search vectors
/// and stepsize denominators. No new Abaffian is built; each round is a
/// forward substitution through the implicit factorization. The best
/// iterate by residual norm is kept, so the reported residual never
/// increases with extra rounds.
pub fn iterative_refinement(
    a: &RealMatrix,
    b: &RealVector,
    base: &SolveReport,
    max_rounds: usize,
) -> Result<SolveReport> {
    if base.status != SolveStatus::Solved {
        return Err(Error::NotSolved);
    }
    let mut out = base.clone();
    if max_rounds == 0 {
        return Ok(out);
    }
    let mut best_x = base.x.clone();
    let mut best_res = base.residual_norm;

    let mut x = base.x.clone();
    for _ in 0..max_rounds {
        let r0 = residual(a, b, &x)?;
        if r0.norm2() == 0.0 {
            break;
        }
        // Solve A e = r0 over the stored directions.
        let n = x.len();
        let mut e = RealVector::zeros(n);
        for rec in &base.history {
            if let StepRecord::Advanced {
                p, v, step_denom, ..
            } = rec
            {
                let ae = a.matvec(&e)?;
                let tau = v.dot(&ae) - v.dot(&r0);
                e.axpy(-(tau / step_denom), p);
            }
        }
        x = x.sub(&e);
        let res = residual(a, b, &x)?.norm2();
        if res < best_res {
            best_res = res;
            best_x = x.clone();
        }
    }
    out.x = best_x;
    out.residual_norm = best_res;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::{huang, implicit_lu};

    fn mat(rows: Vec<Vec<f64>>) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    fn vec2(v: Vec<f64>) -> RealVector {
        RealVector::from_vec(v).unwrap()
    }

    #[test]
    fn first_huang_step_on_identity_system() {
        let a = RealMatrix::identity(2);
        let b = vec2(vec![1.0, 2.0]);
        let mut state = AbaffianState::identity_start(2, Storage::Dense);
        let params = StepParams {
            v: RealVector::unit(2, 0),
            z: a.row_vector(0),
            w: a.row_vector(0),
            form: UpdateForm::Oblique,
        };
        let out = abs_step(&mut state, &a, &b, params, 0, DEFAULT_TOL).unwrap();
        assert_eq!(out, StepOutcome::Advanced);
        assert_eq!(state.x().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn duplicated_row_is_redundant() {
        let a = mat(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let b = vec2(vec![2.0, 2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        assert!(report.is_solved());
        assert_eq!(report.redundant, vec![1]);
        assert_eq!(report.steps, 2);
    }

    #[test]
    fn parallel_inconsistent_rows_detected() {
        let a = mat(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let b = vec2(vec![1.0, 2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        assert_eq!(report.status, SolveStatus::Inconsistent { equation: 1 });
    }

    #[test]
    fn identity_system_any_strategy() {
        let a = RealMatrix::identity(3);
        let b = vec2(vec![1.0, 2.0, 3.0]);
        for strat in [&mut huang() as &mut dyn Strategy, &mut implicit_lu()] {
            let report = solve(&a, &b, strat, DEFAULT_TOL).unwrap();
            assert!(report.is_solved());
            for i in 0..3 {
                assert!((report.x[i] - b[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn underdetermined_huang_gives_least_norm() {
        let a = mat(vec![vec![1.0, 1.0]]);
        let b = vec2(vec![2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        assert!(report.is_solved());
        assert!((report.x[0] - 1.0).abs() < 1e-12);
        assert!((report.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_solution_zero_parameter_is_particular() {
        let a = mat(vec![vec![1.0, 1.0]]);
        let b = vec2(vec![2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        let q = RealVector::zeros(2);
        assert_eq!(general_solution(&report, &q).unwrap(), report.x);
    }

    #[test]
    fn general_solution_stays_on_solution_line() {
        let a = mat(vec![vec![1.0, 1.0]]);
        let b = vec2(vec![2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        let q = vec2(vec![1.0, -1.0]);
        let x = general_solution(&report, &q).unwrap();
        assert!((x[0] + x[1] - 2.0).abs() < 1e-12);
        // The shift moved the point along the line.
        assert!((x[0] - x[1]) != (report.x[0] - report.x[1]));
    }

    #[test]
    fn general_solution_determined_system_ignores_q() {
        let a = mat(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let b = vec2(vec![3.0, 5.0]);
        let report = solve(&a, &b, &mut implicit_lu(), DEFAULT_TOL).unwrap();
        let q = vec2(vec![0.7, -2.3]);
        let x = general_solution(&report, &q).unwrap();
        // H_final annihilates the full row space, so A x must still equal b.
        let r = a.matvec(&x).unwrap().sub(&b);
        assert!(r.norm2() < 1e-10);
        let shift = report.h_final.matvec_t(&q).unwrap();
        assert!(shift.norm2() < 1e-10);
    }

    #[test]
    fn general_solution_requires_solved() {
        let a = mat(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let b = vec2(vec![1.0, 2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        assert!(matches!(
            general_solution(&report, &RealVector::zeros(2)),
            Err(Error::NotSolved)
        ));
    }

    #[test]
    fn closed_form_empty_history_is_h1() {
        let h1 = mat(vec![vec![2.0, 0.0], vec![0.0, 1.0]]);
        let a = RealMatrix::identity(2);
        let h = abaffian_closed_form(&h1, &a, &[], &[]).unwrap();
        assert_eq!(h, h1);
    }

    #[test]
    fn closed_form_matches_one_recursion_step() {
        let a = mat(vec![vec![2.0, -1.0, 3.0], vec![1.0, 4.0, 0.0]]);
        let b = vec2(vec![1.0, 2.0]);
        let mut strat = huang();
        let report = solve(&a, &b, &mut strat, DEFAULT_TOL).unwrap();
        let mut v_hist = Vec::new();
        let mut w_hist = Vec::new();
        for rec in report.history() {
            if let StepRecord::Advanced { v, w, .. } = rec {
                v_hist.push(v.clone());
                w_hist.push(w.clone());
                break; // i = 1
            }
        }
        let closed =
            abaffian_closed_form(&RealMatrix::identity(3), &a, &v_hist, &w_hist).unwrap();
        // Rebuild the recursive H after one step.
        let mut state = AbaffianState::identity_start(3, Storage::Dense);
        let params = StepParams {
            v: v_hist[0].clone(),
            z: w_hist[0].clone(),
            w: w_hist[0].clone(),
            form: UpdateForm::Oblique,
        };
        abs_step(&mut state, &a, &b, params, 0, DEFAULT_TOL).unwrap();
        let rec = state.h_dense().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((closed.get(i, j) - rec.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_rejects_inadmissible() {
        // w orthogonal to H1 A^T v makes the inner matrix singular.
        let a = mat(vec![vec![1.0, 0.0]]);
        let v = vec![vec2(vec![1.0])];
        let w = vec![vec2(vec![0.0, 1.0])];
        assert!(matches!(
            abaffian_closed_form(&RealMatrix::identity(2), &a, &v, &w),
            Err(Error::Inadmissible)
        ));
    }

    #[test]
    fn refinement_zero_rounds_is_verbatim() {
        let a = RealMatrix::identity(2);
        let b = vec2(vec![1.0, 2.0]);
        let report = solve(&a, &b, &mut huang(), DEFAULT_TOL).unwrap();
        let refined = iterative_refinement(&a, &b, &report, 0).unwrap();
        assert_eq!(refined.x, report.x);
        assert_eq!(refined.residual_norm, report.residual_norm);
    }

    #[test]
    fn refinement_fixed_point_when_exact() {
        let a = RealMatrix::identity(3);
        let b = vec2(vec![1.0, -4.0, 0.5]);
        let report = solve(&a, &b, &mut implicit_lu(), DEFAULT_TOL).unwrap();
        assert_eq!(report.residual_norm, 0.0);
        let refined = iterative_refinement(&a, &b, &report, 1).unwrap();
        assert_eq!(refined.x, report.x);
    }

    #[test]
    fn factored_storage_matches_dense() {
        let a = mat(vec![
            vec![2.0, -1.0, 3.0, 0.5],
            vec![1.0, 4.0, 0.0, -2.0],
            vec![0.0, 1.0, 1.0, 1.0],
        ]);
        let b = vec2(vec![1.0, 2.0, 3.0]);
        let dense = solve_with(
            &a,
            &b,
            &mut huang(),
            &SolveOptions::with_tol(DEFAULT_TOL),
            |_| {},
        )
        .unwrap();
        let opts = SolveOptions {
            storage: Storage::Factored,
            ..SolveOptions::with_tol(DEFAULT_TOL)
        };
        let factored = solve_with(&a, &b, &mut huang(), &opts, |_| {}).unwrap();
        for i in 0..4 {
            assert!((dense.x[i] - factored.x[i]).abs() < 1e-12);
            for j in 0..4 {
                assert!((dense.h_final.get(i, j) - factored.h_final.get(i, j)).abs() < 1e-11);
            }
        }
    }
}
