//! Solvers for the prescribed Ricci curvature equation `Ric(g) = c T`.
//!
//! Two routes:
//!
//! * [`solve_two_summand`] — exact closed form for two summands with an
//!   intermediate subalgebra (the mixed triple product over the first
//!   summand vanishes). Existence is decided by a strict inequality in the
//!   structure constants; when it holds, the coefficient ratio and the
//!   multiplier come from a quadratic whose discriminant is then positive,
//!   and the solution is unique up to scaling.
//! * [`solve_general`] — constrained maximization of the scalar curvature
//!   over the trace-one surface for any summand count, via gradient ascent
//!   in logarithmic coordinates with exact radial projection and
//!   deterministic multistart.

use crate::bounds::{search_box, BoundsReport};
use crate::curvature::{
    metric_inner, metric_norm, ricci_coefficients, scalar_curvature, scalar_gradient,
    tensor_trace,
};
use crate::data::{InvariantMetric, InvariantTensor, StructureData, STRUCT_TOL};
use serde::Serialize;
use thiserror::Error;

/// Residual gate for declaring a solve successful.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Closed-form route: tolerance on algebraic identities of the output.
const CLOSED_FORM_TOL: f64 = 1e-12;

const ARMIJO_SLOPE: f64 = 1e-4;
const ARMIJO_FACTOR: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("operation requires exactly {expected} summands, got {got}")]
    WrongSummandCount { expected: usize, got: usize },
    #[error("gamma[2][2][1] vanishes: all invariant metrics share one Ricci tensor")]
    DegenerateGamma,
    #[error("gamma[1][1][2] = {0:e} is nonzero: no intermediate subalgebra over the first summand")]
    NonIntermediate(f64),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    NoSolution,
    NotConverged,
}

/// Diagnostics attached to every result.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    /// Ascent iterations summed over all starts (zero for the closed form).
    pub iterations: u64,
    /// Number of multistart trials run.
    pub starts: u32,
    /// The box report used for seeding, when the instance is maximal.
    pub search_box: Option<BoundsReport>,
    /// Norm of the constraint-tangent projection of the curvature gradient
    /// at the returned point.
    pub projected_gradient_norm: Option<f64>,
    /// Scalar curvature at the returned point.
    pub scalar_value: Option<f64>,
    pub note: Option<String>,
}

impl Diagnostics {
    fn empty() -> Self {
        Diagnostics {
            iterations: 0,
            starts: 0,
            search_box: None,
            projected_gradient_norm: None,
            scalar_value: None,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Metric coefficients, normalized so the prescribed tensor has trace
    /// one. Present unless the closed form certifies nonexistence.
    pub x: Option<InvariantMetric>,
    /// Multiplier in `Ric(g) = c T`; invariant under the normalization.
    pub c: Option<f64>,
    /// Relative residual of the prescribed-curvature equation in the metric
    /// norm.
    pub residual: Option<f64>,
    pub diagnostics: Diagnostics,
}

/// Intermediates of the two-summand quadratic.
#[derive(Debug, Clone, Serialize)]
pub struct TwoSummandIntermediates {
    pub eta1: f64,
    pub eta2: f64,
    pub discriminant: f64,
    pub condition_holds: bool,
}

/// Options for [`solve_general`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Convergence threshold on the ascent gradient norm.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iter: u64,
    /// Number of deterministic multistart trials.
    pub starts: u32,
    pub seed: u64,
    /// Worker threads for the multistart loop; results do not depend on it.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 10_000, starts: 32, seed: 0, threads: 1 }
    }
}

fn two_summand_constants(sd: &StructureData) -> Result<(f64, f64, f64, f64, Vec<f64>), SolveError> {
    let s = sd.summand_count();
    if s != 2 {
        return Err(SolveError::WrongSummandCount { expected: 2, got: s });
    }
    let gmax = {
        let mut m = 0.0_f64;
        for i in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m = m.max(sd.gamma(i, k, l).abs());
                }
            }
        }
        m
    };
    let tol = STRUCT_TOL * gmax.max(1.0);
    let g112 = sd.gamma(0, 0, 1);
    if g112.abs() > tol {
        return Err(SolveError::NonIntermediate(g112));
    }
    let g221 = sd.gamma(1, 1, 0);
    if g221.abs() <= tol {
        return Err(SolveError::DegenerateGamma);
    }
    let g111 = sd.gamma(0, 0, 0);
    let g222 = sd.gamma(1, 1, 1);
    let zeta = sd.casimir_or_derived();
    Ok((g111, g221, g222, gmax, zeta))
}

/// Evaluates the existence inequality and the quadratic intermediates for a
/// two-summand space with an intermediate subalgebra.
pub fn existence_condition(
    sd: &StructureData,
    z: &InvariantTensor,
) -> Result<TwoSummandIntermediates, SolveError> {
    let (g111, g221, g222, _, zeta) = two_summand_constants(sd)?;
    let d1 = sd.dims[0] as f64;
    let d2 = sd.dims[1] as f64;
    let mu = d2 * d2 / (d1 * g221);
    let eta1 = 2.0 * mu * (zeta[0] + g111 / (4.0 * d1));
    let eta2 = 2.0 * mu * (zeta[1] + g222 / (4.0 * d2) + g221 / d2);
    let discriminant =
        (eta2 * z[1] + z[0]).powi(2) - (eta2 * eta2 + 2.0 * eta1) * z[1] * z[1];
    let condition_holds = eta1 * z[1] < eta2 * z[0];
    Ok(TwoSummandIntermediates { eta1, eta2, discriminant, condition_holds })
}

fn finish_solved(
    sd: &StructureData,
    z: &InvariantTensor,
    x_unnormalized: InvariantMetric,
    c: f64,
    mut diagnostics: Diagnostics,
) -> SolveResult {
    // rescale to the trace-one surface; Ricci and c are unchanged
    let trace = tensor_trace(sd, z, &x_unnormalized);
    let x = x_unnormalized.scaled(trace);
    let verify = verify_solution(sd, z, &x, c);
    diagnostics.projected_gradient_norm = Some(verify.projected_gradient_norm);
    diagnostics.scalar_value = Some(verify.scalar_curvature);
    SolveResult {
        status: SolveStatus::Solved,
        x: Some(x),
        c: Some(c),
        residual: Some(verify.residual),
        diagnostics,
    }
}

fn no_solution(note: impl Into<String>) -> SolveResult {
    SolveResult {
        status: SolveStatus::NoSolution,
        x: None,
        c: None,
        residual: None,
        diagnostics: Diagnostics { note: Some(note.into()), ..Diagnostics::empty() },
    }
}

/// Closed-form solver for two summands.
///
/// When the mixed product `gamma[2][2][1]` vanishes, every invariant metric
/// has the same Ricci tensor; that case is handled by direct comparison.
/// Otherwise existence is equivalent to the strict inequality of
/// [`existence_condition`], the quadratic is solved with the minus sign in
/// front of the square root (rationalized to avoid cancellation), and the
/// solution is unique up to scaling.
pub fn solve_two_summand(sd: &StructureData, z: &InvariantTensor) -> Result<SolveResult, SolveError> {
    assert_eq!(z.len(), 2, "tensor must have two entries");
    match existence_condition(sd, z) {
        Err(SolveError::DegenerateGamma) => {
            // constant-Ricci path: Ric does not depend on the metric
            let probe = InvariantMetric::new(vec![1.0, 1.0]).unwrap();
            let ricci = ricci_coefficients(sd, &probe);
            let scale = ricci.coeffs.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let mut c = None;
            let mut consistent = true;
            for i in 0..2 {
                if z[i] > 0.0 {
                    let ci = ricci.coeffs[i] / z[i];
                    match c {
                        None => c = Some(ci),
                        Some(prev) => {
                            if (prev - ci).abs() > CLOSED_FORM_TOL * prev.abs().max(ci.abs()).max(1.0) {
                                consistent = false;
                            }
                        }
                    }
                } else if ricci.coeffs[i].abs() > CLOSED_FORM_TOL * scale {
                    consistent = false;
                }
            }
            let c = c.unwrap_or(0.0);
            if consistent && c > 0.0 {
                let mut diag = Diagnostics::empty();
                diag.note = Some(
                    "degenerate mixed product: every invariant metric solves the equation".into(),
                );
                Ok(finish_solved(sd, z, probe, c, diag))
            } else {
                Ok(no_solution(
                    "degenerate mixed product: the fixed Ricci tensor is not a positive multiple of the prescribed tensor",
                ))
            }
        }
        Err(e) => Err(e),
        Ok(im) => {
            if !im.condition_holds {
                return Ok(no_solution("existence inequality fails"));
            }
            let (g111, g221, g222, _, zeta) = two_summand_constants(sd)?;
            let d1 = sd.dims[0] as f64;
            let d2 = sd.dims[1] as f64;
            let mu = d2 * d2 / (d1 * g221);
            let (c, ratio) = if z[1] == 0.0 {
                // the second equation decouples and fixes the ratio; the
                // first then determines c
                let k_const = zeta[1] + g222 / (4.0 * d2) + g221 / d2;
                let ratio = 2.0 * d2 * k_const / g221;
                let c = (zeta[0] + g111 / (4.0 * d1) + mu * k_const * k_const) / z[0];
                (c, ratio)
            } else {
                // minus sign before the square root, rationalized
                let sqrt_d = im.discriminant.sqrt();
                let m = im.eta2 * z[1] + z[0];
                let c = d1 * g221 * (im.eta2 * im.eta2 + 2.0 * im.eta1)
                    / (2.0 * d2 * d2 * (m + sqrt_d));
                let ratio =
                    2.0 * d1 * (im.eta2 * z[0] - im.eta1 * z[1]) / (d2 * (sqrt_d + z[0]));
                (c, ratio)
            };
            debug_assert!(c > 0.0 && ratio > 0.0);
            let x = InvariantMetric::new(vec![ratio, 1.0]).expect("positive ratio");
            Ok(finish_solved(sd, z, x, c, Diagnostics::empty()))
        }
    }
}

/// Report of [`verify_solution`].
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// Per-summand residuals `R_i - c z_i`.
    pub block_residuals: Vec<f64>,
    /// `|R - c z| / |R|` in the metric norm (absolute when `R = 0`).
    pub residual: f64,
    pub trace: f64,
    pub scalar_curvature: f64,
    /// Norm of `R - c* z` for the least-squares multiplier `c*`; vanishes
    /// exactly at constrained critical points.
    pub projected_gradient_norm: f64,
}

/// Evaluates how well `(x, c)` solves the prescribed-curvature equation.
pub fn verify_solution(
    sd: &StructureData,
    z: &InvariantTensor,
    x: &InvariantMetric,
    c: f64,
) -> VerifyReport {
    let ricci = ricci_coefficients(sd, x);
    let s = sd.summand_count();
    let block_residuals: Vec<f64> = (0..s).map(|i| ricci.coeffs[i] - c * z[i]).collect();
    let r_norm = metric_norm(sd, &ricci.coeffs, x);
    let abs_residual = metric_norm(sd, &block_residuals, x);
    let residual = if r_norm > 0.0 { abs_residual / r_norm } else { abs_residual };
    let zz = metric_inner(sd, z.coeffs(), z.coeffs(), x);
    let c_star = metric_inner(sd, &ricci.coeffs, z.coeffs(), x) / zz;
    let tangent_diff: Vec<f64> = (0..s).map(|i| ricci.coeffs[i] - c_star * z[i]).collect();
    VerifyReport {
        block_residuals,
        residual,
        trace: tensor_trace(sd, z, x),
        scalar_curvature: scalar_curvature(sd, x),
        projected_gradient_norm: metric_norm(sd, &tangent_diff, x),
    }
}

// ---------------------------------------------------------------------------
// general solver

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

/// Root of `x^{s+1} = x + 1`: base of the generalized-golden-ratio
/// low-discrepancy sequence.
fn generalized_golden(s: usize) -> f64 {
    let mut x = 2.0_f64;
    for _ in 0..64 {
        let xs = x.powi(s as i32);
        let f = xs * x - x - 1.0;
        let df = (s as f64 + 1.0) * xs - 1.0;
        x -= f / df;
    }
    x
}

struct StartOutcome {
    y: Vec<f64>,
    value: f64,
    iterations: u64,
    converged: bool,
}

/// Objective in log coordinates: by homogeneity, the scalar curvature at the
/// trace-one rescaling of `exp(y)` equals `S(exp(y)) / trace(exp(y))`.
fn objective(sd: &StructureData, z: &InvariantTensor, y: &[f64]) -> Option<(f64, InvariantMetric, f64)> {
    let coeffs: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    let x = InvariantMetric::new(coeffs).ok()?;
    let trace = tensor_trace(sd, z, &x);
    if !trace.is_finite() || trace <= 0.0 {
        return None;
    }
    let s_val = scalar_curvature(sd, &x);
    if !s_val.is_finite() {
        return None;
    }
    let f = s_val / trace;
    if !f.is_finite() {
        return None;
    }
    Some((f, x, trace))
}

fn objective_gradient(
    sd: &StructureData,
    z: &InvariantTensor,
    x: &InvariantMetric,
    trace: f64,
) -> Vec<f64> {
    let grad_s = scalar_gradient(sd, x);
    let s_val = scalar_curvature(sd, x);
    (0..sd.summand_count())
        .map(|j| {
            let xj = x[j];
            xj * grad_s[j] / trace + s_val * sd.dims[j] as f64 * z[j] / (xj * trace * trace)
        })
        .collect()
}

fn ascend(sd: &StructureData, z: &InvariantTensor, y0: Vec<f64>, opts: &SolveOptions) -> StartOutcome {
    let mut y = y0;
    let (mut f, mut x, mut trace) = match objective(sd, z, &y) {
        Some(v) => v,
        None => {
            return StartOutcome { y, value: f64::NEG_INFINITY, iterations: 0, converged: false }
        }
    };
    let s = y.len();
    let mut grad = objective_gradient(sd, z, &x, trace);
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // previous (y, grad)
    let mut step = 1.0_f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let gn2: f64 = grad.iter().map(|g| g * g).sum();
        let gn = gn2.sqrt();
        if gn <= opts.tol {
            converged = true;
            break;
        }
        // spectral (Barzilai-Borwein) trial step where the local curvature
        // supports it, otherwise grow the last accepted step
        let mut trial = (step * 2.0).min(1e3);
        if let Some((py, pg)) = &prev {
            let mut ss = 0.0;
            let mut sr = 0.0;
            for j in 0..s {
                let dy = y[j] - py[j];
                let dg = grad[j] - pg[j];
                ss += dy * dy;
                sr += dy * dg;
            }
            if sr < 0.0 && ss > 0.0 {
                trial = (ss / -sr).clamp(1e-12, 1e6);
            }
        }
        step = trial;
        let mut accepted = false;
        while step >= 1e-18 {
            let y_new: Vec<f64> = (0..s).map(|j| y[j] + step * grad[j]).collect();
            if let Some((f_new, x_new, t_new)) = objective(sd, z, &y_new) {
                if f_new >= f + ARMIJO_SLOPE * step * gn2 {
                    prev = Some((std::mem::replace(&mut y, y_new), std::mem::take(&mut grad)));
                    f = f_new;
                    x = x_new;
                    trace = t_new;
                    grad = objective_gradient(sd, z, &x, trace);
                    accepted = true;
                    break;
                }
            }
            step *= ARMIJO_FACTOR;
        }
        if !accepted {
            // Within ~sqrt(eps) of the maximum the objective is flat at
            // float resolution while the gradient still carries ~eps-level
            // information. Refine there by moving along the gradient as
            // long as its norm strictly decreases and the value stays flat.
            step = trial;
            while step >= 1e-18 {
                let y_new: Vec<f64> = (0..s).map(|j| y[j] + step * grad[j]).collect();
                if let Some((f_new, x_new, t_new)) = objective(sd, z, &y_new) {
                    if f_new >= f - 1e-13 * f.abs() {
                        let g_new = objective_gradient(sd, z, &x_new, t_new);
                        if g_new.iter().map(|g| g * g).sum::<f64>() < gn2 {
                            prev = Some((std::mem::replace(&mut y, y_new), std::mem::take(&mut grad)));
                            f = f_new;
                            grad = g_new;
                            accepted = true;
                            break;
                        }
                    }
                }
                step *= ARMIJO_FACTOR;
            }
        }
        if !accepted {
            break; // no representable progress in either the value or the gradient
        }
    }
    StartOutcome { y, value: f, iterations, converged }
}

/// Runs `f` over `0..n` on up to `threads` workers, preserving index order.
fn map_indexed<T: Send>(n: usize, threads: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = threads.max(1).min(n.max(1));
    if threads <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (ti, slot_chunk) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (off, slot) in slot_chunk.iter_mut().enumerate() {
                    *slot = Some(f(ti * chunk + off));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("worker filled every slot")).collect()
}

/// Maximizes the scalar curvature over the trace-one surface and reads the
/// multiplier off the critical point.
///
/// Positivity of the coefficients is enforced by the log parametrization;
/// the trace constraint by exact radial projection (the trace is homogeneous
/// of degree -1). Seeds are deterministic low-discrepancy points in the
/// logarithmic search box when the instance is maximal, else in `[-3, 3]^s`.
/// Identical options and seed give bit-identical results regardless of the
/// thread count.
pub fn solve_general(
    sd: &StructureData,
    z: &InvariantTensor,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    let s = sd.summand_count();
    if s < 2 {
        return Err(SolveError::WrongSummandCount { expected: 2, got: s });
    }
    assert_eq!(z.len(), s, "tensor length must match the summand count");
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(SolveError::InvalidOptions(format!("tolerance {} must be positive", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(SolveError::InvalidOptions("max_iter must be at least 1".into()));
    }
    if opts.starts == 0 {
        return Err(SolveError::InvalidOptions("starts must be at least 1".into()));
    }
    if opts.threads == 0 {
        return Err(SolveError::InvalidOptions("threads must be at least 1".into()));
    }

    let box_report = search_box(sd, z).ok();
    let mut note = None;
    let (lo, hi) = match &box_report {
        Some(r) => {
            let lo = r.u.ln();
            let hi = r.v.ln();
            // the box is advisory: keep seeds representable
            let lo = lo.max(-40.0);
            let hi = hi.min(40.0);
            if lo.is_finite() && hi.is_finite() && lo < hi {
                (lo, hi)
            } else {
                (-3.0, 3.0)
            }
        }
        None => {
            note = Some("instance is not maximal: seeding without a certified box".to_string());
            (-3.0, 3.0)
        }
    };

    // generalized-golden-ratio sequence with a seed-derived toroidal shift
    let phi = generalized_golden(s);
    let steps: Vec<f64> = (1..=s as i32).map(|j| (1.0 / phi.powi(j)).fract()).collect();
    let mut rng_state = opts.seed ^ 0xd1b54a32d192ed03;
    let offsets: Vec<f64> = (0..s).map(|_| unit_from_bits(splitmix64(&mut rng_state))).collect();
    let seed_point = |k: usize| -> Vec<f64> {
        (0..s)
            .map(|j| {
                let frac = ((k + 1) as f64 * steps[j] + offsets[j]).fract();
                lo + frac * (hi - lo)
            })
            .collect()
    };

    let outcomes = map_indexed(opts.starts as usize, opts.threads, |k| {
        ascend(sd, z, seed_point(k), opts)
    });
    if std::env::var_os("RICCI_DEBUG_STARTS").is_some() {
        for (k, o) in outcomes.iter().enumerate() {
            eprintln!(
                "start {k}: f = {:.17e}, iters = {}, converged = {}",
                o.value, o.iterations, o.converged
            );
        }
    }

    let total_iterations: u64 = outcomes.iter().map(|o| o.iterations).sum();
    // Values within relative 1e-12 of the best are the same maximum up to
    // float noise; inside that band a certified start beats an uncertified
    // one, then the lowest start index wins.
    let best_value = outcomes.iter().map(|o| o.value).fold(f64::NEG_INFINITY, f64::max);
    let tie_band = 1e-12 * best_value.abs();
    let best = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.value >= best_value - tie_band)
        .max_by_key(|(i, o)| (o.converged, std::cmp::Reverse(*i)))
        .map(|(_, o)| o)
        .expect("at least one start");

    let mut diagnostics = Diagnostics {
        iterations: total_iterations,
        starts: opts.starts,
        search_box: box_report,
        projected_gradient_norm: None,
        scalar_value: None,
        note,
    };

    if !best.value.is_finite() {
        diagnostics.note = Some("no start produced a finite objective".into());
        return Ok(SolveResult {
            status: SolveStatus::NotConverged,
            x: None,
            c: None,
            residual: None,
            diagnostics,
        });
    }

    let x_raw = InvariantMetric::new(best.y.iter().map(|v| v.exp()).collect())
        .expect("ascent iterates stay strictly positive");
    let x = x_raw.scaled(tensor_trace(sd, z, &x_raw));
    let ricci = ricci_coefficients(sd, &x);
    let zz = metric_inner(sd, z.coeffs(), z.coeffs(), &x);
    let c = metric_inner(sd, &ricci.coeffs, z.coeffs(), &x) / zz;
    let diff: Vec<f64> = (0..s).map(|i| ricci.coeffs[i] - c * z[i]).collect();
    let abs_residual = metric_norm(sd, &diff, &x);
    let r_norm = metric_norm(sd, &ricci.coeffs, &x);
    let residual = if r_norm > 0.0 { abs_residual / r_norm } else { abs_residual };

    // Coefficient-wise residual in the sup norm. The metric norm weights
    // block i by 1/x_i^2, so an iterate escaping toward a degenerate metric
    // can drive the metric-norm residual to zero while the equation stays
    // violated on the blown-up block; this unweighted check catches that.
    let coeff_scale = diff
        .iter()
        .zip(&ricci.coeffs)
        .zip(z.coeffs())
        .fold(0.0_f64, |m, ((_, &r), &zi)| m.max(r.abs()).max((c * zi).abs()));
    let coeff_max = diff.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let coeff_residual = if coeff_scale > 0.0 { coeff_max / coeff_scale } else { coeff_max };

    diagnostics.projected_gradient_norm = Some(abs_residual);
    diagnostics.scalar_value = Some(scalar_curvature(sd, &x));

    let genuine_critical_point = best.converged && coeff_residual <= RESIDUAL_TOL;
    let status = if genuine_critical_point && c > 0.0 && residual <= RESIDUAL_TOL {
        SolveStatus::Solved
    } else if genuine_critical_point && c <= 0.0 {
        diagnostics.note = Some(format!(
            "certified critical point with nonpositive multiplier c = {c:e}: no solution with c > 0 at this critical point"
        ));
        SolveStatus::NoSolution
    } else {
        if best.converged && coeff_residual > RESIDUAL_TOL {
            diagnostics.note = Some(
                "gradient seminorm vanished but the block residuals did not: the iterate escapes toward a degenerate metric"
                    .into(),
            );
        }
        SolveStatus::NotConverged
    };

    Ok(SolveResult {
        status,
        x: Some(x),
        c: Some(c),
        residual: Some(residual),
        diagnostics,
    })
}

/// One row of an existence scan over the ray `z = (cos t, sin t)`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub z1: f64,
    pub z2: f64,
    pub exists: bool,
    pub c: Option<f64>,
    pub ratio: Option<f64>,
}

/// Maps the cone of prescribable tensors for a two-summand space by running
/// the closed form along `resolution` rays between `(1, 0)` and `(0, 1)`.
pub fn scan_existence(sd: &StructureData, resolution: usize) -> Result<Vec<ScanRow>, SolveError> {
    if resolution < 2 {
        return Err(SolveError::InvalidOptions(format!(
            "scan resolution {resolution} must be at least 2"
        )));
    }
    let mut rows = Vec::with_capacity(resolution);
    for j in 0..resolution {
        let theta = std::f64::consts::FRAC_PI_2 * j as f64 / (resolution - 1) as f64;
        // exact endpoints
        let (z1, z2) = if j == 0 {
            (1.0, 0.0)
        } else if j == resolution - 1 {
            (0.0, 1.0)
        } else {
            (theta.cos(), theta.sin())
        };
        let z = InvariantTensor::new(vec![z1, z2]).expect("ray tensors are valid");
        let result = solve_two_summand(sd, &z)?;
        let exists = result.status == SolveStatus::Solved;
        let ratio = result.x.as_ref().map(|x| x[0] / x[1]);
        rows.push(ScanRow { theta, z1, z2, exists, c: result.c, ratio: if exists { ratio } else { None } });
    }
    Ok(rows)
}
