//! Constants of the compactness argument and the search box that confines
//! the maximizer of the scalar curvature on the trace-one surface.
//!
//! The chain: the maximality constant `a` certifies that every proper subset
//! of summands has a bracket exiting it; the sorted-coefficient estimate
//! bounds `S` by the Killing part minus a ladder of ratio terms; splitting
//! the ladder and minimizing each half inductively gives exponents in the
//! smallest and largest coefficient; finally a one-variable supremum turns
//! those into coefficient bounds `[u, v]` outside of which `S < 0` on the
//! trace-one surface.

use crate::curvature::metric_inner;
use crate::data::{InvariantMetric, InvariantTensor, StructureData};
use serde::Serialize;
use thiserror::Error;

/// Subset enumeration guard: 2^s - 2 subsets.
pub const MAX_SUMMANDS_FOR_ENUMERATION: usize = 20;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("operation requires at least 2 summands, got {0}")]
    TooFewSummands(usize),
    #[error("subset enumeration limited to {MAX_SUMMANDS_FOR_ENUMERATION} summands, got {0}")]
    SummandCountTooLarge(usize),
    #[error("maximality constant is zero: the search box is undefined")]
    NotMaximal,
    #[error("coefficients must be sorted ascending")]
    UnsortedInput,
}

/// All constants of the argument plus the resulting box.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    /// Maximality constant: min over proper subsets of the largest exiting
    /// triple product.
    pub a: f64,
    /// Strict upper bound for the Killing coefficients, `max_i b_i + 1`.
    pub b: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha: f64,
    pub alpha_tilde: f64,
    /// Coefficients below `u` on the trace-one surface force `S < 0`.
    pub u: f64,
    /// Coefficients above `v` on the trace-one surface force `S < 0`.
    pub v: f64,
    pub maximal: bool,
}

/// `a = min` over nonempty proper subsets `I` of `max { gamma[i][k][l] :
/// i, k in I, l not in I }`. Positive exactly when no subset spans a
/// subalgebra together with the isotropy part.
pub fn maximality_constant(sd: &StructureData) -> Result<f64, BoundsError> {
    let s = sd.summand_count();
    if s < 2 {
        return Err(BoundsError::TooFewSummands(s));
    }
    if s > MAX_SUMMANDS_FOR_ENUMERATION {
        return Err(BoundsError::SummandCountTooLarge(s));
    }
    let mut a = f64::INFINITY;
    for mask in 1u32..((1u32 << s) - 1) {
        let mut subset_max = 0.0_f64;
        'scan: for i in 0..s {
            if mask >> i & 1 == 0 {
                continue;
            }
            for k in 0..s {
                if mask >> k & 1 == 0 {
                    continue;
                }
                for l in 0..s {
                    if mask >> l & 1 == 1 {
                        continue;
                    }
                    subset_max = subset_max.max(sd.gamma(i, k, l));
                    if subset_max >= a {
                        // this subset can no longer lower the minimum
                        break 'scan;
                    }
                }
            }
        }
        a = a.min(subset_max);
    }
    Ok(a)
}

/// `b = max_i b_i + 1`, strictly above every Killing coefficient.
pub fn killing_upper_bound(sd: &StructureData) -> f64 {
    sd.killing.iter().fold(0.0_f64, |m, &v| m.max(v)) + 1.0
}

/// `tau1 = n * max_i z_i` and `tau2 = (1/n) * sum_i d_i z_i`. On the
/// trace-one surface the smallest coefficient is at most `tau1` and the
/// largest is at least `tau2`.
pub fn tau_values(sd: &StructureData, z: &InvariantTensor) -> (f64, f64) {
    let n = sd.dimension() as f64;
    let zmax = z.coeffs().iter().fold(0.0_f64, |m, &v| m.max(v));
    let weighted: f64 = (0..sd.summand_count()).map(|i| sd.dims[i] as f64 * z[i]).sum();
    (n * zmax, weighted / n)
}

/// Iterates the two induction recursions from their base cases
/// `alpha1(2) = 1/tau1^2`, `alpha2(2) = tau2` up to `s` summands.
pub fn alpha_recursions(s: usize, tau1: f64, tau2: f64) -> (f64, f64) {
    assert!(s >= 2, "recursions start at two summands");
    let mut a1 = 1.0 / (tau1 * tau1);
    let mut a2 = tau2;
    for m in 2..s {
        let two_m = (1u64 << m) as f64;
        let e = (two_m - 2.0) / (two_m - 1.0);
        a1 = a1.powf(e) * ((two_m - 2.0).powf(1.0 / (two_m - 1.0)) + (two_m - 2.0).powf(-e));
        let half = (1u64 << (m - 1)) as f64;
        let q = (half - 1.0) / half;
        a2 = a2.powf((half - 1.0) / (two_m - 1.0))
            * (q.powf(-(half - 1.0) / (two_m - 1.0)) + q.powf(half / (two_m - 1.0)));
    }
    (a1, a2)
}

/// Assembles the full report. Fails with [`BoundsError::NotMaximal`] when
/// the maximality constant vanishes; the box does not exist then and the
/// solver falls back to heuristic seeding.
pub fn search_box(sd: &StructureData, z: &InvariantTensor) -> Result<BoundsReport, BoundsError> {
    let s = sd.summand_count();
    let a = maximality_constant(sd)?;
    let b = killing_upper_bound(sd);
    let (tau1, tau2) = tau_values(sd, z);
    if a <= 0.0 {
        return Err(BoundsError::NotMaximal);
    }
    let (alpha1, alpha2) = alpha_recursions(s, tau1, tau2);
    let alpha = a / (8.0 * (s as f64 - 1.0)) * alpha1.min(alpha2);
    let n = sd.dimension() as f64;
    let half = (1u64 << (s - 1)) as f64;
    let p = half / (half - 1.0);
    // exact supremum of t -> bn/(2t) - alpha t^{-p} over t > 0
    let t_star = (2.0 * alpha * p / (b * n)).powf(1.0 / (p - 1.0));
    let alpha_tilde = b * n / (2.0 * t_star) - alpha * t_star.powf(-p);
    let u = (2.0 * alpha / (b * n)).powf(half - 1.0);
    let v = (alpha_tilde / alpha).powf(half - 1.0);
    Ok(BoundsReport {
        a,
        b,
        tau1,
        tau2,
        alpha1,
        alpha2,
        alpha,
        alpha_tilde,
        u,
        v,
        maximal: true,
    })
}

fn require_sorted(x: &InvariantMetric) -> Result<(), BoundsError> {
    if x.coeffs().windows(2).any(|w| w[0] > w[1]) {
        return Err(BoundsError::UnsortedInput);
    }
    Ok(())
}

/// Right-hand side of the sorted-coefficient estimate:
/// `1/2 sum d_i b_i / x_i - a/(4(s-1)) sum_{i>=2} x_i / x_{i-1}^2`.
pub fn estimate_s_bound(sd: &StructureData, x_sorted: &InvariantMetric) -> Result<f64, BoundsError> {
    require_sorted(x_sorted)?;
    let s = sd.summand_count();
    let a = maximality_constant(sd)?;
    let killing: f64 =
        (0..s).map(|i| sd.dims[i] as f64 * sd.killing[i] / x_sorted[i]).sum::<f64>() * 0.5;
    let ladder: f64 = (1..s)
        .map(|i| x_sorted[i] / (x_sorted[i - 1] * x_sorted[i - 1]))
        .sum();
    Ok(killing - a / (4.0 * (s as f64 - 1.0)) * ladder)
}

/// Right-hand side of the box estimate,
/// `bn/(2 x_1) - alpha (x_1^{-p} + x_s^{1/(2^{s-1}-1)})`. Valid as a bound
/// when `x_1 <= tau1` and `x_s >= tau2`; the caller ensures that.
pub fn estimate_scal_bound(
    sd: &StructureData,
    x_sorted: &InvariantMetric,
    tau1: f64,
    tau2: f64,
) -> Result<f64, BoundsError> {
    require_sorted(x_sorted)?;
    let s = sd.summand_count();
    let a = maximality_constant(sd)?;
    let (alpha1, alpha2) = alpha_recursions(s, tau1, tau2);
    let alpha = a / (8.0 * (s as f64 - 1.0)) * alpha1.min(alpha2);
    let n = sd.dimension() as f64;
    let b = killing_upper_bound(sd);
    let half = (1u64 << (s - 1)) as f64;
    let p = half / (half - 1.0);
    let x1 = x_sorted[0];
    let xs = x_sorted[x_sorted.len() - 1];
    Ok(b * n / (2.0 * x1) - alpha * (x1.powf(-p) + xs.powf(1.0 / (half - 1.0))))
}

/// Norm of the projection of the scalar-curvature gradient onto the tangent
/// space of the trace-one surface at `x`, in the metric inner product. Zero
/// exactly at the constrained critical points.
pub fn projected_gradient_norm(
    sd: &StructureData,
    z: &InvariantTensor,
    x: &InvariantMetric,
) -> f64 {
    let ricci = crate::curvature::ricci_coefficients(sd, x);
    let zz = metric_inner(sd, z.coeffs(), z.coeffs(), x);
    let c = metric_inner(sd, ricci.coeffs.as_slice(), z.coeffs(), x) / zz;
    let diff: Vec<f64> = (0..sd.summand_count()).map(|i| ricci.coeffs[i] - c * z[i]).collect();
    crate::curvature::metric_norm(sd, &diff, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::data::{derive_structure, Gamma};
    use approx::assert_relative_eq;

    fn two_summand(g112: f64, g221: f64) -> StructureData {
        let mut gamma = Gamma::zeros(2);
        gamma.set(0, 0, 1, g112);
        gamma.set(1, 1, 0, g221);
        StructureData::new("b2", vec![2, 2], vec![1.0, 1.0], gamma, None).unwrap()
    }

    #[test]
    fn maximality_two_summands() {
        let sd = two_summand(0.0, 0.4);
        assert_eq!(maximality_constant(&sd).unwrap(), 0.0);
        let sd = two_summand(0.2, 0.4);
        assert_relative_eq!(maximality_constant(&sd).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn flag_manifold_is_not_maximal() {
        // the torus sits inside an intermediate u(2): singleton subsets have
        // no exiting bracket, so the constant vanishes
        let sd = derive_structure(&catalog::su3_flag()).unwrap();
        assert_eq!(maximality_constant(&sd).unwrap(), 0.0);
        let z = InvariantTensor::new(vec![1.0; 3]).unwrap();
        assert!(matches!(search_box(&sd, &z), Err(BoundsError::NotMaximal)));
    }

    #[test]
    fn maximality_is_permutation_invariant() {
        let mut gamma = Gamma::zeros(3);
        gamma.set(0, 0, 1, 0.3);
        gamma.set(1, 1, 2, 0.8);
        gamma.set(0, 1, 2, 0.1);
        gamma.set(2, 2, 0, 0.5);
        let sd = StructureData::new("p", vec![1, 2, 3], vec![1.0; 3], gamma, None).unwrap();
        let a = maximality_constant(&sd).unwrap();

        // relabel summands by the cycle 0 -> 1 -> 2 -> 0
        let perm = [1usize, 2, 0];
        let mut gamma_p = Gamma::zeros(3);
        for i in 0..3 {
            for k in i..3 {
                for l in k..3 {
                    gamma_p.set(perm[i], perm[k], perm[l], sd.gamma(i, k, l));
                }
            }
        }
        let dims_p: Vec<usize> = (0..3).map(|i| sd.dims[perm.iter().position(|&p| p == i).unwrap()]).collect();
        let sd_p = StructureData::new("p2", dims_p, vec![1.0; 3], gamma_p, None).unwrap();
        assert_relative_eq!(maximality_constant(&sd_p).unwrap(), a, epsilon = 1e-15);
    }

    #[test]
    fn enumeration_guard_rejects_large_summand_counts() {
        let s = MAX_SUMMANDS_FOR_ENUMERATION + 1;
        let sd = StructureData::new("big", vec![1; s], vec![0.0; s], Gamma::zeros(s), None).unwrap();
        assert!(matches!(
            maximality_constant(&sd),
            Err(BoundsError::SummandCountTooLarge(_))
        ));
        let sd = StructureData::new("one", vec![3], vec![1.0], Gamma::zeros(1), None).unwrap();
        assert!(matches!(maximality_constant(&sd), Err(BoundsError::TooFewSummands(1))));
    }

    #[test]
    fn killing_bound_examples() {
        let sd = StructureData::new("kb", vec![1, 1, 1], vec![1.0; 3], Gamma::zeros(3), None).unwrap();
        assert_relative_eq!(killing_upper_bound(&sd), 2.0, epsilon = 1e-15);
        let sd = StructureData::new("kb0", vec![2, 1], vec![0.0, 0.0], Gamma::zeros(2), None).unwrap();
        assert_relative_eq!(killing_upper_bound(&sd), 1.0, epsilon = 1e-15);
        let flag = derive_structure(&catalog::su3_flag()).unwrap();
        assert_relative_eq!(killing_upper_bound(&flag), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn tau_examples() {
        let sd = StructureData::new("t", vec![1, 2], vec![0.0; 2], Gamma::zeros(2), None).unwrap();
        let z = InvariantTensor::new(vec![1.0, 1.0]).unwrap();
        let (t1, t2) = tau_values(&sd, &z);
        assert_relative_eq!(t1, 3.0, epsilon = 1e-15);
        assert_relative_eq!(t2, 1.0, epsilon = 1e-15);

        let sd = StructureData::new("t2", vec![2, 2, 2], vec![0.0; 3], Gamma::zeros(3), None).unwrap();
        let z = InvariantTensor::new(vec![1.0, 0.0, 0.0]).unwrap();
        let (t1, t2) = tau_values(&sd, &z);
        assert_relative_eq!(t1, 6.0, epsilon = 1e-15);
        assert_relative_eq!(t2, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn tau2_never_exceeds_tau1() {
        let mut state = 42u64;
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545f4914f6cdd1d) >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let s = 2 + (next() * 5.0) as usize;
            let dims: Vec<usize> = (0..s).map(|_| 1 + (next() * 4.0) as usize).collect();
            let sd = StructureData::new("r", dims, vec![0.0; s], Gamma::zeros(s), None).unwrap();
            let z = InvariantTensor::new((0..s).map(|_| next() * 3.0 + 1e-6).collect()).unwrap();
            let (t1, t2) = tau_values(&sd, &z);
            assert!(t2 <= t1 + 1e-15);
        }
    }

    #[test]
    fn alpha_recursion_base_and_next_step() {
        let (a1, a2) = alpha_recursions(2, 1.0, 1.0);
        assert_relative_eq!(a1, 1.0, epsilon = 1e-15);
        assert_relative_eq!(a2, 1.0, epsilon = 1e-15);

        let expected = 2f64.powf(1.0 / 3.0) + 2f64.powf(-2.0 / 3.0);
        let (a1, a2) = alpha_recursions(3, 1.0, 1.0);
        assert_relative_eq!(a1, expected, epsilon = 1e-14);
        assert_relative_eq!(a2, expected, epsilon = 1e-14);
    }

    #[test]
    fn alpha_recursions_stay_finite_up_to_twelve() {
        for s in 2..=12 {
            let (a1, a2) = alpha_recursions(s, 0.3, 2.7);
            assert!(a1.is_finite() && a1 > 0.0, "alpha1({s}) = {a1}");
            assert!(a2.is_finite() && a2 > 0.0, "alpha2({s}) = {a2}");
        }
    }

    #[test]
    fn alpha_tilde_matches_dense_scan() {
        let sd = two_summand(0.2, 0.4);
        let z = InvariantTensor::new(vec![0.8, 0.5]).unwrap();
        let report = search_box(&sd, &z).unwrap();
        // s = 2: the supremum has the closed form (bn)^2 / (16 alpha)
        let n = sd.dimension() as f64;
        assert_relative_eq!(
            report.alpha_tilde,
            (report.b * n).powi(2) / (16.0 * report.alpha),
            max_relative = 1e-13
        );
        let mut best = f64::NEG_INFINITY;
        for j in 0..200_000 {
            let t = 10f64.powf(-8.0 + 16.0 * j as f64 / 199_999.0);
            best = best.max(report.b * n / (2.0 * t) - report.alpha * t.powf(-2.0));
        }
        assert!(best <= report.alpha_tilde * (1.0 + 1e-9));
        assert!(best >= report.alpha_tilde * (1.0 - 1e-6));
        assert!(report.u <= report.v);
    }

    #[test]
    fn gamma_free_data_collapses_first_bound_to_killing_term() {
        let sd = StructureData::new("g0", vec![1, 2], vec![1.0, 2.0], Gamma::zeros(2), None).unwrap();
        let x = InvariantMetric::new(vec![0.5, 3.0]).unwrap();
        let bound = estimate_s_bound(&sd, &x).unwrap();
        let s_val = crate::curvature::scalar_curvature(&sd, &x);
        assert_relative_eq!(bound, s_val, epsilon = 1e-14);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        let sd = two_summand(0.2, 0.4);
        let x = InvariantMetric::new(vec![2.0, 1.0]).unwrap();
        assert!(matches!(estimate_s_bound(&sd, &x), Err(BoundsError::UnsortedInput)));
        assert!(matches!(
            estimate_scal_bound(&sd, &x, 1.0, 1.0),
            Err(BoundsError::UnsortedInput)
        ));
    }

    #[test]
    fn estimates_dominate_scalar_curvature() {
        let mut state = 7u64;
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545f4914f6cdd1d) >> 11) as f64 / (1u64 << 53) as f64
        };
        for s in [2usize, 3, 5] {
            let dims: Vec<usize> = (0..s).map(|_| 1 + (next() * 3.0) as usize).collect();
            let mut gamma = Gamma::zeros(s);
            for i in 0..s {
                for k in i..s {
                    for l in k..s {
                        gamma.set(i, k, l, 0.05 + 1.45 * next());
                    }
                }
            }
            let zeta: Vec<f64> = (0..s).map(|_| next()).collect();
            let killing: Vec<f64> = (0..s)
                .map(|i| 2.0 * zeta[i] + gamma.row_sum(i) / dims[i] as f64)
                .collect();
            let sd = StructureData::new("est", dims, killing, gamma, Some(zeta)).unwrap();
            let z = InvariantTensor::new((0..s).map(|_| 0.05 + 2.0 * next()).collect()).unwrap();
            let (t1, t2) = tau_values(&sd, &z);
            for _ in 0..500 {
                let mut xs: Vec<f64> = (0..s).map(|_| 10f64.powf(-3.0 + 6.0 * next())).collect();
                xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
                let x = InvariantMetric::new(xs.clone()).unwrap();
                let s_val = crate::curvature::scalar_curvature(&sd, &x);
                assert!(s_val <= estimate_s_bound(&sd, &x).unwrap() + 1e-12);

                // rescale into tau-feasible range
                let lo = t2 / xs[s - 1];
                let hi = t1 / xs[0];
                if lo <= hi {
                    let lam = lo * (hi / lo).powf(next());
                    let xf = x.scaled(lam);
                    let s_val = crate::curvature::scalar_curvature(&sd, &xf);
                    let bound = estimate_scal_bound(&sd, &xf, t1, t2).unwrap();
                    assert!(s_val <= bound + 1e-12, "S = {s_val}, bound = {bound}");
                }
            }
        }
    }
}
