//! Scalar curvature, its gradient, and Ricci coefficients of diagonal
//! invariant metrics.
//!
//! The scalar curvature of the metric with coefficients `x` is
//!
//! ```text
//! S(x) = 1/2 sum_i d_i b_i / x_i  -  1/4 sum_{i,k,l} gamma[i][k][l] x_l / (x_i x_k)
//! ```
//!
//! homogeneous of degree -1. The Ricci coefficients are obtained from the
//! first-variation identity `dS(h) = -<Ric, h>` for the metric inner product
//! on diagonal tensors, which gives `R_i = -(x_i^2 / d_i) dS/dx_i`. The
//! triple sum runs over the full index cube; summand counts are tiny.

use crate::data::{InvariantMetric, InvariantTensor, StructureData};

/// Ricci coefficients relative to the background product:
/// `Ric = sum_i coeffs[i] * Q restricted to the i-th summand`.
/// Invariant under rescaling of the metric.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciCoefficients {
    pub coeffs: Vec<f64>,
}

fn check_len(sd: &StructureData, len: usize, what: &str) {
    assert_eq!(
        sd.summand_count(),
        len,
        "{what} has {len} entries for {} summands",
        sd.summand_count()
    );
}

/// Scalar curvature `S(x)`.
pub fn scalar_curvature(sd: &StructureData, x: &InvariantMetric) -> f64 {
    check_len(sd, x.len(), "metric");
    let s = sd.summand_count();
    let mut killing_part = 0.0;
    for i in 0..s {
        killing_part += sd.dims[i] as f64 * sd.killing[i] / x[i];
    }
    let mut bracket_part = 0.0;
    for i in 0..s {
        for k in 0..s {
            for l in 0..s {
                bracket_part += sd.gamma(i, k, l) * x[l] / (x[i] * x[k]);
            }
        }
    }
    0.5 * killing_part - 0.25 * bracket_part
}

/// Analytic partial derivatives `dS/dx_j`.
pub fn scalar_gradient(sd: &StructureData, x: &InvariantMetric) -> Vec<f64> {
    check_len(sd, x.len(), "metric");
    let s = sd.summand_count();
    let mut grad = vec![0.0; s];
    for j in 0..s {
        let xj = x[j];
        let mut v = -(sd.dims[j] as f64) * sd.killing[j] / (2.0 * xj * xj);
        // j as the numerator index of the triple sum
        for i in 0..s {
            for k in 0..s {
                v -= 0.25 * sd.gamma(i, k, j) / (x[i] * x[k]);
            }
        }
        // j as either denominator index (both contribute equally)
        for k in 0..s {
            for l in 0..s {
                v += 0.5 * sd.gamma(j, k, l) * x[l] / (x[k] * xj * xj);
            }
        }
        grad[j] = v;
    }
    grad
}

/// Ricci coefficients via the variational identity.
pub fn ricci_coefficients(sd: &StructureData, x: &InvariantMetric) -> RicciCoefficients {
    let grad = scalar_gradient(sd, x);
    let coeffs = (0..sd.summand_count())
        .map(|j| -x[j] * x[j] / sd.dims[j] as f64 * grad[j])
        .collect();
    RicciCoefficients { coeffs }
}

/// Trace of the prescribed tensor with respect to the metric,
/// `sum_i d_i z_i / x_i`; homogeneous of degree -1 in `x`.
pub fn tensor_trace(sd: &StructureData, z: &InvariantTensor, x: &InvariantMetric) -> f64 {
    check_len(sd, z.len(), "tensor");
    check_len(sd, x.len(), "metric");
    (0..sd.summand_count()).map(|i| sd.dims[i] as f64 * z[i] / x[i]).sum()
}

/// Inner product induced by the metric on diagonal symmetric tensors:
/// `<A, B> = sum_i d_i A_i B_i / x_i^2`.
pub fn metric_inner(sd: &StructureData, a: &[f64], b: &[f64], x: &InvariantMetric) -> f64 {
    check_len(sd, a.len(), "first argument");
    check_len(sd, b.len(), "second argument");
    check_len(sd, x.len(), "metric");
    (0..sd.summand_count())
        .map(|i| sd.dims[i] as f64 * a[i] * b[i] / (x[i] * x[i]))
        .sum()
}

/// Norm of a diagonal tensor in the metric inner product.
pub fn metric_norm(sd: &StructureData, a: &[f64], x: &InvariantMetric) -> f64 {
    metric_inner(sd, a, a, x).sqrt()
}
