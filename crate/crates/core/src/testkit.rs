//! Deterministic instance generators and numerical oracles for test suites.
//!
//! Everything here is seeded and allocation-only: no global state, no
//! external randomness. Generated structure data always satisfies the
//! Casimir identity exactly, because the Killing coefficients are defined
//! through it.

use crate::data::{Gamma, InvariantMetric, InvariantTensor, StructureData};

/// Small splitmix64-based generator; good enough for test instances.
#[derive(Debug, Clone)]
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed ^ 0x6a09e667f3bcc909 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo * (hi / lo).powf(self.uniform())
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.uniform() * (hi - lo + 1) as f64) as usize
    }
}

/// Random structure data with `s` summands. With `dense_gamma` every triple
/// product is strictly positive, which makes the instance maximal.
pub fn random_structure(rng: &mut TestRng, s: usize, dense_gamma: bool) -> StructureData {
    let dims: Vec<usize> = (0..s).map(|_| rng.int(1, 4)).collect();
    let mut gamma = Gamma::zeros(s);
    for i in 0..s {
        for k in i..s {
            for l in k..s {
                if dense_gamma || rng.uniform() < 0.6 {
                    gamma.set(i, k, l, rng.range(0.05, 1.5));
                }
            }
        }
    }
    let zeta: Vec<f64> = (0..s).map(|_| rng.range(0.0, 1.0)).collect();
    let killing: Vec<f64> = (0..s)
        .map(|i| 2.0 * zeta[i] + gamma.row_sum(i) / dims[i] as f64)
        .collect();
    StructureData::new("random", dims, killing, gamma, Some(zeta)).unwrap()
}

/// Log-uniform metric coefficients in `[lo, hi]`.
pub fn random_metric(rng: &mut TestRng, s: usize, lo: f64, hi: f64) -> InvariantMetric {
    InvariantMetric::new((0..s).map(|_| rng.log_range(lo, hi)).collect()).unwrap()
}

/// Strictly positive tensor coefficients.
pub fn random_tensor(rng: &mut TestRng, s: usize) -> InvariantTensor {
    InvariantTensor::new((0..s).map(|_| rng.range(0.05, 2.0)).collect()).unwrap()
}

/// Random two-summand instance with an intermediate subalgebra shape
/// (`gamma[1][1][2] = 0`, `gamma[2][2][1] > 0`) and a tensor chosen on the
/// requested side of the existence inequality.
pub fn two_summand_instance(rng: &mut TestRng, condition_holds: bool) -> (StructureData, InvariantTensor) {
    let dims = vec![rng.int(1, 4), rng.int(1, 4)];
    let mut gamma = Gamma::zeros(2);
    gamma.set(0, 0, 0, rng.range(0.0, 1.0));
    gamma.set(1, 1, 0, rng.range(0.1, 1.0));
    gamma.set(1, 1, 1, rng.range(0.0, 1.0));
    // keep the right-hand coefficient positive so failing tensors exist
    let zeta = vec![rng.range(0.05, 1.0), rng.range(0.0, 1.0)];
    let killing: Vec<f64> = (0..2)
        .map(|i| 2.0 * zeta[i] + gamma.row_sum(i) / dims[i] as f64)
        .collect();
    let (d1, d2) = (dims[0] as f64, dims[1] as f64);
    let lhs_coeff = zeta[1] + gamma.get(1, 1, 1) / (4.0 * d2) + gamma.get(1, 1, 0) / d2;
    let rhs_coeff = zeta[0] + gamma.get(0, 0, 0) / (4.0 * d1);
    let boundary = lhs_coeff / rhs_coeff; // condition: z2/z1 < boundary
    let z = if condition_holds {
        if rng.uniform() < 0.15 {
            vec![1.0, 0.0]
        } else {
            vec![1.0, boundary * rng.range(0.05, 0.9)]
        }
    } else if rng.uniform() < 0.15 {
        vec![0.0, 1.0]
    } else {
        vec![1.0, boundary * rng.range(1.05, 3.0)]
    };
    let scale = rng.range(0.2, 5.0);
    let z: Vec<f64> = z.into_iter().map(|v| v * scale).collect();
    let sd = StructureData::new("two-summand", dims, killing, gamma, Some(zeta)).unwrap();
    (sd, InvariantTensor::new(z).unwrap())
}

/// Central finite-difference gradient with a relative step.
pub fn central_difference_gradient(
    f: impl Fn(&[f64]) -> f64,
    x: &[f64],
    rel_step: f64,
) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let h = rel_step * x[j].abs().max(rel_step);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            (f(&xp) - f(&xm)) / (2.0 * h)
        })
        .collect()
}
