//! Acceptance gate: every release criterion at its stated tolerance.
//!
//! Each test prints one `PASS`/`FAIL` line (visible with `--nocapture`).
//! Run with `cargo test -p ricci-homog-cli --test acceptance`.

use ricci_homog::bounds::{estimate_s_bound, estimate_scal_bound, search_box, tau_values};
use ricci_homog::curvature::{ricci_coefficients, scalar_curvature, scalar_gradient, tensor_trace};
use ricci_homog::data::{casimir_residual, derive_structure, validate_table};
use ricci_homog::io;
use ricci_homog::solver::{solve_general, solve_two_summand, verify_solution, SolveOptions, SolveStatus};
use ricci_homog::testkit::{
    central_difference_gradient, random_metric, random_structure, two_summand_instance, TestRng,
};
use ricci_homog::{InvariantMetric, InvariantTensor, LieAlgebraTable};
use std::panic::AssertUnwindSafe;
use std::path::PathBuf;

fn criterion(number: u32, name: &str, body: impl FnOnce()) {
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance {number} ({name}): PASS"),
        Err(payload) => {
            println!("acceptance {number} ({name}): FAIL");
            std::panic::resume_unwind(payload);
        }
    }
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn bundled_tables() -> Vec<(String, LieAlgebraTable)> {
    ["torus3", "s2xs2", "su3_flag", "su3_flag_grouped", "su3_su2_sphere"]
        .iter()
        .map(|name| {
            let path = data_dir().join(format!("{name}.table.json"));
            (name.to_string(), io::load_table(&path).expect("bundled table loads"))
        })
        .collect()
}

#[test]
fn acceptance_1_gradient_identity() {
    criterion(1, "gradient identity suite", || {
        let mut rng = TestRng::new(0x01);
        for trial in 0..500 {
            let s = 2 + trial % 5;
            let sd = random_structure(&mut rng, s, false);
            let x = random_metric(&mut rng, s, 0.1, 10.0);
            let grad = scalar_gradient(&sd, &x);
            let fd = central_difference_gradient(
                |coeffs| scalar_curvature(&sd, &InvariantMetric::new(coeffs.to_vec()).unwrap()),
                x.coeffs(),
                1e-6,
            );
            for j in 0..s {
                let rel = (grad[j] - fd[j]).abs() / grad[j].abs().max(1e-12);
                assert!(rel < 1e-6, "trial {trial}, coordinate {j}: relative error {rel:e}");
            }
            let s_val = scalar_curvature(&sd, &x);
            let euler: f64 = (0..s).map(|j| x[j] * grad[j]).sum::<f64>() + s_val;
            assert!(
                euler.abs() <= 1e-12 * s_val.abs().max(1.0),
                "trial {trial}: Euler identity residual {euler:e}"
            );
        }
    });
}

#[test]
fn acceptance_2_ricci_consistency() {
    criterion(2, "Ricci consistency", || {
        // two-summand block equations written out directly
        let mut rng = TestRng::new(0x02);
        for trial in 0..200 {
            let (sd, _) = two_summand_instance(&mut rng, trial % 2 == 0);
            let x = random_metric(&mut rng, 2, 0.1, 10.0);
            let ricci = ricci_coefficients(&sd, &x);
            let (d1, d2) = (sd.dims[0] as f64, sd.dims[1] as f64);
            let (g111, g221, g222) = (sd.gamma(0, 0, 0), sd.gamma(1, 1, 0), sd.gamma(1, 1, 1));
            let r1 = sd.killing[0] / 2.0 - g111 / (4.0 * d1) - g221 / (2.0 * d1)
                + g221 * x[0] * x[0] / (4.0 * d1 * x[1] * x[1]);
            let r2 = sd.killing[1] / 2.0 - g222 / (4.0 * d2) - g221 * x[0] / (2.0 * d2 * x[1]);
            for (got, want) in ricci.coeffs.iter().zip([r1, r2]) {
                let err = (got - want).abs() / want.abs().max(1.0);
                assert!(err <= 1e-12, "trial {trial}: block equation mismatch {err:e}");
            }
        }
        // trace identity for all summand counts
        let mut rng = TestRng::new(0x22);
        for trial in 0..200 {
            let s = 2 + trial % 5;
            let sd = random_structure(&mut rng, s, false);
            let x = random_metric(&mut rng, s, 0.1, 10.0);
            let ricci = ricci_coefficients(&sd, &x);
            let s_val = scalar_curvature(&sd, &x);
            let trace: f64 = (0..s).map(|i| sd.dims[i] as f64 * ricci.coeffs[i] / x[i]).sum();
            assert!(
                (trace - s_val).abs() <= 1e-12 * s_val.abs().max(1.0),
                "trial {trial}: trace identity residual {:e}",
                trace - s_val
            );
        }
    });
}

#[test]
fn acceptance_3_closed_form_correctness() {
    criterion(3, "closed-form correctness", || {
        let mut rng = TestRng::new(0x03);
        for trial in 0..100 {
            let (sd, z) = two_summand_instance(&mut rng, true);
            let result = solve_two_summand(&sd, &z).expect("closed form runs");
            assert_eq!(result.status, SolveStatus::Solved, "trial {trial}");
            let c = result.c.unwrap();
            let x = result.x.unwrap();
            assert!(c > 0.0, "trial {trial}: c = {c}");
            assert!(
                result.residual.unwrap() < 1e-12,
                "trial {trial}: residual {:e}",
                result.residual.unwrap()
            );
            // uniqueness up to scaling: the rescaled metric solves with the
            // same multiplier and the same coefficient ratio
            let lambda = rng.range(0.1, 10.0);
            let scaled = x.scaled(lambda);
            let ratio = x[0] / x[1];
            let scaled_ratio = scaled[0] / scaled[1];
            assert!((scaled_ratio - ratio).abs() <= 1e-12 * ratio.abs());
            let report = verify_solution(&sd, &z, &scaled, c);
            assert!(report.residual < 1e-12, "trial {trial}: scaled residual {:e}", report.residual);
            // and re-solving is reproducible bit for bit
            let again = solve_two_summand(&sd, &z).unwrap();
            assert_eq!(again.c, result.c);
            assert_eq!(again.x.unwrap().coeffs(), x.coeffs());
        }
        for trial in 0..100 {
            let (sd, z) = two_summand_instance(&mut rng, false);
            let result = solve_two_summand(&sd, &z).expect("closed form runs");
            assert_eq!(result.status, SolveStatus::NoSolution, "trial {trial}");
        }
    });
}

#[test]
fn acceptance_4_oracle_equivalence() {
    criterion(4, "general solver agrees with the closed form", || {
        let mut rng = TestRng::new(0x03); // the instances of criterion 3
        let opts = SolveOptions { tol: 1e-11, max_iter: 5_000, starts: 4, ..Default::default() };
        for trial in 0..100 {
            let (sd, z) = two_summand_instance(&mut rng, true);
            let closed = solve_two_summand(&sd, &z).unwrap();
            rng.range(0.1, 10.0); // keep the stream aligned with criterion 3
            let general = solve_general(&sd, &z, &opts).unwrap();
            assert_eq!(general.status, SolveStatus::Solved, "trial {trial}");
            let (cc, cg) = (closed.c.unwrap(), general.c.unwrap());
            assert!(
                (cg - cc).abs() <= 1e-6 * cc.abs(),
                "trial {trial}: c mismatch {cg} vs {cc}"
            );
            let (xc, xg) = (closed.x.unwrap(), general.x.unwrap());
            let (rc, rg) = (xc[0] / xc[1], xg[0] / xg[1]);
            assert!(
                (rg - rc).abs() <= 1e-6 * rc.abs(),
                "trial {trial}: ratio mismatch {rg} vs {rc}"
            );
        }
        let lean = SolveOptions { tol: 1e-11, max_iter: 1_500, starts: 4, ..Default::default() };
        for trial in 0..100 {
            let (sd, z) = two_summand_instance(&mut rng, false);
            let closed = solve_two_summand(&sd, &z).unwrap();
            assert_eq!(closed.status, SolveStatus::NoSolution);
            let general = solve_general(&sd, &z, &lean).unwrap();
            assert_ne!(
                general.status,
                SolveStatus::Solved,
                "trial {trial}: general solver claimed an impossible instance"
            );
        }
    });
}

#[test]
fn acceptance_5_estimate_inequalities_and_box() {
    criterion(5, "estimate inequalities and box certificate", || {
        let mut rng = TestRng::new(0x05);
        for s in 2..=6 {
            let sd = random_structure(&mut rng, s, true);
            // one summand with zero prescribed coefficient keeps that
            // coordinate free on the trace-one surface
            let mut z_coeffs: Vec<f64> = (0..s).map(|_| rng.range(0.05, 2.0)).collect();
            z_coeffs[0] = 0.0;
            let z = InvariantTensor::new(z_coeffs).unwrap();
            let (tau1, tau2) = tau_values(&sd, &z);

            for trial in 0..2000 {
                let mut coeffs: Vec<f64> = (0..s).map(|_| rng.log_range(1e-3, 1e3)).collect();
                coeffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let x = InvariantMetric::new(coeffs.clone()).unwrap();
                let s_val = scalar_curvature(&sd, &x);
                let first = estimate_s_bound(&sd, &x).unwrap();
                assert!(
                    s_val <= first + 1e-12 * first.abs().max(1.0),
                    "s = {s}, trial {trial}: S = {s_val} exceeds first bound {first}"
                );

                // rescale into the tau-feasible range (always possible since
                // tau2 <= tau1 and the coefficients are sorted)
                let lam = rng.log_range(tau2 / coeffs[s - 1], tau1 / coeffs[0]);
                let xf = x.scaled(lam);
                let s_val = scalar_curvature(&sd, &xf);
                let second = estimate_scal_bound(&sd, &xf, tau1, tau2).unwrap();
                assert!(
                    s_val <= second + 1e-12 * second.abs().max(1.0),
                    "s = {s}, trial {trial}: S = {s_val} exceeds second bound {second}"
                );
            }
        }

        // box certificate on instances whose box stays representable
        let mut rng = TestRng::new(0x55);
        let mut certified = 0usize;
        for s in [2usize, 2, 3, 3, 4] {
            let sd = random_structure(&mut rng, s, true);
            let mut z_coeffs: Vec<f64> = (0..s).map(|_| rng.range(0.05, 2.0)).collect();
            z_coeffs[0] = 0.0;
            let z = InvariantTensor::new(z_coeffs).unwrap();
            let report = search_box(&sd, &z).unwrap();
            assert!(report.maximal && report.u.is_finite() && report.v.is_finite());
            assert!(report.u <= report.v);
            let j_star = (0..s)
                .max_by(|&a, &b| {
                    let wa = sd.dims[a] as f64 * z[a];
                    wa.partial_cmp(&(sd.dims[b] as f64 * z[b])).unwrap()
                })
                .unwrap();
            // trace-one samples with one coordinate forced outside the box:
            // block 0 carries no trace weight, the j_star coordinate absorbs
            // the remainder
            for trial in 0..200 {
                let low_side = trial % 2 == 0;
                let mut coeffs = vec![0.0; s];
                coeffs[0] = if low_side {
                    report.u * rng.range(0.1, 0.9)
                } else {
                    report.v * rng.range(1.5, 3.0)
                };
                let mut remainder = 1.0;
                for i in 1..s {
                    if i == j_star {
                        continue;
                    }
                    coeffs[i] = 2.0 * s as f64 * sd.dims[i] as f64 * z[i];
                    remainder -= sd.dims[i] as f64 * z[i] / coeffs[i];
                }
                coeffs[j_star] = sd.dims[j_star] as f64 * z[j_star] / remainder;
                let x = InvariantMetric::new(coeffs).unwrap();
                let trace = tensor_trace(&sd, &z, &x);
                assert!((trace - 1.0).abs() < 1e-9, "sample is on the surface");
                let s_val = scalar_curvature(&sd, &x);
                assert!(
                    s_val < 0.0,
                    "s = {s}, trial {trial}: S = {s_val} outside the box [{:e}, {:e}]",
                    report.u,
                    report.v
                );
                certified += 1;
            }
        }
        assert_eq!(certified, 1000);
    });
}

#[test]
fn acceptance_6_flag_manifold_solution() {
    criterion(6, "flag-manifold exact solution", || {
        let table = io::load_table(data_dir().join("su3_flag.table.json")).unwrap();
        let sd = derive_structure(&table).unwrap();
        let z = InvariantTensor::new(vec![1.0 / 6.0; 3]).unwrap();
        let opts = SolveOptions { tol: 1e-11, starts: 8, ..Default::default() };
        let result = solve_general(&sd, &z, &opts).unwrap();
        assert_eq!(result.status, SolveStatus::Solved);
        let x = result.x.unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let dev = (x[i] / x[k] - 1.0).abs();
                assert!(dev < 1e-8, "ratio deviation {dev:e}");
            }
        }
        assert!(result.residual.unwrap() < 1e-10, "residual {:e}", result.residual.unwrap());
    });
}

#[test]
fn acceptance_7_structure_derivation() {
    criterion(7, "structure derivation on bundled tables", || {
        for (name, table) in bundled_tables() {
            assert!(validate_table(&table).is_valid(), "{name} fails validation");
            let n = table.dim;
            let mut antisym: f64 = 0.0;
            let mut invariance: f64 = 0.0;
            let mut jacobi: f64 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    for e in 0..n {
                        antisym = antisym.max((table.bracket(a, b, e) + table.bracket(b, a, e)).abs());
                        invariance =
                            invariance.max((table.bracket(a, b, e) + table.bracket(a, e, b)).abs());
                        for r in 0..n {
                            let mut sum = 0.0;
                            for q in 0..n {
                                sum += table.bracket(a, b, q) * table.bracket(q, e, r)
                                    + table.bracket(b, e, q) * table.bracket(q, a, r)
                                    + table.bracket(e, a, q) * table.bracket(q, b, r);
                            }
                            jacobi = jacobi.max(sum.abs());
                        }
                    }
                }
            }
            assert!(antisym < 1e-9, "{name}: antisymmetry residual {antisym:e}");
            assert!(invariance < 1e-9, "{name}: invariance residual {invariance:e}");
            assert!(jacobi < 1e-9, "{name}: Jacobi residual {jacobi:e}");

            let sd = derive_structure(&table).unwrap_or_else(|e| panic!("{name}: {e}"));
            let residuals = casimir_residual(&sd).expect("derived data carries zeta");
            for (i, r) in residuals.iter().enumerate() {
                let scale = (sd.dims[i] as f64 * sd.killing[i]).abs().max(1.0);
                assert!(
                    r.abs() < 1e-10 * scale,
                    "{name}: Casimir residual {r:e} on summand {i}"
                );
            }
        }
        // deliberately mis-partitioned table must be refused
        match derive_structure(&ricci_homog::catalog::mispartitioned_su2_sum()) {
            Err(ricci_homog::DeriveError::NonProportional { .. }) => {}
            other => panic!("expected NonProportional, got {other:?}"),
        }
    });
}

#[test]
fn acceptance_8_cli_determinism() {
    criterion(8, "byte-identical solver output", || {
        let dir = tempfile::tempdir().unwrap();
        let table = data_dir().join("su3_flag.table.json");
        let sd_path = dir.path().join("flag.sd.json");
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_ricci-homog"))
            .args(["derive", table.to_str().unwrap(), "--out", sd_path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        let z_path = dir.path().join("z.json");
        std::fs::write(&z_path, "{\"z\": [0.3, 0.4, 0.3]}\n").unwrap();

        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = std::process::Command::new(env!("CARGO_BIN_EXE_ricci-homog"))
                .args([
                    "solve",
                    sd_path.to_str().unwrap(),
                    z_path.to_str().unwrap(),
                    "--seed",
                    "20240917",
                    "--starts",
                    "8",
                ])
                .output()
                .unwrap();
            outputs.push(out.stdout);
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "solver output must be byte-identical");
    });
}
