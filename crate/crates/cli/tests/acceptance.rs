//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! `PASS` or `FAIL` line per criterion.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qcav_core::evolution::{propagator, reduced_cavity, reduced_qubit, uniform_grid};
use qcav_core::fockspace::{squeezed_state, FockCutoff, Operator, Space, SqueezedParams, StateVector, C64};
use qcav_core::gaussian::{
    branch_params, decoherence_series, displacement_curves, displacement_factor, revival_time, squeezing_curves,
    DEFAULT_ALPHAS,
};
use qcav_core::hamiltonians::Branch;
use qcav_core::oracle::{expansion_order, numeric_decoherence, BranchModel};
use qcav_core::physical::{DeskScale, SystemParams};
use qcav_core::protocol::{storage_grid, storage_map, transfer_curves, transfer_probability_analytic, STORAGE_POINTS};
use qcav_core::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cutoff(n: usize) -> FockCutoff {
    FockCutoff::new(n).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    check(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))?;
    Ok(elapsed)
}

fn qcav(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qcav"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("qcav {args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn report_value(report: &str, key: &str) -> Result<f64, String> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .and_then(|v| v.split_whitespace().next()?.parse().ok())
        .ok_or_else(|| format!("no numeric {key} in params output"))
}

fn relative(value: f64, target: f64, tol: f64, name: &str) -> Result<(), String> {
    check((value / target - 1.0).abs() <= tol, || {
        format!("{name} = {value:e}, expected {target:e} within {}%", tol * 100.0)
    })
}

fn device_arithmetic() -> Outcome {
    let start = Instant::now();
    let text = String::from_utf8(qcav(&["params"])?).map_err(|e| e.to_string())?;
    let elapsed = within_budget(start, Duration::from_secs(1))?;
    let field = report_value(&text, "field_amplitude")?;
    let phi0 = report_value(&text, "phi0")?;
    let n_g = report_value(&text, "resonant_gate_charge")?;
    let t_store = report_value(&text, "storage_time")?;
    relative(field, 7.52e-11, 0.02, "B")?;
    relative(phi0, 1.14e-5, 0.02, "phi0")?;
    check((n_g - 0.627).abs() <= 0.003, || format!("n_g* = {n_g}"))?;
    relative(t_store, 2.7e-6, 0.03, "storage time")?;
    Ok(format!(
        "B {field:.4e} T, phi0 {phi0:.4e}, n_g* {n_g:.4}, storage {t_store:.4e} s in {elapsed:.2?}"
    ))
}

fn transfer_fidelity() -> Outcome {
    let start = Instant::now();
    let p = DeskScale::storage()
        .params(FRAC_PI_2, cutoff(30))
        .map_err(|e| e.to_string())?;
    let grid = storage_grid(&p, STORAGE_POINTS).map_err(|e| e.to_string())?;
    let peak = transfer_probability_analytic(&p, grid[STORAGE_POINTS / 2]).map_err(|e| e.to_string())?;
    check((peak - 1.0).abs() <= 1e-9, || format!("P at storage time = {peak}"))?;
    let curves = transfer_curves(&p, &grid).map_err(|e| e.to_string())?;
    let diff = curves.max_abs_diff();
    check(diff <= 1e-4, || format!("numeric vs analytic differ by {diff:e}"))?;
    let map = storage_map(&p).map_err(|e| e.to_string())?;
    let worst = map.ground_fidelity.min(map.excited_fidelity);
    check(worst >= 1.0 - 1e-6, || format!("storage map fidelity {worst}"))?;
    let elapsed = within_budget(start, Duration::from_secs(10))?;
    Ok(format!(
        "P(pi/2eta) = {peak:.12}, max diff {diff:.2e} over {} points, map fidelity {worst:.10} in {elapsed:.2?}",
        grid.len()
    ))
}

fn bogoliubov_identity() -> Outcome {
    let config = Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (0.01..10.0f64, -0.25..0.25f64, 0.0..1.0e4f64, any::<bool>())
        .prop_filter("omega > 4|delta|", |(_, ratio, _, _)| 4.0 * ratio.abs() < 1.0);
    let worst = Cell::new(0.0f64);
    let result = runner.run(&strategy, |(omega, ratio, t, minus)| {
        let p = SystemParams::from_couplings(omega, 0.1 * omega, ratio * omega, 0.01, cutoff(10)).unwrap();
        let k = if minus { Branch::Minus } else { Branch::Plus };
        let sp = branch_params(k, &p, C64::new(1.0, 0.0), t).unwrap();
        let err = (sp.bogoliubov_norm() - 1.0).abs();
        worst.set(worst.get().max(err));
        prop_assert!(err <= 1e-12, "|mu|^2 - |nu|^2 - 1 = {err:e}");
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!("10000 samples, worst deviation {:.2e}", worst.get()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let p = SystemParams::from_couplings(1.0, 0.3, 0.02, DeskScale::decoherence().phi0, cutoff(60))
        .map_err(|e| e.to_string())?;
    let grid = uniform_grid(0.0, revival_time(&p).map_err(|e| e.to_string())?, 2001).map_err(|e| e.to_string())?;
    let (mut worst_exact, mut worst_quadratic) = (0.0f64, 0.0f64);
    for alpha in [0.0, 1.0, 2.0] {
        let a = C64::new(alpha, 0.0);
        let analytic = decoherence_series(&p, a, &grid).map_err(|e| e.to_string())?;
        let exact = numeric_decoherence(&p, a, &grid, BranchModel::ExactCosine).map_err(|e| e.to_string())?;
        let quadratic = numeric_decoherence(&p, a, &grid, BranchModel::Quadratic).map_err(|e| e.to_string())?;
        worst_exact = worst_exact.max(analytic.max_abs_diff(&exact).map_err(|e| e.to_string())?);
        worst_quadratic = worst_quadratic.max(analytic.max_abs_diff(&quadratic).map_err(|e| e.to_string())?);
    }
    check(worst_exact <= 1e-4, || {
        format!("exact-cosine oracle differs by {worst_exact:e}")
    })?;
    check(worst_quadratic <= 1e-6, || {
        format!("quadratic oracle differs by {worst_quadratic:e}")
    })?;
    let elapsed = within_budget(start, Duration::from_secs(60))?;
    Ok(format!(
        "exact {worst_exact:.2e}, quadratic {worst_quadratic:.2e} over one revival in {elapsed:.2?}"
    ))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn displacement_special_case() -> Outcome {
    let quadratic = DeskScale::decoherence()
        .params(FRAC_PI_2, cutoff(60))
        .map_err(|e| e.to_string())?;
    let exact = DeskScale {
        phi0: 1e-5,
        ..DeskScale::decoherence()
    }
    .params(FRAC_PI_2, cutoff(60))
    .map_err(|e| e.to_string())?;
    let grid = uniform_grid(0.0, 4.0 * PI, 400).map_err(|e| e.to_string())?;
    let closed: Vec<f64> = grid
        .iter()
        .map(|&t| displacement_factor(&quadratic, t))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let (mut general, mut oracle, mut spread) = (0.0f64, 0.0f64, 0.0f64);
    let mut first: Option<Vec<f64>> = None;
    for alpha in DEFAULT_ALPHAS {
        let a = C64::new(alpha, 0.0);
        let series = decoherence_series(&quadratic, a, &grid).map_err(|e| e.to_string())?;
        general = general.max(max_gap(&series.values, &closed));
        for (model, p) in [(BranchModel::Quadratic, &quadratic), (BranchModel::ExactCosine, &exact)] {
            let numeric = numeric_decoherence(p, a, &grid, model).map_err(|e| e.to_string())?;
            oracle = oracle.max(max_gap(&numeric.values, &closed));
        }
        match &first {
            None => first = Some(series.values),
            Some(f) => spread = spread.max(max_gap(f, &series.values)),
        }
    }
    check(general <= 1e-12, || format!("general formula differs by {general:e}"))?;
    check(oracle <= 1e-8, || format!("numeric oracle differs by {oracle:e}"))?;
    check(spread <= 1e-12, || format!("curves depend on alpha by {spread:e}"))?;
    Ok(format!(
        "general {general:.2e}, oracle {oracle:.2e}, alpha spread {spread:.2e}"
    ))
}

fn figure_properties() -> Outcome {
    let scale = DeskScale::decoherence();
    let p = scale.params(0.0, cutoff(60)).map_err(|e| e.to_string())?;
    let t_rev = revival_time(&p).map_err(|e| e.to_string())?;
    let near_revival = uniform_grid(t_rev - 2.0, t_rev + 2.0, 801).map_err(|e| e.to_string())?;
    let peaks: Vec<f64> = squeezing_curves(&scale, &DEFAULT_ALPHAS, &near_revival)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| s.max())
        .collect();
    check(peaks.iter().all(|&d| d > 0.99), || format!("revival peaks {peaks:?}"))?;

    let grid = uniform_grid(0.0, 100.0, 2001).map_err(|e| e.to_string())?;
    let curves = squeezing_curves(&scale, &DEFAULT_ALPHAS, &grid).map_err(|e| e.to_string())?;
    for c in &curves[1..] {
        check(curves[0].values.iter().zip(&c.values).all(|(d0, d)| d0 >= d), || {
            format!("alpha = 0 curve does not dominate {}", c.label)
        })?;
    }
    // half width of the initial peak: first time D falls below 1/2
    let widths: Vec<f64> = curves[1..]
        .iter()
        .map(|c| {
            c.times
                .iter()
                .zip(&c.values)
                .find(|(_, d)| **d < 0.5)
                .map_or(f64::INFINITY, |(t, _)| *t)
        })
        .collect();
    check(widths.windows(2).all(|w| w[1] < w[0]) && widths[0].is_finite(), || {
        format!("peak widths for alpha 1, 2, 3: {widths:?}")
    })?;

    let flat = displacement_curves(&scale, &DEFAULT_ALPHAS, &grid).map_err(|e| e.to_string())?;
    let spread = flat[1..]
        .iter()
        .map(|c| max_gap(&c.values, &flat[0].values))
        .fold(0.0, f64::max);
    check(spread <= 1e-12, || format!("pi/2 curves differ by {spread:e}"))?;
    Ok(format!(
        "revival peaks >= {:.5}, widths {widths:?}, pi/2 spread {spread:.1e}",
        peaks.iter().copied().fold(f64::INFINITY, f64::min)
    ))
}

fn expansion_order_check() -> Outcome {
    let mut orders = Vec::new();
    for phi_e in [FRAC_PI_3, FRAC_PI_2] {
        let p = SystemParams {
            phi_e,
            phi0: 0.2,
            cutoff: cutoff(40),
            ..SystemParams::desk()
        };
        let order = expansion_order(&p).map_err(|e| e.to_string())?;
        check((order - 3.0).abs() <= 0.3, || {
            format!("order {order} at phi_e = {phi_e}")
        })?;
        orders.push(order);
    }
    Ok(format!("orders {orders:.3?} at phi_e = pi/3, pi/2"))
}

fn random_hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |v| {
        let m = DMatrix::from_iterator(dim, dim, v.into_iter().map(|(re, im)| C64::new(re, im)));
        let h = (&m + m.adjoint()).unscale(2.0);
        Operator::new_hermitian(Space::Cavity(cutoff(dim - 1)), h).unwrap()
    })
}

fn property_suites() -> Result<(), String> {
    let config = Config {
        cases: 64,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(&(random_hermitian(20), -50.0..50.0f64), |(h, t)| {
            let err = propagator(&h, t).unwrap().unitarity_error();
            prop_assert!(err <= 1e-10, "unitarity error {err:e}");
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    runner
        .run(
            &(-2.0..2.0f64, -2.0..2.0f64, 0.0..0.5f64, -3.2..3.2f64),
            |(re, im, r, phase)| {
                let sp = SqueezedParams {
                    beta: C64::new(re, im),
                    mu: C64::new(r.cosh(), 0.0),
                    nu: C64::from_polar(r.sinh(), phase),
                    theta: 0.0,
                };
                match squeezed_state(&sp, cutoff(60)) {
                    Ok(psi) => prop_assert!((psi.norm() - 1.0).abs() <= 1e-12, "norm {}", psi.norm()),
                    Err(e) => prop_assert!(matches!(e, Error::Truncation { .. }), "{e}"),
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())?;
    runner
        .run(&prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 10), |v| {
            let amps = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
            let psi = match StateVector::from_vec(Space::Joint(cutoff(4)), amps)
                .unwrap()
                .normalized()
            {
                Ok(psi) => psi,
                Err(_) => return Ok(()),
            };
            for rho in [reduced_qubit(&psi).unwrap(), reduced_cavity(&psi).unwrap()] {
                prop_assert!(rho.min_eigenvalue() >= -1e-10);
                prop_assert!((rho.trace() - 1.0).norm() <= 1e-12);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn infrastructure() -> Outcome {
    let runs = [
        vec!["storage", "--set", "scale=desk"],
        vec!["decoherence", "--set", "scale=desk", "--set", "n_points=301"],
        vec![
            "sweep",
            "--set",
            "scale=desk",
            "--set",
            "sweep_phi_e=0, pi/4, pi/2",
            "--set",
            "n_points=301",
        ],
    ];
    for args in &runs {
        let first = qcav(args)?;
        let second = qcav(args)?;
        check(first == second, || format!("qcav {args:?} output differs between runs"))?;
    }
    property_suites()?;
    Ok("storage, decoherence and sweep CSV byte-identical; unitarity, normalization, PSD suites hold".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("device arithmetic", device_arithmetic),
        ("transfer fidelity", transfer_fidelity),
        ("Bogoliubov identity", bogoliubov_identity),
        ("decoherence oracle equivalence", oracle_equivalence),
        ("displacement-only special case", displacement_special_case),
        ("qualitative curve properties", figure_properties),
        ("expansion order", expansion_order_check),
        ("infrastructure", infrastructure),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
