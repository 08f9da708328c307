use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use qcav_core::evolution::{uniform_grid, Spectrum};
use qcav_core::fockspace::{joint_index, FockCutoff, C64};
use qcav_core::gaussian::{decoherence_series, displacement_factor, revival_time};
use qcav_core::hamiltonians::{build_jc, excitation_number};
use qcav_core::oracle::{expansion_order, numeric_decoherence, BranchModel};
use qcav_core::physical::{DeskScale, SystemParams};
use qcav_core::protocol::{initial_state, QubitAmplitudes};

fn cutoff(n: usize) -> FockCutoff {
    FockCutoff::new(n).unwrap()
}

fn desk_point() -> SystemParams {
    SystemParams::from_couplings(1.0, 0.3, 0.02, DeskScale::decoherence().phi0, cutoff(60)).unwrap()
}

#[test]
fn closed_form_tracks_both_oracles_over_a_revival() {
    let p = desk_point();
    let grid = uniform_grid(0.0, revival_time(&p).unwrap(), 800).unwrap();
    for alpha in [0.0, 1.0, 2.0] {
        let a = C64::new(alpha, 0.0);
        let analytic = decoherence_series(&p, a, &grid).unwrap();
        let exact = numeric_decoherence(&p, a, &grid, BranchModel::ExactCosine).unwrap();
        let quadratic = numeric_decoherence(&p, a, &grid, BranchModel::Quadratic).unwrap();
        assert!(analytic.max_abs_diff(&exact).unwrap() <= 1e-4);
        assert!(analytic.max_abs_diff(&quadratic).unwrap() <= 1e-6);
    }
}

#[test]
fn displacement_case_matches_oracle() {
    // the same η at a smaller φ0 shrinks the cubic residue ηφ0²Q³/6 of the
    // exact cosine below the comparison tolerance
    let quadratic = DeskScale::decoherence().params(FRAC_PI_2, cutoff(60)).unwrap();
    let exact = DeskScale {
        phi0: 1e-5,
        ..DeskScale::decoherence()
    }
    .params(FRAC_PI_2, cutoff(60))
    .unwrap();
    let grid = uniform_grid(0.0, 4.0 * PI, 400).unwrap();
    let expected: Vec<f64> = grid
        .iter()
        .map(|&t| displacement_factor(&quadratic, t).unwrap())
        .collect();
    for alpha in [0.0, 1.0, 2.0, 3.0] {
        for (model, p) in [(BranchModel::Quadratic, &quadratic), (BranchModel::ExactCosine, &exact)] {
            let numeric = numeric_decoherence(p, C64::new(alpha, 0.0), &grid, model).unwrap();
            let worst = numeric
                .values
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-8);
        }
    }
}

#[test]
fn jc_evolution_stays_in_low_excitation_sector() {
    let p = DeskScale::storage().params(FRAC_PI_2, cutoff(6)).unwrap();
    let c = p.cutoff;
    let spectrum = Spectrum::new(&build_jc(&p).unwrap()).unwrap();
    let psi0 = initial_state(&QubitAmplitudes::equal(), c);
    let n_exc = excitation_number(c).unwrap();
    let n0 = n_exc.expectation(&psi0).unwrap().re;
    let energy0 = build_jc(&p).unwrap().expectation(&psi0).unwrap().re;
    let grid = uniform_grid(0.0, 200.0, 300).unwrap();
    let sector = [joint_index(0, 0, c), joint_index(1, 0, c), joint_index(0, 1, c)];
    for psi in spectrum.evolve_series(&psi0, &grid).unwrap() {
        let kept: f64 = sector.iter().map(|&i| psi.amplitudes()[i].norm_sqr()).sum();
        assert!(1.0 - kept <= 1e-10);
        assert!((n_exc.expectation(&psi).unwrap().re - n0).abs() <= 1e-10);
        let h = build_jc(&p).unwrap();
        assert!((h.expectation(&psi).unwrap().re - energy0).abs() <= 1e-9);
    }
}

#[test]
fn expansion_converges_at_third_order() {
    for phi_e in [FRAC_PI_3, FRAC_PI_2] {
        let p = SystemParams {
            phi_e,
            phi0: 0.2,
            cutoff: cutoff(40),
            ..SystemParams::desk()
        };
        let order = expansion_order(&p).unwrap();
        assert!((order - 3.0).abs() <= 0.3, "order {order} at phi_e {phi_e}");
    }
}
