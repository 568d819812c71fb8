use std::f64::consts::PI;

use twoloop::abelian::triple;
use twoloop::flowsim::{
    census, coordinate_for_energy, integrate, return_map, saddle_traces, separatrix_shifts,
    FlowSpec, ReturnOutcome, MIN_CENSUS_GRID,
};
use twoloop::model::{HamiltonianSpec, OneForm, PerturbationSpec, Quadratic};
use twoloop::ovals::{section_segment, Annulus};

fn appendix_flow(c: f64, epsilon: f64, mu1: f64, mu2: f64) -> FlowSpec<f64> {
    let spec = HamiltonianSpec::appendix(c).unwrap();
    FlowSpec::appendix(spec, PerturbationSpec { epsilon, mu1, mu2 }, 1e-12).unwrap()
}

#[test]
fn one_period_returns_to_start() {
    let spec = HamiltonianSpec::normal_form(1.0f64).unwrap();
    let flow = FlowSpec::unperturbed(spec, 1e-12);
    let start = [0.5, 0.0];
    let sec = section_segment(&spec, Annulus::SigmaPlus).unwrap();
    let s = coordinate_for_energy(&spec, &sec, spec.eval(start)).unwrap();
    let period = match return_map(&flow, &sec, s).unwrap() {
        ReturnOutcome::Return { time, .. } => time,
        other => panic!("{other:?}"),
    };
    let end = *integrate(&flow, start, period)
        .unwrap()
        .points
        .last()
        .unwrap();
    assert!(
        (end[0] - start[0]).abs() <= 1e-8 && end[1].abs() <= 1e-8,
        "{end:?}"
    );
}

#[test]
fn appendix_orbit_conserves_energy() {
    let spec = HamiltonianSpec::appendix(17.0f64).unwrap();
    let tol = 1e-12;
    let tr = integrate(&FlowSpec::unperturbed(spec, tol), [0.0, 1.0], 20.0).unwrap();
    assert!(tr.complete);
    assert_eq!(tr.energy[0], 1.0 / 12.0 - 1.0);
    for h in &tr.energy {
        assert!((h + 11.0 / 12.0).abs() <= 10.0 * tol * 20.0, "{h}");
    }
}

#[test]
fn return_map_rejects_section_endpoints() {
    let spec = HamiltonianSpec::normal_form(1.0f64).unwrap();
    let flow = FlowSpec::unperturbed(spec, 1e-12);
    let sec = section_segment(&spec, Annulus::SigmaPlus).unwrap();
    assert!(return_map(&flow, &sec, sec.s_min).is_err());
    assert!(return_map(&flow, &sec, sec.s_max).is_err());
}

fn section_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn unperturbed_census_is_a_degenerate_continuum() {
    let spec = HamiltonianSpec::normal_form(1.0f64).unwrap();
    let flow = FlowSpec::quadratic(spec, 0.0, OneForm::default(), 1e-12);
    let sec = section_segment(&spec, Annulus::SigmaPlus).unwrap();
    let w = sec.s_max - sec.s_min;
    let grid = section_grid(sec.s_min + 0.05 * w, sec.s_max - 0.05 * w, MIN_CENSUS_GRID);
    let c = census(&flow, &sec, &grid).unwrap();
    assert!(c.degenerate_continuum);
    assert_eq!(c.count(), 0);
}

#[test]
fn census_finds_the_simple_melnikov_zero() {
    let spec = HamiltonianSpec::normal_form(1.0f64).unwrap();
    let t_star = -1.0;
    let j = triple(&spec, Annulus::SigmaPlus, t_star, 1e-13).unwrap().j;
    let (alpha, beta) = (j[2], -j[1]);
    let mut g = Quadratic::default();
    g.0[1] = alpha;
    g.0[3] = beta / 2.0;
    let omega = OneForm {
        f: Quadratic::default(),
        g,
    };
    let flow = FlowSpec::quadratic(spec, 1e-3, omega, 1e-12);
    let sec = section_segment(&spec, Annulus::SigmaPlus).unwrap();
    let lo = coordinate_for_energy(&spec, &sec, -1.8).unwrap();
    let hi = coordinate_for_energy(&spec, &sec, -0.2).unwrap();
    let c = census(&flow, &sec, &section_grid(lo, hi, MIN_CENSUS_GRID)).unwrap();
    assert_eq!(c.count(), 1, "{:?}", c.cycles);
    let s_star = coordinate_for_energy(&spec, &sec, t_star).unwrap();
    assert!((c.cycles[0].section_coordinate - s_star).abs() < 1e-2);
}

#[test]
fn traces_follow_the_first_order_law() {
    let tr = saddle_traces(&appendix_flow(17.0, 1e-3, 0.0, 0.0)).unwrap();
    assert!((tr[0] / 1e-3 - 1.0).abs() <= 0.05, "{tr:?}");
    assert!((tr[1] / -33e-3 - 1.0).abs() <= 0.05, "{tr:?}");
    assert_eq!(
        saddle_traces(&appendix_flow(17.0, 0.0, 0.0, 0.0)).unwrap(),
        [0.0, 0.0]
    );
}

#[test]
fn shifts_converge_to_the_first_order_law() {
    let eps = 1e-6;
    let b = separatrix_shifts(&appendix_flow(17.0, eps, 0.01, 0.0)).unwrap();
    assert!((b[0] / eps / 0.02 - 1.0).abs() <= 0.05, "{b:?}");
    let b = separatrix_shifts(&appendix_flow(17.0, eps, 0.0, 0.01)).unwrap();
    let want = -PI * 3f64.sqrt() * 0.01;
    assert_eq!(b[0], 0.0);
    assert!((b[1] / eps / want - 1.0).abs() <= 0.05, "{b:?}");
}

#[test]
fn unperturbed_part_of_the_deformation_shifts_at_second_order() {
    let r: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&eps| separatrix_shifts(&appendix_flow(17.0, eps, 0.0, 0.0)).unwrap()[1] / eps)
        .collect();
    assert!(
        (r[0] / r[1] - 10.0).abs() < 0.1 && (r[1] / r[2] - 10.0).abs() < 0.1,
        "{r:?}"
    );
}
