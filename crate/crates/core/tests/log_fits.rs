use twoloop::abelian::{default_window, log_coefficient};
use twoloop::model::HamiltonianSpec;
use twoloop::ovals::Annulus;

const A: [f64; 3] = [0.5, 1.0, 1.5];

fn fit(a: f64, k: i32) -> twoloop::abelian::LogFit<f64> {
    let spec = HamiltonianSpec::normal_form(a).unwrap();
    log_coefficient(
        &spec,
        Annulus::SigmaPlus,
        k,
        &default_window(Annulus::SigmaPlus, 40),
    )
    .unwrap()
}

#[test]
fn inverse_moment_diverges_logarithmically() {
    for a in A {
        let f = fit(a, -1);
        let want = -2.0 * (3.0 * (2.0 - a)).sqrt();
        assert!(
            (f.coefficient / want - 1.0).abs() <= 1e-3,
            "a = {a}: {}",
            f.coefficient
        );
        assert!(f.residual < f.poly_residual);
    }
}

#[test]
fn area_has_a_t_log_t_term() {
    for a in A {
        let f = fit(a, 0);
        let want = -1.0 / (3.0 * (2.0 - a)).sqrt();
        assert!(
            (f.coefficient / want - 1.0).abs() <= 1e-3,
            "a = {a}: {}",
            f.coefficient
        );
        assert!(
            f.coeffs[3].abs() <= 1e-6,
            "a = {a}: ln t coefficient {}",
            f.coeffs[3]
        );
    }
}

#[test]
fn first_moment_starts_at_t_squared_log_t() {
    for a in A {
        let f = fit(a, 1);
        assert!(
            f.coeffs[3].abs() <= 1e-6 && f.coeffs[4].abs() <= 1e-3,
            "a = {a}: {:?}",
            f.coeffs
        );
    }
}
