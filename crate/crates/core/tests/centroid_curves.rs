use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twoloop::centroid::{
    counting_annuli, default_grid, line_intersections, sample_curve, simultaneous_loop_test,
    verify_shape,
};
use twoloop::melnikov::classify_cyclicity;
use twoloop::model::{HamiltonianSpec, MelnikovCoeffs};
use twoloop::ovals::Annulus;
use twoloop::{Curve, Spec};

fn curve(spec: &Spec, annulus: Annulus, n: usize) -> Curve {
    sample_curve(spec, annulus, &default_grid(spec, annulus, n).unwrap()).unwrap()
}

#[test]
fn endpoints_at_the_centers() {
    let one = HamiltonianSpec::normal_form(1.0).unwrap();
    let r = verify_shape(&curve(&one, Annulus::SigmaPlus, 200)).unwrap();
    assert!(r.passes(1e-6), "{r:?}");
    let e = r.extrapolated_endpoint;
    assert!(
        (e[0] - 1.0).abs() <= 1e-6 && (e[1] - 1.0).abs() <= 1e-6,
        "{e:?}"
    );

    let half = HamiltonianSpec::normal_form(0.5).unwrap();
    let c = curve(&half, Annulus::SigmaMinus, 200);
    assert_eq!(c.endpoint, [-3.0, -1.0 / 3.0]);
    let r = verify_shape(&c).unwrap();
    assert!(r.curvature_ok && r.passes(1e-6), "{r:?}");
}

#[test]
fn lines_through_the_curve() {
    let spec = HamiltonianSpec::normal_form(1.0).unwrap();
    let c = curve(&spec, Annulus::SigmaPlus, 200);
    let mid = &c.samples[100];
    let vertical = MelnikovCoeffs::first_order(-mid.xi, 1.0);
    assert_eq!(
        line_intersections(&spec, &[&c], &vertical).unwrap().count,
        1
    );
    let axis = MelnikovCoeffs::first_order(0.0, 1.0);
    assert_eq!(line_intersections(&spec, &[&c], &axis).unwrap().count, 0);
    let none = MelnikovCoeffs::new(0.0, 0.0, 0.0, 2).unwrap();
    assert!(line_intersections(&spec, &[&c], &none).is_err());
}

#[test]
fn simultaneous_annihilation_is_one_sided() {
    let spec = HamiltonianSpec::normal_form(0.5).unwrap();
    let plus = curve(&spec, Annulus::SigmaPlus, 40);
    let minus = curve(&spec, Annulus::SigmaMinus, 40);
    let r = simultaneous_loop_test(&spec, &plus, &minus, -plus.asymptote, 1.0).unwrap();
    assert!(r.sign_fact);
    assert!(r.annihilates_plus && !r.annihilates_minus && !r.annihilates_both);
    assert!(simultaneous_loop_test(&spec, &plus, &minus, 0.0, 0.0).is_err());
}

#[test]
fn total_predicted_count_stays_within_three() {
    let spec = HamiltonianSpec::normal_form(0.5).unwrap();
    let curves: Vec<Curve> = counting_annuli(&spec)
        .into_iter()
        .map(|an| curve(&spec, an, 120))
        .collect();
    let refs: Vec<&Curve> = curves.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let gamma = if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(-1.0..1.0)
        };
        let k = MelnikovCoeffs::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), gamma, 2)
            .unwrap();
        let n = line_intersections(&spec, &refs, &k).unwrap().count as u32;
        let from_loop = classify_cyclicity(&k, false).unwrap().from_loop;
        assert!(n + from_loop <= 3, "{k:?}: {n} + {from_loop}");
        if gamma != 0.0 || k.alpha != 0.0 {
            assert!(n + from_loop <= 2, "{k:?}: {n} + {from_loop}");
        }
    }
}
