use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use twoloop::picard_fuchs::{fundamental, printed};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn rational_recursion_is_exact() {
    for a in [q(-1, 2), q(1, 2), q(1, 1), q(3, 2), q(7, 10), q(-9, 10)] {
        let s = fundamental(a.clone(), 12).unwrap();
        for (j, d) in s.recursion_defects().iter().enumerate() {
            assert!(d.iter().all(Zero::is_zero), "a = {a}, j = {j}: {d:?}");
        }
        assert!(s.p_defect(q(-3, 7)).iter().all(Zero::is_zero));
        for j in 1..=3 {
            assert_eq!(s.q[j], printed::q(a.clone(), j).unwrap(), "a = {a}, q_{j}");
        }
    }
}

#[test]
fn rational_series_matches_floating_point() {
    let exact = fundamental(q(3, 10), 8).unwrap();
    let float = fundamental(0.3f64, 8).unwrap();
    for (e, f) in exact.q.iter().zip(&float.q) {
        for k in 0..3 {
            let ek = num_traits::ToPrimitive::to_f64(&e[k]).unwrap();
            assert!(
                (ek - f[k]).abs() <= 1e-13 * (1.0 + ek.abs()),
                "{ek} vs {}",
                f[k]
            );
        }
    }
}

#[test]
fn rational_series_rejects_excluded_parameters() {
    assert!(fundamental(q(0, 1), 4).is_err());
    assert!(fundamental(q(2, 1), 4).is_err());
}
