use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lsq::{least_squares, Fit};
use crate::model::{Family, HamiltonianSpec};
use crate::ovals::{energy_range, slice, Annulus, AxisCubic, OvalSlice};
use crate::quadrature::{integrate, Quad};
use crate::roots::quadratic_roots;
use crate::scalar::Real;

/// `(J₋₁, J₀, J₁)` at energy `t`, normalised so that `J_k = 2∫ s^k |w| ds`
/// (J₀ > 0 on every annulus).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbelianTriple<T> {
    pub t: T,
    pub j: [T; 3],
    pub err: [T; 3],
    pub converged: bool,
}

/// `2∫ s^k |w(s)| ds` over the oval, with `s = lo + 2·half·sin²(φ/2)` so
/// that `(s − lo)(hi − s) = half² sin²φ` and the integrand
/// `2 half² sin²φ s^k √((p s + β)/s)` is smooth on `[0, π]`.
pub fn oval_moment<T: Real>(oval: &OvalSlice<T>, k: i32, tol: T) -> Quad<T> {
    if oval.is_degenerate() {
        return Quad {
            value: T::zero(),
            error: T::zero(),
            converged: true,
            intervals: 0,
        };
    }
    let two = T::lit(2.0);
    let half = (oval.hi - oval.lo) / two;
    let f = |phi: T| {
        let sh = (phi / two).sin();
        let s = oval.lo + two * half * sh * sh;
        let sn = phi.sin();
        let ratio = (oval.linear_factor(s) / s).max(T::zero());
        two * half * half * sn * sn * s.powi(k) * ratio.sqrt()
    };
    integrate(f, T::zero(), T::PI(), tol * T::lit(1e-6) * half * half, tol)
}

pub fn triple<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    t: T,
    tol: T,
) -> Result<AbelianTriple<T>> {
    if tol < T::tol_floor() {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} below {}",
            T::tol_floor()
        )));
    }
    let oval = slice(spec, annulus, t)?;
    let q = [-1, 0, 1].map(|k| oval_moment(&oval, k, tol));
    Ok(AbelianTriple {
        t,
        j: q.map(|r| r.value),
        err: q.map(|r| r.error),
        converged: q.iter().all(|r| r.converged),
    })
}

/// Order-preserving parallel map of [`triple`] over a grid.
pub fn triples<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    ts: &[T],
    tol: T,
) -> Result<Vec<AbelianTriple<T>>> {
    ts.par_iter()
        .map(|&t| triple(spec, annulus, t, tol))
        .collect()
}

/// `J₀` and `J₁` on the loop bounding the annulus (t = 0). With
/// `w² = −K(s)/s = (e − s)(p(s + e) + q)` and `s = e sin²φ`.
pub fn loop_moments<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    tol: T,
) -> Result<[Quad<T>; 2]> {
    spec.require_loop()?;
    energy_range(spec, annulus)?;
    let c = AxisCubic::of(spec);
    let e = match (spec.family(), annulus) {
        (Family::Appendix, _) => T::lit(12.0).sqrt(),
        (Family::NormalForm, an) => {
            let (r1, r2) = quadratic_roots(c.p, c.q, c.r)
                .ok_or_else(|| Error::NoAnnulus("loop does not meet the axis".into()))?;
            let pick = |pos: bool| {
                [r1, r2]
                    .into_iter()
                    .filter(|&r| if pos { r > T::zero() } else { r < T::zero() })
                    .reduce(if pos { T::min } else { T::max })
            };
            pick(an == Annulus::SigmaPlus)
                .ok_or_else(|| Error::NoAnnulus("loop does not meet the axis".into()))?
        }
    };
    let two = T::lit(2.0);
    let moment = |k: i32| {
        let f = |phi: T| {
            let (sn, cs) = phi.sin_cos();
            let s = e * sn * sn;
            let inner = (e * (c.p * (s + e) + c.q)).max(T::zero()).sqrt();
            two * s.powi(k) * cs * inner * two * e.abs() * sn * cs
        };
        integrate(f, T::zero(), T::FRAC_PI_2(), tol * T::lit(1e-6), tol)
    };
    Ok([moment(0), moment(1)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connection {
    Gamma1,
    Gamma2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentIntegrand {
    OneDx,
    YDx,
    Y2Dx,
    XyDx,
}

/// Line integrals along the appendix connections: Γ₁ is `y = 0` from
/// x = −1 to 1, Γ₂ the upper half-ellipse `x² + y²/12 = 1` from (1,0) to
/// (−1,0). Both run counterclockwise around the upper annulus.
pub fn segment_integral<T: Real>(which: Connection, integrand: SegmentIntegrand) -> T {
    let tol = T::epsilon() * T::lit(16.0);
    let r12 = T::lit(12.0).sqrt();
    let form = move |x: T, y: T| match integrand {
        SegmentIntegrand::OneDx => T::one(),
        SegmentIntegrand::YDx => y,
        SegmentIntegrand::Y2Dx => y * y,
        SegmentIntegrand::XyDx => x * y,
    };
    match which {
        Connection::Gamma1 => {
            integrate(|x| form(x, T::zero()), -T::one(), T::one(), tol, tol).value
        }
        Connection::Gamma2 => {
            let f = |phi: T| {
                let (s, c) = phi.sin_cos();
                -form(c, r12 * s) * s
            };
            integrate(f, T::zero(), T::PI(), tol, tol).value
        }
    }
}

/// `∫_{Γ_i} (μ₁ + μ₂ y) dx`.
pub fn connection_integral<T: Real>(which: Connection, mu1: T, mu2: T) -> T {
    mu1 * segment_integral(which, SegmentIntegrand::OneDx)
        + mu2 * segment_integral(which, SegmentIntegrand::YDx)
}

/// Geometric grid of `n` energies between `near` and `far` (same sign).
pub fn geometric_window<T: Real>(near: T, far: T, n: usize) -> Vec<T> {
    let (ln_a, ln_b) = (near.abs().ln(), far.abs().ln());
    let sign = near.signum();
    (0..n)
        .map(|i| {
            let f = if n > 1 {
                T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap()
            } else {
                T::zero()
            };
            sign * (ln_a + (ln_b - ln_a) * f).exp()
        })
        .collect()
}

/// Default log-fit window: |t| from 1e−6 to 1e−1 on the loop side.
pub fn default_window<T: Real>(annulus: Annulus, n: usize) -> Vec<T> {
    let s = if annulus == Annulus::SigmaMinus {
        T::one()
    } else {
        -T::one()
    };
    geometric_window(s * T::lit(1e-6), s * T::lit(1e-1), n)
}

pub const LOG_BASIS: [&str; 6] = ["1", "t", "t^2", "ln|t|", "t ln|t|", "t^2 ln|t|"];

pub(crate) fn log_basis_row<T: Real>(t: T) -> Vec<T> {
    let l = t.abs().ln();
    vec![T::one(), t, t * t, l, t * l, t * t * l]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogFit<T> {
    /// Coefficient of the lowest logarithmic term present for this k.
    pub coefficient: T,
    /// Coefficients on `LOG_BASIS`.
    pub coeffs: Vec<T>,
    pub residual: T,
    /// Residual of the same data fitted without logarithmic terms.
    pub poly_residual: T,
    pub condition: T,
    pub ill_conditioned: bool,
    pub converged: bool,
}

pub(crate) const ILL_CONDITIONED: f64 = 1e12;

pub(crate) fn fit_log_basis<T: Real>(ts: &[T], values: &[T]) -> (Fit<T>, T) {
    let rows: Vec<Vec<T>> = ts.iter().map(|&t| log_basis_row(t)).collect();
    let fit = least_squares(&rows, values);
    let poly: Vec<Vec<T>> = rows.iter().map(|r| r[..3].to_vec()).collect();
    let pfit = least_squares(&poly, values);
    (fit, pfit.residual)
}

/// Fits `J_k` on `window` against `{1, t, t², ln|t|, t ln|t|, t² ln|t|}`.
pub fn log_coefficient<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    k: i32,
    window: &[T],
) -> Result<LogFit<T>> {
    if !(-1..=1).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} not in {{-1, 0, 1}}"
        )));
    }
    if window.len() < 8 {
        return Err(Error::Precondition(
            "log fit window needs at least 8 points".into(),
        ));
    }
    let tol = T::tol_floor().max(T::lit(1e-13));
    let tr = triples(spec, annulus, window, tol)?;
    let values: Vec<T> = tr.iter().map(|x| x.j[(k + 1) as usize]).collect();
    let (fit, poly_residual) = fit_log_basis(window, &values);
    let idx = (k + 4) as usize;
    Ok(LogFit {
        coefficient: fit.coeffs[idx],
        ill_conditioned: fit.condition > T::lit(ILL_CONDITIONED),
        coeffs: fit.coeffs,
        residual: fit.residual,
        poly_residual,
        condition: fit.condition,
        converged: tr.iter().all(|x| x.converged),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nf(a: f64) -> HamiltonianSpec<f64> {
        HamiltonianSpec::normal_form(a).unwrap()
    }

    #[test]
    fn loop_values_at_one() {
        // 2∫₀^√3 √(3 − x²) dx = 3π/2 and 2∫₀^√3 x√(3 − x²) dx = 2√3.
        let [j0, j1] = loop_moments(&nf(1.0), Annulus::SigmaPlus, 1e-14).unwrap();
        assert!((j0.value - 1.5 * PI).abs() < 1e-13);
        assert!((j1.value - 2.0 * 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn triple_near_loop_approaches_loop_values() {
        let tr = triple(&nf(1.0), Annulus::SigmaPlus, -1e-10, 1e-13).unwrap();
        assert!(tr.converged);
        assert!((tr.j[1] - 1.5 * PI).abs() < 1e-8);
        assert!((tr.j[2] - 2.0 * 3f64.sqrt()).abs() < 1e-8);
        assert!(tr.j[0] > 10.0);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn frozen_values_at_minus_one() {
        // Independent 30-digit evaluation of 2∫ x^k √(t/x + 3 − x²) dx at a=1, t=−1.
        let tr = triple(&nf(1.0), Annulus::SigmaPlus, -1.0, 1e-14).unwrap();
        let oracle = [2.4761515665645727, 1.9726065443495882, 1.7834077690516309];
        for i in 0..3 {
            assert!((tr.j[i] - oracle[i]).abs() < 1e-12, "{i}: {}", tr.j[i]);
        }
    }

    #[test]
    fn vanishes_at_center() {
        let tr = triple(&nf(1.0), Annulus::SigmaPlus, -2.0 + 1e-12, 1e-12).unwrap();
        assert!(tr.j.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn sigma_minus_sign_rule() {
        let tr = triple(&nf(0.5), Annulus::SigmaMinus, 5.0, 1e-12).unwrap();
        assert!(tr.j[1] > 0.0 && tr.j[2] < 0.0 && tr.j[0] < 0.0);
    }

    #[test]
    fn appendix_connection_integrals() {
        let y: f64 = segment_integral(Connection::Gamma2, SegmentIntegrand::YDx);
        let y2: f64 = segment_integral(Connection::Gamma2, SegmentIntegrand::Y2Dx);
        let one: f64 = segment_integral(Connection::Gamma1, SegmentIntegrand::OneDx);
        let xy: f64 = segment_integral(Connection::Gamma2, SegmentIntegrand::XyDx);
        assert!((y + PI * 3f64.sqrt()).abs() < 1e-13);
        assert!((y2 + 16.0).abs() < 1e-13);
        assert!((one - 2.0).abs() < 1e-15);
        assert!(xy.abs() < 1e-14);
    }

    #[test]
    fn single_precision_triple() {
        let s = HamiltonianSpec::normal_form(1.0f32).unwrap();
        let tr = triple(&s, Annulus::SigmaPlus, -1.0f32, 1e-5).unwrap();
        assert!((tr.j[1] - 1.9726065).abs() < 1e-4);
    }

    #[test]
    fn window_is_geometric() {
        let w: Vec<f64> = geometric_window(-1e-6, -1e-1, 6);
        assert!((w[0] + 1e-6).abs() < 1e-20 && (w[5] + 1e-1).abs() < 1e-15);
        assert!((w[1] / w[0] - 10.0).abs() < 1e-12);
    }
}
