use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{loop_moments, triple, triples};
use crate::error::{Error, Result};
use crate::model::{Family, HamiltonianSpec, MelnikovCoeffs};
use crate::ovals::{energy_range, Annulus};
use crate::roots::brent;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CentroidSample<T> {
    pub t: T,
    pub xi: T,
    pub eta: T,
}

/// `L = {(J₁/J₀, J₋₁/J₀)}` over one annulus, sorted by t.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentroidCurve<T> {
    pub annulus: Annulus,
    pub samples: Vec<CentroidSample<T>>,
    /// Analytic limit at the center energy.
    pub endpoint: [T; 2],
    pub center_energy: T,
    /// Limit of ξ at the loop, `J₁(0)/J₀(0)`.
    pub asymptote: T,
    pub converged: bool,
}

fn centroid_annulus<T: Real>(spec: &HamiltonianSpec<T>, annulus: Annulus) -> Result<()> {
    if spec.family() != Family::NormalForm || annulus == Annulus::Upper {
        return Err(Error::NoAnnulus(
            "centroid curves are defined for the normal form".into(),
        ));
    }
    spec.require_loop()
}

/// `n` energies spread uniformly over the open annulus.
pub fn default_grid<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    n: usize,
) -> Result<Vec<T>> {
    let r = energy_range(spec, annulus)?;
    let (c, l) = (r.center_energy(annulus), r.loop_energy(annulus));
    let m = T::from_usize(n + 1).unwrap();
    let mut g: Vec<T> = (1..=n)
        .map(|i| c + (l - c) * T::from_usize(i).unwrap() / m)
        .collect();
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(g)
}

pub fn sample_curve<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    t_grid: &[T],
) -> Result<CentroidCurve<T>> {
    centroid_annulus(spec, annulus)?;
    let range = energy_range(spec, annulus)?;
    let tc = range.center_energy(annulus);
    if t_grid.contains(&tc) {
        return Err(Error::Precondition(
            "grid must avoid the center energy".into(),
        ));
    }
    let tol = T::lit(1e-13).max(T::tol_floor());
    let mut tr = triples(spec, annulus, t_grid, tol)?;
    tr.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    if let Some(bad) = tr.iter().find(|x| !(x.j[1] > T::zero())) {
        return Err(Error::Precondition(format!(
            "J0 = {} is not positive at t = {}",
            bad.j[1], bad.t
        )));
    }
    let a = spec.a();
    let endpoint = match annulus {
        Annulus::SigmaMinus => {
            let two = T::lit(2.0);
            [(a - two) / a, a / (a - two)]
        }
        _ => [T::one(), T::one()],
    };
    let [j0, j1] = loop_moments(spec, annulus, T::lit(1e-14).max(T::tol_floor()))?;
    Ok(CentroidCurve {
        annulus,
        converged: tr.iter().all(|x| x.converged),
        samples: tr
            .iter()
            .map(|x| CentroidSample {
                t: x.t,
                xi: x.j[2] / x.j[1],
                eta: x.j[0] / x.j[1],
            })
            .collect(),
        endpoint,
        center_energy: tc,
        asymptote: j1.value / j0.value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeReport<T> {
    pub xi_decreasing: bool,
    pub eta_increasing: bool,
    /// Convex for SigmaPlus, concave for SigmaMinus.
    pub curvature_ok: bool,
    pub first_violation: Option<String>,
    /// Polynomial extrapolation of the samples nearest the center.
    pub extrapolated_endpoint: [T; 2],
    pub endpoint_error: T,
}

impl<T: Real> ShapeReport<T> {
    pub fn passes(&self, endpoint_tol: T) -> bool {
        self.xi_decreasing
            && self.eta_increasing
            && self.curvature_ok
            && self.endpoint_error <= endpoint_tol
    }
}

/// Neville evaluation at `x` of the interpolant through `(xs, ys)`.
fn neville<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((x - xs[i + k]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

pub fn verify_shape<T: Real>(curve: &CentroidCurve<T>) -> Result<ShapeReport<T>> {
    let s = &curve.samples;
    if s.len() < 20 {
        return Err(Error::Precondition(format!(
            "shape check needs >= 20 samples, got {}",
            s.len()
        )));
    }
    let mut violation: Option<String> = None;
    let mut note = |msg: String| {
        if violation.is_none() {
            violation = Some(msg);
        }
    };
    let mut xi_dec = true;
    let mut eta_inc = true;
    for i in 0..s.len() - 1 {
        if !(s[i + 1].xi < s[i].xi) {
            xi_dec = false;
            note(format!("xi not decreasing at t = {}", s[i + 1].t));
        }
        if !(s[i + 1].eta > s[i].eta) {
            eta_inc = false;
            note(format!("eta not increasing at t = {}", s[i + 1].t));
        }
    }
    // With t increasing the curve moves up and to the left; a convex
    // graph turns clockwise (negative cross product), a concave one
    // counterclockwise.
    let want = if curve.annulus == Annulus::SigmaMinus {
        T::one()
    } else {
        -T::one()
    };
    let mut curvature_ok = true;
    for i in 0..s.len() - 2 {
        let (u0, u1) = (s[i + 1].xi - s[i].xi, s[i + 1].eta - s[i].eta);
        let (v0, v1) = (s[i + 2].xi - s[i + 1].xi, s[i + 2].eta - s[i + 1].eta);
        let cross = u0 * v1 - u1 * v0;
        if !(cross * want > T::zero()) {
            curvature_ok = false;
            note(format!("curvature sign changes at t = {}", s[i + 1].t));
        }
    }
    let k = 6;
    let near: Vec<&CentroidSample<T>> = if curve.annulus == Annulus::SigmaMinus {
        s.iter().rev().take(k).collect()
    } else {
        s.iter().take(k).collect()
    };
    let ts: Vec<T> = near.iter().map(|p| p.t).collect();
    let xs: Vec<T> = near.iter().map(|p| p.xi).collect();
    let es: Vec<T> = near.iter().map(|p| p.eta).collect();
    let ext = [
        neville(&ts, &xs, curve.center_energy),
        neville(&ts, &es, curve.center_energy),
    ];
    let err = (ext[0] - curve.endpoint[0])
        .abs()
        .max((ext[1] - curve.endpoint[1]).abs());
    Ok(ShapeReport {
        xi_decreasing: xi_dec,
        eta_increasing: eta_inc,
        curvature_ok,
        first_violation: violation,
        extrapolated_endpoint: ext,
        endpoint_error: err,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Intersection<T> {
    pub annulus: Annulus,
    pub t: T,
    pub xi: T,
    pub eta: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Intersections<T> {
    pub count: usize,
    pub points: Vec<Intersection<T>>,
    /// Samples inside the 1e−8 band around the line without a sign change.
    pub tangency_warning: bool,
    /// The affine functional vanished on every sample.
    pub contains_curve: bool,
}

/// Sign changes of `α + βξ(t) + γη(t)` along each curve, refined in t.
pub fn line_intersections<T: Real>(
    spec: &HamiltonianSpec<T>,
    curves: &[&CentroidCurve<T>],
    coeffs: &MelnikovCoeffs<T>,
) -> Result<Intersections<T>> {
    if coeffs.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let band = T::lit(1e-8);
    let tol = T::lit(1e-13).max(T::tol_floor());
    let line = |xi: T, eta: T| coeffs.alpha + coeffs.beta * xi + coeffs.gamma * eta;
    let scale = coeffs.alpha.abs() + coeffs.beta.abs() + coeffs.gamma.abs();
    let mut points = Vec::new();
    let mut tangency = false;
    let mut contains = true;
    for curve in curves {
        let vals: Vec<T> = curve.samples.iter().map(|p| line(p.xi, p.eta)).collect();
        contains &= vals.iter().all(|v| v.abs() <= band * scale);
        let brackets: Vec<usize> = (0..vals.len().saturating_sub(1))
            .filter(|&i| (vals[i] > T::zero()) != (vals[i + 1] > T::zero()))
            .collect();
        let near = |i: usize| vals[i].abs() <= band * scale;
        tangency |=
            (0..vals.len()).any(|i| near(i) && !brackets.iter().any(|&b| b == i || b + 1 == i));
        let found: Vec<Intersection<T>> = brackets
            .par_iter()
            .map(|&i| {
                let f = |t: T| {
                    triple(spec, curve.annulus, t, tol)
                        .map(|x| line(x.j[2] / x.j[1], x.j[0] / x.j[1]))
                        .unwrap_or(T::nan())
                };
                let t = brent(f, curve.samples[i].t, curve.samples[i + 1].t, T::lit(1e-12))?;
                let x = triple(spec, curve.annulus, t, tol)?;
                Ok(Intersection {
                    annulus: curve.annulus,
                    t,
                    xi: x.j[2] / x.j[1],
                    eta: x.j[0] / x.j[1],
                })
            })
            .collect::<Result<_>>()?;
        points.extend(found);
    }
    Ok(Intersections {
        count: points.len(),
        points,
        tangency_warning: tangency,
        contains_curve: contains,
    })
}

/// Annuli whose centroid curves count cycles: SigmaPlus, and SigmaMinus
/// too when a ∈ (0,2).
pub fn counting_annuli<T: Real>(spec: &HamiltonianSpec<T>) -> Vec<Annulus> {
    let mut v = vec![Annulus::SigmaPlus];
    if spec.critical_data().center1.is_some() {
        v.push(Annulus::SigmaMinus);
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimultaneousReport<T> {
    pub xi_plus: T,
    pub xi_minus: T,
    /// `ξ₋(+0) < 0 < ξ₊(−0)`.
    pub sign_fact: bool,
    pub annihilates_plus: bool,
    pub annihilates_minus: bool,
    pub annihilates_both: bool,
}

/// Whether `α + βξ = 0` holds at both loop asymptotes.
pub fn simultaneous_loop_test<T: Real>(
    spec: &HamiltonianSpec<T>,
    plus: &CentroidCurve<T>,
    minus: &CentroidCurve<T>,
    alpha: T,
    beta: T,
) -> Result<SimultaneousReport<T>> {
    let a = spec.a();
    if !(a > T::zero() && a < T::lit(2.0)) {
        return Err(Error::Precondition(
            "simultaneous loop test needs a in (0,2)".into(),
        ));
    }
    if alpha == T::zero() && beta == T::zero() {
        return Err(Error::Precondition(
            "degenerate line alpha = beta = 0".into(),
        ));
    }
    let scale = alpha.abs() + beta.abs();
    let hits = |xi: T| (alpha + beta * xi).abs() <= T::lit(1e-9) * scale;
    let (xp, xm) = (plus.asymptote, minus.asymptote);
    let (hp, hm) = (hits(xp), hits(xm));
    Ok(SimultaneousReport {
        xi_plus: xp,
        xi_minus: xm,
        sign_fact: xm < T::zero() && T::zero() < xp,
        annihilates_plus: hp,
        annihilates_minus: hm,
        annihilates_both: hp && hm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(a: f64) -> HamiltonianSpec<f64> {
        HamiltonianSpec::normal_form(a).unwrap()
    }

    #[test]
    fn asymptote_at_one() {
        let s = nf(1.0);
        let g = default_grid(&s, Annulus::SigmaPlus, 20).unwrap();
        let c = sample_curve(&s, Annulus::SigmaPlus, &g).unwrap();
        let expect = 4.0 * 3f64.sqrt() / (3.0 * std::f64::consts::PI);
        assert!((c.asymptote - expect).abs() < 1e-13);
        assert_eq!(c.endpoint, [1.0, 1.0]);
    }

    #[test]
    fn rejects_short_curves_and_appendix() {
        let s = nf(1.0);
        let c = sample_curve(&s, Annulus::SigmaPlus, &[-1.5, -0.5]).unwrap();
        assert!(verify_shape(&c).is_err());
        let ap = HamiltonianSpec::appendix(17.0f64).unwrap();
        assert!(sample_curve(&ap, Annulus::Upper, &[-0.5]).is_err());
    }

    #[test]
    fn neville_reproduces_cubic() {
        let xs = [0.1, 0.2, 0.4, 0.7];
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 - 2.0 * x + x * x * x).collect();
        assert!((neville(&xs, &ys, 0.0) - 1.0).abs() < 1e-14);
    }
}
