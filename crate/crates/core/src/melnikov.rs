use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{geometric_window, loop_moments, triple, triples, ILL_CONDITIONED};
use crate::error::{Error, Result};
use crate::lsq::least_squares;
use crate::model::{HamiltonianSpec, MelnikovCoeffs, OneForm};
use crate::ovals::{energy_range, Annulus};
use crate::roots::brent;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MelnikovValue<T> {
    pub t: T,
    pub value: T,
    pub converged: bool,
}

pub fn eval<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    t: T,
    tol: T,
) -> Result<MelnikovValue<T>> {
    let tr = triple(spec, annulus, t, tol)?;
    Ok(MelnikovValue {
        t,
        value: coeffs.combine(tr.j),
        converged: tr.converged,
    })
}

pub fn eval_grid<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    ts: &[T],
    tol: T,
) -> Result<Vec<MelnikovValue<T>>> {
    Ok(triples(spec, annulus, ts, tol)?
        .into_iter()
        .map(|tr| MelnikovValue {
            t: tr.t,
            value: coeffs.combine(tr.j),
            converged: tr.converged,
        })
        .collect())
}

/// `M(t) = d₀ + d₁ t ln t + d₂ t + d₃ t² ln t + …`, plus the `ln t`
/// coefficient when γ ≠ 0. The fit also carries a `t²` column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MelnikovExpansion<T> {
    pub d0: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
    pub log_coefficient: Option<T>,
    pub fit_residual: T,
    pub condition: T,
    pub ill_conditioned: bool,
}

/// Window |t| ∈ [1e−6, 1e−2] on the loop side of the annulus.
pub fn expansion_window<T: Real>(annulus: Annulus, n: usize) -> Vec<T> {
    let s = if annulus == Annulus::SigmaMinus {
        T::one()
    } else {
        -T::one()
    };
    geometric_window(s * T::lit(1e-6), s * T::lit(1e-2), n)
}

pub fn expansion<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    window: &[T],
) -> Result<MelnikovExpansion<T>> {
    if window.len() < 8 {
        return Err(Error::Precondition(
            "expansion window needs at least 8 points".into(),
        ));
    }
    let tol = T::lit(1e-13).max(T::tol_floor());
    let values = eval_grid(coeffs, spec, annulus, window, tol)?;
    let with_log = coeffs.gamma != T::zero();
    let rows: Vec<Vec<T>> = window
        .iter()
        .map(|&t| {
            let l = t.abs().ln();
            let mut r = vec![T::one(), t * l, t, t * t * l, t * t];
            if with_log {
                r.push(l);
            }
            r
        })
        .collect();
    let b: Vec<T> = values.iter().map(|v| v.value).collect();
    let fit = least_squares(&rows, &b);
    Ok(MelnikovExpansion {
        d0: fit.coeffs[0],
        d1: fit.coeffs[1],
        d2: fit.coeffs[2],
        d3: fit.coeffs[3],
        log_coefficient: with_log.then(|| fit.coeffs[5]),
        fit_residual: fit.residual,
        ill_conditioned: fit.condition > T::lit(ILL_CONDITIONED),
        condition: fit.condition,
    })
}

/// `d₀ = α J₀(0) + β J₁(0)` from the loop integrals directly.
pub fn loop_value<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
) -> Result<T> {
    let [j0, j1] = loop_moments(spec, annulus, T::lit(1e-14).max(T::tol_floor()))?;
    Ok(coeffs.alpha * j0.value + coeffs.beta * j1.value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCount<T> {
    pub count: usize,
    pub zeros: Vec<T>,
    pub warning: Option<String>,
    pub converged: bool,
}

/// Grid of `n` energies on `(lo, hi)`: half uniform, half geometric
/// towards the loop energy, merged and sorted.
pub fn annulus_grid<T: Real>(lo: T, hi: T, loop_energy: T, n: usize) -> Vec<T> {
    let n = n.max(4);
    let nu = n / 2;
    let ng = n - nu;
    let mut g: Vec<T> = (0..nu)
        .map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / T::from_usize(nu - 1).unwrap())
        .collect();
    let near_lo = (loop_energy - lo).abs() < (loop_energy - hi).abs();
    let (near, far) = if near_lo { (lo, hi) } else { (hi, lo) };
    let dn = (near - loop_energy).abs();
    let df = (far - loop_energy).abs();
    if dn > T::zero() {
        let sign = (near - loop_energy).signum();
        for i in 0..ng {
            let f = T::from_usize(i).unwrap() / T::from_usize(ng - 1).unwrap();
            let d = (dn.ln() + (df.ln() - dn.ln()) * f).exp();
            g.push(loop_energy + sign * d);
        }
    }
    g.retain(|&t| t >= lo.min(hi) && t <= lo.max(hi));
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    g
}

/// Sign-change zero count on `(t_range)` refined by Brent to 1e−10.
pub fn count_zeros<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
    t_range: (T, T),
    resolution: usize,
) -> Result<ZeroCount<T>> {
    if coeffs.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let range = energy_range(spec, annulus)?;
    let (lo, hi) = (t_range.0.min(t_range.1), t_range.0.max(t_range.1));
    if !(lo > range.lo && hi < range.hi) {
        return Err(Error::Precondition(format!(
            "t range ({lo}, {hi}) not strictly inside ({}, {})",
            range.lo, range.hi
        )));
    }
    let tol = T::lit(1e-13).max(T::tol_floor());
    let grid = annulus_grid(lo, hi, range.loop_energy(annulus), resolution);
    let vals = eval_grid(coeffs, spec, annulus, &grid, tol)?;
    let mut converged = vals.iter().all(|v| v.converged);
    let brackets: Vec<usize> = (0..vals.len() - 1)
        .filter(|&i| (vals[i].value > T::zero()) != (vals[i + 1].value > T::zero()))
        .collect();
    let close = brackets.windows(2).any(|w| w[1] - w[0] <= 2);
    let warning = close.then(|| "grid too coarse relative to detected oscillation".to_string());
    let zeros: Vec<T> = brackets
        .par_iter()
        .map(|&i| {
            let f = |t: T| {
                eval(coeffs, spec, annulus, t, tol)
                    .map(|v| v.value)
                    .unwrap_or(T::nan())
            };
            brent(f, grid[i], grid[i + 1], T::lit(1e-10))
        })
        .collect::<Result<_>>()?;
    converged &= zeros.iter().all(|z| z.is_finite());
    Ok(ZeroCount {
        count: zeros.len(),
        zeros,
        warning,
        converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusKind {
    Closed,
    Open,
}

/// Upper bounds on limit cycles born from the loop Γ and from the annulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cyclicity {
    pub from_loop: u32,
    pub from_annulus: u32,
    pub annulus: AnnulusKind,
    pub rule: &'static str,
}

pub fn classify_cyclicity<T: Real>(
    coeffs: &MelnikovCoeffs<T>,
    d0_is_zero: bool,
) -> Result<Cyclicity> {
    if coeffs.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let zero = T::zero();
    let (alpha, gamma) = (coeffs.alpha, coeffs.gamma);
    let c = |from_loop, from_annulus, annulus, rule| {
        Ok(Cyclicity {
            from_loop,
            from_annulus,
            annulus,
            rule,
        })
    };
    let inconsistent = || {
        Err(Error::Precondition(
            "M(0) = beta J_1(0) cannot vanish when alpha = gamma = 0 and beta != 0".into(),
        ))
    };
    if coeffs.order == 1 {
        if gamma != zero {
            return Err(Error::InvalidParameter(
                "first-order Melnikov function with gamma != 0".into(),
            ));
        }
        return match (d0_is_zero, alpha == zero) {
            (false, _) => c(0, 1, AnnulusKind::Closed, "k = 1, M_1(0) != 0"),
            (true, true) => inconsistent(),
            (true, false) => c(2, 0, AnnulusKind::Open, "k = 1, M_1(0) = 0"),
        };
    }
    if gamma != zero {
        return c(0, 2, AnnulusKind::Closed, "k >= 2, gamma != 0");
    }
    match (alpha == zero, d0_is_zero) {
        (true, true) => inconsistent(),
        (true, false) => c(
            3,
            0,
            AnnulusKind::Open,
            "k >= 2, gamma = alpha = 0, beta != 0",
        ),
        (false, true) => c(2, 0, AnnulusKind::Open, "k >= 2, gamma = 0, M_k(0) = 0"),
        (false, false) => c(
            0,
            1,
            AnnulusKind::Closed,
            "k >= 2, gamma = 0, alpha != 0, M_k(0) != 0",
        ),
    }
}

/// Melnikov coefficients of a quadratic perturbation `ẋ = H_y + εg, ẏ = −H_x − εf`
/// of the normal form. The return map in the H-chart on SigmaPlus is
/// `t ↦ t + ε M₁(t) + …` with `M₁ = −∮ω = ∬ dω = c₀ J₀ + c₁ J₁`.
pub fn first_order_from_form<T: Real>(omega: &OneForm<T>) -> MelnikovCoeffs<T> {
    let [c0, c1, _] = omega.exterior_derivative();
    MelnikovCoeffs::first_order(c0, c1)
}

/// First Poincaré–Pontryagin function `∮ P dx` of the appendix deformation
/// on the upper annulus, as `(16 + μ₂) J₀ − 2π√3 J₁` in the y-axis moments
/// (`c x` and `μ₁` drop out by symmetry and exactness).
pub fn appendix_first_order<T: Real>(mu2: T) -> MelnikovCoeffs<T> {
    let root3 = T::lit(3.0).sqrt();
    MelnikovCoeffs::first_order(T::lit(16.0) + mu2, -T::lit(2.0) * T::PI() * root3)
}

/// Cubic `R = Σ r_ij x^i y^j` without constant term, in the order
/// `[x, y, x², xy, y², x³, x²y, xy², y³]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Cubic<T>(pub [T; 9]);

impl<T: Real> Cubic<T> {
    /// `(R_x, R_y)` as quadratics in the order `[1, x, y, x², xy, y²]`.
    pub fn gradient(&self) -> ([T; 6], [T; 6]) {
        let r = &self.0;
        let (two, three) = (T::lit(2.0), T::lit(3.0));
        let rx = [r[0], two * r[2], r[3], three * r[5], two * r[6], r[7]];
        let ry = [r[1], r[3], two * r[4], r[6], two * r[7], three * r[8]];
        (rx, ry)
    }
}

/// Perturbation with `ω₁ = κ y² dx + dR` (so M₁ ≡ 0) and a free second
/// form `ω₂`: `ẋ = H_y + εg₁ + ε²g₂, ẏ = −H_x − εf₁ − ε²f₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaPerturbation<T> {
    pub kappa: T,
    pub r: Cubic<T>,
    pub omega2: OneForm<T>,
}

impl<T: Real> GammaPerturbation<T> {
    pub fn new(kappa: T, r: Cubic<T>, omega2: OneForm<T>) -> Result<Self> {
        if r.0[8] != T::zero() {
            return Err(Error::InvalidParameter(
                "the y³ coefficient of R must vanish".into(),
            ));
        }
        Ok(Self { kappa, r, omega2 })
    }

    pub fn omega1(&self) -> OneForm<T> {
        let (rx, ry) = self.r.gradient();
        let mut f = rx;
        f[5] = f[5] + self.kappa;
        OneForm {
            f: crate::model::Quadratic(f),
            g: crate::model::Quadratic(ry),
        }
    }

    /// `M₂ = ∮(g₁ω₁ − ω₂)` with `g₁ = −κ ln x`, which reduces to
    /// `κ(r_y J₋₁ + r_xy J₀ + r_x²y J₁) + c₀(ω₂) J₀ + c₁(ω₂) J₁`.
    pub fn second_order(&self) -> MelnikovCoeffs<T> {
        let r = &self.r.0;
        let [c0, c1, _] = self.omega2.exterior_derivative();
        MelnikovCoeffs {
            alpha: self.kappa * r[3] + c0,
            beta: self.kappa * r[6] + c1,
            gamma: self.kappa * r[1],
            order: 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nf(a: f64) -> HamiltonianSpec<f64> {
        HamiltonianSpec::normal_form(a).unwrap()
    }

    #[test]
    fn zero_form_is_zero() {
        let c = MelnikovCoeffs::new(0.0, 0.0, 0.0, 2).unwrap();
        assert_eq!(
            eval(&c, &nf(1.0), Annulus::SigmaPlus, -0.7, 1e-12)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            count_zeros(&c, &nf(1.0), Annulus::SigmaPlus, (-1.9, -0.1), 50).unwrap_err(),
            Error::IdenticallyZero
        );
    }

    #[test]
    fn loop_value_is_d0() {
        let r3 = 3f64.sqrt();
        let c = MelnikovCoeffs::first_order(2.0 * r3, -1.5 * PI);
        assert!(loop_value(&c, &nf(1.0), Annulus::SigmaPlus).unwrap().abs() < 1e-13);
        let c = MelnikovCoeffs::first_order(1.0, 0.0);
        let v = eval(&c, &nf(1.0), Annulus::SigmaPlus, -1e-10, 1e-13)
            .unwrap()
            .value;
        assert!((v - 1.5 * PI).abs() < 1e-8);
    }

    #[test]
    fn expansion_coefficients() {
        let s = nf(1.0);
        let w = expansion_window(Annulus::SigmaPlus, 30);
        let e = expansion(
            &MelnikovCoeffs::first_order(0.0, 1.0),
            &s,
            Annulus::SigmaPlus,
            &w,
        )
        .unwrap();
        assert!((e.d0 - 2.0 * 3f64.sqrt()).abs() < 1e-8);
        assert!(e.d1.abs() < 1e-6);
        let e = expansion(
            &MelnikovCoeffs::first_order(1.0, 0.0),
            &s,
            Annulus::SigmaPlus,
            &w,
        )
        .unwrap();
        assert!((e.d1 + 1.0 / 3f64.sqrt()).abs() < 1e-3, "{}", e.d1);
        let g = MelnikovCoeffs::new(0.0, 0.0, 1.0, 2).unwrap();
        let e = expansion(&g, &s, Annulus::SigmaPlus, &w).unwrap();
        assert!((e.log_coefficient.unwrap() + 2.0 * 3f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn constructed_zero_is_found() {
        let s = nf(1.0);
        let ts = -0.8;
        let tr = triple(&s, Annulus::SigmaPlus, ts, 1e-13).unwrap();
        let c = MelnikovCoeffs::first_order(tr.j[2] * 0.3, -tr.j[1] * 0.3);
        let z = count_zeros(&c, &s, Annulus::SigmaPlus, (-1.95, -1e-6), 80).unwrap();
        assert_eq!(z.count, 1);
        assert!((z.zeros[0] - ts).abs() < 1e-9);
        let z = count_zeros(
            &MelnikovCoeffs::first_order(1.0, 0.0),
            &s,
            Annulus::SigmaPlus,
            (-1.95, -1e-6),
            80,
        )
        .unwrap();
        assert_eq!(z.count, 0);
    }

    #[test]
    fn theorem_bullets() {
        let k = |a, b, g, o| MelnikovCoeffs {
            alpha: a,
            beta: b,
            gamma: g,
            order: o,
        };
        let r = classify_cyclicity(&k(0.0, 0.0, 1.0, 2), false).unwrap();
        assert_eq!(
            (r.from_loop, r.from_annulus, r.annulus),
            (0, 2, AnnulusKind::Closed)
        );
        let r = classify_cyclicity(&k(1.0, 0.5, 0.0, 3), false).unwrap();
        assert_eq!(
            (r.from_loop, r.from_annulus, r.annulus),
            (0, 1, AnnulusKind::Closed)
        );
        let r = classify_cyclicity(&k(0.0, 1.0, 0.0, 2), false).unwrap();
        assert_eq!(
            (r.from_loop, r.from_annulus, r.annulus),
            (3, 0, AnnulusKind::Open)
        );
        let r = classify_cyclicity(&k(1.0, 0.5, 0.0, 2), true).unwrap();
        assert_eq!((r.from_loop, r.from_annulus), (2, 0));
        let r = classify_cyclicity(&k(1.0, 0.5, 0.0, 1), true).unwrap();
        assert_eq!(
            (r.from_loop, r.from_annulus, r.annulus),
            (2, 0, AnnulusKind::Open)
        );
        let r = classify_cyclicity(&k(1.0, 0.5, 0.0, 1), false).unwrap();
        assert_eq!(
            (r.from_loop, r.from_annulus, r.annulus),
            (0, 1, AnnulusKind::Closed)
        );
        assert!(classify_cyclicity(&k(0.0, 0.0, 0.0, 2), false).is_err());
    }

    #[test]
    fn gamma_perturbation_has_exact_first_form() {
        let mut r = Cubic::<f64>::default();
        r.0[1] = 0.7;
        r.0[3] = -0.2;
        r.0[6] = 0.4;
        let p = GammaPerturbation::new(1.5, r, OneForm::default()).unwrap();
        let w1 = p.omega1();
        // dω₁ = d(κ y² dx) = −2κ y dx∧dy
        assert_eq!(w1.exterior_derivative(), [0.0, 0.0, -3.0]);
        let m = p.second_order();
        assert_eq!(
            (m.alpha, m.beta, m.gamma),
            (1.5 * -0.2, 1.5 * 0.4, 1.5 * 0.7)
        );
    }
}
