use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Family, HamiltonianSpec, Point};
use crate::roots::{brent, quadratic_roots};
use crate::scalar::{to_f64, Real};

/// Period annulus. `SigmaPlus` surrounds the center (1,0) of the normal
/// form, `SigmaMinus` the second center ((a−2)/a, 0) for a ∈ (0,2), and
/// `Upper` the center (0,2) of the appendix Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Annulus {
    #[serde(alias = "plus")]
    SigmaPlus,
    #[serde(alias = "minus")]
    SigmaMinus,
    Upper,
}

/// Sense of rotation of the Hamiltonian flow on the oval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

/// Restriction of H to the symmetry axis, `K(s) = p s³ + q s² + r s`.
/// The level set H = t is `w² = (t − K(s))/s` with `w` the other coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisCubic<T> {
    pub p: T,
    pub q: T,
    pub r: T,
}

impl<T: Real> AxisCubic<T> {
    pub fn of(spec: &HamiltonianSpec<T>) -> Self {
        let three = T::lit(3.0);
        match spec.family() {
            Family::NormalForm => {
                let a = spec.a();
                Self {
                    p: a,
                    q: -three * (a - T::one()),
                    r: three * (a - T::lit(2.0)),
                }
            }
            Family::Appendix => Self {
                p: T::one() / T::lit(12.0),
                q: T::zero(),
                r: -T::one(),
            },
        }
    }

    pub fn eval(&self, s: T) -> T {
        ((self.p * s + self.q) * s + self.r) * s
    }

    pub fn derivative(&self, s: T) -> T {
        (T::lit(3.0) * self.p * s + T::lit(2.0) * self.q) * s + self.r
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRange<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Real> EnergyRange<T> {
    pub fn contains(&self, t: T) -> bool {
        let above = if self.lo_closed {
            t >= self.lo
        } else {
            t > self.lo
        };
        let below = if self.hi_closed {
            t <= self.hi
        } else {
            t < self.hi
        };
        above && below
    }

    /// Energy of the center the annulus shrinks to.
    pub fn center_energy(&self, annulus: Annulus) -> T {
        match annulus {
            Annulus::SigmaMinus => self.hi,
            _ => self.lo,
        }
    }

    /// Energy of the loop bounding the annulus.
    pub fn loop_energy(&self, annulus: Annulus) -> T {
        match annulus {
            Annulus::SigmaMinus => self.lo,
            _ => self.hi,
        }
    }
}

/// Where the oval crosses the symmetry axis, and its projection bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Brackets<T> {
    left: (T, T),
    right: (T, T),
}

pub fn energy_range<T: Real>(
    spec: &HamiltonianSpec<T>,
    annulus: Annulus,
) -> Result<EnergyRange<T>> {
    let cd = spec.critical_data();
    match (spec.family(), annulus) {
        (Family::NormalForm, Annulus::SigmaPlus) => {
            let a = spec.a();
            let two = T::lit(2.0);
            let hi = if spec.has_two_saddle_loop() {
                T::zero()
            } else if a == T::zero() {
                return Err(Error::NoAnnulus(format!(
                    "a = {a}: no bounded annulus around (1,0)"
                )));
            } else {
                (a + T::one()) * (a - two) * (a - two) / (a * a)
            };
            if !(hi > cd.t0) {
                return Err(Error::NoAnnulus(format!(
                    "a = {a}: empty annulus around (1,0)"
                )));
            }
            Ok(EnergyRange {
                lo: cd.t0,
                hi,
                lo_closed: false,
                hi_closed: false,
            })
        }
        (Family::NormalForm, Annulus::SigmaMinus) => match cd.t1 {
            Some(t1) => Ok(EnergyRange {
                lo: T::zero(),
                hi: t1,
                lo_closed: false,
                hi_closed: true,
            }),
            None => Err(Error::NoAnnulus(format!(
                "SigmaMinus requires a in (0,2), got a = {}",
                spec.a()
            ))),
        },
        (Family::Appendix, Annulus::Upper) => Ok(EnergyRange {
            lo: cd.t0,
            hi: T::zero(),
            lo_closed: false,
            hi_closed: false,
        }),
        (f, an) => Err(Error::NoAnnulus(format!(
            "{an:?} is not an annulus of family {}",
            f.name()
        ))),
    }
}

fn smallest_positive_root_of_r<T: Real>(a: T) -> Option<T> {
    let three = T::lit(3.0);
    let (r1, r2) = quadratic_roots(-a, three * (a - T::one()), -three * (a - T::lit(2.0)))?;
    [r1, r2]
        .into_iter()
        .filter(|&r| r > T::zero())
        .reduce(T::min)
}

fn negative_root_of_r<T: Real>(a: T) -> Option<T> {
    let three = T::lit(3.0);
    let (r1, r2) = quadratic_roots(-a, three * (a - T::one()), -three * (a - T::lit(2.0)))?;
    [r1, r2]
        .into_iter()
        .filter(|&r| r < T::zero())
        .reduce(T::max)
}

fn brackets<T: Real>(spec: &HamiltonianSpec<T>, annulus: Annulus, t: T) -> Result<Brackets<T>> {
    let two = T::lit(2.0);
    match (spec.family(), annulus) {
        (Family::NormalForm, Annulus::SigmaPlus) => {
            let a = spec.a();
            let xc = if a != T::zero() {
                (a - two) / a
            } else {
                T::nan()
            };
            let left = if xc > T::zero() && xc < T::one() {
                xc
            } else {
                T::zero()
            };
            let right = if spec.has_two_saddle_loop() {
                smallest_positive_root_of_r(a)
                    .ok_or_else(|| Error::Bracketing(format!("no positive root of r at a = {a}")))?
            } else if a < T::zero() {
                xc
            } else {
                let k = AxisCubic::of(spec);
                let mut r = two;
                while k.eval(r) <= t {
                    r = r * two;
                    if !r.is_finite() {
                        return Err(Error::Bracketing("right oval endpoint unbounded".into()));
                    }
                }
                r
            };
            Ok(Brackets {
                left: (left, T::one()),
                right: (T::one(), right),
            })
        }
        (Family::NormalForm, Annulus::SigmaMinus) => {
            let a = spec.a();
            let xc = (a - two) / a;
            let xm = negative_root_of_r(a)
                .ok_or_else(|| Error::Bracketing(format!("no negative root of r at a = {a}")))?;
            Ok(Brackets {
                left: (xm, xc),
                right: (xc, T::zero()),
            })
        }
        (Family::Appendix, Annulus::Upper) => {
            let top = two * T::lit(3.0).sqrt();
            Ok(Brackets {
                left: (T::zero(), two),
                right: (two, top),
            })
        }
        (f, an) => Err(Error::NoAnnulus(format!(
            "{an:?} is not an annulus of family {}",
            f.name()
        ))),
    }
}

/// One real oval of `H = t`, stored as a graph `w = ±√((t − K(s))/s)` over
/// `s ∈ [lo, hi]` on the symmetry axis (s = x for the normal form,
/// s = y for the appendix family).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OvalSlice<T> {
    pub t: T,
    pub lo: T,
    pub hi: T,
    pub annulus: Annulus,
    pub family: Family,
    pub orientation: Orientation,
    pub cubic: AxisCubic<T>,
}

pub fn slice<T: Real>(spec: &HamiltonianSpec<T>, annulus: Annulus, t: T) -> Result<OvalSlice<T>> {
    let range = energy_range(spec, annulus)?;
    if !range.contains(t) {
        return Err(Error::OutOfRange {
            t: to_f64(t),
            lo: to_f64(range.lo),
            hi: to_f64(range.hi),
        });
    }
    let cubic = AxisCubic::of(spec);
    let orientation = match annulus {
        Annulus::SigmaMinus => Orientation::CounterClockwise,
        _ => Orientation::Clockwise,
    };
    let base = OvalSlice {
        t,
        lo: T::zero(),
        hi: T::zero(),
        annulus,
        family: spec.family(),
        orientation,
        cubic,
    };
    if annulus == Annulus::SigmaMinus && t == range.hi {
        let xc = spec
            .critical_data()
            .center1
            .expect("center1 exists on SigmaMinus")[0];
        return Ok(OvalSlice {
            lo: xc,
            hi: xc,
            ..base
        });
    }
    let br = brackets(spec, annulus, t)?;
    let g = |s: T| cubic.eval(s) - t;
    let root = |(l, h): (T, T)| {
        let xtol = T::epsilon() * (l.abs() + h.abs());
        brent(g, l, h, xtol).map_err(|e| {
            Error::Bracketing(format!(
                "{e}; annulus {annulus:?}, t = {t}, bracket [{l}, {h}]"
            ))
        })
    };
    let lo = root(br.left)?;
    let hi = root(br.right)?;
    Ok(OvalSlice { lo, hi, ..base })
}

impl<T: Real> OvalSlice<T> {
    /// `w²(s) = (t − K(s))/s`; equals `y² = t/x + r(x)` for the normal form.
    pub fn width_sq(&self, s: T) -> T {
        (self.t - self.cubic.eval(s)) / s
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Smooth factor `(t − K(s)) / ((s − lo)(hi − s))`, a linear function `p s + β`.
    pub fn linear_factor(&self, s: T) -> T {
        let beta = -self.t / (self.lo * self.hi);
        self.cubic.p * s + beta
    }

    /// Maps axis coordinate and transverse width to a phase-plane point.
    pub fn point(&self, s: T, w: T) -> Point<T> {
        match self.family {
            Family::NormalForm => [s, w],
            Family::Appendix => [w, s],
        }
    }

    /// `n` samples `(s, +w, −w)` clustered towards the endpoints.
    pub fn boundary(&self, n: usize) -> Vec<(T, T, T)> {
        let mid = (self.lo + self.hi) / T::lit(2.0);
        let half = (self.hi - self.lo) / T::lit(2.0);
        (0..n)
            .map(|i| {
                let frac = if n > 1 {
                    T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap()
                } else {
                    T::lit(0.5)
                };
                let theta = (frac - T::lit(0.5)) * T::PI();
                let s = (mid + half * theta.sin()).max(self.lo).min(self.hi);
                let w = self.width_sq(s).max(T::zero()).sqrt();
                (s, w, -w)
            })
            .collect()
    }
}

/// Straight Poincaré section `{origin + s·direction : s ∈ [s_min, s_max]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Section<T> {
    pub origin: Point<T>,
    pub direction: Point<T>,
    pub s_min: T,
    pub s_max: T,
    /// Sign of the rate of change of `functional` along the unperturbed flow.
    pub crossing_sign: T,
}

impl<T: Real> Section<T> {
    pub fn point(&self, s: T) -> Point<T> {
        [
            self.origin[0] + s * self.direction[0],
            self.origin[1] + s * self.direction[1],
        ]
    }

    pub fn coordinate(&self, p: Point<T>) -> T {
        (p[0] - self.origin[0]) * self.direction[0] + (p[1] - self.origin[1]) * self.direction[1]
    }

    /// Signed distance from the section line.
    pub fn functional(&self, p: Point<T>) -> T {
        (p[1] - self.origin[1]) * self.direction[0] - (p[0] - self.origin[0]) * self.direction[1]
    }

    pub fn contains(&self, s: T) -> bool {
        s > self.s_min && s < self.s_max
    }
}

pub fn section_segment<T: Real>(spec: &HamiltonianSpec<T>, annulus: Annulus) -> Result<Section<T>> {
    spec.require_loop()?;
    let zero = T::zero();
    let (origin, direction, s_min, s_max) = match (spec.family(), annulus) {
        (Family::NormalForm, Annulus::SigmaPlus) => {
            let x1 = smallest_positive_root_of_r(spec.a())
                .ok_or_else(|| Error::NoAnnulus("no outer loop crossing".into()))?;
            ([zero, zero], [T::one(), zero], T::one(), x1)
        }
        (Family::NormalForm, Annulus::SigmaMinus) => {
            let cd = spec.critical_data();
            let c1 = cd
                .center1
                .ok_or_else(|| Error::NoAnnulus("SigmaMinus requires a in (0,2)".into()))?;
            ([zero, zero], [T::one(), zero], c1[0], zero)
        }
        (Family::Appendix, Annulus::Upper) => ([zero, zero], [zero, T::one()], zero, T::lit(2.0)),
        (f, an) => {
            return Err(Error::NoAnnulus(format!(
                "{an:?} is not an annulus of family {}",
                f.name()
            )))
        }
    };
    let mut sec = Section {
        origin,
        direction,
        s_min,
        s_max,
        crossing_sign: T::one(),
    };
    let n = 100;
    let energies: Vec<T> = (0..=n)
        .map(|i| {
            let f = T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
            spec.eval(sec.point(s_min + (s_max - s_min) * f))
        })
        .collect();
    let up = energies.windows(2).all(|w| w[1] > w[0]);
    let down = energies.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Error::Precondition(
            "energy not monotone along section".into(),
        ));
    }
    let mid = sec.point((s_min + s_max) / T::lit(2.0));
    let v = spec.hamiltonian_field(mid);
    let rate = v[1] * direction[0] - v[0] * direction[1];
    sec.crossing_sign = rate.signum();
    Ok(sec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(a: f64) -> HamiltonianSpec<f64> {
        HamiltonianSpec::normal_form(a).unwrap()
    }

    #[test]
    fn endpoints_are_polished() {
        for &a in &[-0.9, -0.5, 0.3, 1.0, 1.9] {
            for &t in &[a - 3.0 + 1e-3, (a - 3.0) / 2.0, -1e-6] {
                let s = slice(&nf(a), Annulus::SigmaPlus, t).unwrap();
                assert!(s.lo < 1.0 && s.hi > 1.0);
                for e in [s.lo, s.hi] {
                    assert!(
                        s.width_sq(e).abs() < 1e-12 * (1.0 + t.abs() / e),
                        "a={a} t={t}"
                    );
                }
                assert!(s.width_sq((s.lo + s.hi) / 2.0) > 0.0);
            }
        }
    }

    #[test]
    fn near_loop_limit_at_one() {
        let s = slice(&nf(1.0), Annulus::SigmaPlus, -1e-12).unwrap();
        assert!(s.lo < 1e-11);
        assert!((s.hi - 3f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn center_energy_rejected() {
        assert!(matches!(
            slice(&nf(1.0), Annulus::SigmaPlus, -2.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(slice(&nf(1.0), Annulus::SigmaPlus, 0.0).is_err());
    }

    #[test]
    fn sigma_minus_degenerate_endpoint() {
        let s = slice(&nf(0.5), Annulus::SigmaMinus, 13.5).unwrap();
        assert_eq!((s.lo, s.hi), (-3.0, -3.0));
        let s = slice(&nf(0.5), Annulus::SigmaMinus, 5.0).unwrap();
        assert!(s.hi < 0.0 && s.lo < -3.0 && s.hi > -3.0);
        assert!(slice(&nf(2.5), Annulus::SigmaMinus, 1.0).is_err());
        assert!(slice(&nf(-0.5), Annulus::SigmaMinus, 1.0).is_err());
    }

    #[test]
    fn appendix_ovals() {
        let sp = HamiltonianSpec::appendix(17.0f64).unwrap();
        let s = slice(&sp, Annulus::Upper, -11.0 / 12.0).unwrap();
        assert!((s.lo - 1.0).abs() < 1e-14);
        assert!(s.hi > 2.0 && s.hi < 12f64.sqrt());
        assert_eq!(s.point(1.0, 0.5), [0.5, 1.0]);
    }

    #[test]
    fn outside_loop_range_still_slices() {
        let s = slice(&nf(2.5), Annulus::SigmaPlus, -0.4).unwrap();
        assert!(s.lo > 0.2 && s.lo < 1.0 && s.hi > 1.0);
        let s = slice(&nf(-2.0), Annulus::SigmaPlus, -4.5).unwrap();
        assert!(s.hi < 2.0);
    }

    #[test]
    fn sections() {
        let sec = section_segment(&nf(1.0), Annulus::SigmaPlus).unwrap();
        assert_eq!(sec.s_min, 1.0);
        assert!((sec.s_max - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(nf(1.0).eval(sec.point(sec.s_min)), -2.0);
        assert_eq!(sec.crossing_sign, -1.0);
        let sp = HamiltonianSpec::appendix(17.0f64).unwrap();
        let sec = section_segment(&sp, Annulus::Upper).unwrap();
        assert_eq!(sec.point(2.0), [0.0, 2.0]);
        assert!(section_segment(&nf(2.5), Annulus::SigmaPlus).is_err());
    }
}
