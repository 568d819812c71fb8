use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

pub type Point<T> = [T; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[serde(alias = "normal", alias = "normalform")]
    NormalForm,
    #[serde(alias = "appendix_ellipse")]
    Appendix,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::NormalForm => "normal_form",
            Family::Appendix => "appendix",
        }
    }
}

/// Normal form `H = x[y² + a x² − 3(a−1)x + 3(a−2)]`, or the ellipse
/// Hamiltonian `H = y(x² + y²/12 − 1)` with its deformation coefficient `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpec<T> {
    family: Family,
    a: T,
    c: T,
    two_saddle_loop: bool,
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn normal_form(a: T) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!("a = {a} is not finite")));
        }
        let radicand = T::lit(3.0) * (T::lit(2.0) - a);
        let two_saddle_loop = radicand > T::zero() && a > -T::one();
        Ok(Self {
            family: Family::NormalForm,
            a,
            c: T::zero(),
            two_saddle_loop,
        })
    }

    pub fn appendix(c: T) -> Result<Self> {
        if !(c > T::lit(16.0)) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c = {c} must exceed 16")));
        }
        Ok(Self {
            family: Family::Appendix,
            a: T::zero(),
            c,
            two_saddle_loop: true,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Normal-form parameter; zero for the appendix family.
    pub fn a(&self) -> T {
        self.a
    }

    /// Appendix deformation coefficient; zero for the normal form.
    pub fn c(&self) -> T {
        self.c
    }

    pub fn has_two_saddle_loop(&self) -> bool {
        self.two_saddle_loop
    }

    pub fn require_loop(&self) -> Result<()> {
        if self.two_saddle_loop {
            Ok(())
        } else {
            Err(Error::NoTwoSaddleLoop(to_f64(self.a)))
        }
    }

    pub fn eval(&self, p: Point<T>) -> T {
        let [x, y] = p;
        let three = T::lit(3.0);
        match self.family {
            Family::NormalForm => {
                let a = self.a;
                x * (y * y + a * x * x - three * (a - T::one()) * x + three * (a - T::lit(2.0)))
            }
            Family::Appendix => y * (x * x + y * y / T::lit(12.0) - T::one()),
        }
    }

    /// `(H_x, H_y)`.
    pub fn gradient(&self, p: Point<T>) -> Point<T> {
        let [x, y] = p;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        match self.family {
            Family::NormalForm => {
                let a = self.a;
                let hx = y * y + three * a * x * x - T::lit(6.0) * (a - T::one()) * x
                    + three * (a - two);
                [hx, two * x * y]
            }
            Family::Appendix => [two * x * y, x * x + y * y / T::lit(4.0) - T::one()],
        }
    }

    /// `[[H_xx, H_xy], [H_xy, H_yy]]`.
    pub fn hessian(&self, p: Point<T>) -> [[T; 2]; 2] {
        let [x, y] = p;
        let two = T::lit(2.0);
        match self.family {
            Family::NormalForm => {
                let hxx = T::lit(6.0) * self.a * x - T::lit(6.0) * (self.a - T::one());
                [[hxx, two * y], [two * y, two * x]]
            }
            Family::Appendix => [[two * y, two * x], [two * x, y / two]],
        }
    }

    /// Unperturbed field `(H_y, −H_x)`.
    pub fn hamiltonian_field(&self, p: Point<T>) -> Point<T> {
        let [hx, hy] = self.gradient(p);
        [hy, -hx]
    }

    pub fn critical_data(&self) -> CriticalData<T> {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        match self.family {
            Family::NormalForm => {
                let a = self.a;
                let r = three * (two - a);
                let saddles = (r > T::zero()).then(|| {
                    let ys = r.sqrt();
                    [[T::zero(), ys], [T::zero(), -ys]]
                });
                let second = (a > T::zero() && a < two).then(|| {
                    let xc = (a - two) / a;
                    let t1 = (a + T::one()) * (a - two) * (a - two) / (a * a);
                    ([xc, T::zero()], t1)
                });
                CriticalData {
                    center0: [T::one(), T::zero()],
                    t0: a - three,
                    saddles,
                    t_saddle: T::zero(),
                    center1: second.map(|s| s.0),
                    t1: second.map(|s| s.1),
                    two_saddle_loop: self.two_saddle_loop,
                }
            }
            Family::Appendix => CriticalData {
                center0: [T::zero(), two],
                t0: T::lit(-4.0) / three,
                saddles: Some([[-T::one(), T::zero()], [T::one(), T::zero()]]),
                t_saddle: T::zero(),
                center1: Some([T::zero(), -two]),
                t1: Some(T::lit(4.0) / three),
                two_saddle_loop: true,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalData<T> {
    pub center0: Point<T>,
    pub t0: T,
    /// Omitted when the saddles are complex.
    pub saddles: Option<[Point<T>; 2]>,
    pub t_saddle: T,
    pub center1: Option<Point<T>>,
    pub t1: Option<T>,
    pub two_saddle_loop: bool,
}

impl<T: Real> CriticalData<T> {
    /// Every stored point with its stored energy.
    pub fn points(&self) -> Vec<(Point<T>, T)> {
        let mut out = vec![(self.center0, self.t0)];
        if let Some(s) = self.saddles {
            out.push((s[0], self.t_saddle));
            out.push((s[1], self.t_saddle));
        }
        if let (Some(p), Some(t)) = (self.center1, self.t1) {
            out.push((p, t));
        }
        out
    }
}

/// Configuration record `{family, a | c}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecRecord {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl SpecRecord {
    pub fn build<T: Real>(&self) -> Result<HamiltonianSpec<T>> {
        let cast = |v: f64| T::from_f64(v).expect("f64 representable");
        match self.family {
            Family::NormalForm => {
                if self.c.is_some() {
                    return Err(Error::FieldNotApplicable {
                        field: "c",
                        family: "normal_form",
                    });
                }
                let a = self
                    .a
                    .ok_or_else(|| Error::InvalidParameter("missing field a".into()))?;
                HamiltonianSpec::normal_form(cast(a))
            }
            Family::Appendix => {
                if self.a.is_some() {
                    return Err(Error::FieldNotApplicable {
                        field: "a",
                        family: "appendix",
                    });
                }
                let c = self
                    .c
                    .ok_or_else(|| Error::InvalidParameter("missing field c".into()))?;
                HamiltonianSpec::appendix(cast(c))
            }
        }
    }
}

impl<T: Real> From<&HamiltonianSpec<T>> for SpecRecord {
    fn from(s: &HamiltonianSpec<T>) -> Self {
        match s.family {
            Family::NormalForm => SpecRecord {
                family: s.family,
                a: Some(to_f64(s.a)),
                c: None,
            },
            Family::Appendix => SpecRecord {
                family: s.family,
                a: None,
                c: Some(to_f64(s.c)),
            },
        }
    }
}

/// Coefficients of `M_k(t) = α J₀ + β J₁ + γ J₋₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MelnikovCoeffs<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub order: u32,
}

impl<T: Real> MelnikovCoeffs<T> {
    pub fn new(alpha: T, beta: T, gamma: T, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        if order == 1 && gamma != T::zero() {
            return Err(Error::InvalidParameter(
                "first-order Melnikov function has no x^-1 term (gamma must be 0)".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            order,
        })
    }

    pub fn first_order(alpha: T, beta: T) -> Self {
        Self {
            alpha,
            beta,
            gamma: T::zero(),
            order: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == T::zero() && self.beta == T::zero() && self.gamma == T::zero()
    }

    /// `α J₀ + β J₁ + γ J₋₁` for `j = (J₋₁, J₀, J₁)`.
    pub fn combine(&self, j: [T; 3]) -> T {
        self.alpha * j[1] + self.beta * j[2] + self.gamma * j[0]
    }
}

/// Appendix deformation `P = (16 + c x − π√3 y) y + μ₁ + μ₂ y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec<T> {
    pub epsilon: T,
    pub mu1: T,
    pub mu2: T,
}

/// Quadratic polynomial `c₀ + c₁x + c₂y + c₃x² + c₄xy + c₅y²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quadratic<T>(pub [T; 6]);

impl<T: Real> Quadratic<T> {
    pub fn eval(&self, p: Point<T>) -> T {
        let [x, y] = p;
        let c = &self.0;
        c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y
    }

    /// `(∂/∂x, ∂/∂y)`.
    pub fn gradient(&self, p: Point<T>) -> Point<T> {
        let [x, y] = p;
        let c = &self.0;
        let two = T::lit(2.0);
        [
            c[1] + two * c[3] * x + c[4] * y,
            c[2] + c[4] * x + two * c[5] * y,
        ]
    }
}

/// One-form `ω = f dx + g dy` with quadratic coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OneForm<T> {
    pub f: Quadratic<T>,
    pub g: Quadratic<T>,
}

impl<T: Real> OneForm<T> {
    /// `dω = (g_x − f_y) dx∧dy = (c₀ + c₁x + c₂y) dx∧dy`.
    pub fn exterior_derivative(&self) -> [T; 3] {
        let two = T::lit(2.0);
        let (f, g) = (&self.f.0, &self.g.0);
        [g[1] - f[2], two * g[3] - f[4], g[4] - two * f[5]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_values() {
        let s = HamiltonianSpec::normal_form(1.0f64).unwrap();
        assert_eq!(s.eval([1.0, 0.0]), -2.0);
        assert_eq!(s.eval([0.0, 0.7]), 0.0);
        let cd = s.critical_data();
        let r3 = 3f64.sqrt();
        assert_eq!(cd.saddles, Some([[0.0, r3], [0.0, -r3]]));
        assert_eq!(cd.t0, -2.0);
        assert_eq!(cd.center1, Some([-1.0, 0.0]));
        assert_eq!(cd.t1, Some(2.0));
    }

    #[test]
    fn second_center_at_half() {
        let s = HamiltonianSpec::normal_form(0.5f64).unwrap();
        let cd = s.critical_data();
        assert_eq!(cd.center1, Some([-3.0, 0.0]));
        assert!((cd.t1.unwrap() - 13.5).abs() < 1e-12);
    }

    #[test]
    fn appendix_values() {
        let s = HamiltonianSpec::appendix(17.0f64).unwrap();
        assert!((s.eval([0.0, 2.0]) + 4.0 / 3.0).abs() < 1e-15);
        assert!((s.eval([0.0, 1.0]) + 11.0 / 12.0).abs() < 1e-15);
        let cd = s.critical_data();
        assert_eq!(cd.saddles, Some([[-1.0, 0.0], [1.0, 0.0]]));
        for (p, _) in cd.points() {
            let g = s.gradient(p);
            assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12);
        }
        assert!(HamiltonianSpec::appendix(16.0).is_err());
    }

    #[test]
    fn loop_flag_outside_range() {
        assert!(!HamiltonianSpec::normal_form(2.5f64)
            .unwrap()
            .has_two_saddle_loop());
        assert!(!HamiltonianSpec::normal_form(-1.0f64)
            .unwrap()
            .has_two_saddle_loop());
        assert!(HamiltonianSpec::normal_form(2.5f64)
            .unwrap()
            .critical_data()
            .saddles
            .is_none());
        assert!(HamiltonianSpec::normal_form(-1.5f64)
            .unwrap()
            .critical_data()
            .saddles
            .is_some());
    }

    #[test]
    fn record_field_errors() {
        let r: SpecRecord =
            serde_json::from_str(r#"{"family":"appendix","a":1.0,"c":17}"#).unwrap();
        let e = r.build::<f64>().unwrap_err();
        assert_eq!(e.to_string(), "a not applicable to family=appendix");
        let r: SpecRecord = serde_json::from_str(r#"{"family":"normal_form","a":0.5}"#).unwrap();
        assert_eq!(r.build::<f64>().unwrap().a(), 0.5);
    }

    #[test]
    fn first_order_rejects_gamma() {
        assert!(MelnikovCoeffs::new(1.0, 0.0, 1.0, 1).is_err());
        assert!(MelnikovCoeffs::new(1.0, 0.0, 1.0, 2).is_ok());
    }

    #[test]
    fn exterior_derivative_of_exact_form_vanishes() {
        // d(x²y) = 2xy dx + x² dy
        let mut w = OneForm::<f64>::default();
        w.f.0[4] = 2.0;
        w.g.0[3] = 1.0;
        assert_eq!(w.exterior_derivative(), [0.0, 0.0, 0.0]);
    }
}
