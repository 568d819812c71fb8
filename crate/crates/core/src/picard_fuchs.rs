use serde::Serialize;

use crate::abelian::LogFit;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Field, Real};

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

/// `(A₁ t + A₀) J′ = B J` for `J = (J₋₁, J₀, J₁)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PfSystem<T> {
    pub a: T,
    pub a1: Mat3<T>,
    pub a0: Mat3<T>,
    pub b: Mat3<T>,
}

pub fn build<T: Field>(a: T) -> PfSystem<T> {
    let n = |k: i64| T::int(k);
    let z = || n(0);
    let a1 = [
        [n(1), z(), z()],
        [n(1) - a.clone(), n(2) * a.clone(), z()],
        [a.clone() - n(2), n(2) - n(2) * a.clone(), a.clone()],
    ];
    let a0 = [
        [z(), n(4) - n(2) * a.clone(), a.clone() - n(1)],
        [z(), z(), n(3) + n(2) * a.clone() - a.clone() * a.clone()],
        [z(), z(), z()],
    ];
    let b = [
        [T::ratio(1, 3), z(), z()],
        [z(), T::ratio(4, 3) * a.clone(), z()],
        [z(), T::ratio(3, 2) * (n(1) - a.clone()), a.clone()],
    ];
    PfSystem { a, a1, a0, b }
}

pub(crate) fn mat_vec<T: Field>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    let row = |i: usize| {
        m[i][0].clone() * v[0].clone()
            + m[i][1].clone() * v[1].clone()
            + m[i][2].clone() * v[2].clone()
    };
    [row(0), row(1), row(2)]
}

fn add<T: Field>(x: Vec3<T>, y: Vec3<T>) -> Vec3<T> {
    let [x0, x1, x2] = x;
    let [y0, y1, y2] = y;
    [x0 + y0, x1 + y1, x2 + y2]
}

fn scale<T: Field>(s: T, v: &Vec3<T>) -> Vec3<T> {
    [
        s.clone() * v[0].clone(),
        s.clone() * v[1].clone(),
        s * v[2].clone(),
    ]
}

impl<T: Field> PfSystem<T> {
    /// `(A₁ t + A₀) J′` and `B J`, the two sides of the system.
    pub fn sides(&self, t: T, j: &Vec3<T>, jp: &Vec3<T>) -> (Vec3<T>, Vec3<T>) {
        let lhs = add(scale(t, &mat_vec(&self.a1, jp)), mat_vec(&self.a0, jp));
        (lhs, mat_vec(&self.b, j))
    }

    /// `(j A₁ − B) q_j + (j+1) A₀ q_{j+1}`.
    pub fn recursion_defect(&self, j: usize, qj: &Vec3<T>, qn: &Vec3<T>) -> Vec3<T> {
        let jj = T::int(j as i64);
        let first = add(
            scale(jj.clone(), &mat_vec(&self.a1, qj)),
            scale(-T::int(1), &mat_vec(&self.b, qj)),
        );
        add(first, scale(jj + T::int(1), &mat_vec(&self.a0, qn)))
    }
}

fn norm<T: Real>(v: &Vec3<T>) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

/// `‖(A₁t + A₀)J′ − BJ‖ / (‖BJ‖ + floor)`.
pub fn residual<T: Real>(sys: &PfSystem<T>, t: T, j: &Vec3<T>, jp: &Vec3<T>) -> T {
    let (l, r) = sys.sides(t, j, jp);
    let d = [l[0] - r[0], l[1] - r[1], l[2] - r[2]];
    norm(&d) / (norm(&r) + T::epsilon())
}

/// Per-equation relative defects `|lhs_i − rhs_i| / max(|lhs_i|, |rhs_i|, floor)`.
pub fn row_residuals<T: Real>(sys: &PfSystem<T>, t: T, j: &Vec3<T>, jp: &Vec3<T>) -> Vec3<T> {
    let (l, r) = sys.sides(t, j, jp);
    [0, 1, 2].map(|i| (l[i] - r[i]).abs() / l[i].abs().max(r[i].abs()).max(T::epsilon()))
}

/// Fundamental system: the polynomial solution `P(t) = p₀ + p₁ t` and the
/// analytic solution `Q(t) = Σ q_j t^j`. The third solution is
/// `R = Q ln t + S` with `S` analytic; `S` is not computed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalSeries<T> {
    pub a: T,
    pub order: usize,
    pub p0: Vec3<T>,
    pub p1: Vec3<T>,
    pub q: Vec<Vec3<T>>,
    pub s_note: &'static str,
}

pub fn fundamental<T: Field>(a: T, order: usize) -> Result<FundamentalSeries<T>> {
    let n = |k: i64| T::int(k);
    if a == n(0) || a == n(2) {
        return Err(Error::InvalidParameter(
            "fundamental series undefined for a = 0 or a = 2".into(),
        ));
    }
    let sys = build(a.clone());
    let c = n(3) + n(2) * a.clone() - a.clone() * a.clone();
    let d = n(4) - n(2) * a.clone();
    let e = a.clone() - n(2);
    let p0 = [
        n(3) * (a.clone() - n(1)),
        n(3) * c.clone() / (n(4) * a.clone()),
        n(9) * (a.clone() - n(1)) * c.clone() / (n(8) * a.clone() * a.clone()),
    ];
    let p1 = [n(0), n(0), n(1)];
    let mut q = vec![[n(1), n(0), n(0)]];
    for j in 0..order {
        let jn = n(j as i64 + 1);
        let singular = |den: &T| *den == n(0);
        let (den_w, den_v, den_u) = (
            jn.clone() * c.clone(),
            jn.clone() * d.clone(),
            jn.clone() * e.clone(),
        );
        if singular(&den_w) || singular(&den_v) || singular(&den_u) {
            return Err(Error::Singular {
                j: j + 1,
                condition: f64::INFINITY,
            });
        }
        let qj = &q[j];
        let jj = n(j as i64);
        let m = add(
            scale(jj, &mat_vec(&sys.a1, qj)),
            scale(-n(1), &mat_vec(&sys.b, qj)),
        );
        let w = -m[1].clone() / den_w;
        let v = (-m[0].clone() / jn.clone() - (a.clone() - n(1)) * w.clone()) / d.clone();
        let row = |k: usize| jn.clone() * sys.a1[2][k].clone() - sys.b[2][k].clone();
        let u = -(row(1) * v.clone() + row(2) * w.clone()) / den_u;
        q.push([u, v, w]);
    }
    Ok(FundamentalSeries {
        a,
        order,
        p0,
        p1,
        q,
        s_note: "R(t) = Q(t) ln t + S(t), S analytic, not computed",
    })
}

impl<T: Field> FundamentalSeries<T> {
    pub fn system(&self) -> PfSystem<T> {
        build(self.a.clone())
    }

    pub fn recursion_defects(&self) -> Vec<Vec3<T>> {
        let sys = self.system();
        (0..self.order)
            .map(|j| sys.recursion_defect(j, &self.q[j], &self.q[j + 1]))
            .collect()
    }

    /// Defect of `P` in the system at `t`; identically zero.
    pub fn p_defect(&self, t: T) -> Vec3<T> {
        let (l, r) = self.system().sides(t.clone(), &self.p(t), &self.p1);
        [
            l[0].clone() - r[0].clone(),
            l[1].clone() - r[1].clone(),
            l[2].clone() - r[2].clone(),
        ]
    }

    pub fn p(&self, t: T) -> Vec3<T> {
        add(self.p0.clone(), scale(t, &self.p1))
    }

    pub fn q_at(&self, t: T) -> Vec3<T> {
        let mut acc = [T::int(0), T::int(0), T::int(0)];
        for qj in self.q.iter().rev() {
            acc = add(scale(t.clone(), &acc), qj.clone());
        }
        acc
    }

    pub fn q_prime(&self, t: T) -> Vec3<T> {
        let mut acc = [T::int(0), T::int(0), T::int(0)];
        for (j, qj) in self.q.iter().enumerate().skip(1).rev() {
            acc = add(scale(t.clone(), &acc), scale(T::int(j as i64), qj));
        }
        acc
    }
}

impl<T: Real> FundamentalSeries<T> {
    /// Largest scaled recursion defect `‖defect_j‖ / (‖q_j‖ + ‖q_{j+1}‖)`.
    pub fn max_recursion_residual(&self) -> T {
        self.recursion_defects()
            .iter()
            .enumerate()
            .map(|(j, d)| norm(d) / (norm(&self.q[j]) + norm(&self.q[j + 1])))
            .fold(T::zero(), T::max)
    }
}

/// Closed forms of the first Q coefficients and the loop logarithm factor.
pub mod printed {
    use super::*;

    /// `λ = −2√(3(2−a))`, the ln t coefficient of J₋₁.
    pub fn lambda<T: Real>(a: T) -> T {
        -T::lit(2.0) * (T::lit(3.0) * (T::lit(2.0) - a)).sqrt()
    }

    /// `q_j` for j = 1, 2, 3.
    pub fn q<T: Field>(a: T, j: usize) -> Option<Vec3<T>> {
        let n = |k: i64| T::int(k);
        let am1 = a.clone() - n(1);
        let am2 = a.clone() - n(2);
        let p = |e: u32| (0..e).fold(n(1), |acc, _| acc * am2.clone());
        let a2 = a.clone() * a.clone();
        let v = match j {
            1 => [
                am1.clone() / (n(12) * p(2)),
                n(1) / (n(6) * am2.clone()),
                n(0),
            ],
            2 => [
                (n(11) * a2.clone() - n(22) * a.clone() + n(15)) / (n(576) * p(4)),
                am1.clone() / (n(48) * p(3)),
                n(1) / (n(72) * p(2)),
            ],
            3 => [
                n(35) * am1.clone() * (n(5) * a2.clone() - n(10) * a.clone() + n(9))
                    / (n(20736) * p(6)),
                (n(85) * a2 - n(170) * a + n(105)) / (n(10368) * p(5)),
                n(5) * am1 / (n(864) * p(4)),
            ],
            _ => return None,
        };
        Some(v.map(|x| -x))
    }

    /// Expected lowest logarithmic coefficients: ln t in J₋₁, t ln t in J₀,
    /// t² ln t in J₁.
    pub fn log_coefficients<T: Real>(a: T) -> Vec3<T> {
        let l = lambda(a);
        let q1 = q(a, 1).expect("j = 1");
        let q2 = q(a, 2).expect("j = 2");
        [l, l * q1[1], l * q2[2]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub integral: &'static str,
    pub term: &'static str,
    pub fitted: f64,
    pub expected: f64,
    pub relative_deviation: f64,
}

/// Compares fitted lowest logarithmic coefficients of `(J₋₁, J₀, J₁)`
/// against the closed forms.
pub fn match_asymptotics<T: Real>(a: T, fits: &[LogFit<T>; 3]) -> Vec<AsymptoticRow> {
    let expected = printed::log_coefficients(a);
    let names = [("J_-1", "ln t"), ("J_0", "t ln t"), ("J_1", "t^2 ln t")];
    (0..3)
        .map(|i| {
            let (f, e) = (to_f64(fits[i].coefficient), to_f64(expected[i]));
            AsymptoticRow {
                integral: names[i].0,
                term: names[i].1,
                fitted: f,
                expected: e,
                relative_deviation: ((f - e) / e).abs(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_at_one() {
        let s = build(1.0f64);
        assert_eq!(
            s.b,
            [
                [1.0 / 3.0, 0.0, 0.0],
                [0.0, 4.0 / 3.0, 0.0],
                [0.0, 0.0, 1.0]
            ]
        );
        assert_eq!(s.a1, [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [-1.0, 0.0, 1.0]]);
        assert_eq!(build(0.3f64).a0[2], [0.0, 0.0, 0.0]);
    }

    #[test]
    fn series_at_one() {
        let f = fundamental(1.0f64, 3).unwrap();
        let close = |x: [f64; 3], y: [f64; 3]| x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-15);
        assert!(close(f.q[1], [0.0, 1.0 / 6.0, 0.0]));
        assert!(close(f.q[2], [-1.0 / 144.0, 0.0, -1.0 / 72.0]));
        assert_eq!(f.p(0.0), [0.0, 3.0, 0.0]);
        assert!(f.max_recursion_residual() < 1e-15);
    }

    #[test]
    fn p_is_exact_solution() {
        let f = fundamental(0.7f64, 2).unwrap();
        let sys = f.system();
        for t in [-1.3, 0.0, 2.1] {
            assert!(residual(&sys, t, &f.p(t), &f.p1) < 1e-14);
        }
    }

    #[test]
    fn rejects_excluded_parameters() {
        assert!(fundamental(0.0f64, 3).is_err());
        assert!(fundamental(2.0f64, 3).is_err());
        assert!(matches!(
            fundamental(3.0f64, 3),
            Err(Error::Singular { j: 1, .. })
        ));
        assert!(matches!(
            fundamental(-1.0f64, 3),
            Err(Error::Singular { j: 1, .. })
        ));
    }

    #[test]
    fn non_solution_has_order_one_residual() {
        let sys = build(1.0f64);
        let r = residual(&sys, -0.5, &[0.3, -1.2, 0.8], &[1.1, 0.4, -0.7]);
        assert!(r > 0.1);
    }
}
