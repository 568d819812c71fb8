use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::melnikov::GammaPerturbation;
use crate::model::{Family, HamiltonianSpec, OneForm, PerturbationSpec, Point, Quadratic};
use crate::ode::{integrate_to_event, Crossing, Dop853, Options, Outcome};
use crate::ovals::Section;
use crate::roots::brent;
use crate::scalar::Real;

const SADDLE_BALL: f64 = 0.05;
const BALL_STEP: f64 = 0.02;
const FREE_STEP: f64 = 0.5;
const ESCAPE_RADIUS: f64 = 20.0;

/// `ẋ = H_y + εg₁ + ε²g₂, ẏ = −H_x − εf₁ − ε²f₂` for `ωᵢ = fᵢ dx + gᵢ dy`.
#[derive(Clone, Copy, Debug)]
pub struct FlowSpec<T> {
    pub hamiltonian: HamiltonianSpec<T>,
    pub epsilon: T,
    pub omega1: OneForm<T>,
    pub omega2: OneForm<T>,
    pub tol: T,
}

impl<T: Real> FlowSpec<T> {
    pub fn unperturbed(hamiltonian: HamiltonianSpec<T>, tol: T) -> Self {
        FlowSpec {
            hamiltonian,
            epsilon: T::zero(),
            omega1: OneForm::default(),
            omega2: OneForm::default(),
            tol,
        }
    }

    pub fn quadratic(
        hamiltonian: HamiltonianSpec<T>,
        epsilon: T,
        omega: OneForm<T>,
        tol: T,
    ) -> Self {
        FlowSpec {
            hamiltonian,
            epsilon,
            omega1: omega,
            omega2: OneForm::default(),
            tol,
        }
    }

    pub fn gamma(
        hamiltonian: HamiltonianSpec<T>,
        epsilon: T,
        p: &GammaPerturbation<T>,
        tol: T,
    ) -> Self {
        FlowSpec {
            hamiltonian,
            epsilon,
            omega1: p.omega1(),
            omega2: p.omega2,
            tol,
        }
    }

    /// The deformation `ẏ = −H_x − εP`, `P = (16 + cx − π√3 y)y + μ₁ + μ₂y`.
    pub fn appendix(
        hamiltonian: HamiltonianSpec<T>,
        p: PerturbationSpec<T>,
        tol: T,
    ) -> Result<Self> {
        if hamiltonian.family() != Family::Appendix {
            return Err(Error::FieldNotApplicable {
                field: "mu1/mu2",
                family: hamiltonian.family().name(),
            });
        }
        let root3 = T::lit(3.0).sqrt();
        let f = Quadratic([
            p.mu1,
            T::zero(),
            T::lit(16.0) + p.mu2,
            T::zero(),
            hamiltonian.c(),
            -T::PI() * root3,
        ]);
        Ok(FlowSpec {
            hamiltonian,
            epsilon: p.epsilon,
            omega1: OneForm {
                f,
                g: Quadratic::default(),
            },
            omega2: OneForm::default(),
            tol,
        })
    }

    pub fn field(&self, p: Point<T>) -> Point<T> {
        let [hx, hy] = self.hamiltonian.gradient(p);
        let (e, e2) = (self.epsilon, self.epsilon * self.epsilon);
        let (w1, w2) = (&self.omega1, &self.omega2);
        [
            hy + e * w1.g.eval(p) + e2 * w2.g.eval(p),
            -hx - e * w1.f.eval(p) - e2 * w2.f.eval(p),
        ]
    }

    pub fn jacobian(&self, p: Point<T>) -> [[T; 2]; 2] {
        let h = self.hamiltonian.hessian(p);
        let (e, e2) = (self.epsilon, self.epsilon * self.epsilon);
        let g1 = self.omega1.g.gradient(p);
        let g2 = self.omega2.g.gradient(p);
        let f1 = self.omega1.f.gradient(p);
        let f2 = self.omega2.f.gradient(p);
        [
            [
                h[0][1] + e * g1[0] + e2 * g2[0],
                h[1][1] + e * g1[1] + e2 * g2[1],
            ],
            [
                -h[0][0] - e * f1[0] - e2 * f2[0],
                -h[0][1] - e * f1[1] - e2 * f2[1],
            ],
        ]
    }

    pub fn options(&self) -> Options<T> {
        Options {
            rtol: self.tol,
            atol: self.tol * T::lit(1e-3),
            h_max: T::lit(FREE_STEP),
            h_min: T::lit(1e-14),
            max_steps: 500_000,
        }
    }

    /// Shorter steps inside the balls around the unperturbed saddles.
    pub fn step_cap(&self, p: &Point<T>) -> T {
        if let Some(s) = self.hamiltonian.critical_data().saddles {
            for q in s {
                if ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt() < T::lit(SADDLE_BALL) {
                    return T::lit(BALL_STEP);
                }
            }
        }
        T::lit(FREE_STEP)
    }

    fn rhs(&self) -> impl Fn(T, &[T; 2]) -> [T; 2] + '_ {
        move |_t, p| self.field(*p)
    }

    fn rhs_backward(&self) -> impl Fn(T, &[T; 2]) -> [T; 2] + '_ {
        move |_t, p| {
            let v = self.field(*p);
            [-v[0], -v[1]]
        }
    }

    fn escaped(p: &Point<T>) -> bool {
        !(p[0].is_finite() && p[1].is_finite())
            || p[0].abs().max(p[1].abs()) > T::lit(ESCAPE_RADIUS)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub t: Vec<T>,
    pub points: Vec<Point<T>>,
    pub energy: Vec<T>,
    /// False when the integration stopped before the requested time.
    pub complete: bool,
    pub flag: Option<String>,
}

pub fn integrate<T: Real>(flow: &FlowSpec<T>, start: Point<T>, t_end: T) -> Result<Trajectory<T>> {
    if !(t_end > T::zero()) || !(flow.tol > T::zero()) {
        return Err(Error::Precondition(
            "integration needs T > 0 and a positive tolerance".into(),
        ));
    }
    let mut s = Dop853::new(flow.rhs(), T::zero(), start, flow.options());
    let mut out = Trajectory {
        t: vec![T::zero()],
        points: vec![start],
        energy: vec![flow.hamiltonian.eval(start)],
        complete: true,
        flag: None,
    };
    while s.t < t_end {
        let cap = flow.step_cap(&s.y);
        match s.advance(t_end, cap) {
            Ok(_) => {
                out.t.push(s.t);
                out.points.push(s.y);
                out.energy.push(flow.hamiltonian.eval(s.y));
                if FlowSpec::escaped(&s.y) {
                    out.complete = false;
                    out.flag = Some(format!("left the working region at t = {}", s.t));
                    break;
                }
            }
            Err(e) => {
                out.complete = false;
                out.flag = Some(e.to_string());
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReturnOutcome<T> {
    Return {
        s: T,
        time: T,
    },
    NoReturn {
        reason: String,
        time: T,
        point: Point<T>,
    },
}

impl<T: Copy> ReturnOutcome<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            ReturnOutcome::Return { s, .. } => Some(*s),
            _ => None,
        }
    }
}

pub const RETURN_TIME_LIMIT: f64 = 400.0;

/// First return to the section segment in the same crossing direction.
pub fn return_map<T: Real>(
    flow: &FlowSpec<T>,
    section: &Section<T>,
    s: T,
) -> Result<ReturnOutcome<T>> {
    if !section.contains(s) {
        return Err(Error::Precondition(format!(
            "section coordinate {s} not strictly inside ({}, {})",
            section.s_min, section.s_max
        )));
    }
    let start = section.point(s);
    let dir = if section.crossing_sign > T::zero() {
        Crossing::Increasing
    } else {
        Crossing::Decreasing
    };
    // Leave the section before watching for the return.
    let skip = T::lit(1e-6);
    let out = integrate_to_event(
        flow.rhs(),
        T::zero(),
        start,
        T::lit(RETURN_TIME_LIMIT),
        |p: &[T; 2]| section.functional(*p),
        dir,
        skip,
        |p: &[T; 2]| flow.step_cap(p),
        FlowSpec::escaped,
        flow.options(),
        None,
    );
    let out = match out {
        Ok(o) => o,
        Err(e) => {
            return Ok(ReturnOutcome::NoReturn {
                reason: e.to_string(),
                time: T::nan(),
                point: [T::nan(); 2],
            })
        }
    };
    Ok(match out {
        Outcome::Event { t, y } => {
            let r = section.coordinate(y);
            if section.contains(r) {
                ReturnOutcome::Return { s: r, time: t }
            } else {
                ReturnOutcome::NoReturn {
                    reason: format!("crossed the section line outside the segment at {r}"),
                    time: t,
                    point: y,
                }
            }
        }
        Outcome::Timeout { t, y } => ReturnOutcome::NoReturn {
            reason: "no return within the time limit".into(),
            time: t,
            point: y,
        },
        Outcome::Stopped { t, y } => ReturnOutcome::NoReturn {
            reason: "escaped the working region".into(),
            time: t,
            point: y,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cycle<T> {
    pub section_coordinate: T,
    pub energy_estimate: T,
    pub multiplier: T,
    pub stability: Stability,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleCensus<T> {
    pub cycles: Vec<Cycle<T>>,
    pub saddle_traces: Option<[T; 2]>,
    pub shifts: Option<[T; 2]>,
    pub epsilon: T,
    pub grid_points: usize,
    /// Grid points without a return; the usable annulus is truncated there.
    pub no_return: Vec<T>,
    /// ε = 0 or a displacement that vanishes on the whole grid.
    pub degenerate_continuum: bool,
}

impl<T> CycleCensus<T> {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }
}

pub const MIN_CENSUS_GRID: usize = 100;

fn displacement<T: Real>(flow: &FlowSpec<T>, section: &Section<T>, s: T) -> Option<T> {
    return_map(flow, section, s)
        .ok()
        .and_then(|o| o.value())
        .map(|r| r - s)
}

/// Fixed points of the return map over `grid` (section coordinates).
pub fn census<T: Real>(
    flow: &FlowSpec<T>,
    section: &Section<T>,
    grid: &[T],
) -> Result<CycleCensus<T>> {
    if grid.len() < MIN_CENSUS_GRID {
        return Err(Error::Precondition(format!(
            "census needs >= {MIN_CENSUS_GRID} grid points, got {}",
            grid.len()
        )));
    }
    if let Some(&s) = grid.iter().find(|&&s| !section.contains(s)) {
        return Err(Error::Precondition(format!(
            "grid point {s} outside the section segment"
        )));
    }
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    let is_appendix = flow.hamiltonian.family() == Family::Appendix;
    let traces = if is_appendix {
        saddle_traces(flow).ok()
    } else {
        None
    };
    let shifts = if is_appendix && flow.epsilon != T::zero() {
        separatrix_shifts(flow).ok()
    } else {
        None
    };
    let mut census = CycleCensus {
        cycles: vec![],
        saddle_traces: traces,
        shifts,
        epsilon: flow.epsilon,
        grid_points: g.len(),
        no_return: vec![],
        degenerate_continuum: false,
    };
    if flow.epsilon == T::zero() {
        census.degenerate_continuum = true;
        return Ok(census);
    }
    let d: Vec<Option<T>> = g
        .par_iter()
        .map(|&s| displacement(flow, section, s))
        .collect();
    census.no_return = g
        .iter()
        .zip(&d)
        .filter(|(_, v)| v.is_none())
        .map(|(s, _)| *s)
        .collect();
    let noise = T::lit(1e3) * flow.tol * section.s_max.abs().max(T::one());
    if d.iter().flatten().all(|v| v.abs() <= noise) && d.iter().any(|v| v.is_some()) {
        census.degenerate_continuum = true;
        return Ok(census);
    }
    let brackets: Vec<usize> = (0..g.len() - 1)
        .filter(|&i| match (d[i], d[i + 1]) {
            (Some(a), Some(b)) => (a > T::zero()) != (b > T::zero()),
            _ => false,
        })
        .collect();
    let found: Vec<Option<Cycle<T>>> = brackets
        .par_iter()
        .map(|&i| refine_cycle(flow, section, g[i], g[i + 1]))
        .collect();
    let mut cycles: Vec<Cycle<T>> = found.into_iter().flatten().collect();
    let sep = T::lit(1e-12).max(flow.tol * T::lit(10.0));
    cycles.dedup_by(|a, b| (a.section_coordinate - b.section_coordinate).abs() <= sep);
    census.cycles = cycles;
    Ok(census)
}

fn refine_cycle<T: Real>(
    flow: &FlowSpec<T>,
    section: &Section<T>,
    lo: T,
    hi: T,
) -> Option<Cycle<T>> {
    let f = |s: T| displacement(flow, section, s).unwrap_or(T::nan());
    let xtol = T::lit(1e-14).max(T::epsilon() * T::lit(8.0) * hi.abs());
    let s = brent(f, lo, hi, xtol).ok()?;
    let h = (hi - lo)
        .abs()
        .min(s.abs() * T::lit(1e-4))
        .max(T::lit(1e-13))
        / T::lit(4.0);
    let (a, b) = (f(s - h), f(s + h));
    let multiplier = T::one() + (b - a) / (h + h);
    let band = T::lit(1e-9);
    let stability = if !multiplier.is_finite() || (multiplier - T::one()).abs() <= band {
        Stability::Undetermined
    } else if multiplier.abs() < T::one() {
        Stability::Attracting
    } else {
        Stability::Repelling
    };
    Some(Cycle {
        section_coordinate: s,
        energy_estimate: flow.hamiltonian.eval(section.point(s)),
        multiplier,
        stability,
    })
}

/// Perturbed saddles continued by Newton from the unperturbed ones.
pub fn saddle_points<T: Real>(flow: &FlowSpec<T>) -> Result<[Point<T>; 2]> {
    let s = flow
        .hamiltonian
        .critical_data()
        .saddles
        .ok_or_else(|| Error::Precondition("the Hamiltonian has no real saddles".into()))?;
    let newton = |p0: Point<T>| -> Result<Point<T>> {
        let mut p = p0;
        for _ in 0..60 {
            let f = flow.field(p);
            let j = flow.jacobian(p);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == T::zero() || !det.is_finite() {
                break;
            }
            let dx = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            p = [p[0] - dx, p[1] - dy];
            if dx.abs().max(dy.abs()) <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let f = flow.field(p);
        let drift = ((p[0] - p0[0]).powi(2) + (p[1] - p0[1]).powi(2)).sqrt();
        if !(f[0].abs().max(f[1].abs()) <= T::lit(1e-12)) || drift > T::lit(SADDLE_BALL) {
            return Err(Error::Integration(format!(
                "Newton continuation of saddle {:?} diverged",
                [p0[0], p0[1]]
            )));
        }
        Ok(p)
    };
    Ok([newton(s[0])?, newton(s[1])?])
}

/// Jacobian traces at the continued saddles, in the order of `critical_data`.
pub fn saddle_traces<T: Real>(flow: &FlowSpec<T>) -> Result<[T; 2]> {
    if flow.epsilon == T::zero() {
        return Ok([T::zero(), T::zero()]);
    }
    let s = saddle_points(flow)?;
    let tr = |p| {
        let j = flow.jacobian(p);
        j[0][0] + j[1][1]
    };
    Ok([tr(s[0]), tr(s[1])])
}

/// Eigenvalues and unit eigenvectors of a real 2×2 saddle Jacobian,
/// returned as (unstable, stable).
type EigenPair<T> = (T, Point<T>);

fn saddle_directions<T: Real>(j: [[T; 2]; 2]) -> Result<(EigenPair<T>, EigenPair<T>)> {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr / T::lit(4.0) - det;
    if !(det < T::zero()) || disc <= T::zero() {
        return Err(Error::Precondition("critical point is not a saddle".into()));
    }
    let r = disc.sqrt();
    let vec = |l: T| {
        let a = [j[0][1], l - j[0][0]];
        let b = [l - j[1][1], j[1][0]];
        let v = if a[0].hypot(a[1]) >= b[0].hypot(b[1]) {
            a
        } else {
            b
        };
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    let (lu, ls) = (tr / T::lit(2.0) + r, tr / T::lit(2.0) - r);
    Ok(((lu, vec(lu)), (ls, vec(ls))))
}

pub const SEPARATRIX_OFFSET: f64 = 1e-8;

/// H on the transversal `x = 0` where a separatrix of `saddle` leaving
/// along ±`dir`, towards `target`, first crosses it.
fn separatrix_energy<T: Real>(
    flow: &FlowSpec<T>,
    saddle: Point<T>,
    dir: Point<T>,
    target: Point<T>,
    backward: bool,
) -> Result<T> {
    let towards = (target[0] - saddle[0]) * dir[0] + (target[1] - saddle[1]) * dir[1];
    let sgn = if towards >= T::zero() {
        T::one()
    } else {
        -T::one()
    };
    let d = T::lit(SEPARATRIX_OFFSET) * sgn;
    let start = [saddle[0] + d * dir[0], saddle[1] + d * dir[1]];
    let g = |p: &[T; 2]| p[0];
    let cap = |p: &[T; 2]| flow.step_cap(p);
    let t_max = T::lit(100.0);
    let out = if backward {
        integrate_to_event(
            flow.rhs_backward(),
            T::zero(),
            start,
            t_max,
            g,
            Crossing::Either,
            T::zero(),
            cap,
            FlowSpec::escaped,
            flow.options(),
            None,
        )?
    } else {
        integrate_to_event(
            flow.rhs(),
            T::zero(),
            start,
            t_max,
            g,
            Crossing::Either,
            T::zero(),
            cap,
            FlowSpec::escaped,
            flow.options(),
            None,
        )?
    };
    match out {
        Outcome::Event { y, .. } => Ok(flow.hamiltonian.eval(y)),
        _ => Err(Error::Integration(
            "separatrix escaped before reaching the transversal".into(),
        )),
    }
}

/// `(b₁, b₂)`: H-jumps between the separatrices of the broken connections
/// Γ₁ (the segment y = 0) and Γ₂ (the half-ellipse), measured on `x = 0`
/// as H(unstable branch) − H(stable branch).
pub fn separatrix_shifts<T: Real>(flow: &FlowSpec<T>) -> Result<[T; 2]> {
    if flow.hamiltonian.family() != Family::Appendix {
        return Err(Error::Precondition(
            "separatrix shifts are defined for the appendix family".into(),
        ));
    }
    if flow.epsilon == T::zero() {
        return Err(Error::Precondition(
            "separatrix shifts need epsilon != 0".into(),
        ));
    }
    let [s1, s2] = saddle_points(flow)?;
    let (u1, st1) = saddle_directions(flow.jacobian(s1))?;
    let (u2, st2) = saddle_directions(flow.jacobian(s2))?;
    let mid1 = [T::zero(), T::zero()];
    let mid2 = [T::zero(), T::lit(12.0).sqrt()];
    // Γ₁ runs from s2 to s1, Γ₂ from s1 over the top to s2.
    let b1 = separatrix_energy(flow, s2, u2.1, mid1, false)?
        - separatrix_energy(flow, s1, st1.1, mid1, true)?;
    let b2 = separatrix_energy(flow, s1, u1.1, mid2, false)?
        - separatrix_energy(flow, s2, st2.1, mid2, true)?;
    Ok([b1, b2])
}

/// Where the stable separatrix of the saddle at `x = −1` crosses the
/// appendix section `x = 0` near y = 0.
pub fn stable_separatrix_crossing<T: Real>(flow: &FlowSpec<T>) -> Result<T> {
    if flow.hamiltonian.family() != Family::Appendix {
        return Err(Error::Precondition(
            "defined for the appendix family".into(),
        ));
    }
    let [s1, _] = saddle_points(flow)?;
    let (_, st) = saddle_directions(flow.jacobian(s1))?;
    let dir = if st.1[0] >= T::zero() {
        st.1
    } else {
        [-st.1[0], -st.1[1]]
    };
    let d = T::lit(SEPARATRIX_OFFSET);
    let start = [s1[0] + d * dir[0], s1[1] + d * dir[1]];
    let out = integrate_to_event(
        flow.rhs_backward(),
        T::zero(),
        start,
        T::lit(100.0),
        |p: &[T; 2]| p[0],
        Crossing::Either,
        T::zero(),
        |p: &[T; 2]| flow.step_cap(p),
        FlowSpec::escaped,
        flow.options(),
        None,
    )?;
    match out {
        Outcome::Event { y, .. } => Ok(y[1]),
        _ => Err(Error::Integration(
            "stable separatrix did not reach x = 0".into(),
        )),
    }
}

/// Section coordinate whose unperturbed energy is `t`.
pub fn coordinate_for_energy<T: Real>(
    spec: &HamiltonianSpec<T>,
    section: &Section<T>,
    t: T,
) -> Result<T> {
    let f = |s: T| spec.eval(section.point(s)) - t;
    brent(f, section.s_min, section.s_max, T::lit(1e-15))
}

/// `n` section coordinates `base + d`, d geometric on `[near, far]`.
pub fn offset_grid<T: Real>(base: T, near: T, far: T, n: usize) -> Vec<T> {
    (0..n)
        .map(|i| {
            let f = T::from_usize(i).unwrap() / T::from_usize(n.max(2) - 1).unwrap();
            base + (near.ln() + (far.ln() - near.ln()) * f).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ovals::{section_segment, Annulus};

    fn nf(a: f64) -> HamiltonianSpec<f64> {
        HamiltonianSpec::normal_form(a).unwrap()
    }

    #[test]
    fn unperturbed_return_is_identity() {
        let flow = FlowSpec::unperturbed(nf(1.0), 1e-12);
        let sec = section_segment(&flow.hamiltonian, Annulus::SigmaPlus).unwrap();
        for &s in &[1.1, 1.4, 1.7] {
            let r = return_map(&flow, &sec, s).unwrap().value().unwrap();
            assert!((r - s).abs() < 1e-8);
        }
        assert!(return_map(&flow, &sec, sec.s_max).is_err());
    }

    #[test]
    fn zero_epsilon_traces_vanish() {
        let ap = HamiltonianSpec::appendix(17.0).unwrap();
        let flow = FlowSpec::appendix(
            ap,
            PerturbationSpec {
                epsilon: 0.0,
                mu1: 0.0,
                mu2: 0.0,
            },
            1e-12,
        )
        .unwrap();
        assert_eq!(saddle_traces(&flow).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn appendix_traces_have_opposite_signs() {
        let ap = HamiltonianSpec::appendix(17.0).unwrap();
        for &e in &[1e-3, -1e-3] {
            let flow = FlowSpec::appendix(
                ap,
                PerturbationSpec {
                    epsilon: e,
                    mu1: 0.0,
                    mu2: 0.0,
                },
                1e-12,
            )
            .unwrap();
            let [s1, s2] = saddle_traces(&flow).unwrap();
            assert!(s1 * s2 < 0.0);
        }
    }

    #[test]
    fn appendix_family_required() {
        let p = PerturbationSpec {
            epsilon: 1e-3,
            mu1: 0.0,
            mu2: 0.0,
        };
        assert!(FlowSpec::appendix(nf(1.0), p, 1e-12).is_err());
        let flow = FlowSpec::quadratic(nf(1.0), 1e-3, OneForm::default(), 1e-12);
        assert!(separatrix_shifts(&flow).is_err());
    }

    #[test]
    fn census_rejects_short_grid() {
        let flow = FlowSpec::unperturbed(nf(1.0), 1e-12);
        let sec = section_segment(&flow.hamiltonian, Annulus::SigmaPlus).unwrap();
        assert!(census(&flow, &sec, &[1.2, 1.3]).is_err());
    }

    #[test]
    fn saddle_directions_of_diagonal() {
        let ((lu, vu), (ls, vs)) = saddle_directions([[2.0f64, 0.0], [0.0, -2.0]]).unwrap();
        assert_eq!((lu, ls), (2.0, -2.0));
        assert!((vu[0].abs() - 1.0).abs() < 1e-15 && (vs[1].abs() - 1.0).abs() < 1e-15);
    }
}
