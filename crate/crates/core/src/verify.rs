//! Acceptance checks, one function per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{
    default_window, log_coefficient, loop_moments, segment_integral, triple, triples, Connection,
    SegmentIntegrand,
};
use crate::centroid::{default_grid, line_intersections, sample_curve, verify_shape};
use crate::error::Result;
use crate::flowsim::{
    census, coordinate_for_energy, offset_grid, saddle_traces, separatrix_shifts,
    stable_separatrix_crossing, Cycle, FlowSpec, Stability,
};
use crate::melnikov::{
    appendix_first_order, count_zeros, first_order_from_form, Cubic, GammaPerturbation,
};
use crate::model::{HamiltonianSpec, MelnikovCoeffs, OneForm, PerturbationSpec, Quadratic};
use crate::ovals::{section_segment, Annulus};
use crate::picard_fuchs::{build, fundamental, printed, row_residuals};

pub const SEED: u64 = 20_140_101;

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} {:>8.2}s / {:>4.0}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

fn timed(
    id: u8,
    name: &'static str,
    budget: f64,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> Criterion {
    let start = Instant::now();
    let (ok, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    let seconds = start.elapsed().as_secs_f64();
    Criterion {
        id,
        name,
        passed: ok && seconds < budget,
        detail,
        seconds,
        budget_seconds: budget,
    }
}

fn nf(a: f64) -> Result<HamiltonianSpec<f64>> {
    HamiltonianSpec::normal_form(a)
}

pub const LOOP_IDENTITY_TOL: f64 = 1e-7;
pub const LOOP_IDENTITY_T: f64 = -1e-8;

pub const LOOP_IDENTITY_A: [f64; 7] = [-0.9, -0.5, 0.3, 0.7, 1.0, 1.5, 1.9];

fn loop_identity_defect(a: f64, j0: f64, j1: f64) -> f64 {
    let target = 2.0 / 3.0 * (3.0 * (2.0 - a)).powf(1.5);
    let lhs = 1.5 * (a - 1.0) * j0 - a * j1;
    (lhs + target).abs() / target.abs().max(lhs.abs()).max(1.0)
}

/// The same identity with the moments integrated on the loop itself.
pub fn loop_identity_on_loop() -> Result<f64> {
    let mut worst = 0f64;
    for &a in &LOOP_IDENTITY_A {
        let [j0, j1] = loop_moments(&nf(a)?, Annulus::SigmaPlus, 1e-14)?;
        worst = worst.max(loop_identity_defect(a, j0.value, j1.value));
    }
    Ok(worst)
}

pub fn loop_identity() -> Criterion {
    timed(1, "J_k(0) identity", 5.0, || {
        let mut worst = 0f64;
        for &a in &LOOP_IDENTITY_A {
            let j = triple(&nf(a)?, Annulus::SigmaPlus, LOOP_IDENTITY_T, 1e-13)?.j;
            worst = worst.max(loop_identity_defect(a, j[1], j[2]));
        }
        Ok((
            worst <= LOOP_IDENTITY_TOL,
            format!("max scaled defect {worst:.2e} (tol {LOOP_IDENTITY_TOL:.0e})"),
        ))
    })
}

pub const PF_ROW_TOL: f64 = 1e-6;

/// Five-point central difference of the triple at `t`.
fn triple_derivative(spec: &HamiltonianSpec<f64>, t: f64, h: f64) -> Result<[f64; 3]> {
    let ts = [t - 2.0 * h, t - h, t + h, t + 2.0 * h];
    let v = triples(spec, Annulus::SigmaPlus, &ts, 1e-14)?;
    Ok([0, 1, 2].map(|i| (v[0].j[i] - 8.0 * v[1].j[i] + 8.0 * v[2].j[i] - v[3].j[i]) / (12.0 * h)))
}

pub fn picard_fuchs_residual() -> Criterion {
    timed(2, "Picard-Fuchs residual", 10.0, || {
        let spec = nf(1.0)?;
        let sys = build(1.0f64);
        let mut worst = 0f64;
        for i in 0..40 {
            let t = -1.8 + (1.75) * i as f64 / 39.0;
            let j = triple(&spec, Annulus::SigmaPlus, t, 1e-14)?.j;
            let jp = triple_derivative(&spec, t, 1e-4)?;
            for r in row_residuals(&sys, t, &j, &jp) {
                worst = worst.max(r);
            }
        }
        Ok((
            worst <= PF_ROW_TOL,
            format!("max row residual {worst:.2e} over 40 points (tol {PF_ROW_TOL:.0e})"),
        ))
    })
}

pub const SERIES_TOL: f64 = 1e-10;

pub fn fundamental_series() -> Criterion {
    timed(3, "Fundamental-series agreement", 1.0, || {
        let (mut dq, mut dp) = (0f64, 0f64);
        for &a in &[-0.5f64, 0.5, 1.0, 1.5] {
            let s = fundamental::<f64>(a, 3)?;
            for j in 1..=3 {
                let want = printed::q(a, j).expect("j <= 3");
                for k in 0..3 {
                    dq = dq.max((s.q[j][k] - want[k]).abs() / want[k].abs().max(1.0));
                }
            }
            for &t in &[-2.0f64, -0.5, 0.25, 3.0] {
                let scale =
                    s.p0.iter().chain(&s.p1).fold(1f64, |m, v| m.max(v.abs())) * (1.0 + t.abs());
                for d in s.p_defect(t) {
                    dp = dp.max(d.abs() / scale);
                }
            }
        }
        let ok = dq <= SERIES_TOL && dp <= SERIES_TOL;
        Ok((
            ok,
            format!("max |q - printed| {dq:.2e}, max P residual {dp:.2e} (tol {SERIES_TOL:.0e})"),
        ))
    })
}

pub const LOG_COEFF_TOL: f64 = 1e-3;

pub fn log_asymptotics() -> Criterion {
    timed(4, "Logarithmic asymptotics", 10.0, || {
        let mut worst = 0f64;
        let window = default_window(Annulus::SigmaPlus, 40);
        for &a in &[0.5, 1.0, 1.5] {
            let fit = log_coefficient(&nf(a)?, Annulus::SigmaPlus, -1, &window)?;
            let want = printed::lambda(a);
            worst = worst.max(((fit.coefficient - want) / want).abs());
        }
        Ok((
            worst <= LOG_COEFF_TOL,
            format!(
                "max relative deviation of ln t coefficient {worst:.2e} (tol {LOG_COEFF_TOL:.0e})"
            ),
        ))
    })
}

pub const SEGMENT_TOL: f64 = 1e-10;

pub fn appendix_closed_forms() -> Criterion {
    timed(5, "Appendix closed forms", 1.0, || {
        let y: f64 = segment_integral(Connection::Gamma2, SegmentIntegrand::YDx);
        let y2: f64 = segment_integral(Connection::Gamma2, SegmentIntegrand::Y2Dx);
        let e1 = (y + std::f64::consts::PI * 3f64.sqrt()).abs();
        let e2 = (y2 + 16.0).abs();
        let ok = e1 <= SEGMENT_TOL && e2 <= SEGMENT_TOL;
        Ok((ok, format!("int y dx = {y:.12}, int y^2 dx = {y2:.12}")))
    })
}

pub const ENDPOINT_TOL: f64 = 1e-6;

pub fn centroid_shape() -> Criterion {
    timed(6, "Centroid shape", 20.0, || {
        let mut ok = true;
        let mut notes = vec![];
        for (a, an) in [
            (1.0, Annulus::SigmaPlus),
            (0.5, Annulus::SigmaPlus),
            (0.5, Annulus::SigmaMinus),
        ] {
            let spec = nf(a)?;
            let curve = sample_curve(&spec, an, &default_grid(&spec, an, 200)?)?;
            let r = verify_shape(&curve)?;
            ok &= r.passes(ENDPOINT_TOL);
            notes.push(format!(
                "a={a} {an:?}: endpoint err {:.1e}{}",
                r.endpoint_error,
                r.first_violation
                    .map(|v| format!(" ({v})"))
                    .unwrap_or_default()
            ));
        }
        Ok((ok, notes.join("; ")))
    })
}

pub const LINE_DRAWS: usize = 1000;

pub fn intersection_bounds(seed: u64) -> Criterion {
    timed(7, "Intersection bounds", 30.0, || {
        let spec = nf(1.0)?;
        let curve = sample_curve(
            &spec,
            Annulus::SigmaPlus,
            &default_grid(&spec, Annulus::SigmaPlus, 200)?,
        )?;
        let (xlo, xhi) = curve
            .samples
            .iter()
            .fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.xi), h.max(p.xi)));
        let (ylo, yhi) = curve
            .samples
            .iter()
            .fold((f64::MAX, f64::MIN), |(l, h), p| {
                (l.min(p.eta), h.max(p.eta))
            });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut max_general, mut max_vertical) = (0, 0);
        for i in 0..LINE_DRAWS {
            let coeffs = if i % 2 == 0 {
                // Line through two random points of the curve's bounding box.
                let p = [
                    rng.gen_range(xlo - 0.05..xhi + 0.05),
                    rng.gen_range(ylo..yhi),
                ];
                let q = [
                    rng.gen_range(xlo - 0.05..xhi + 0.05),
                    rng.gen_range(ylo..yhi),
                ];
                let (beta, gamma) = (q[1] - p[1], -(q[0] - p[0]));
                MelnikovCoeffs {
                    alpha: -beta * p[0] - gamma * p[1],
                    beta,
                    gamma,
                    order: 2,
                }
            } else {
                let x0 = rng.gen_range(xlo - 0.05..xhi + 0.05);
                let beta = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                MelnikovCoeffs {
                    alpha: -beta * x0,
                    beta,
                    gamma: 0.0,
                    order: 1,
                }
            };
            let n = line_intersections(&spec, &[&curve], &coeffs)?.count;
            if coeffs.gamma == 0.0 {
                max_vertical = max_vertical.max(n);
            } else {
                max_general = max_general.max(n);
            }
        }
        let axis = MelnikovCoeffs {
            alpha: 0.0,
            beta: 1.0,
            gamma: 0.0,
            order: 1,
        };
        let n_axis = line_intersections(&spec, &[&curve], &axis)?.count;
        let ok = max_general <= 2 && max_vertical <= 1 && n_axis == 0;
        Ok((ok, format!("max count: general {max_general} (<=2), gamma=0 {max_vertical} (<=1), xi=0 line {n_axis} (=0)")))
    })
}

pub const TRACE_SHIFT_REL: f64 = 0.05;
pub const TRACE_EPS: f64 = 1e-3;
pub const TRACE_C: f64 = 17.0;
/// Denominator floor for relative errors against a zero first-order target:
/// the magnitude of the μ grid.
pub const MU_SCALE: f64 = 1e-2;

/// Worst relative errors of `(σ₁, σ₂, b₁, b₂)/ε` against the first-order laws.
pub fn trace_shift_errors() -> Result<[f64; 4]> {
    let spec = HamiltonianSpec::appendix(TRACE_C)?;
    let s3pi = std::f64::consts::PI * 3f64.sqrt();
    let grid = [-MU_SCALE, 0.0, MU_SCALE];
    let mut worst = [0f64; 4];
    for &mu1 in &grid {
        for &mu2 in &grid {
            let p = PerturbationSpec {
                epsilon: TRACE_EPS,
                mu1,
                mu2,
            };
            let flow = FlowSpec::appendix(spec, p, 1e-12)?;
            let tr = saddle_traces(&flow)?;
            let b = separatrix_shifts(&flow)?;
            let want = [
                -16.0 + TRACE_C - mu2,
                -16.0 - TRACE_C - mu2,
                2.0 * mu1,
                -2.0 * mu1 - s3pi * mu2,
            ];
            let got = [tr[0], tr[1], b[0], b[1]].map(|v| v / TRACE_EPS);
            for k in 0..4 {
                let den = want[k].abs().max(if k < 2 { 0.0 } else { MU_SCALE });
                worst[k] = worst[k].max((got[k] - want[k]).abs() / den);
            }
        }
    }
    Ok(worst)
}

pub fn trace_shift_laws() -> Criterion {
    timed(8, "Trace and shift first-order laws", 60.0, || {
        let worst = trace_shift_errors()?;
        let ok = worst.iter().all(|&w| w <= TRACE_SHIFT_REL);
        Ok((
            ok,
            format!(
                "max rel err sigma1 {:.1e}, sigma2 {:.1e}, b1 {:.1e}, b2 {:.1e} (tol {TRACE_SHIFT_REL})",
                worst[0], worst[1], worst[2], worst[3]
            ),
        ))
    })
}

/// Frozen parameters of the two-cycle appendix regime.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub c: f64,
    pub epsilon: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub tol: f64,
    pub offset_near: f64,
    pub offset_far: f64,
    pub grid_points: usize,
    /// Section coordinates and stabilities recorded when the witness was frozen.
    pub cycles: Vec<WitnessCycle>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessCycle {
    pub section_coordinate: f64,
    pub stability: Stability,
}

pub fn witness() -> Witness {
    serde_json::from_str(include_str!("../fixtures/alien_witness.json"))
        .expect("valid witness fixture")
}

#[derive(Clone, Debug, Serialize)]
pub struct AlienReport {
    pub cycles: Vec<Cycle<f64>>,
    pub melnikov_zeros: usize,
    pub energy_window: (f64, f64),
    pub separatrix_crossing: f64,
    pub traces: Option<[f64; 2]>,
    pub shifts: Option<[f64; 2]>,
}

pub fn alien_report(w: &Witness) -> Result<AlienReport> {
    let spec = HamiltonianSpec::appendix(w.c)?;
    let flow = FlowSpec::appendix(
        spec,
        PerturbationSpec {
            epsilon: w.epsilon,
            mu1: w.mu1,
            mu2: w.mu2,
        },
        w.tol,
    )?;
    let sec = section_segment(&spec, Annulus::Upper)?;
    let ys = stable_separatrix_crossing(&flow)?;
    let grid = offset_grid(ys, w.offset_near, w.offset_far, w.grid_points);
    let c = census(&flow, &sec, &grid)?;
    let h = |s: f64| spec.eval(sec.point(s));
    let window = (h(grid[grid.len() - 1]), h(grid[0]));
    let zeros = count_zeros(
        &appendix_first_order(w.mu2),
        &spec,
        Annulus::Upper,
        window,
        200,
    )?;
    Ok(AlienReport {
        cycles: c.cycles,
        melnikov_zeros: zeros.count,
        energy_window: window,
        separatrix_crossing: ys,
        traces: c.saddle_traces,
        shifts: c.shifts,
    })
}

/// Relative agreement with the recorded cycle positions.
pub const WITNESS_REL: f64 = 1e-6;

pub fn alien_cycles() -> Criterion {
    timed(9, "Alien-cycle demonstration", 120.0, || {
        let w = witness();
        let r = alien_report(&w)?;
        let frozen = r.cycles.len() == w.cycles.len()
            && r.cycles.iter().zip(&w.cycles).all(|(c, f)| {
                c.stability == f.stability
                    && (c.section_coordinate - f.section_coordinate).abs()
                        <= WITNESS_REL * f.section_coordinate.abs()
            });
        let ok = frozen && r.cycles.len() == 2 && r.melnikov_zeros <= 1;
        Ok((
            ok,
            format!(
                "census {} cycles (matches fixture: {frozen}), first-order Melnikov zeros {} on h in ({:.3e}, {:.3e})",
                r.cycles.len(),
                r.melnikov_zeros,
                r.energy_window.0,
                r.energy_window.1
            ),
        ))
    })
}

pub const GLOBAL_DRAWS: usize = 200;
pub const GLOBAL_MAX_DELTA: f64 = 0.05;
pub const GLOBAL_EPS: f64 = 1e-4;
/// The census window starts this many ε away from the loop energy, outside
/// the O(ε) zone where the broken connections dominate.
pub const SPLITTING_MARGIN: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct GlobalDraw {
    pub gamma_type: bool,
    /// None when the nearest Melnikov zero leaves no room outside the
    /// splitting zone.
    pub window: Option<(f64, f64)>,
    pub melnikov_zeros: usize,
    pub cycles: usize,
    pub no_return: usize,
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> Quadratic<f64> {
    Quadratic([(); 6].map(|_| rng.gen_range(-1.0..1.0)))
}

/// One draw of the global scan on the normal form at a = 1. The census
/// window near Γ is `|t| ∈ [max(δ·1e−3, 10ε), δ]`, with δ kept below every
/// zero of the leading Melnikov function.
pub fn global_draw(rng: &mut ChaCha8Rng, gamma_type: bool) -> Result<GlobalDraw> {
    let spec = nf(1.0)?;
    let (flow, coeffs) = if gamma_type {
        let mut r = [(); 9].map(|_| rng.gen_range(-1.0..1.0));
        r[8] = 0.0;
        let omega2 = OneForm {
            f: random_quadratic(rng),
            g: random_quadratic(rng),
        };
        let p = GammaPerturbation::new(rng.gen_range(0.2..1.0), Cubic(r), omega2)?;
        (
            FlowSpec::gamma(spec, GLOBAL_EPS, &p, 1e-13),
            p.second_order(),
        )
    } else {
        let omega = OneForm {
            f: random_quadratic(rng),
            g: random_quadratic(rng),
        };
        (
            FlowSpec::quadratic(spec, GLOBAL_EPS, omega, 1e-12),
            first_order_from_form(&omega),
        )
    };
    let zeros = count_zeros(
        &coeffs,
        &spec,
        Annulus::SigmaPlus,
        (-GLOBAL_MAX_DELTA, -1e-10),
        200,
    )?;
    let nearest = zeros.zeros.iter().fold(f64::MAX, |m, z| m.min(z.abs()));
    let delta = GLOBAL_MAX_DELTA.min(0.5 * nearest);
    let near = (delta * 1e-3).max(SPLITTING_MARGIN * GLOBAL_EPS);
    let mut draw = GlobalDraw {
        gamma_type,
        window: None,
        melnikov_zeros: zeros.count,
        cycles: 0,
        no_return: 0,
    };
    if near >= 0.5 * delta {
        return Ok(draw);
    }
    let sec = section_segment(&spec, Annulus::SigmaPlus)?;
    let grid: Vec<f64> = offset_grid(0.0, near, delta, 100)
        .into_iter()
        .map(|d| coordinate_for_energy(&spec, &sec, -d))
        .collect::<Result<_>>()?;
    let c = census(&flow, &sec, &grid)?;
    draw.window = Some((-delta, -near));
    draw.cycles = c.count();
    draw.no_return = c.no_return.len();
    Ok(draw)
}

pub fn global_bound(seed: u64) -> Criterion {
    timed(10, "Global bound property", 600.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut max_first, mut max_gamma, mut truncated, mut skipped) = (0, 0, 0, 0);
        for i in 0..GLOBAL_DRAWS {
            let d = global_draw(&mut rng, i % 2 == 1)?;
            if d.gamma_type {
                max_gamma = max_gamma.max(d.cycles);
            } else {
                max_first = max_first.max(d.cycles);
            }
            truncated += (d.no_return > 0) as usize;
            skipped += d.window.is_none() as usize;
        }
        let ok = max_first <= 3 && max_gamma == 0;
        Ok((
            ok,
            format!(
                "{GLOBAL_DRAWS} draws: max cycles near loop {max_first} (<=3), gamma-type {max_gamma} (=0), \
                 truncated windows {truncated}, no window {skipped}"
            ),
        ))
    })
}

pub const QUICK: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];
pub const ALL: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn run_one(id: u8, seed: u64) -> Option<Criterion> {
    Some(match id {
        1 => loop_identity(),
        2 => picard_fuchs_residual(),
        3 => fundamental_series(),
        4 => log_asymptotics(),
        5 => appendix_closed_forms(),
        6 => centroid_shape(),
        7 => intersection_bounds(seed),
        8 => trace_shift_laws(),
        9 => alien_cycles(),
        10 => global_bound(seed),
        _ => return None,
    })
}

pub fn run(ids: &[u8], seed: u64) -> Vec<Criterion> {
    ids.iter().filter_map(|&id| run_one(id, seed)).collect()
}
