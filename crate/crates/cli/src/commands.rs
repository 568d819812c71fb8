use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use twoloop::abelian::{loop_moments, triples};
use twoloop::centroid::{
    counting_annuli, default_grid, line_intersections, sample_curve, verify_shape,
};
use twoloop::flowsim::{
    census, coordinate_for_energy, integrate, offset_grid, saddle_points, saddle_traces,
    separatrix_shifts, stable_separatrix_crossing, FlowSpec,
};
use twoloop::melnikov::{
    classify_cyclicity, count_zeros, eval_grid, expansion, expansion_window, loop_value,
};
use twoloop::model::{MelnikovCoeffs, OneForm, PerturbationSpec, Quadratic};
use twoloop::ovals::{section_segment, slice, Annulus, Section};
use twoloop::picard_fuchs::fundamental;
use twoloop::verify;
use twoloop::{Flow, Spec};

use crate::config::{
    config_err, out_path, parse_grid, parse_list, required, AnnulusArg, CliResult, FamilyArg,
    SpecArgs,
};
use crate::output::{Artifact, Cell};

pub struct Run {
    pub out: Option<PathBuf>,
    pub artifact: Option<Artifact>,
    pub summary: Value,
    pub degraded: bool,
    pub failed: bool,
}

impl Run {
    fn new(out: PathBuf, artifact: Artifact, summary: Value) -> Self {
        Run {
            out: Some(out),
            artifact: Some(artifact),
            summary,
            degraded: false,
            failed: false,
        }
    }
}

fn annulus_name(a: Annulus) -> &'static str {
    match a {
        Annulus::SigmaPlus => "sigma_plus",
        Annulus::SigmaMinus => "sigma_minus",
        Annulus::Upper => "upper",
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct AbelianArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum)]
    pub annulus: Option<AnnulusArg>,
    /// Energies as lo:hi:n.
    #[arg(long, allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn abelian(args: &AbelianArgs) -> CliResult<Run> {
    let spec = args.spec.build()?;
    let annulus = args.spec.default_annulus(args.annulus)?;
    let grid = parse_grid(&required(&args.t_grid, "t_grid")?, "t_grid")?;
    let tr = triples(&spec, annulus, &grid, args.tol)?;
    let degraded = tr.iter().any(|x| !x.converged);
    let rows = tr
        .iter()
        .map(|x| {
            vec![
                Cell::F(x.t),
                Cell::F(x.j[0]),
                Cell::F(x.j[1]),
                Cell::F(x.j[2]),
                Cell::F(x.err[0]),
                Cell::F(x.err[1]),
                Cell::F(x.err[2]),
                Cell::B(x.converged),
            ]
        })
        .collect();
    let artifact = Artifact::Csv {
        header: vec![
            "t",
            "j_m1",
            "j_0",
            "j_1",
            "err_m1",
            "err_0",
            "err_1",
            "converged",
        ],
        rows,
    };
    let summary = json!({
        "annulus": annulus_name(annulus),
        "rows": tr.len(),
        "unconverged": tr.iter().filter(|x| !x.converged).count(),
    });
    let mut run = Run::new(out_path(&args.out, "triples.csv"), artifact, summary);
    run.degraded = degraded;
    Ok(run)
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct OvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum)]
    pub annulus: Option<AnnulusArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn oval(args: &OvalArgs) -> CliResult<Run> {
    let spec = args.spec.build()?;
    let annulus = args.spec.default_annulus(args.annulus)?;
    let t = required(&args.t, "t")?;
    if args.points < 2 {
        return config_err("points: need at least 2");
    }
    let o = slice(&spec, annulus, t)?;
    let header = match args.spec.family {
        FamilyArg::NormalForm => vec!["x", "y_plus", "y_minus"],
        FamilyArg::Appendix => vec!["y", "x_plus", "x_minus"],
    };
    let rows = o
        .boundary(args.points)
        .into_iter()
        .map(|(s, p, m)| vec![Cell::F(s), Cell::F(p), Cell::F(m)])
        .collect();
    let summary = json!({
        "annulus": annulus_name(annulus),
        "t": t,
        "axis_interval": [o.lo, o.hi],
        "orientation": o.orientation,
    });
    Ok(Run::new(
        out_path(&args.out, "oval.csv"),
        Artifact::Csv { header, rows },
        summary,
    ))
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct PfArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    /// Run the recursion in exact rational arithmetic on the decimal value of a.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exact rational value of the shortest decimal representation of `x`.
fn decimal_rational(x: f64) -> CliResult<BigRational> {
    if !x.is_finite() {
        return config_err("a: not a finite number");
    }
    let s = format!("{x}");
    let (neg, s) = s
        .strip_prefix('-')
        .map_or((false, s.as_str()), |r| (true, r));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal digits");
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

pub fn pf(args: &PfArgs) -> CliResult<Run> {
    let a = required(&args.a, "a")?;
    let out = out_path(&args.out, "series.json");
    if args.exact {
        let s = fundamental(decimal_rational(a)?, args.order)?;
        let v3 = |v: &[BigRational; 3]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let exact_zero = s
            .recursion_defects()
            .iter()
            .all(|d| d.iter().all(num_traits::Zero::is_zero));
        let artifact = Artifact::Json(json!({
            "a": s.a.to_string(),
            "order": s.order,
            "p": [v3(&s.p0), v3(&s.p1)],
            "q": s.q.iter().map(v3).collect::<Vec<_>>(),
            "s_note": s.s_note,
        }));
        let summary = json!({ "arithmetic": "rational", "recursion_exact": exact_zero });
        let mut run = Run::new(out, artifact, summary);
        run.failed = !exact_zero;
        return Ok(run);
    }
    let s = fundamental(a, args.order)?;
    let residual = s.max_recursion_residual();
    let artifact = Artifact::Json(json!({
        "a": a,
        "order": s.order,
        "p": [s.p0, s.p1],
        "q": s.q,
        "s_note": s.s_note,
    }));
    let summary = json!({ "arithmetic": "f64", "max_recursion_residual": residual });
    let mut run = Run::new(out, artifact, summary);
    run.degraded = residual.is_nan() || residual > 1e-12;
    Ok(run)
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct MelnikovArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Order k of the Melnikov function; defaults to 1, or 2 when gamma != 0.
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long, value_enum)]
    pub annulus: Option<AnnulusArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Print the cyclicity bound for this (alpha, beta, gamma).
    #[arg(long)]
    pub classify: bool,
    /// Count zeros on the t-grid range, using its n as resolution.
    #[arg(long)]
    pub count_zeros: bool,
    /// Fit d0..d3 near the loop.
    #[arg(long)]
    pub expansion: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Relative size below which M(0) is treated as zero by the classifier.
const D0_ZERO: f64 = 1e-9;

pub fn melnikov(args: &MelnikovArgs) -> CliResult<Run> {
    let spec = args.spec.build()?;
    let annulus = args.spec.default_annulus(args.annulus)?;
    let order = args.order.unwrap_or(if args.gamma != 0.0 { 2 } else { 1 });
    let k = MelnikovCoeffs::new(args.alpha, args.beta, args.gamma, order)?;
    let grid = args
        .t_grid
        .as_deref()
        .map(|g| parse_grid(g, "t_grid"))
        .transpose()?;
    let mut summary = serde_json::Map::new();
    summary.insert("annulus".into(), json!(annulus_name(annulus)));
    summary.insert("coefficients".into(), json!(k));
    let mut degraded = false;

    if args.classify {
        let [j0, j1] = loop_moments(&spec, annulus, 1e-14)?;
        let d0 = loop_value(&k, &spec, annulus)?;
        let scale = (k.alpha * j0.value).abs() + (k.beta * j1.value).abs();
        let c = classify_cyclicity(&k, d0.abs() <= D0_ZERO * scale)?;
        println!(
            "{}: at most {} cycles from the loop, {} from the {} annulus",
            c.rule,
            c.from_loop,
            c.from_annulus,
            match c.annulus {
                twoloop::melnikov::AnnulusKind::Closed => "closed",
                twoloop::melnikov::AnnulusKind::Open => "open",
            }
        );
        summary.insert("d0".into(), json!(d0));
        summary.insert("cyclicity".into(), json!(c));
    }
    if args.expansion {
        let e = expansion(&k, &spec, annulus, &expansion_window(annulus, 40))?;
        degraded |= e.ill_conditioned;
        summary.insert("expansion".into(), json!(e));
    }
    if args.count_zeros {
        let Some(g) = &grid else {
            return config_err("count_zeros needs t_grid");
        };
        let z = count_zeros(&k, &spec, annulus, (g[0], g[g.len() - 1]), g.len())?;
        degraded |= !z.converged || z.warning.is_some();
        println!("{} zeros: {:?}", z.count, z.zeros);
        summary.insert("zeros".into(), json!(z));
    }

    let mut run = match grid {
        Some(g) => {
            let vals = eval_grid(&k, &spec, annulus, &g, args.tol)?;
            degraded |= vals.iter().any(|v| !v.converged);
            let rows = vals
                .iter()
                .map(|v| vec![Cell::F(v.t), Cell::F(v.value), Cell::B(v.converged)])
                .collect();
            Run::new(
                out_path(&args.out, "melnikov.csv"),
                Artifact::Csv {
                    header: vec!["t", "m", "converged"],
                    rows,
                },
                Value::Null,
            )
        }
        None => {
            let s = Value::Object(summary.clone());
            Run::new(
                out_path(&args.out, "melnikov.json"),
                Artifact::Json(s),
                Value::Null,
            )
        }
    };
    run.summary = Value::Object(summary);
    run.degraded = degraded;
    Ok(run)
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct CentroidArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub annulus: AnnulusArg,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Line alpha + beta xi + gamma eta = 0 as `alpha,beta,gamma`.
    #[arg(long, allow_hyphen_values = true)]
    pub line: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn centroid(args: &CentroidArgs) -> CliResult<Run> {
    let spec = args.spec.build()?;
    let annuli = match args.annulus {
        AnnulusArg::Both => counting_annuli(&spec),
        other => vec![other.single()?],
    };
    let curves = annuli
        .iter()
        .map(|&an| sample_curve(&spec, an, &default_grid(&spec, an, args.samples)?))
        .collect::<Result<Vec<_>, _>>()?;
    let mut degraded = curves.iter().any(|c| !c.converged);
    let mut shapes = Vec::new();
    for c in &curves {
        let shape = verify_shape(c).ok();
        shapes.push(json!({
            "annulus": annulus_name(c.annulus),
            "endpoint": c.endpoint,
            "asymptote_xi": c.asymptote,
            "shape": shape,
        }));
    }
    let mut summary = json!({ "curves": shapes });
    if let Some(l) = &args.line {
        let v = parse_list(l, 3, "line")?;
        let k = MelnikovCoeffs::new(v[0], v[1], v[2], if v[2] != 0.0 { 2 } else { 1 })?;
        let refs: Vec<_> = curves.iter().collect();
        let hits = line_intersections(&spec, &refs, &k)?;
        degraded |= hits.tangency_warning;
        println!("{} intersections", hits.count);
        for p in &hits.points {
            println!(
                "  {} t = {:.16e}, xi = {:.16e}, eta = {:.16e}",
                annulus_name(p.annulus),
                p.t,
                p.xi,
                p.eta
            );
        }
        summary["intersections"] = json!(hits);
    }
    let rows = curves
        .iter()
        .flat_map(|c| {
            c.samples.iter().map(move |s| {
                vec![
                    Cell::S(annulus_name(c.annulus).into()),
                    Cell::F(s.t),
                    Cell::F(s.xi),
                    Cell::F(s.eta),
                ]
            })
        })
        .collect();
    let mut run = Run::new(
        out_path(&args.out, "centroid.csv"),
        Artifact::Csv {
            header: vec!["annulus", "t", "xi", "eta"],
            rows,
        },
        summary,
    );
    run.degraded = degraded;
    Ok(run)
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct SimArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(
        long,
        alias = "epsilon",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: Option<f64>,
    /// Quadratic one-form f dx + g dy for the normal form, as 12 numbers:
    /// f then g, each in the order 1, x, y, x², xy, y².
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub annulus: Option<AnnulusArg>,
    #[arg(long)]
    pub census: bool,
    #[arg(long)]
    pub trajectory: bool,
    #[arg(long)]
    pub traces: bool,
    #[arg(long)]
    pub shifts: bool,
    /// Census, traces and shifts over a (mu1, mu2) grid.
    #[arg(long)]
    pub scan: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Census energies lo:hi:n, mapped onto the section.
    #[arg(long, allow_hyphen_values = true)]
    pub t_window: Option<String>,
    /// Census offsets from the stable separatrix on the section.
    #[arg(long, default_value_t = 1e-8)]
    pub near: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub far: f64,
    #[arg(long, default_value_t = 120)]
    pub points: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2_grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `(μ₁, μ₂, traces, shifts, cycles, no-returns)`.
type ScanRow = (f64, f64, [f64; 2], [f64; 2], usize, usize);

enum Mode {
    Census,
    Trajectory,
    Traces,
    Shifts,
    Scan,
}

impl SimArgs {
    fn mode(&self) -> CliResult<Mode> {
        let modes = [
            (self.census, Mode::Census),
            (self.trajectory, Mode::Trajectory),
            (self.traces, Mode::Traces),
            (self.shifts, Mode::Shifts),
            (self.scan, Mode::Scan),
        ];
        let mut chosen = modes.into_iter().filter(|(on, _)| *on);
        match (chosen.next(), chosen.next()) {
            (Some((_, m)), None) => Ok(m),
            _ => config_err("sim needs exactly one of census, trajectory, traces, shifts, scan"),
        }
    }

    fn flow(&self, spec: Spec, mu1: f64, mu2: f64) -> CliResult<Flow> {
        match self.spec.family {
            FamilyArg::Appendix => {
                if self.omega.is_some() {
                    return config_err("omega not applicable to family=appendix");
                }
                Ok(FlowSpec::appendix(
                    spec,
                    PerturbationSpec {
                        epsilon: self.eps,
                        mu1,
                        mu2,
                    },
                    self.tol,
                )?)
            }
            FamilyArg::NormalForm => {
                if self.mu1.is_some() {
                    return config_err("mu1 not applicable to family=normal_form");
                }
                if self.mu2.is_some() {
                    return config_err("mu2 not applicable to family=normal_form");
                }
                let omega = match &self.omega {
                    Some(s) => {
                        let v = parse_list(s, 12, "omega")?;
                        let q = |o: usize| Quadratic([0, 1, 2, 3, 4, 5].map(|i| v[o + i]));
                        OneForm { f: q(0), g: q(6) }
                    }
                    None => OneForm::default(),
                };
                Ok(FlowSpec::quadratic(spec, self.eps, omega, self.tol))
            }
        }
    }

    fn census_grid(&self, spec: &Spec, flow: &Flow, sec: &Section<f64>) -> CliResult<Vec<f64>> {
        match (&self.t_window, self.spec.family) {
            (Some(w), _) => parse_grid(w, "t_window")?
                .into_iter()
                .map(|t| Ok(coordinate_for_energy(spec, sec, t)?))
                .collect(),
            (None, FamilyArg::Appendix) => {
                let ys = stable_separatrix_crossing(flow)?;
                Ok(offset_grid(ys, self.near, self.far, self.points))
            }
            (None, FamilyArg::NormalForm) => {
                config_err("census on family=normal_form needs t_window")
            }
        }
    }
}

pub fn sim(args: &SimArgs) -> CliResult<Run> {
    let spec = args.spec.build()?;
    let mode = args.mode()?;
    let (mu1, mu2) = (args.mu1.unwrap_or(0.0), args.mu2.unwrap_or(0.0));
    let flow = args.flow(spec, mu1, mu2)?;
    let annulus = args.spec.default_annulus(args.annulus)?;
    let appendix_only = |what: &str| {
        if args.spec.family != FamilyArg::Appendix {
            config_err(format!("{what} needs family=appendix"))
        } else {
            Ok(())
        }
    };
    match mode {
        Mode::Trajectory => {
            let p = parse_list(&required(&args.start, "start")?, 2, "start")?;
            let tr = integrate(&flow, [p[0], p[1]], args.t_end)?;
            let rows = (0..tr.t.len())
                .map(|i| {
                    vec![
                        Cell::F(tr.t[i]),
                        Cell::F(tr.points[i][0]),
                        Cell::F(tr.points[i][1]),
                        Cell::F(tr.energy[i]),
                    ]
                })
                .collect();
            let summary = json!({
                "steps": tr.t.len() - 1,
                "complete": tr.complete,
                "flag": tr.flag,
                "energy_drift": tr.energy.last().unwrap() - tr.energy[0],
            });
            let mut run = Run::new(
                out_path(&args.out, "trajectory.csv"),
                Artifact::Csv {
                    header: vec!["t", "x", "y", "h"],
                    rows,
                },
                summary,
            );
            run.degraded = !tr.complete;
            Ok(run)
        }
        Mode::Traces => {
            let tr = saddle_traces(&flow)?;
            let v = json!({ "saddles": saddle_points(&flow)?, "sigma": tr });
            Ok(Run::new(
                out_path(&args.out, "traces.json"),
                Artifact::Json(v.clone()),
                v,
            ))
        }
        Mode::Shifts => {
            appendix_only("shifts")?;
            let b = separatrix_shifts(&flow)?;
            let v = json!({ "b1": b[0], "b2": b[1] });
            Ok(Run::new(
                out_path(&args.out, "shifts.json"),
                Artifact::Json(v.clone()),
                v,
            ))
        }
        Mode::Census => {
            let sec = section_segment(&spec, annulus)?;
            let grid = args.census_grid(&spec, &flow, &sec)?;
            let c = census(&flow, &sec, &grid)?;
            println!("{} cycles", c.count());
            for cy in &c.cycles {
                println!(
                    "  s = {:.16e}, h = {:.16e}, multiplier = {:.16e}, {:?}",
                    cy.section_coordinate, cy.energy_estimate, cy.multiplier, cy.stability
                );
            }
            let summary = json!({
                "cycles": c.count(),
                "no_return": c.no_return.len(),
                "degenerate_continuum": c.degenerate_continuum,
            });
            let degraded = !c.no_return.is_empty();
            let mut run = Run::new(
                out_path(&args.out, "census.json"),
                Artifact::json(&c)?,
                summary,
            );
            run.degraded = degraded;
            Ok(run)
        }
        Mode::Scan => {
            appendix_only("scan")?;
            let g1 = parse_grid(&required(&args.mu1_grid, "mu1_grid")?, "mu1_grid")?;
            let g2 = parse_grid(&required(&args.mu2_grid, "mu2_grid")?, "mu2_grid")?;
            let sec = section_segment(&spec, annulus)?;
            let pts: Vec<(f64, f64)> = g1
                .iter()
                .flat_map(|&a| g2.iter().map(move |&b| (a, b)))
                .collect();
            let rows: Vec<ScanRow> = pts
                .par_iter()
                .map(|&(m1, m2)| -> CliResult<_> {
                    let f = args.flow(spec, m1, m2)?;
                    let grid = args.census_grid(&spec, &f, &sec)?;
                    let c = census(&f, &sec, &grid)?;
                    Ok((
                        m1,
                        m2,
                        saddle_traces(&f)?,
                        separatrix_shifts(&f)?,
                        c.count(),
                        c.no_return.len(),
                    ))
                })
                .collect::<CliResult<_>>()?;
            let most = rows.iter().map(|r| r.4).max().unwrap_or(0);
            let degraded = rows.iter().any(|r| r.5 > 0);
            let summary = json!({ "points": rows.len(), "max_cycles": most });
            let rows = rows
                .into_iter()
                .map(|(m1, m2, s, b, n, nr)| {
                    vec![
                        Cell::F(m1),
                        Cell::F(m2),
                        Cell::F(s[0]),
                        Cell::F(s[1]),
                        Cell::F(b[0]),
                        Cell::F(b[1]),
                        Cell::I(n as i64),
                        Cell::I(nr as i64),
                    ]
                })
                .collect();
            let mut run = Run::new(
                out_path(&args.out, "scan.csv"),
                Artifact::Csv {
                    header: vec![
                        "mu1",
                        "mu2",
                        "sigma1",
                        "sigma2",
                        "b1",
                        "b2",
                        "cycles",
                        "no_return",
                    ],
                    rows,
                },
                summary,
            );
            run.degraded = degraded;
            Ok(run)
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Skip the slow-tier criteria.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_verify(args: &VerifyArgs, seed: u64) -> CliResult<Run> {
    let ids: &[u8] = if args.quick {
        &verify::QUICK
    } else {
        &verify::ALL
    };
    let results = verify::run(ids, seed);
    for c in &results {
        println!("{}", c.line());
    }
    let passed = results.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    let failed = passed < results.len();
    let mut run = Run::new(
        out_path(&args.out, "verify.json"),
        Artifact::json(&results)?,
        json!({ "passed": passed, "total": results.len() }),
    );
    run.failed = failed;
    Ok(run)
}
