//! Command-line front end: scenario loading, subcommand dispatch and
//! report emission.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bishop::{
    disc_interior_eval, singular_component, solve_bishop, wedge_membership_of_boundary,
    BishopConfig,
};
use crate::error::{Error, Result};
use crate::extension::{
    eta_sweep, extension_hypotheses_check, AlphaWedgeSpec, DistanceConfig, HypothesisQuery,
    SweepConfig,
};
use crate::levi_cone::{
    edge_of_wedge_check, levi_cone, levi_cone_right_angle, LeviCone, LeviConfig,
};
use crate::lift::{wedge_lift, LiftConfig, TRANSVERSE_MIN};
use crate::manifold::{cnorm, genericity_check};
use crate::report::Report;
use crate::scenario::{self, Scenario, SCENARIO_DIR_VAR};
use crate::wedge::{angle_condition_equiv, gamma_angle, SearchBudget, WedgeSpec};

#[derive(Debug, Parser)]
#[command(
    name = "crwedge",
    version,
    about = "Levi cones, opening angles and analytic discs for wedges in CR manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Boundary grid size for disc solves (power of two).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Number of sampled directions for Levi cones.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the records as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Multiplies every tolerance of the scenario.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Levi form at w0 and the Levi cone hulls of the first wedge.
    Levi { scenario: String },
    /// Opening angle at w0 and the rotated decomposition witness.
    Angle { scenario: String },
    /// One disc solve with residuals.
    Attach { scenario: String },
    /// Disc families over the η list.
    Sweep { scenario: String },
    /// Lift through the deformed manifold into the α-wedge.
    Lift { scenario: String },
    /// Extension hypotheses for the first wedge.
    Hypotheses { scenario: String },
    /// Edge-of-the-wedge conditions for all wedges of the scenario.
    EdgeCheck { scenario: String },
    /// End-to-end verdicts for a builtin example.
    VerifyExample {
        #[arg(value_parser = ["1.2", "1.3", "1.4"])]
        example: String,
    },
    /// Print a scenario as JSON.
    Show { scenario: String },
}

/// Overrides shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Options {
    pub grid: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance_scale: f64,
    pub scenario_dir: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            grid: None,
            samples: None,
            seed: None,
            tolerance_scale: 1.0,
            scenario_dir: std::env::var_os(SCENARIO_DIR_VAR).map(PathBuf::from),
        }
    }
}

/// Scenario with the overrides applied and tolerances scaled.
struct Ctx {
    sc: Scenario,
    grid: usize,
    samples: usize,
    seed: u64,
    tol: scenario::Tolerances,
}

impl Ctx {
    fn new(sc: Scenario, o: &Options) -> Result<Self> {
        if !(o.tolerance_scale > 0.0) {
            return Err(Error::InvalidInput(
                "tolerance scale must be positive".into(),
            ));
        }
        let a = sc.analysis().clone();
        let k = o.tolerance_scale;
        let t = &a.tolerances;
        // one-sided thresholds near 1 scale through their slack
        let tol = scenario::Tolerances {
            attach: t.attach * k,
            holomorphy: t.holomorphy * k,
            levi: t.levi * k,
            angle: t.angle * k,
            correlation: 1.0 - (1.0 - t.correlation) * k,
            alignment: 1.0 - (1.0 - t.alignment) * k,
        };
        Ok(Self {
            grid: o.grid.unwrap_or(a.grid_size),
            samples: o.samples.unwrap_or(a.samples),
            seed: o.seed.unwrap_or(a.seed),
            tol,
            sc,
        })
    }

    fn wedge(&self) -> &WedgeSpec {
        &self.sc.wedges[0]
    }

    fn levi_cfg(&self) -> LeviConfig {
        LeviConfig {
            samples: self.samples,
            seed: self.seed,
            resolution: self.sc.analysis().resolution,
            ..Default::default()
        }
    }

    fn w0(&self) -> Result<crate::manifold::CVec> {
        self.sc
            .w0()
            .ok_or_else(|| Error::InvalidInput(format!("scenario `{}` has no w0", self.sc.name())))
    }

    fn sweep_w0(&self) -> Result<crate::manifold::CVec> {
        self.sc.w0_candidates().into_iter().next().ok_or_else(|| {
            Error::InvalidInput(format!(
                "scenario `{}` has no w0 candidates",
                self.sc.name()
            ))
        })
    }
}

pub fn load(arg: &str, o: &Options) -> Result<Scenario> {
    scenario::resolve(arg, o.scenario_dir.as_deref())?.validate()
}

fn cone_rows(r: &mut Report, label: &str, cone: &LeviCone) {
    r.info(format!("{label} kept"), cone.kept.len() as f64, "");
    for (k, g) in cone.generators.iter().enumerate() {
        for (j, v) in g.iter().enumerate() {
            r.info(format!("{label} generator {k}[{j}]"), *v, "");
        }
    }
}

pub fn levi(ctx_sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(ctx_sc, o)?;
    let v = ctx.wedge();
    let mut r = Report::new(format!("levi {}", ctx.sc.name()));
    if let Some(w0) = ctx.sc.w0() {
        for (k, val) in v.manifold().levi_form(&w0)?.iter().enumerate() {
            r.info(format!("L(w0)[{k}]"), *val, "");
        }
    }
    let alpha = ctx.sc.analysis().alpha;
    let cone = levi_cone(v, alpha, &ctx.levi_cfg())?;
    cone_rows(&mut r, "alpha cone", &cone);
    r.flag(
        "alpha cone interior nonempty",
        cone.interior_nonempty,
        cone.diagnostic.clone().unwrap_or_default(),
    );
    let right = levi_cone_right_angle(v, &ctx.levi_cfg())?;
    cone_rows(&mut r, "right-angle cone", &right);
    Ok(r)
}

pub fn angle(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    let v = ctx.wedge();
    let w0 = ctx.w0()?;
    let res = ctx.sc.analysis().resolution;
    let mut r = Report::new(format!("angle {}", ctx.sc.name()));
    let gamma = gamma_angle(&w0, v, res)?;
    r.info("gamma", gamma, format!("{:.6} pi", gamma / PI));
    let gen = genericity_check(v.edge(), v.manifold().ambient());
    if !gen.generic {
        r.flag(
            "edge generic",
            false,
            format!("edge not generic (rank {} < {})", gen.rank, gen.required),
        );
        return Ok(r);
    }
    let budget = SearchBudget {
        seed: ctx.seed,
        ..Default::default()
    };
    let wit = angle_condition_equiv(&w0, v, &budget)?;
    r.info("witness holds", if wit.holds { 1.0 } else { 0.0 }, "");
    if wit.holds {
        r.info("witness theta", wit.theta, "");
        r.info("witness radius", wit.radius, "");
    }
    let gap = (gamma - FRAC_PI_2).abs();
    if gap > 0.05 {
        r.flag(
            "witness agrees with angle",
            wit.holds == (gamma > FRAC_PI_2),
            "",
        );
    } else {
        r.info("angle gap to pi/2", gap, "too close to pi/2 to compare");
    }
    Ok(r)
}

pub fn attach(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    let v = ctx.wedge();
    let a = ctx.sc.analysis();
    let w0 = ctx.sweep_w0()?;
    let eta = *a
        .eta_list
        .first()
        .ok_or_else(|| Error::InvalidInput("empty eta list".into()))?;
    let w = singular_component(a.alpha, eta, &w0, ctx.grid)?;
    let disc = solve_bishop(
        v.manifold(),
        &w,
        &vec![0.0; v.manifold().l()],
        &BishopConfig::with_grid(ctx.grid),
    )?;
    let mut r = Report::new(format!("attach {}", ctx.sc.name()));
    r.info("eta", eta, "");
    r.check(
        "attachment residual",
        disc.attachment_residual,
        Some(ctx.tol.attach),
        ctx.tol.attach - disc.attachment_residual,
        "",
    );
    r.check(
        "holomorphy residual",
        disc.holomorphy_residual,
        Some(ctx.tol.holomorphy),
        ctx.tol.holomorphy - disc.holomorphy_residual,
        "",
    );
    r.info("iterations", disc.iterations as f64, "");
    r.check(
        "contraction factor",
        disc.contraction_factor,
        Some(1.0),
        1.0 - disc.contraction_factor,
        "",
    );
    let center = disc_interior_eval(&disc, num_complex::Complex64::new(0.0, 0.0))?;
    for (k, c) in center.iter().enumerate() {
        r.info(format!("center z[{k}] re"), c.re, "");
        r.info(format!("center z[{k}] im"), c.im, "");
    }
    let mem = wedge_membership_of_boundary(&disc, v)?;
    r.info(
        "boundary samples outside wedge",
        mem.failing.len() as f64,
        format!("of {} (min predicate {:.3e})", mem.checked, mem.min_margin),
    );
    Ok(r)
}

pub fn sweep(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    sweep_rows(&ctx, &format!("sweep {}", ctx.sc.name()))
}

fn sweep_rows(ctx: &Ctx, title: &str) -> Result<Report> {
    let v = ctx.wedge();
    let a = ctx.sc.analysis();
    let w0 = ctx.sweep_w0()?;
    let cfg = SweepConfig {
        bishop: BishopConfig::with_grid(ctx.grid),
        resolution: a.resolution,
        ..Default::default()
    };
    let rep = eta_sweep(v, &w0, a.alpha, &a.eta_list, &cfg)?;
    let mut r = Report::new(title);
    r.info("alpha", a.alpha, "");
    r.info("gamma", rep.gamma, "");
    for (k, val) in rep.levi.iter().enumerate() {
        r.info(format!("L(w0)[{k}]"), *val, "");
    }
    r.check(
        "kappa",
        rep.kappa,
        None,
        rep.kappa,
        "fitted factor must be positive",
    );
    r.check(
        "correlation",
        rep.correlation,
        Some(ctx.tol.correlation),
        rep.correlation - ctx.tol.correlation,
        "",
    );
    for (k, c) in rep.hopf_constant.iter().enumerate() {
        r.check(
            format!("hopf constant[{k}]"),
            *c,
            None,
            -c,
            "must be negative",
        );
    }
    if rep.hopf_constant.is_empty() {
        r.flag("hopf constant", false, "no component with nonzero L");
    }
    for (eta, cos) in rep.eta_list.iter().zip(&rep.alignment) {
        r.info(format!("alignment eta={eta}"), *cos, "");
    }
    let last = rep.final_alignment();
    r.check(
        "final alignment",
        last,
        Some(ctx.tol.alignment),
        last - ctx.tol.alignment,
        "",
    );
    r.flag(
        "alignment monotone",
        rep.alignment_monotone(1e-3),
        "jitter 1e-3",
    );
    for (k, s) in rep.scaling_ratios.iter().enumerate() {
        r.check(
            format!("displacement scaling[{k}]"),
            *s,
            Some(1.2),
            1.2f64.ln() - s.ln().abs(),
            "ratio against eta^2 within factor 1.2",
        );
    }
    Ok(r)
}

pub fn lift(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    let a = ctx.sc.analysis();
    let aw = AlphaWedgeSpec::new(ctx.wedge().clone(), a.alpha, a.c, ctx.sc.transverse_cone())?;
    let cfg = LiftConfig {
        c3: a.c3,
        c4: a.c4,
        grid_size: ctx.grid,
        coarse_grid: ctx.grid / 2,
        distance: DistanceConfig {
            seed: ctx.seed,
            ..Default::default()
        },
        ..Default::default()
    };
    let rep = wedge_lift(&aw, &cfg)?;
    let mut r = Report::new(format!("lift {}", ctx.sc.name()));
    r.info("s", rep.s, "");
    r.info("rho", rep.rho, "");
    r.check(
        "growth inequality margin",
        rep.growth_margin,
        Some(cfg.growth_slack),
        rep.growth_margin - cfg.growth_slack,
        "closed-disc grid",
    );
    r.check(
        "boundary inclusion failures",
        rep.inclusion_failures.len() as f64,
        Some(0.0),
        0.0 - rep.inclusion_failures.len() as f64,
        format!("min margin {:.3e}", rep.inclusion_min_margin),
    );
    r.check(
        "transversality",
        rep.transverse,
        Some(TRANSVERSE_MIN),
        rep.transverse - TRANSVERSE_MIN,
        "",
    );
    r.check(
        "alpha-wedge failures",
        rep.vprime_failures.len() as f64,
        Some(0.0),
        0.0 - rep.vprime_failures.len() as f64,
        format!("{} samples checked", rep.vprime_checked),
    );
    let drift_tol = 1e-5 * o.tolerance_scale;
    r.check(
        "grid drift",
        rep.drift,
        Some(drift_tol),
        drift_tol - rep.drift,
        "",
    );
    Ok(r)
}

fn hypotheses_rows(ctx: &Ctx, direction: Option<Vec<f64>>, r: &mut Report) -> Result<bool> {
    let q = HypothesisQuery {
        alpha: ctx.sc.analysis().alpha,
        w0_candidates: ctx.sc.w0_candidates(),
        direction,
        levi: ctx.levi_cfg(),
    };
    let verdict = extension_hypotheses_check(ctx.wedge(), &q)?;
    for item in &verdict.items {
        if item.required {
            r.flag(item.name.clone(), item.pass, item.detail.clone());
        } else {
            r.info(item.name.clone(), item.margin, item.detail.clone());
        }
    }
    Ok(verdict.passes())
}

pub fn hypotheses(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    let mut r = Report::new(format!("hypotheses {}", ctx.sc.name()));
    hypotheses_rows(&ctx, ctx.sc.analysis().query_direction.clone(), &mut r)?;
    Ok(r)
}

pub fn edge_check(sc: Scenario, o: &Options) -> Result<Report> {
    let ctx = Ctx::new(sc, o)?;
    let v = edge_of_wedge_check(&ctx.sc.wedges, &ctx.levi_cfg())?;
    let mut r = Report::new(format!("edge-check {}", ctx.sc.name()));
    r.flag(
        "tangent cones span",
        v.tangent_sum,
        format!("{} of {} directions", v.tangent_covered, v.tangent_total),
    );
    let missing = if v.missing_levi_directions.is_empty() {
        String::new()
    } else {
        format!("; missing {:?}", v.missing_levi_directions)
    };
    r.flag(
        "levi cones span",
        v.levi_sum,
        format!("{} of {} directions{missing}", v.levi_covered, v.levi_total),
    );
    Ok(r)
}

pub fn verify_example(which: &str, o: &Options) -> Result<Report> {
    let file = scenario::builtin(which)
        .ok_or_else(|| Error::InvalidInput(format!("no builtin example `{which}`")))?;
    let ctx = Ctx::new(file.validate()?, o)?;
    let v = ctx.wedge();
    let m = v.manifold();
    let mut r = Report::new(format!("verify-example {which}"));
    match which {
        "1.2" => {
            hypotheses_rows(&ctx, None, &mut r)?;
            let cfg = LeviConfig {
                samples: ctx.samples.max(10_000),
                ..ctx.levi_cfg()
            };
            let cone = levi_cone_right_angle(v, &cfg)?;
            let negative = cone.kept_samples().filter(|s| s.value[0] < 0.0).count();
            r.info("kept samples", cone.kept.len() as f64, "");
            r.check(
                "kept samples with L < 0",
                negative as f64,
                Some(0.0),
                0.0 - negative as f64,
                "the cone stays in the upper half-space",
            );
            let mut down = Report::new("");
            let downward = hypotheses_rows(&ctx, Some(vec![-1.0]), &mut down)?;
            r.flag(
                "downward extension unavailable",
                !downward,
                down.failures()
                    .map(|f| f.detail.clone())
                    .collect::<Vec<_>>()
                    .join("; "),
            );
        }
        "1.3" => {
            let w0 = ctx.w0()?;
            let gamma = gamma_angle(&w0, v, ctx.sc.analysis().resolution)?;
            let target = ctx.sc.analysis().alpha * PI;
            r.check(
                "gamma",
                gamma,
                Some(ctx.tol.angle),
                ctx.tol.angle - (gamma - target).abs(),
                format!("expected {target:.6}"),
            );
            r.info("L(w0)[0]", m.levi_form(&w0)?[0], "");
            let gen = genericity_check(v.edge(), m.ambient());
            r.flag(
                "edge generic",
                gen.generic,
                if gen.generic {
                    String::new()
                } else {
                    format!("edge not generic (rank {} < {})", gen.rank, gen.required)
                },
            );
        }
        "1.4" => {
            let w0 = ctx.w0()?;
            let l0 = m.levi_form(&w0)?[0];
            r.check(
                "L(w0)[0]",
                l0,
                Some(ctx.tol.levi),
                ctx.tol.levi - (l0 + 0.2).abs(),
                "expected -0.2",
            );
            let gamma = gamma_angle(&w0, v, ctx.sc.analysis().resolution)?;
            r.check(
                "gamma",
                gamma,
                Some(ctx.tol.angle),
                ctx.tol.angle - (gamma - FRAC_PI_2).abs(),
                "expected pi/2",
            );
            let wt = ctx.sweep_w0()?;
            r.info(
                "|w0 - tilted w0|",
                cnorm(&w0.iter().zip(&wt).map(|(a, b)| a - b).collect::<Vec<_>>()),
                "",
            );
            hypotheses_rows(&ctx, ctx.sc.analysis().query_direction.clone(), &mut r)?;
            r.extend(sweep_rows(&ctx, "")?);
        }
        _ => unreachable!("restricted by the argument parser"),
    }
    Ok(r)
}

/// Runs one parsed command line and returns its report.
pub fn run(cli: &Cli) -> Result<Report> {
    let o = Options {
        grid: cli.grid,
        samples: cli.samples,
        seed: cli.seed,
        tolerance_scale: cli.tolerance_scale,
        ..Default::default()
    };
    if let Some(g) = o.grid {
        if g < 16 || !g.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid {g} must be a power of two ≥ 16"
            )));
        }
    }
    match &cli.command {
        Command::Levi { scenario } => levi(load(scenario, &o)?, &o),
        Command::Angle { scenario } => angle(load(scenario, &o)?, &o),
        Command::Attach { scenario } => attach(load(scenario, &o)?, &o),
        Command::Sweep { scenario } => sweep(load(scenario, &o)?, &o),
        Command::Lift { scenario } => lift(load(scenario, &o)?, &o),
        Command::Hypotheses { scenario } => hypotheses(load(scenario, &o)?, &o),
        Command::EdgeCheck { scenario } => edge_check(load(scenario, &o)?, &o),
        Command::VerifyExample { example } => verify_example(example, &o),
        Command::Show { .. } => unreachable!("handled by main_with"),
    }
}

/// Parses `args`, runs, prints, and returns the exit status:
/// 0 all verdicts pass, 1 a verdict or hypothesis fails, 2 bad input.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Command::Show { scenario } = &cli.command {
        let dir = std::env::var_os(SCENARIO_DIR_VAR).map(PathBuf::from);
        return match scenario::resolve(scenario, dir.as_deref()) {
            Ok(f) => {
                print!("{}", f.to_json());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        };
    }
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.to_text());
            if let Some(path) = &cli.csv {
                if let Err(e) = std::fs::write(path, report.to_csv()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if report.passes() {
                0
            } else {
                for f in report.failures() {
                    eprintln!("failed: {} {}", f.name, f.detail);
                }
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}
