// Acceptance suite: one PASS/FAIL line per criterion. Runs without the
// libtest harness so the lines are never captured.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::Instant;

use cr_wedge::bishop::{singular_component, solve_bishop, BishopConfig};
use cr_wedge::circle::{hilbert_t1, theta, BoundaryFunction};
use cr_wedge::cli::{self, Options};
use cr_wedge::cone::Cone;
use cr_wedge::extension::{eta_sweep, AlphaWedgeSpec, DiscFamilyReport, SweepConfig};
use cr_wedge::levi_cone::{edge_of_wedge_check, levi_cone_right_angle, LeviConfig};
use cr_wedge::lift::{wedge_lift, LiftConfig, TRANSVERSE_MIN};
use cr_wedge::manifold::{EdgeSpec, GraphManifold};
use cr_wedge::report::Report;
use cr_wedge::scenario::{builtin, Scenario};
use cr_wedge::wedge::{angle_condition_equiv, gamma_angle, SearchBudget, WedgeSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn load(name: &str) -> Scenario {
    builtin(name).unwrap().validate().unwrap()
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hilbert_exactness() -> Outcome {
    let n = 2048;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut elapsed = 0.0;
    for _ in 0..100 {
        let deg = rng.gen_range(1..=n / 4);
        let ab: Vec<(f64, f64)> = (0..deg)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = BoundaryFunction::from_fn_real(n, |t| {
            ab.iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let kt = (k + 1) as f64 * t;
                    a * kt.cos() + b * kt.sin()
                })
                .sum()
        })
        .unwrap();
        // conjugate of a cos kθ + b sin kθ is a sin kθ − b cos kθ, pinned at θ = 0
        let pin: f64 = -ab.iter().map(|(_, b)| b).sum::<f64>();
        let start = Instant::now();
        let g = hilbert_t1(&f).unwrap();
        elapsed += start.elapsed().as_secs_f64();
        for j in 0..n {
            let t = theta(j, n);
            let exact: f64 = ab
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let kt = (k + 1) as f64 * t;
                    a * kt.sin() - b * kt.cos()
                })
                .sum::<f64>()
                - pin;
            worst = worst.max((g.values()[j].re - exact).abs());
        }
    }
    ensure(
        worst < 1e-10 && elapsed < 1.0,
        format!("max error {worst:.2e}, {elapsed:.3} s for 100 transforms"),
    )
}

fn bishop_oracle() -> Outcome {
    let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
    let eta = 0.05;
    let w = singular_component(1.0, eta, &[c(1.0, 0.0)], 1024).unwrap();
    let disc = solve_bishop(&m, &w, &[0.0], &BishopConfig::with_grid(1024)).unwrap();
    let mut err: f64 = 0.0;
    for j in 0..1024 {
        let tau = Complex64::cis(theta(j, 1024));
        let exact = Complex64::i() * 2.0 * eta * eta * (c(1.0, 0.0) - tau);
        err = err.max((disc.z[0].values()[j] - exact).norm());
    }
    ensure(
        err < 1e-8 && disc.contraction_factor < 0.5,
        format!(
            "sup error {err:.2e}, contraction {:.2e}",
            disc.contraction_factor
        ),
    )
}

fn levi_value() -> Outcome {
    let sc = load("example-1.4");
    let l = sc.manifold.levi_form(&sc.w0().unwrap()).unwrap()[0];
    ensure((l + 0.2).abs() <= 1e-6, format!("L(w0, w0) = {l:.9}"))
}

fn angle_values() -> Outcome {
    let sc = load("example-1.4");
    let g4 = gamma_angle(&sc.w0().unwrap(), &sc.wedges[0], 720).unwrap();
    let sc = load("example-1.3");
    let g3 = gamma_angle(&sc.w0().unwrap(), &sc.wedges[0], 720).unwrap();
    ensure(
        (g4 - FRAC_PI_2).abs() <= 0.01 && (g3 - 0.75 * PI).abs() <= 0.01,
        format!("gamma = {:.6} pi and {:.6} pi", g4 / PI, g3 / PI),
    )
}

fn sweep(sc: &Scenario, alpha: f64) -> DiscFamilyReport {
    let a = sc.analysis();
    let cfg = SweepConfig {
        bishop: BishopConfig::with_grid(a.grid_size),
        ..Default::default()
    };
    let w0 = sc.w0_candidates()[0].clone();
    eta_sweep(&sc.wedges[0], &w0, alpha, &a.eta_list, &cfg).unwrap()
}

fn shape_law() -> Outcome {
    let sc = load("quadric");
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 0.75, 1.0] {
        let r = sweep(&sc, alpha);
        ok &= r.correlation >= 0.999 && r.kappa > 0.0 && r.hopf_negative();
        if alpha == 1.0 {
            ok &= (r.kappa - 2.0).abs() <= 1e-6 && (r.vddot_radial[0] + 4.0).abs() <= 1e-6;
        }
        parts.push(format!(
            "a={alpha}: corr {:.6} kappa {:.7} d_r {:.7}",
            r.correlation, r.kappa, r.vddot_radial[0]
        ));
    }
    ensure(ok, parts.join("; "))
}

fn alignment() -> Outcome {
    let q = sweep(&load("quadric"), 1.0);
    let sc = load("example-1.4");
    let e = sweep(&sc, sc.analysis().alpha);
    let ok = [&q, &e]
        .iter()
        .all(|r| r.final_alignment() >= 0.99 && r.alignment_monotone(1e-3));
    ensure(
        ok,
        format!("quadric {:?}, example-1.4 {:?}", q.alignment, e.alignment),
    )
}

fn negative_control_1_2() -> Outcome {
    let sc = load("example-1.2");
    let start = Instant::now();
    let cfg = LeviConfig {
        samples: 10_000,
        ..Default::default()
    };
    let cone = levi_cone_right_angle(&sc.wedges[0], &cfg).unwrap();
    let negative = cone.kept_samples().filter(|s| s.value[0] < 0.0).count();
    let secs = start.elapsed().as_secs_f64();
    let in_upper = cone.generators.iter().all(|g| g[0] >= 0.0);
    ensure(
        negative == 0 && in_upper && secs < 30.0 && cone.samples.len() >= 10_000,
        format!(
            "{} samples, {} kept, {negative} with L < 0, {secs:.2} s",
            cone.samples.len(),
            cone.kept.len()
        ),
    )
}

fn negative_control_1_3() -> Outcome {
    let o = Command::new(env!("CARGO_BIN_EXE_crwedge"))
        .args(["verify-example", "1.3"])
        .output()
        .unwrap();
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    );
    ensure(
        o.status.code() == Some(1) && text.contains("edge not generic (rank 2 < 4)"),
        format!("exit {:?}", o.status.code()),
    )
}

fn random_polyhedral(rng: &mut ChaCha8Rng) -> WedgeSpec {
    let a = rng.gen_range(0.5..1.5);
    let b = rng.gen_range(-0.8..0.8);
    let src = format!("abs2(w1) + {a}*abs2(w2) + {b}*Im(w1*conj(w2))");
    let m = GraphManifold::from_sources(&[src], 1, 2).unwrap();
    let span = (0..3)
        .map(|k| {
            let mut v = vec![c(0.0, 0.0); 3];
            v[k] = c(1.0, 0.0);
            v
        })
        .collect();
    let e = EdgeSpec::new(span, &m).unwrap();
    // faces in the (Im w1, Im w2) plane around a random axis
    let axis = rng.gen_range(0.0..2.0 * PI);
    let faces = rng.gen_range(1..=3);
    let mut normals = Vec::new();
    for _ in 0..faces {
        let t = axis + rng.gen_range(-1.2..1.2);
        normals.push((vec![c(0.0, 0.0), c(0.0, t.cos()), c(0.0, t.sin())], true));
    }
    let cone = Cone::polyhedral_complex(&normals).unwrap();
    WedgeSpec::new("random", m, e, cone, &[] as &[&str]).unwrap()
}

fn decomposition_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut wedges = vec![
        load("example-1.2").wedges[0].clone(),
        load("example-1.4").wedges[0].clone(),
    ];
    while wedges.len() < 52 {
        wedges.push(random_polyhedral(&mut rng));
    }
    let budget = SearchBudget::default();
    let (mut compared, mut agree, mut skipped, mut wide) = (0, 0, 0, 0);
    for v in &wedges {
        for _ in 0..6 {
            let w: Vec<Complex64> = (0..2)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let g = gamma_angle(&w, v, 720).unwrap();
            if (g - FRAC_PI_2).abs() <= 0.05 {
                skipped += 1;
                continue;
            }
            let wit = angle_condition_equiv(&w, v, &budget).unwrap();
            compared += 1;
            wide += usize::from(g > FRAC_PI_2);
            if wit.holds == (g > FRAC_PI_2) {
                agree += 1;
            }
        }
    }
    ensure(
        compared > 0 && agree == compared,
        format!(
            "{} wedges, {agree}/{compared} agree ({wide} wider than pi/2), {skipped} within the margin",
            wedges.len()
        ),
    )
}

fn edge_of_wedge_checker() -> Outcome {
    let sc = load("example-1.2");
    let cfg = LeviConfig::default();
    let pair = edge_of_wedge_check(&sc.wedges, &cfg).unwrap();
    let single = edge_of_wedge_check(&sc.wedges[..1], &cfg).unwrap();
    ensure(
        pair.tangent_sum && pair.levi_sum && !single.levi_sum,
        format!(
            "pair: tangent {} levi {} (missing {:?}); single: levi {}",
            pair.tangent_sum, pair.levi_sum, pair.missing_levi_directions, single.levi_sum
        ),
    )
}

fn lifting() -> Outcome {
    let sc = load("lift");
    let a = sc.analysis();
    let vprime =
        AlphaWedgeSpec::new(sc.wedges[0].clone(), a.alpha, a.c, sc.transverse_cone()).unwrap();
    let cfg = LiftConfig {
        c3: a.c3,
        c4: a.c4,
        grid_size: 2048,
        coarse_grid: 1024,
        ..Default::default()
    };
    let r = wedge_lift(&vprime, &cfg).unwrap();
    ensure(
        r.growth_margin > 0.0
            && r.inclusion_failures.is_empty()
            && r.transverse > TRANSVERSE_MIN
            && r.drift < 1e-5,
        format!(
            "growth margin {:.3}, inclusion failures {}, transversality {:.2e}, drift {:.2e}",
            r.growth_margin,
            r.inclusion_failures.len(),
            r.transverse,
            r.drift
        ),
    )
}

fn suite_csv() -> String {
    let o = Options::default();
    let mut reports: Vec<Report> = Vec::new();
    for ex in ["1.2", "1.3", "1.4"] {
        reports.push(cli::verify_example(ex, &o).unwrap());
    }
    reports.push(cli::levi(load("example-1.4"), &o).unwrap());
    reports.push(cli::angle(load("example-1.4"), &o).unwrap());
    reports.push(cli::attach(load("quadric"), &o).unwrap());
    reports.push(cli::sweep(load("quadric"), &o).unwrap());
    reports.push(cli::lift(load("lift"), &o).unwrap());
    reports.push(cli::edge_check(load("example-1.2"), &o).unwrap());
    let mut out = Report::csv_header().to_string();
    for r in &reports {
        out.push_str(&r.csv_rows());
    }
    out
}

fn determinism() -> Outcome {
    let a = suite_csv();
    let b = suite_csv();
    ensure(
        a == b,
        format!("{} bytes, {} rows", a.len(), a.lines().count() - 1),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("hilbert transform exactness", hilbert_exactness),
        ("disc closed-form oracle", bishop_oracle),
        ("levi value at w0", levi_value),
        ("opening angles", angle_values),
        ("second-order shape law", shape_law),
        ("direction alignment", alignment),
        ("example 1.2 negative control", negative_control_1_2),
        ("example 1.3 negative control", negative_control_1_3),
        (
            "rotated decomposition equivalence",
            decomposition_equivalence,
        ),
        ("edge-of-the-wedge checker", edge_of_wedge_checker),
        ("lifting construction", lifting),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.2} s]", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.2} s]", k + 1)
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
