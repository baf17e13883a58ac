//! Lifting discs through a deformed manifold `M̃ = {y = c₃‖(w, x)‖²}`.
//!
//! Coordinates as elsewhere: one normal coordinate `z` (so `l = 1`) followed
//! by `w_1..w_n`. The extra direction of the α-wedge is `i∂/∂z`; the
//! prescribed component is `w_n`, all other `w_j` vanish identically.

use num_complex::Complex64;

use crate::bishop::{smooth_component, solve_bishop, AnalyticDisc, BishopConfig};
use crate::circle::{theta, BoundaryFunction, SingularFunction};
use crate::error::{Error, Result};
use crate::extension::{alpha_wedge_membership, AlphaWedgeSpec, DistanceConfig};
use crate::manifold::{CVec, GraphManifold};

/// Threshold for `|pr(∂_r A(1))|`.
pub const TRANSVERSE_MIN: f64 = 1e-6;
const RADII: [f64; 6] = [0.0, 0.25, 0.5, 0.75, 0.9, 1.0];

#[derive(Clone, Debug)]
pub struct LiftConfig {
    pub c3: f64,
    pub c4: f64,
    pub grid_size: usize,
    /// Coarse grid for the drift check.
    pub coarse_grid: usize,
    /// `(s, ρ)` candidates for `w_n(τ) = s·i·[ρ(1−τ) − (1−τ)^{2α}]`, tried in order.
    pub family: Vec<(f64, f64)>,
    /// Fixed `(s, ρ)`, bypassing the search.
    pub fixed: Option<(f64, f64)>,
    /// Required slack in the inequality `y ≥ c₃|x|^{2α}` as a fraction of `y`.
    pub growth_slack: f64,
    /// Every `stride`-th boundary sample is tested against `V′`.
    pub membership_stride: usize,
    pub distance: DistanceConfig,
}

impl Default for LiftConfig {
    fn default() -> Self {
        let mut family = Vec::new();
        for s in [0.02, 0.01, 0.005, 0.002] {
            for rho in [2.0, 3.0, 4.0] {
                family.push((s, rho));
            }
        }
        Self {
            c3: 0.8,
            c4: 0.1,
            grid_size: 2048,
            coarse_grid: 1024,
            family,
            fixed: None,
            growth_slack: 0.1,
            membership_stride: 32,
            distance: DistanceConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub s: f64,
    pub rho: f64,
    pub deformed: GraphManifold,
    /// Smallest `1 − c₃|x|^{2α}/y` over the closed-disc grid.
    pub growth_margin: f64,
    pub inclusion_failures: Vec<usize>,
    pub inclusion_min_margin: f64,
    /// `|pr(∂_r A(1))|`.
    pub transverse: f64,
    pub vprime_checked: usize,
    pub vprime_failures: Vec<usize>,
    pub drift: f64,
    pub disc: AnalyticDisc,
}

impl LiftReport {
    pub fn passes(&self) -> bool {
        self.growth_margin > 0.0
            && self.inclusion_failures.is_empty()
            && self.transverse > TRANSVERSE_MIN
            && self.vprime_failures.is_empty()
            && self.drift < 1e-5
    }
}

fn profile(alpha: f64, s: f64, rho: f64, tau: Complex64) -> Complex64 {
    let zeta = Complex64::new(1.0, 0.0) - tau;
    let sing = if zeta.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        zeta.powf(2.0 * alpha)
    };
    Complex64::i() * s * (zeta * rho - sing)
}

/// Smallest slack of `y ≥ c₃|x|^{2α}` on the closed-disc grid, as
/// `1 − c₃|x|^{2α}/y`; `−∞` when `y ≤ 0` off `τ = 1`.
pub fn growth_margin(
    alpha: f64,
    s: f64,
    rho: f64,
    c3: f64,
    grid: usize,
) -> (f64, Vec<(f64, usize)>) {
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for &r in &RADII {
        for j in 0..grid {
            if r == 1.0 && j == 0 {
                continue;
            }
            let tau = Complex64::from_polar(r, theta(j, grid));
            let z = profile(alpha, s, rho, tau);
            let m = if z.im > 0.0 {
                1.0 - c3 * z.re.abs().powf(2.0 * alpha) / z.im
            } else {
                f64::NEG_INFINITY
            };
            if m <= 0.0 {
                bad.push((r, j));
            }
            worst = worst.min(m);
        }
    }
    (worst, bad)
}

/// `y = c₃(|w_1|² + … + |w_n|² + x²)`.
pub fn deformed_manifold(n: usize, c3: f64) -> Result<GraphManifold> {
    let mut terms: Vec<String> = (1..=n).map(|j| format!("abs2(w{j})")).collect();
    terms.push("x1^2".into());
    GraphManifold::from_sources(&[format!("{c3}*({})", terms.join(" + "))], 1, n)
}

fn prescribed(
    alpha: f64,
    s: f64,
    rho: f64,
    n: usize,
    grid: usize,
) -> Result<Vec<SingularFunction>> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n - 1 {
        out.push(smooth_component(alpha, BoundaryFunction::zeros(grid)?)?);
    }
    let last = BoundaryFunction::from_fn_complex(grid, |t| profile(alpha, s, rho, t))?;
    out.push(smooth_component(alpha, last)?);
    Ok(out)
}

/// Builds `M̃`, picks `w_n` satisfying the growth inequality, solves the
/// disc and checks the boundary inclusion, transversality and `V′`.
pub fn wedge_lift(vprime: &AlphaWedgeSpec, cfg: &LiftConfig) -> Result<LiftReport> {
    let m = vprime.wedge.manifold();
    if m.l() != 1 {
        return Err(Error::Config(
            "the lift is implemented for one normal coordinate".into(),
        ));
    }
    let n = m.n();
    if n < 2 {
        return Err(Error::Config(
            "the lift needs at least two w coordinates".into(),
        ));
    }
    if !(cfg.c4 > 0.0) || cfg.c3 < 8.0 * cfg.c4 {
        return Err(Error::InvalidInput(format!(
            "constants must satisfy c3 ≥ 8·c4 > 0 (c3 = {}, c4 = {})",
            cfg.c3, cfg.c4
        )));
    }
    let alpha = vprime.alpha;
    let (s, rho, margin) = match cfg.fixed {
        Some((s, rho)) => {
            if s == 0.0 {
                return Err(Error::Degenerate(
                    "prescribed component vanishes identically; ∂_θ A(1) = 0".into(),
                ));
            }
            let (m, bad) = growth_margin(alpha, s, rho, cfg.c3, 256);
            if m < cfg.growth_slack {
                return Err(Error::Construction(format!(
                    "growth inequality fails at {} grid points, e.g. (r, j) = {:?}",
                    bad.len(),
                    bad.first()
                )));
            }
            (s, rho, m)
        }
        None => {
            let mut found = None;
            for &(s, rho) in &cfg.family {
                let (m, _) = growth_margin(alpha, s, rho, cfg.c3, 256);
                if m >= cfg.growth_slack {
                    found = Some((s, rho, m));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::Construction(
                    "no member of the family satisfies the growth inequality".into(),
                )
            })?
        }
    };
    let deformed = deformed_manifold(n, cfg.c3)?;
    let solve = |grid: usize| -> Result<AnalyticDisc> {
        let w = prescribed(alpha, s, rho, n, grid)?;
        solve_bishop(&deformed, &w, &[0.0], &BishopConfig::with_grid(grid))
    };
    let disc = solve(cfg.grid_size)?;
    let coarse = solve(cfg.coarse_grid)?;
    let ratio = cfg.grid_size / cfg.coarse_grid;
    let drift = (0..cfg.coarse_grid)
        .map(|j| {
            let a = disc.boundary_point(j * ratio);
            let b = coarse.boundary_point(j);
            a.iter()
                .zip(&b)
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);

    // boundary inclusion y_{w_n} > c₄‖(w_1..w_{n−1}, x_{w_n}, x)‖^{2α}
    let grid = cfg.grid_size;
    let mut inclusion_failures = Vec::new();
    let mut inclusion_min_margin = f64::INFINITY;
    for j in 1..grid {
        let p = disc.boundary_point(j);
        let mut sq = p[0].re * p[0].re + p[n].re * p[n].re;
        for c in &p[1..n] {
            sq += c.norm_sqr();
        }
        let margin = p[n].im - cfg.c4 * sq.powf(alpha);
        inclusion_min_margin = inclusion_min_margin.min(margin);
        if margin <= 0.0 {
            inclusion_failures.push(j);
        }
    }
    let transverse = disc
        .normal_radial_derivative(crate::extension::PROFILE_TAIL)?
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    if transverse <= TRANSVERSE_MIN {
        return Err(Error::Degenerate(format!(
            "|pr(∂_r A(1))| = {transverse:e} below {TRANSVERSE_MIN:e}"
        )));
    }
    let mut vprime_failures = Vec::new();
    let mut vprime_checked = 0;
    let stride = cfg.membership_stride.max(1);
    for j in (stride..grid).step_by(stride) {
        let p: CVec = disc.boundary_point(j);
        vprime_checked += 1;
        match alpha_wedge_membership(&p, vprime, &cfg.distance) {
            Ok(v) if v.member => {}
            _ => vprime_failures.push(j),
        }
    }
    Ok(LiftReport {
        s,
        rho,
        deformed,
        growth_margin: margin,
        inclusion_failures,
        inclusion_min_margin,
        transverse,
        vprime_checked,
        vprime_failures,
        drift,
        disc,
    })
}

#[cfg(test)]
pub(super) mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::manifold::EdgeSpec;
    use crate::wedge::WedgeSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(super) fn vprime() -> AlphaWedgeSpec {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 2).unwrap();
        let e = EdgeSpec::new(
            vec![
                vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            ],
            &m,
        )
        .unwrap();
        let cone = Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], true)])
            .unwrap();
        let v = WedgeSpec::new("V", m, e, cone, &["Im(w2)"]).unwrap();
        AlphaWedgeSpec::new(v, 0.75, 1.0, Cone::generated(1, vec![vec![1.0]], vec![])).unwrap()
    }

    #[test]
    fn family_profile_vanishes_at_one() {
        assert_eq!(profile(0.75, 0.01, 2.0, c(1.0, 0.0)), c(0.0, 0.0));
        let (m, bad) = growth_margin(0.75, 0.01, 2.0, 0.8, 256);
        assert!(m > 0.0 && bad.is_empty(), "{m}");
        // ρ too small: y < 0 near τ = -1
        assert!(growth_margin(0.75, 0.01, 0.5, 0.8, 256).0 < 0.0);
    }

    #[test]
    fn contract_checks() {
        let s = vprime();
        let cfg = LiftConfig {
            c3: 0.5,
            ..Default::default()
        };
        assert!(matches!(wedge_lift(&s, &cfg), Err(Error::InvalidInput(_))));
        let cfg = LiftConfig {
            fixed: Some((0.0, 2.0)),
            ..Default::default()
        };
        assert!(matches!(wedge_lift(&s, &cfg), Err(Error::Degenerate(_))));
    }
}
