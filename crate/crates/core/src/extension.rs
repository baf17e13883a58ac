//! Extension-direction analysis: η-sweeps of singular disc families,
//! α-wedge membership, and hypothesis verdicts.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bishop::{singular_component, solve_bishop, AnalyticDisc, BishopConfig};
use crate::circle::{radial_derivative_at_one_with, theta, BoundaryFunction};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::levi_cone::{levi_cone_right_angle, LeviConfig};
use crate::manifold::{cnorm, genericity_check, CVec, GraphManifold};
use crate::sampling::SphereSampler;
use crate::wedge::{gamma_angle, WedgeSpec, MIN_RESOLUTION};

/// Tail fraction accepted when differentiating Hölder profiles at `τ = 1`.
pub const PROFILE_TAIL: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub bishop: BishopConfig,
    pub resolution: usize,
    pub gamma_margin: f64,
    pub min_levi: f64,
    pub max_tail: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            bishop: BishopConfig::default(),
            resolution: MIN_RESOLUTION,
            gamma_margin: 1e-6,
            min_levi: 1e-6,
            max_tail: PROFILE_TAIL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscFamilyReport {
    pub alpha: f64,
    pub eta_list: Vec<f64>,
    pub w0: CVec,
    pub gamma: f64,
    pub levi: Vec<f64>,
    /// `(disc at η, disc at −η)` per η.
    pub discs: Vec<(AnalyticDisc, AnalyticDisc)>,
    /// Second η-difference of `v` at the smallest η, per component.
    pub vddot_profile: Vec<BoundaryFunction>,
    pub kappa: f64,
    pub correlation: f64,
    /// `∂_r v̈(1)` per component.
    pub vddot_radial: Vec<f64>,
    /// `∂_r v̈(1) / L` for components with `|L|` above threshold.
    pub hopf_constant: Vec<f64>,
    /// `∂_r v(1)` of the `+η` disc, per η.
    pub radial_derivatives: Vec<Vec<f64>>,
    pub alignment: Vec<f64>,
    /// `Im z(0) − h(Re z(0), w(0))` per η.
    pub center_displacement: Vec<f64>,
    /// Consecutive displacement ratios divided by `(η_i/η_{i+1})²`.
    pub scaling_ratios: Vec<f64>,
}

impl DiscFamilyReport {
    pub fn shape_ok(&self) -> bool {
        self.correlation >= 0.999 && self.kappa > 0.0
    }

    pub fn hopf_negative(&self) -> bool {
        !self.hopf_constant.is_empty() && self.hopf_constant.iter().all(|c| *c < 0.0)
    }

    pub fn final_alignment(&self) -> f64 {
        *self.alignment.last().unwrap_or(&f64::NAN)
    }

    pub fn alignment_monotone(&self, jitter: f64) -> bool {
        self.alignment.windows(2).all(|p| p[1] >= p[0] - jitter)
    }

    pub fn alignment_ok(&self) -> bool {
        self.final_alignment() >= 0.99 && self.alignment_monotone(1e-3)
    }

    pub fn scaling_ok(&self) -> bool {
        self.scaling_ratios
            .iter()
            .all(|r| (1.0 / 1.2..=1.2).contains(r))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let d = dot(a, a).sqrt() * dot(b, b).sqrt();
    if d == 0.0 {
        0.0
    } else {
        dot(a, b) / d
    }
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

/// Solves the disc families `w = ±η(1−τ)^α w₀` and extracts the
/// second-order response.
pub fn eta_sweep(
    v: &WedgeSpec,
    w0: &[Complex64],
    alpha: f64,
    eta_list: &[f64],
    cfg: &SweepConfig,
) -> Result<DiscFamilyReport> {
    let m = v.manifold();
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::Config(format!("alpha {alpha} outside (1/2, 1]")));
    }
    if eta_list.len() < 3 {
        return Err(Error::InvalidInput(
            "η sweep needs at least three values".into(),
        ));
    }
    if eta_list.iter().any(|e| !(*e > 0.0)) || eta_list.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::InvalidInput(
            "η values must be positive and strictly decreasing".into(),
        ));
    }
    if w0.len() != m.n() {
        return Err(Error::DimensionMismatch {
            what: "w0".into(),
            expected: m.n(),
            actual: w0.len(),
        });
    }
    if m.harmonic_quadratic_flag() {
        return Err(Error::Hypothesis(format!(
            "h has pluriharmonic second-order terms (magnitude {:.3e})",
            m.normalization()
                .pluriharmonic
                .max(m.normalization().x_mixed)
        )));
    }
    let gamma = gamma_angle(w0, v, cfg.resolution)?;
    if gamma <= alpha * PI + cfg.gamma_margin {
        return Err(Error::Hypothesis(format!(
            "γ_w0 = {gamma:.6} does not exceed απ = {:.6}",
            alpha * PI
        )));
    }
    let levi = m.levi_form(w0)?;
    if cnorm(
        &levi
            .iter()
            .map(|&t| Complex64::new(t, 0.0))
            .collect::<Vec<_>>(),
    ) <= cfg.min_levi
    {
        return Err(Error::Hypothesis("L(w0, w0) vanishes".into()));
    }
    let l = m.l();
    let n = cfg.bishop.grid_size;
    let x0 = vec![0.0; l];
    let neg: CVec = w0.iter().map(|c| -c).collect();
    let mut discs = Vec::with_capacity(eta_list.len());
    for &eta in eta_list {
        let plus = solve_bishop(m, &singular_component(alpha, eta, w0, n)?, &x0, &cfg.bishop)?;
        let minus = solve_bishop(
            m,
            &singular_component(alpha, eta, &neg, n)?,
            &x0,
            &cfg.bishop,
        )?;
        discs.push((plus, minus));
    }

    // second difference at the smallest η (v at η = 0 is identically 0)
    let eta_min = *eta_list.last().unwrap();
    let (dp, dm) = discs.last().unwrap();
    let (vp, vm) = (dp.v()?, dm.v()?);
    let vddot_profile = (0..l)
        .map(|k| {
            let vals: Vec<f64> = vp[k]
                .values()
                .iter()
                .zip(vm[k].values())
                .map(|(a, b)| (a.re + b.re) / (eta_min * eta_min))
                .collect();
            BoundaryFunction::from_real(&vals)
        })
        .collect::<Result<Vec<_>>>()?;

    // fit against L·|1−τ|^{2α}
    let shape: Vec<f64> = (0..n)
        .map(|j| {
            let tau = Complex64::cis(theta(j, n));
            (Complex64::new(1.0, 0.0) - tau).norm().powf(2.0 * alpha)
        })
        .collect();
    let mut flat_v = Vec::with_capacity(l * n);
    let mut flat_g = Vec::with_capacity(l * n);
    for k in 0..l {
        for j in 0..n {
            flat_v.push(vddot_profile[k].values()[j].re);
            flat_g.push(levi[k] * shape[j]);
        }
    }
    let kappa = dot(&flat_v, &flat_g) / dot(&flat_g, &flat_g);
    let correlation = pearson(&flat_v, &flat_g);
    if correlation < 0.9 {
        return Err(Error::accuracy(
            "second η-difference is dominated by noise; raise the grid size or η",
            correlation,
        ));
    }
    let vddot_radial = vddot_profile
        .iter()
        .map(|f| radial_derivative_at_one_with(f, cfg.max_tail).map(|c| c.re))
        .collect::<Result<Vec<_>>>()?;
    let hopf_constant = (0..l)
        .filter(|&k| levi[k].abs() > cfg.min_levi)
        .map(|k| vddot_radial[k] / levi[k])
        .collect();

    let mut radial_derivatives = Vec::new();
    let mut alignment = Vec::new();
    let mut center_displacement = Vec::new();
    for ((plus, _), &eta) in discs.iter().zip(eta_list) {
        let d = plus.normal_radial_derivative(cfg.max_tail)?;
        let inward: Vec<f64> = d.iter().map(|a| -a).collect();
        alignment.push(cosine(&inward, &levi));
        radial_derivatives.push(d);
        let centre = crate::bishop::disc_interior_eval(plus, Complex64::new(0.0, 0.0))?;
        let x: Vec<f64> = centre[..l].iter().map(|c| c.re).collect();
        let h = m.h(&x, &centre[l..])?;
        let disp: Vec<f64> = (0..l).map(|k| centre[k].im - h[k]).collect();
        center_displacement.push(dot(&disp, &disp).sqrt());
        let _ = eta;
    }
    let scaling_ratios = (0..eta_list.len() - 1)
        .map(|i| {
            let r = center_displacement[i] / center_displacement[i + 1];
            let e = eta_list[i] / eta_list[i + 1];
            r / (e * e)
        })
        .collect();
    Ok(DiscFamilyReport {
        alpha,
        eta_list: eta_list.to_vec(),
        w0: w0.to_vec(),
        gamma,
        levi,
        discs,
        vddot_profile,
        kappa,
        correlation,
        vddot_radial,
        hopf_constant,
        radial_derivatives,
        alignment,
        center_displacement,
        scaling_ratios,
    })
}

/// `V′ = {z ∈ W : dist(z, V) < c·dist(z, ∂V)^{1/α}}` where `W` is the
/// closed transverse cone `{z : y − h(x, w) ∈ Γ_W}` over `M`.
#[derive(Clone, Debug)]
pub struct AlphaWedgeSpec {
    pub wedge: WedgeSpec,
    pub alpha: f64,
    pub c: f64,
    pub transverse: Cone,
}

impl AlphaWedgeSpec {
    pub fn new(wedge: WedgeSpec, alpha: f64, c: f64, transverse: Cone) -> Result<Self> {
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::Config(format!("alpha {alpha} outside (1/2, 1]")));
        }
        if !(c > 0.0) {
            return Err(Error::Config(format!("constant c = {c} must be positive")));
        }
        if transverse.dim() != wedge.manifold().l() {
            return Err(Error::DimensionMismatch {
                what: "transverse cone".into(),
                expected: wedge.manifold().l(),
                actual: transverse.dim(),
            });
        }
        Ok(Self {
            wedge,
            alpha,
            c,
            transverse: transverse.closure(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct DistanceConfig {
    /// Chart directions sampled around `σ(z)`.
    pub directions: usize,
    pub max_radius: f64,
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            directions: 96,
            max_radius: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlphaWedgeVerdict {
    pub member: bool,
    pub dist_v: f64,
    pub dist_boundary: f64,
    pub rhs: f64,
    /// `y − h(x, w)` at the point.
    pub offset: Vec<f64>,
}

struct Chart<'a> {
    m: &'a GraphManifold,
    v: &'a WedgeSpec,
}

impl Chart<'_> {
    fn split(&self, q: &[f64]) -> (Vec<f64>, CVec) {
        let (l, n) = (self.m.l(), self.m.n());
        let x = q[..l].to_vec();
        let w = (0..n)
            .map(|j| Complex64::new(q[l + j], q[l + n + j]))
            .collect();
        (x, w)
    }

    fn inside(&self, q: &[f64]) -> bool {
        let (x, w) = self.split(q);
        self.v.predicate_margin(&x, &w) > 0.0
    }

    fn ambient_gap(&self, z: &[Complex64], q: &[f64]) -> f64 {
        let (x, w) = self.split(q);
        let p = self.m.point(&x, &w);
        p.iter()
            .zip(z)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// First parameter along `q0 + t d` where membership flips.
    fn flip(&self, q0: &[f64], d: &[f64], start: bool, t_max: f64) -> Option<f64> {
        let at = |t: f64| -> Vec<f64> { q0.iter().zip(d).map(|(a, b)| a + t * b).collect() };
        let mut lo = 0.0;
        let mut t = 1e-10;
        while t <= t_max {
            if self.inside(&at(t)) != start {
                let mut hi = t;
                while hi - lo > 1e-12 * hi.max(1e-300) + 1e-16 {
                    let mid = 0.5 * (lo + hi);
                    if self.inside(&at(mid)) != start {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(hi);
            }
            lo = t;
            t *= 1.4;
        }
        None
    }

    fn gap_along(&self, z: &[Complex64], q0: &[f64], d: &[f64], start: bool, t_max: f64) -> f64 {
        match self.flip(q0, d, start, t_max) {
            Some(t) => {
                let q: Vec<f64> = q0.iter().zip(d).map(|(a, b)| a + t * b).collect();
                self.ambient_gap(z, &q)
            }
            None => f64::INFINITY,
        }
    }

    /// Smallest ambient distance from `z` to a flip point, over sampled
    /// directions, followed by coordinate polishing of the best direction.
    fn min_gap(
        &self,
        z: &[Complex64],
        q0: &[f64],
        start: bool,
        cfg: &DistanceConfig,
        count: usize,
    ) -> f64 {
        let dim = q0.len();
        let mut sampler = SphereSampler::new(dim, cfg.seed);
        let mut best = f64::INFINITY;
        let mut best_dir: Option<Vec<f64>> = None;
        let mut dirs: Vec<Vec<f64>> = (0..dim)
            .flat_map(|k| {
                [1.0, -1.0].map(|s| {
                    let mut e = vec![0.0; dim];
                    e[k] = s;
                    e
                })
            })
            .collect();
        dirs.extend((0..count).map(|_| sampler.sample()));
        for d in dirs {
            let g = self.gap_along(z, q0, &d, start, cfg.max_radius);
            if g < best {
                best = g;
                best_dir = Some(d);
            }
        }
        let Some(mut dir) = best_dir else {
            return best;
        };
        let mut step = 0.2;
        while step > 1e-5 {
            let mut improved = false;
            for k in 0..dim {
                for s in [1.0, -1.0] {
                    let mut trial = dir.clone();
                    trial[k] += s * step;
                    let nrm = trial.iter().map(|a| a * a).sum::<f64>().sqrt();
                    trial.iter_mut().for_each(|a| *a /= nrm);
                    let g = self.gap_along(z, q0, &trial, start, cfg.max_radius);
                    if g < best {
                        best = g;
                        dir = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best
    }
}

/// Distances `(dist(z, V), dist(z, ∂V))` measured from `σ(z)` along chart
/// directions of `M`.
fn wedge_distances(
    z: &[Complex64],
    aw: &AlphaWedgeSpec,
    cfg: &DistanceConfig,
    count: usize,
) -> (f64, f64) {
    let m = aw.wedge.manifold();
    let chart = Chart { m, v: &aw.wedge };
    let (x, w) = m.chart(z);
    let mut q0 = x.clone();
    q0.extend(w.iter().map(|c| c.re));
    q0.extend(w.iter().map(|c| c.im));
    let sigma = m.point(&x, &w);
    let to_sigma = z
        .iter()
        .zip(&sigma)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if chart.inside(&q0) {
        let boundary = chart.min_gap(z, &q0, true, cfg, count);
        (to_sigma, boundary)
    } else {
        let gap = chart.min_gap(z, &q0, false, cfg, count);
        (gap, gap)
    }
}

pub fn alpha_wedge_membership(
    z: &[Complex64],
    aw: &AlphaWedgeSpec,
    cfg: &DistanceConfig,
) -> Result<AlphaWedgeVerdict> {
    let m = aw.wedge.manifold();
    if z.len() != m.ambient() {
        return Err(Error::DimensionMismatch {
            what: "ambient point".into(),
            expected: m.ambient(),
            actual: z.len(),
        });
    }
    let offset = m.normal_offset(z);
    let size = dot(&offset, &offset).sqrt();
    if size > 1e-14 && !aw.transverse.contains(&offset) {
        return Err(Error::Domain(format!(
            "point lies outside the ambient wedge (offset {offset:?})"
        )));
    }
    let (dv, db) = wedge_distances(z, aw, cfg, cfg.directions);
    let (dv2, db2) = wedge_distances(z, aw, cfg, 2 * cfg.directions);
    for (a, b, what) in [(dv, dv2, "dist(z, V)"), (db, db2, "dist(z, ∂V)")] {
        if a.is_finite() != b.is_finite() {
            return Err(Error::accuracy(
                format!("{what} unstable under refinement"),
                f64::INFINITY,
            ));
        }
        if a.is_finite() && b > 0.0 && (a - b).abs() > 0.1 * b {
            return Err(Error::accuracy(
                format!("{what} unstable under direction doubling"),
                (a - b).abs() / b,
            ));
        }
    }
    let (dist_v, dist_boundary) = (dv2, db2);
    let rhs = aw.c * dist_boundary.powf(1.0 / aw.alpha);
    Ok(AlphaWedgeVerdict {
        member: dist_v < rhs,
        dist_v,
        dist_boundary,
        rhs,
        offset,
    })
}

#[derive(Clone, Debug)]
pub struct HypothesisItem {
    pub name: String,
    pub pass: bool,
    /// Blocking items decide the overall verdict.
    pub required: bool,
    pub margin: f64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct HypothesesVerdict {
    pub items: Vec<HypothesisItem>,
    pub witness: Option<CVec>,
}

impl HypothesesVerdict {
    pub fn passes(&self) -> bool {
        self.items.iter().filter(|i| i.required).all(|i| i.pass)
    }

    pub fn failures(&self) -> Vec<&HypothesisItem> {
        self.items
            .iter()
            .filter(|i| i.required && !i.pass)
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct HypothesisQuery {
    pub alpha: f64,
    pub w0_candidates: Vec<CVec>,
    /// Requested extension direction in the normal space.
    pub direction: Option<Vec<f64>>,
    pub levi: LeviConfig,
}

/// Genericity, nonempty Levi cone, and per-candidate `γ_w > απ`,
/// `L(w, w) ≠ 0`.
pub fn extension_hypotheses_check(v: &WedgeSpec, q: &HypothesisQuery) -> Result<HypothesesVerdict> {
    let m = v.manifold();
    let mut items = Vec::new();
    let gen = genericity_check(v.edge(), m.ambient());
    items.push(HypothesisItem {
        name: "edge generic".into(),
        pass: gen.generic,
        required: true,
        margin: gen.rank as f64 - gen.required as f64,
        detail: format!("rank {} of {}", gen.rank, gen.required),
    });
    let norm = m.normalization();
    items.push(HypothesisItem {
        name: "no pluriharmonic quadratic terms".into(),
        pass: !norm.flagged,
        required: false,
        margin: -norm.pluriharmonic.max(norm.x_mixed),
        detail: format!("pluriharmonic magnitude {:.3e}", norm.pluriharmonic),
    });
    let cone = levi_cone_right_angle(v, &q.levi)?;
    items.push(HypothesisItem {
        name: "levi cone interior nonempty".into(),
        pass: cone.interior_nonempty,
        required: true,
        margin: cone.kept.len() as f64,
        detail: cone
            .diagnostic
            .clone()
            .unwrap_or_else(|| format!("{} generators", cone.generators.len())),
    });
    let mut witness = None;
    let mut best_margin = f64::NEG_INFINITY;
    let mut detail = String::from("no candidate");
    for w in &q.w0_candidates {
        let gamma = gamma_angle(w, v, MIN_RESOLUTION)?;
        let levi = m.levi_form(w)?;
        let lnorm = dot(&levi, &levi).sqrt();
        let toward = match &q.direction {
            Some(d) => cosine(&levi, d) > 0.0,
            None => true,
        };
        let margin = (gamma - q.alpha * PI).min(lnorm);
        if margin > best_margin {
            best_margin = margin;
            detail = format!("γ = {gamma:.6}, L = {levi:?}");
        }
        if gamma > q.alpha * PI && lnorm > 1e-6 && toward && witness.is_none() {
            witness = Some(w.clone());
            detail = format!("γ = {gamma:.6}, L = {levi:?}");
        }
    }
    if !q.w0_candidates.is_empty() {
        items.push(HypothesisItem {
            name: "angle and levi condition at w0".into(),
            pass: witness.is_some(),
            required: true,
            margin: best_margin,
            detail,
        });
    }
    if let Some(d) = &q.direction {
        let sampled = cone
            .kept_samples()
            .filter(|s| cosine(&s.value, d) > 0.0)
            .count();
        let pass = sampled > 0 || witness.is_some();
        items.push(HypothesisItem {
            name: "levi direction available".into(),
            pass,
            required: true,
            margin: sampled as f64,
            detail: if pass {
                format!("{sampled} kept samples point along {d:?}")
            } else {
                format!(
                    "no sample with γ_w > π/2 has L along {d:?} ({} kept)",
                    cone.kept.len()
                )
            },
        });
    }
    Ok(HypothesesVerdict { items, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::EdgeSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadric_whole() -> WedgeSpec {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = EdgeSpec::new(
            vec![
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0)],
            ],
            &m,
        )
        .unwrap();
        WedgeSpec::new("whole", m, e, Cone::FullSpace { dim: 4 }, &[] as &[&str]).unwrap()
    }

    #[test]
    fn sweep_on_quadric_matches_closed_form() {
        let cfg = SweepConfig {
            bishop: BishopConfig::with_grid(1024),
            ..Default::default()
        };
        let rep = eta_sweep(
            &quadric_whole(),
            &[c(1.0, 0.0)],
            1.0,
            &[0.02, 0.01, 0.005],
            &cfg,
        )
        .unwrap();
        assert!((rep.kappa - 2.0).abs() < 1e-6, "{}", rep.kappa);
        assert!((rep.vddot_radial[0] + 4.0).abs() < 1e-6);
        assert!((rep.hopf_constant[0] + 4.0).abs() < 1e-6);
        assert!(rep.shape_ok() && rep.hopf_negative() && rep.alignment_ok() && rep.scaling_ok());
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let v = quadric_whole();
        let cfg = SweepConfig::default();
        assert!(eta_sweep(&v, &[c(1.0, 0.0)], 1.0, &[0.01, 0.02, 0.005], &cfg).is_err());
        assert!(eta_sweep(&v, &[c(1.0, 0.0)], 1.0, &[0.01, 0.005], &cfg).is_err());
    }

    #[test]
    fn membership_of_points_in_v() {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = EdgeSpec::new(
            vec![
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0)],
            ],
            &m,
        )
        .unwrap();
        let half = Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(0.0, 1.0)], true)]).unwrap();
        let v = WedgeSpec::new("half", m.clone(), e, half, &["Im(w1)"]).unwrap();
        let up = Cone::generated(1, vec![vec![1.0]], vec![]);
        let aw = AlphaWedgeSpec::new(v, 0.75, 1.0, up).unwrap();
        let w = [c(0.01, 0.02)];
        let p = m.point(&[0.0], &w);
        let cfg = DistanceConfig::default();
        let r = alpha_wedge_membership(&p, &aw, &cfg).unwrap();
        assert!(r.member && r.dist_v == 0.0);
        assert!((r.dist_boundary - 0.02).abs() < 2e-3, "{}", r.dist_boundary);
        // push off M by twice the allowed amount
        let bump = 2.0 * aw.c * r.dist_boundary.powf(1.0 / aw.alpha);
        let q = vec![p[0] + c(0.0, bump), p[1]];
        let r = alpha_wedge_membership(&q, &aw, &cfg).unwrap();
        assert!(!r.member);
        // below M is outside the ambient wedge
        let below = vec![p[0] - c(0.0, 0.1), p[1]];
        assert!(matches!(
            alpha_wedge_membership(&below, &aw, &cfg),
            Err(Error::Domain(_))
        ));
    }
}
