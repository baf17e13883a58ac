//! Levi cones: convex hulls of `L(w, w)` over directions with a wide
//! opening angle, their polyhedral approximation, and the two cone
//! conditions of the edge-of-the-wedge check.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::cone::{sum_contains, Cone};
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::manifold::{genericity_check, realify, CVec};
use crate::sampling::SphereSampler;
use crate::wedge::{gamma_unchecked, WedgeSpec, MIN_RESOLUTION};

/// Default margin between `γ_w` and the threshold for a sample to count.
pub const ANGLE_MARGIN: f64 = 0.02;
/// Ball radius for the interior test.
pub const INTERIOR_RADIUS: f64 = 1e-3;
const ZERO_LEVI: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LeviConfig {
    pub samples: usize,
    pub seed: u64,
    pub margin: f64,
    pub resolution: usize,
}

impl Default for LeviConfig {
    fn default() -> Self {
        Self {
            samples: 2000,
            seed: 0,
            margin: ANGLE_MARGIN,
            resolution: MIN_RESOLUTION,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeviSample {
    pub w: CVec,
    pub gamma: f64,
    pub value: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LeviCone {
    /// Angle threshold in radians (`απ`).
    pub alpha_angle: f64,
    pub margin: f64,
    pub samples: Vec<LeviSample>,
    /// Indices of samples passing `γ_w > alpha_angle + margin`.
    pub kept: Vec<usize>,
    /// Unit generators of the hull, each the normalized value of a kept sample.
    pub generators: Vec<Vec<f64>>,
    pub generator_samples: Vec<usize>,
    pub interior_nonempty: bool,
    pub diagnostic: Option<String>,
}

fn unit(dim: usize, k: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[k] = s;
    v
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    (n > ZERO_LEVI).then(|| v.iter().map(|a| a / n).collect())
}

impl LeviCone {
    pub fn l(&self) -> usize {
        self.samples.first().map_or(0, |s| s.value.len())
    }

    pub fn hull(&self) -> Cone {
        Cone::generated(self.l(), self.generators.clone(), vec![])
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        if self.generators.is_empty() {
            return v.iter().all(|a| *a == 0.0);
        }
        self.hull().contains(v)
    }

    pub fn kept_samples(&self) -> impl Iterator<Item = &LeviSample> {
        self.kept.iter().map(|&i| &self.samples[i])
    }
}

/// `Γ^{απ}` for `α ∈ (1/2, 1]`.
pub fn levi_cone(v: &WedgeSpec, alpha: f64, cfg: &LeviConfig) -> Result<LeviCone> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::Config(format!("alpha {alpha} outside (1/2, 1]")));
    }
    levi_cone_with_threshold(v, alpha * PI, cfg)
}

/// The right-angle cone `conv{L(w,w) : γ_w > π/2}`.
pub fn levi_cone_right_angle(v: &WedgeSpec, cfg: &LeviConfig) -> Result<LeviCone> {
    levi_cone_with_threshold(v, FRAC_PI_2, cfg)
}

pub fn levi_cone_with_threshold(v: &WedgeSpec, angle: f64, cfg: &LeviConfig) -> Result<LeviCone> {
    if cfg.samples < 500 {
        return Err(Error::Config(format!(
            "{} samples requested; at least 500 needed",
            cfg.samples
        )));
    }
    if cfg.resolution < MIN_RESOLUTION {
        return Err(Error::Config(format!(
            "angular resolution {} below {MIN_RESOLUTION}",
            cfg.resolution
        )));
    }
    let m = v.manifold();
    let mut sampler = SphereSampler::new(2 * m.n(), cfg.seed);
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut kept = Vec::new();
    for i in 0..cfg.samples {
        let w = sampler.sample_complex();
        let gamma = gamma_unchecked(&w, v, cfg.resolution);
        let value = m.levi_form_unchecked(&w);
        if gamma > angle + cfg.margin {
            kept.push(i);
        }
        samples.push(LeviSample { w, gamma, value });
    }
    let l = m.l();
    let (generators, generator_samples) = hull_generators(&samples, &kept, l);
    let diagnostic = if kept.is_empty() {
        Some(format!(
            "no sample among {} passed γ_w > {:.6} + {}",
            cfg.samples, angle, cfg.margin
        ))
    } else if generators.is_empty() {
        Some("every kept sample has L(w,w) = 0".into())
    } else {
        None
    };
    let interior_nonempty = has_interior(&generators, l);
    Ok(LeviCone {
        alpha_angle: angle,
        margin: cfg.margin,
        samples,
        kept,
        generators,
        generator_samples,
        interior_nonempty,
        diagnostic,
    })
}

fn hull_generators(
    samples: &[LeviSample],
    kept: &[usize],
    l: usize,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    if l == 1 {
        let mut best_pos: Option<(usize, f64)> = None;
        let mut best_neg: Option<(usize, f64)> = None;
        for &i in kept {
            let t = samples[i].value[0];
            if t > ZERO_LEVI && best_pos.is_none_or(|(_, b)| t > b) {
                best_pos = Some((i, t));
            }
            if t < -ZERO_LEVI && best_neg.is_none_or(|(_, b)| t < b) {
                best_neg = Some((i, t));
            }
        }
        let mut gens = Vec::new();
        let mut idx = Vec::new();
        if let Some((i, _)) = best_pos {
            gens.push(vec![1.0]);
            idx.push(i);
        }
        if let Some((i, _)) = best_neg {
            gens.push(vec![-1.0]);
            idx.push(i);
        }
        return (gens, idx);
    }
    let mut gens: Vec<Vec<f64>> = Vec::new();
    let mut idx = Vec::new();
    for &i in kept {
        let Some(u) = normalized(&samples[i].value) else {
            continue;
        };
        if gens.is_empty() || !Cone::generated(l, gens.clone(), vec![]).contains(&u) {
            gens.push(u);
            idx.push(i);
        }
    }
    // drop generators made redundant by later ones
    let mut k = 0;
    while k < gens.len() {
        let rest: Vec<Vec<f64>> = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, g)| g.clone())
            .collect();
        if !rest.is_empty() && Cone::generated(l, rest, vec![]).contains(&gens[k]) {
            gens.remove(k);
            idx.remove(k);
        } else {
            k += 1;
        }
    }
    (gens, idx)
}

fn has_interior(generators: &[Vec<f64>], l: usize) -> bool {
    if generators.is_empty() {
        return false;
    }
    let hull = Cone::generated(l, generators.to_vec(), vec![]);
    if (0..l).all(|k| hull.contains(&unit(l, k, 1.0)) && hull.contains(&unit(l, k, -1.0))) {
        return true;
    }
    let mut mean = vec![0.0; l];
    for g in generators {
        mean.iter_mut().zip(g).for_each(|(a, b)| *a += b);
    }
    match normalized(&mean) {
        Some(d) => hull.interior_contains_full(&d, INTERIOR_RADIUS),
        None => false,
    }
}

/// L1 distance from `g` to the cone generated by `gens`.
pub fn hull_distance(g: &[f64], gens: &[Vec<f64>]) -> f64 {
    let l = g.len();
    if gens.is_empty() {
        return g.iter().map(|a| a.abs()).sum();
    }
    // Σ λ_i gens_i + p − q = g, minimize Σ p + q
    let cols = gens.len() + 2 * l;
    let mut a = vec![vec![0.0; cols]; l];
    for r in 0..l {
        for (j, gen) in gens.iter().enumerate() {
            a[r][j] = gen[r];
        }
        a[r][gens.len() + r] = 1.0;
        a[r][gens.len() + l + r] = -1.0;
    }
    let mut c = vec![0.0; cols];
    c[gens.len()..].iter_mut().for_each(|v| *v = 1.0);
    match lp::solve(&a, g, &c) {
        LpOutcome::Optimal { value, .. } => value,
        _ => f64::INFINITY,
    }
}

/// Symmetric hull discrepancy on unit generators.
pub fn hull_discrepancy(a: &LeviCone, b: &LeviCone) -> f64 {
    let one = a
        .generators
        .iter()
        .map(|g| hull_distance(g, &b.generators))
        .fold(0.0, f64::max);
    let two = b
        .generators
        .iter()
        .map(|g| hull_distance(g, &a.generators))
        .fold(0.0, f64::max);
    one.max(two)
}

#[derive(Clone, Debug)]
pub struct PolyhedralApproximation {
    pub generators: Vec<Vec<f64>>,
    pub sample_indices: Vec<usize>,
}

impl PolyhedralApproximation {
    pub fn count(&self) -> usize {
        self.generators.len()
    }
}

/// Rays spanning the closure of a supported inner cone.
pub fn inner_rays(inner: &Cone) -> Result<Vec<Vec<f64>>> {
    match inner {
        Cone::Generated {
            generators,
            lineality,
            ..
        } => {
            let mut rays = generators.clone();
            for l in lineality {
                rays.push(l.clone());
                rays.push(l.iter().map(|a| -a).collect());
            }
            Ok(rays)
        }
        Cone::Sector {
            e1,
            e2,
            phi0,
            phi1,
            lineality,
            ..
        } => {
            let mut rays: Vec<Vec<f64>> = (0..=100)
                .map(|j| {
                    let phi = phi0 + (phi1 - phi0) * j as f64 / 100.0;
                    e1.iter()
                        .zip(e2)
                        .map(|(a, b)| phi.cos() * a + phi.sin() * b)
                        .collect()
                })
                .collect();
            for l in lineality {
                rays.push(l.clone());
                rays.push(l.iter().map(|a| -a).collect());
            }
            Ok(rays)
        }
        _ => Err(Error::InvalidInput(
            "polyhedral approximation supports generated and sector inner cones".into(),
        )),
    }
}

/// Finitely many kept Levi values whose hull contains `inner` with margin.
pub fn polyhedral_approximation(
    target: &LeviCone,
    inner: &Cone,
    margin: f64,
) -> Result<PolyhedralApproximation> {
    let l = target.l();
    if inner.dim() != l {
        return Err(Error::DimensionMismatch {
            what: "inner cone".into(),
            expected: l,
            actual: inner.dim(),
        });
    }
    let rays = inner_rays(inner)?;
    let hull = target.hull();
    if target.generators.is_empty() {
        return Err(Error::Hypothesis("target Levi cone is empty".into()));
    }
    for (k, r) in rays.iter().enumerate() {
        if !hull.interior_contains_full(r, margin) {
            return Err(Error::Hypothesis(format!(
                "inner cone is not strictly smaller: ray {k} not interior with margin {margin}"
            )));
        }
    }
    let covers = |gens: &[Vec<f64>]| {
        let c = Cone::generated(l, gens.to_vec(), vec![]);
        rays.iter()
            .all(|r| c.interior_contains_full(r, 0.1 * margin))
    };
    let mut gens = target.generators.clone();
    let mut idx = target.generator_samples.clone();
    let mut k = gens.len();
    while k > 0 {
        k -= 1;
        let mut trial = gens.clone();
        trial.remove(k);
        if !trial.is_empty() && covers(&trial) {
            gens = trial;
            idx.remove(k);
        }
    }
    // the hull of unit generators equals the hull of the raw sample values
    let generators = idx
        .iter()
        .map(|&i| target.samples[i].value.clone())
        .collect();
    Ok(PolyhedralApproximation {
        generators,
        sample_indices: idx,
    })
}

#[derive(Clone, Debug)]
pub struct EdgeOfWedgeVerdict {
    /// Tangent cones sum to `T_0M`.
    pub tangent_sum: bool,
    pub tangent_covered: usize,
    pub tangent_total: usize,
    /// Levi cones sum to the normal space.
    pub levi_sum: bool,
    pub levi_covered: usize,
    pub levi_total: usize,
    pub missing_levi_directions: Vec<Vec<f64>>,
    pub levi_cones: Vec<LeviCone>,
}

impl EdgeOfWedgeVerdict {
    pub fn passes(&self) -> bool {
        self.tangent_sum && self.levi_sum
    }
}

/// Checks that the tangent cones sum to `T_0M` and the right-angle Levi
/// cones sum to `ℝ^l`.
pub fn edge_of_wedge_check(wedges: &[WedgeSpec], cfg: &LeviConfig) -> Result<EdgeOfWedgeVerdict> {
    let first = wedges
        .first()
        .ok_or_else(|| Error::InvalidInput("no wedges given".into()))?;
    for w in &wedges[1..] {
        if w.manifold() != first.manifold() {
            return Err(Error::InvalidInput(format!(
                "wedge `{}` lives on a different manifold",
                w.name
            )));
        }
        if w.edge() != first.edge() {
            return Err(Error::InvalidInput(format!(
                "wedge `{}` has a different edge",
                w.name
            )));
        }
    }
    let m = first.manifold();
    let big_n = m.ambient();
    let gen = genericity_check(first.edge(), big_n);
    if !gen.generic {
        return Err(Error::Hypothesis(format!(
            "edge not generic (rank {} < {})",
            gen.rank, gen.required
        )));
    }
    // condition on tangent cones, pieces confined to T_0M
    let cones: Vec<Cone> = wedges.iter().map(|w| w.cone().closure()).collect();
    let constraints: Vec<Vec<f64>> = (0..m.l())
        .map(|k| {
            let mut v = vec![Complex64::new(0.0, 0.0); big_n];
            v[k] = Complex64::i();
            realify(&v)
        })
        .collect();
    let mut tangent_covered = 0;
    let mut tangent_total = 0;
    for b in m.tangent_basis() {
        let r = realify(&b);
        for s in [1.0, -1.0] {
            let t: Vec<f64> = r.iter().map(|a| s * a).collect();
            tangent_total += 1;
            if sum_contains(&cones, &t, &constraints) {
                tangent_covered += 1;
            }
        }
    }
    // condition on Levi cones
    let levi_cones = wedges
        .iter()
        .map(|w| levi_cone_right_angle(w, cfg))
        .collect::<Result<Vec<_>>>()?;
    let l = m.l();
    let all_gens: Vec<Vec<f64>> = levi_cones
        .iter()
        .flat_map(|c| c.generators.iter().cloned())
        .collect();
    let hull = Cone::generated(l, all_gens.clone(), vec![]);
    let mut levi_covered = 0;
    let mut missing = Vec::new();
    for k in 0..l {
        for s in [1.0, -1.0] {
            let t = unit(l, k, s);
            if !all_gens.is_empty() && hull.contains(&t) {
                levi_covered += 1;
            } else {
                missing.push(t);
            }
        }
    }
    Ok(EdgeOfWedgeVerdict {
        tangent_sum: tangent_covered == tangent_total,
        tangent_covered,
        tangent_total,
        levi_sum: missing.is_empty(),
        levi_covered,
        levi_total: 2 * l,
        missing_levi_directions: missing,
        levi_cones,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{EdgeSpec, GraphManifold};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_edge(m: &GraphManifold) -> EdgeSpec {
        let big_n = m.ambient();
        let span = (0..big_n)
            .map(|k| {
                let mut v = vec![c(0.0, 0.0); big_n];
                v[k] = c(1.0, 0.0);
                v
            })
            .collect();
        EdgeSpec::new(span, m).unwrap()
    }

    fn half_space(sign: f64) -> WedgeSpec {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = real_edge(&m);
        let cone = Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(0.0, sign)], true)]).unwrap();
        let pred = if sign > 0.0 { "Im(w1)" } else { "-Im(w1)" };
        WedgeSpec::new("half", m, e, cone, &[pred]).unwrap()
    }

    #[test]
    fn quadric_half_space_cone() {
        let cone = levi_cone_right_angle(&half_space(1.0), &LeviConfig::default()).unwrap();
        assert_eq!(cone.kept.len(), cone.samples.len());
        assert_eq!(cone.generators, vec![vec![1.0]]);
        assert!(cone.interior_nonempty);
        assert!(cone.contains(&[2.0]) && !cone.contains(&[-1.0]));
    }

    #[test]
    fn config_limits() {
        let v = half_space(1.0);
        let small = LeviConfig {
            samples: 10,
            ..Default::default()
        };
        assert!(levi_cone(&v, 0.75, &small).is_err());
        assert!(levi_cone(&v, 0.5, &LeviConfig::default()).is_err());
        // γ_w = π everywhere, so the α = 1 threshold keeps nothing
        let top = levi_cone(&v, 1.0, &LeviConfig::default()).unwrap();
        assert!(top.generators.is_empty() && top.diagnostic.is_some());
    }

    #[test]
    fn approximation_of_a_ray() {
        let cone = levi_cone_right_angle(&half_space(1.0), &LeviConfig::default()).unwrap();
        let inner = Cone::generated(1, vec![vec![3.0]], vec![]);
        let approx = polyhedral_approximation(&cone, &inner, 1e-3).unwrap();
        assert_eq!(approx.count(), 1);
        let closure = Cone::generated(1, vec![vec![1.0]], vec![vec![1.0]]);
        assert!(polyhedral_approximation(&cone, &closure, 1e-3).is_err());
    }

    #[test]
    fn opposite_half_spaces() {
        let verdict =
            edge_of_wedge_check(&[half_space(1.0), half_space(-1.0)], &LeviConfig::default())
                .unwrap();
        assert!(verdict.tangent_sum);
        // both sides see L = |w|^2 > 0 only
        assert!(!verdict.levi_sum);
        let single = edge_of_wedge_check(&[half_space(1.0)], &LeviConfig::default()).unwrap();
        assert!(!single.tangent_sum && !single.levi_sum);
    }

    #[test]
    fn indefinite_pair_spans() {
        let m = GraphManifold::from_sources(&["abs2(w1) - abs2(w2)"], 1, 2).unwrap();
        let e = real_edge(&m);
        let side = |s: f64| {
            let cone =
                Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)], true)])
                    .unwrap();
            WedgeSpec::new(
                "side",
                m.clone(),
                e.clone(),
                cone,
                &[if s > 0.0 { "Im(w1)" } else { "-Im(w1)" }],
            )
            .unwrap()
        };
        let verdict =
            edge_of_wedge_check(&[side(1.0), side(-1.0)], &LeviConfig::default()).unwrap();
        assert!(verdict.passes(), "{:?}", verdict.missing_levi_directions);
    }

    #[test]
    fn distances() {
        let gens = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(hull_distance(&[0.5, 0.5], &gens) < 1e-12);
        assert!((hull_distance(&[-1.0, 0.0], &gens) - 1.0).abs() < 1e-12);
    }
}
