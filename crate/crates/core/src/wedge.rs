//! Wedges in a graph manifold: tangent cone, edge, the opening angle
//! `γ_w` of the plane slice `ℂw ∩ C_0V`, and the equivalent `b ± a ∈ Σ`
//! formulation of the angle condition.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::cone::{arc_measure, Cone};
use crate::error::{Error, Result};
use crate::expr::{parse_with, Expression};
use crate::manifold::{
    cnorm, complexify, genericity_check, orthonormalize, realify, solve_least_squares, times_i,
    CVec, EdgeSpec, GraphManifold,
};
use crate::sampling::SphereSampler;

/// Smallest accepted angular resolution for [`gamma_angle`].
pub const MIN_RESOLUTION: usize = 720;
/// Bisection width for arc endpoints.
pub const ARC_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct WedgeSpec {
    pub name: String,
    manifold: GraphManifold,
    edge: EdgeSpec,
    cone: Cone,
    predicates: Vec<Expression>,
    tangent_basis: Vec<Vec<f64>>,
}

impl WedgeSpec {
    /// `cone` lives in `ℝ^{2N}`; the edge directions must lie in its
    /// lineality. `predicates` are chart inequalities `p(x, w) > 0`
    /// describing `V` near the origin.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        manifold: GraphManifold,
        edge: EdgeSpec,
        cone: Cone,
        predicates: &[S],
    ) -> Result<Self> {
        let big_n = manifold.ambient();
        if cone.dim() != 2 * big_n {
            return Err(Error::DimensionMismatch {
                what: "tangent cone".into(),
                expected: 2 * big_n,
                actual: cone.dim(),
            });
        }
        let closed = cone.closure();
        for (k, e) in edge.span().iter().enumerate() {
            let r = realify(e);
            let neg: Vec<f64> = r.iter().map(|v| -v).collect();
            if !(closed.contains(&r) && closed.contains(&neg)) {
                return Err(Error::InvalidInput(format!(
                    "tangent cone is not invariant under edge direction {k}"
                )));
            }
        }
        let (l, n) = (manifold.l(), manifold.n());
        let predicates = predicates
            .iter()
            .map(|p| parse_with(p.as_ref(), l, n))
            .collect::<Result<Vec<_>>>()?;
        let tangent_basis = orthonormalize(
            manifold
                .tangent_basis()
                .iter()
                .map(|v| realify(v))
                .collect(),
        );
        Ok(Self {
            name: name.into(),
            manifold,
            edge,
            cone,
            predicates,
            tangent_basis,
        })
    }

    pub fn manifold(&self) -> &GraphManifold {
        &self.manifold
    }

    pub fn edge(&self) -> &EdgeSpec {
        &self.edge
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn predicates(&self) -> &[Expression] {
        &self.predicates
    }

    /// Orthonormal real basis of `T_0M`.
    pub fn tangent_basis(&self) -> &[Vec<f64>] {
        &self.tangent_basis
    }

    /// Orthonormal basis of the complement of `T_0E` in `T_0M`; coordinates
    /// for the directional cone.
    pub fn complement_basis(&self) -> Vec<Vec<f64>> {
        let mut all = self.edge.orthonormal_basis();
        let k = all.len();
        all.extend(self.tangent_basis.iter().cloned());
        orthonormalize(all).split_off(k)
    }

    /// Evaluates the local predicate of `V` at chart coordinates.
    pub fn contains_chart(&self, x: &[f64], w: &[Complex64]) -> Result<bool> {
        for p in &self.predicates {
            if p.eval(x, w)? <= 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest predicate value, i.e. a signed membership margin.
    pub fn predicate_margin(&self, x: &[f64], w: &[Complex64]) -> f64 {
        self.predicates
            .iter()
            .map(|p| p.eval_unchecked(x, w))
            .fold(f64::INFINITY, f64::min)
    }

    /// `s ∈ Σ` for `s ∈ T_0E`: `is` lies in the interior of `C_0V`, with a
    /// relative margin.
    pub fn sigma_contains(&self, s: &[Complex64], margin: f64) -> bool {
        let is = times_i(s);
        let scale = cnorm(&is);
        if scale == 0.0 || !self.manifold.is_tangent(&is, 1e-9 * scale) {
            return false;
        }
        self.cone
            .interior_contains(&realify(&is), margin, &self.tangent_basis)
    }

    /// `(0, w)` as an ambient vector.
    pub fn lift(&self, w: &[Complex64]) -> CVec {
        let mut v = vec![Complex64::new(0.0, 0.0); self.manifold.l()];
        v.extend_from_slice(w);
        v
    }
}

/// Opening angle of `ℂw ∩ C_0V`.
pub fn gamma_angle(w: &[Complex64], v: &WedgeSpec, resolution: usize) -> Result<f64> {
    if w.len() != v.manifold.n() {
        return Err(Error::DimensionMismatch {
            what: "complex tangent vector".into(),
            expected: v.manifold.n(),
            actual: w.len(),
        });
    }
    if cnorm(w) == 0.0 {
        return Err(Error::InvalidInput("γ_w needs w ≠ 0".into()));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::Config(format!(
            "angular resolution {resolution} below {MIN_RESOLUTION}"
        )));
    }
    Ok(gamma_unchecked(w, v, resolution))
}

pub(crate) fn gamma_unchecked(w: &[Complex64], v: &WedgeSpec, resolution: usize) -> f64 {
    let u = v.lift(w);
    arc_measure(resolution, ARC_TOL, |phi| {
        let rot = Complex64::from_polar(1.0, phi);
        let r: CVec = u.iter().map(|c| c * rot).collect();
        v.cone.contains(&realify(&r))
    })
}

/// Outcome of the `b ± a ∈ Σ` search.
#[derive(Clone, Debug)]
pub struct AngleWitness {
    pub holds: bool,
    pub theta: f64,
    pub w_tilde: CVec,
    pub a: CVec,
    pub b: CVec,
    /// Perturbation radius (relative to `|w|`) at which the witness was found.
    pub radius: f64,
}

#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub theta_steps: usize,
    pub radii: Vec<f64>,
    pub perturbations: usize,
    pub margin: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            theta_steps: 1440,
            radii: vec![0.0, 1e-3, 5e-4, 2.5e-4],
            perturbations: 16,
            margin: 1e-9,
            seed: 0,
        }
    }
}

/// Splits `u = a + ib` with `a, b ∈ T_0E` (minimum-norm representative
/// modulo `T^c_0E`).
pub fn decompose(u: &[Complex64], edge: &EdgeSpec) -> Result<(CVec, CVec)> {
    let basis: Vec<CVec> = edge
        .orthonormal_basis()
        .iter()
        .map(|r| complexify(r))
        .collect();
    let mut cols: Vec<Vec<f64>> = basis.iter().map(|e| realify(e)).collect();
    cols.extend(basis.iter().map(|e| realify(&times_i(e))));
    let target = realify(u);
    let coef = solve_least_squares(&cols, &target)
        .ok_or_else(|| Error::Hypothesis("edge decomposition failed".into()))?;
    let k = basis.len();
    let combine = |c: &[f64]| -> CVec {
        let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
        for (e, &t) in basis.iter().zip(c) {
            out.iter_mut().zip(e).for_each(|(o, ei)| *o += ei * t);
        }
        out
    };
    let a = combine(&coef[..k]);
    let b = combine(&coef[k..]);
    let rebuilt: CVec = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x + Complex64::i() * y)
        .collect();
    let err = cnorm(
        &rebuilt
            .iter()
            .zip(u)
            .map(|(p, q)| p - q)
            .collect::<Vec<_>>(),
    );
    if err > 1e-9 * cnorm(u).max(1.0) {
        return Err(Error::Hypothesis(format!(
            "vector not in T_0E + iT_0E (residual {err:e})"
        )));
    }
    Ok((a, b))
}

/// Searches `θ` and nearby `w̃` for `b ± a ∈ Σ`.
pub fn angle_condition_equiv(
    w: &[Complex64],
    v: &WedgeSpec,
    budget: &SearchBudget,
) -> Result<AngleWitness> {
    let big_n = v.manifold.ambient();
    let gen = genericity_check(&v.edge, big_n);
    if !gen.generic {
        return Err(Error::Hypothesis(format!(
            "edge not generic (rank {} < {})",
            gen.rank, gen.required
        )));
    }
    let wn = cnorm(w);
    if wn == 0.0 {
        return Err(Error::InvalidInput("angle condition needs w ≠ 0".into()));
    }
    let mut sampler = SphereSampler::new(2 * w.len(), budget.seed);
    let mut directions: Vec<CVec> = Vec::new();
    for &radius in &budget.radii {
        let candidates: Vec<CVec> = if radius == 0.0 {
            vec![w.to_vec()]
        } else {
            while directions.len() < budget.perturbations {
                directions.push(sampler.sample_complex());
            }
            directions
                .iter()
                .map(|d| {
                    w.iter()
                        .zip(d)
                        .map(|(a, b)| a + b * (radius * wn))
                        .collect()
                })
                .collect()
        };
        for wt in candidates {
            let (a0, b0) = decompose(&v.lift(&wt), &v.edge)?;
            for j in 0..budget.theta_steps {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / budget.theta_steps as f64;
                let (c, s) = (theta.cos(), theta.sin());
                // e^{iθ}(a + ib) = (c a − s b) + i(s a + c b)
                let a: CVec = a0.iter().zip(&b0).map(|(x, y)| x * c - y * s).collect();
                let b: CVec = a0.iter().zip(&b0).map(|(x, y)| x * s + y * c).collect();
                let plus: CVec = b.iter().zip(&a).map(|(x, y)| x + y).collect();
                let minus: CVec = b.iter().zip(&a).map(|(x, y)| x - y).collect();
                if v.sigma_contains(&plus, budget.margin) && v.sigma_contains(&minus, budget.margin)
                {
                    return Ok(AngleWitness {
                        holds: true,
                        theta,
                        w_tilde: wt,
                        a,
                        b,
                        radius,
                    });
                }
            }
        }
    }
    let (a, b) = decompose(&v.lift(w), &v.edge)?;
    Ok(AngleWitness {
        holds: false,
        theta: 0.0,
        w_tilde: w.to_vec(),
        a,
        b,
        radius: budget.radii.last().copied().unwrap_or(0.0),
    })
}

/// `γ_w > π/2` via the angle measure, for cross-checks.
pub fn exceeds_right_angle(w: &[Complex64], v: &WedgeSpec, resolution: usize) -> Result<bool> {
    Ok(gamma_angle(w, v, resolution)? > FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

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

    fn ex14() -> WedgeSpec {
        let m = GraphManifold::from_sources(&["abs2(w1) + abs2(w2) - 2.1*Im(w1*conj(w2))"], 1, 2)
            .unwrap();
        let cone = Cone::polyhedral_complex(&[
            (vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], false),
            (vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], false),
        ])
        .unwrap();
        let e = real_edge(&m);
        WedgeSpec::new("V", m, e, cone, &["Im(w1)", "Im(w2)"]).unwrap()
    }

    #[test]
    fn right_angle_example() {
        let v = ex14();
        let g = gamma_angle(&[c(-1.0, 1.0), c(1.0, 1.0)], &v, 720).unwrap();
        assert!((g - PI / 2.0).abs() < 1e-6, "{g}");
        assert!(gamma_angle(&[c(0.0, 0.0), c(0.0, 0.0)], &v, 720).is_err());
        assert!(gamma_angle(&[c(1.0, 0.0), c(0.0, 0.0)], &v, 100).is_err());
    }

    #[test]
    fn sector_example() {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = EdgeSpec::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]], &m).unwrap();
        let cone = Cone::sector(
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            0.0,
            0.75 * PI,
            vec![vec![1.0, 0.0, 0.0, 0.0]],
        )
        .unwrap();
        let v = WedgeSpec::new("sector", m, e, cone, &["Im(w1)"]).unwrap();
        let g = gamma_angle(&[c(1.0, 0.0)], &v, 720).unwrap();
        assert!((g - 0.75 * PI).abs() < 1e-6);
        // non-generic edge: the b ± a search refuses
        assert!(matches!(
            angle_condition_equiv(&[c(1.0, 0.0)], &v, &SearchBudget::default()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn full_plane_and_edge_directions() {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = real_edge(&m);
        let full = WedgeSpec::new(
            "full",
            m.clone(),
            e.clone(),
            Cone::FullSpace { dim: 4 },
            &["1"],
        )
        .unwrap();
        assert_eq!(gamma_angle(&[c(0.3, 0.4)], &full, 720).unwrap(), 2.0 * PI);
        // half-space Im w1 > 0 over the real edge: complex tangent w is the
        // a = 0 case and γ_w = π
        let half = Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(0.0, 1.0)], true)]).unwrap();
        let v = WedgeSpec::new("half", m, e, half, &["Im(w1)"]).unwrap();
        let g = gamma_angle(&[c(1.0, 0.0)], &v, 720).unwrap();
        assert!((g - PI).abs() < 1e-6);
        let wit = angle_condition_equiv(&[c(1.0, 0.0)], &v, &SearchBudget::default()).unwrap();
        assert!(wit.holds);
    }

    #[test]
    fn decomposition_cases_on_right_angle_example() {
        let v = ex14();
        // rotate w0's second component slightly so the slice opens up
        let w: CVec = vec![
            c(-1.0, 1.0),
            Complex64::from_polar(2f64.sqrt(), PI / 4.0 + 0.1),
        ];
        let g = gamma_angle(&w, &v, 720).unwrap();
        assert!(g > PI / 2.0 + 0.05, "{g}");
        let wit = angle_condition_equiv(&w, &v, &SearchBudget::default()).unwrap();
        assert!(wit.holds);
        let w: CVec = vec![
            c(-1.0, 1.0),
            Complex64::from_polar(2f64.sqrt(), PI / 4.0 - 0.1),
        ];
        assert!(gamma_angle(&w, &v, 720).unwrap() < PI / 2.0 - 0.05);
        let budget = SearchBudget {
            radii: vec![0.0],
            ..Default::default()
        };
        assert!(!angle_condition_equiv(&w, &v, &budget).unwrap().holds);
    }

    #[test]
    fn edge_invariance_is_enforced() {
        let m = GraphManifold::from_sources(&["abs2(w1)"], 1, 1).unwrap();
        let e = real_edge(&m);
        let bad = Cone::polyhedral_complex(&[(vec![c(0.0, 0.0), c(1.0, 0.0)], false)]).unwrap();
        assert!(WedgeSpec::new("bad", m, e, bad, &["Re(w1)"]).is_err());
    }
}
