//! Analytic discs attached to graph manifolds via the Bishop equation
//! `u = x − T₁ h(u, w)` on the boundary circle.

use num_complex::Complex64;

use crate::circle::{
    holomorphy_residual, radial_derivative_at_one_with, singular_factor, theta, BoundaryFunction,
    SingularFunction, DEFAULT_GRID,
};
use crate::error::{Error, Result};
use crate::manifold::{CVec, GraphManifold};
use crate::wedge::WedgeSpec;

/// Default bound on `‖w‖ + |x|` accepted by the solver.
pub const SMALLNESS_GATE: f64 = 0.3;
/// Consecutive growing updates that count as divergence.
pub const GROWTH_STEPS: usize = 5;

#[derive(Clone, Debug)]
pub struct BishopConfig {
    pub grid_size: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub smallness_gate: f64,
    /// Starting iterate for `u`; defaults to the constant `x`.
    pub initial: Option<Vec<Vec<f64>>>,
}

impl Default for BishopConfig {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID,
            max_iter: 200,
            tol: 1e-11,
            smallness_gate: SMALLNESS_GATE,
            initial: None,
        }
    }
}

impl BishopConfig {
    pub fn with_grid(grid_size: usize) -> Self {
        Self {
            grid_size,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnalyticDisc {
    /// `z = u + iv`, one boundary function per normal coordinate.
    pub z: Vec<BoundaryFunction>,
    /// Prescribed components, kept in closed form.
    pub w: Vec<SingularFunction>,
    /// Samples of `w` on the grid.
    pub w_values: Vec<BoundaryFunction>,
    pub x: Vec<f64>,
    pub attachment_residual: f64,
    pub holomorphy_residual: f64,
    pub iterations: usize,
    pub contraction_factor: f64,
}

impl AnalyticDisc {
    pub fn grid_size(&self) -> usize {
        self.z.first().map_or(0, |f| f.grid_size())
    }

    pub fn l(&self) -> usize {
        self.z.len()
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Ambient point at boundary sample `j`.
    pub fn boundary_point(&self, j: usize) -> CVec {
        self.z
            .iter()
            .map(|f| f.values()[j])
            .chain(self.w_values.iter().map(|f| f.values()[j]))
            .collect()
    }

    /// `A(1)`.
    pub fn base_point(&self) -> CVec {
        self.boundary_point(0)
    }

    /// `∂_r z_k(1)` for each normal coordinate; the imaginary parts are the
    /// components of `pr(∂_r A(1))`.
    pub fn radial_derivative_z(&self, max_tail: f64) -> Result<Vec<Complex64>> {
        self.z
            .iter()
            .map(|f| radial_derivative_at_one_with(f, max_tail))
            .collect()
    }

    /// `∂_r v(1)`, transverse part of the radial derivative at `τ = 1`.
    pub fn normal_radial_derivative(&self, max_tail: f64) -> Result<Vec<f64>> {
        self.z
            .iter()
            .map(|f| radial_derivative_at_one_with(&f.imag_part()?, max_tail).map(|c| c.re))
            .collect()
    }

    /// `v = Im z` on the grid.
    pub fn v(&self) -> Result<Vec<BoundaryFunction>> {
        self.z.iter().map(|f| f.imag_part()).collect()
    }

    pub fn is_constant(&self) -> bool {
        let n = self.grid_size();
        let c = self.base_point();
        (0..n).all(|j| {
            self.boundary_point(j)
                .iter()
                .zip(&c)
                .all(|(a, b)| (a - b).norm() < 1e-14)
        })
    }
}

/// `η(1−τ)^α w₀`, one component per entry of `w0`.
pub fn singular_component(
    alpha: f64,
    eta: f64,
    w0: &[Complex64],
    grid_size: usize,
) -> Result<Vec<SingularFunction>> {
    if !(eta >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "η = {eta} must be nonnegative"
        )));
    }
    w0.iter()
        .map(|&c| {
            SingularFunction::new(
                alpha,
                c * eta,
                Complex64::new(0.0, 0.0),
                BoundaryFunction::zeros(grid_size)?,
            )
        })
        .collect()
}

/// Smooth prescribed component from boundary samples of a holomorphic
/// function.
pub fn smooth_component(alpha: f64, values: BoundaryFunction) -> Result<SingularFunction> {
    SingularFunction::smooth(alpha, values)
}

fn h_on_grid(
    m: &GraphManifold,
    u: &[Vec<f64>],
    w: &[BoundaryFunction],
    n: usize,
) -> Result<Vec<Vec<f64>>> {
    let l = m.l();
    let mut out = vec![vec![0.0; n]; l];
    let mut xs = vec![0.0; l];
    let mut ws = vec![Complex64::new(0.0, 0.0); w.len()];
    for j in 0..n {
        for k in 0..l {
            xs[k] = u[k][j];
        }
        for (slot, f) in ws.iter_mut().zip(w) {
            *slot = f.values()[j];
        }
        let h = m.defining().eval_unchecked(&xs, &ws);
        for k in 0..l {
            if !h[k].is_finite() {
                return Err(Error::Domain(format!(
                    "h is not finite at boundary sample {j}"
                )));
            }
            out[k][j] = h[k];
        }
    }
    Ok(out)
}

fn bishop_map(
    m: &GraphManifold,
    u: &[Vec<f64>],
    w: &[BoundaryFunction],
    x: &[f64],
    n: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let h = h_on_grid(m, u, w, n)?;
    let mut next = Vec::with_capacity(h.len());
    for (k, hk) in h.iter().enumerate() {
        let t = crate::circle::hilbert_t1(&BoundaryFunction::from_real(hk)?)?;
        next.push(t.values().iter().map(|c| x[k] - c.re).collect());
    }
    Ok((next, h))
}

fn sup_change(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| p.iter().zip(q).map(|(s, t)| (s - t).abs()))
        .fold(0.0, f64::max)
}

/// Size of the data `(w, x)` as seen by the smallness gate.
pub fn data_size(w: &[SingularFunction], x: &[f64]) -> Result<f64> {
    let mut total = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for f in w {
        let (a, b) = f.norm_parts()?;
        total += a + b;
    }
    Ok(total)
}

/// Solves for the disc with prescribed `w` and `x(1) = x`.
pub fn solve_bishop(
    m: &GraphManifold,
    w: &[SingularFunction],
    x: &[f64],
    cfg: &BishopConfig,
) -> Result<AnalyticDisc> {
    let (l, nw) = (m.l(), m.n());
    if w.len() != nw {
        return Err(Error::DimensionMismatch {
            what: "prescribed components".into(),
            expected: nw,
            actual: w.len(),
        });
    }
    if x.len() != l {
        return Err(Error::DimensionMismatch {
            what: "x(1)".into(),
            expected: l,
            actual: x.len(),
        });
    }
    let n = cfg.grid_size;
    if let Some(f) = w.iter().find(|f| f.grid_size() != n) {
        return Err(Error::Config(format!(
            "prescribed component sampled on {} points, solver grid is {n}",
            f.grid_size()
        )));
    }
    let size = data_size(w, x)?;
    if size > cfg.smallness_gate {
        return Err(Error::Hypothesis(format!(
            "data size {size:.4} exceeds the smallness gate {}",
            cfg.smallness_gate
        )));
    }
    let w_values = w
        .iter()
        .map(|f| f.boundary_values())
        .collect::<Result<Vec<_>>>()?;
    let mut u: Vec<Vec<f64>> = match &cfg.initial {
        Some(init) => {
            if init.len() != l || init.iter().any(|c| c.len() != n) {
                return Err(Error::DimensionMismatch {
                    what: "initial iterate".into(),
                    expected: l * n,
                    actual: init.iter().map(Vec::len).sum(),
                });
            }
            init.clone()
        }
        None => x.iter().map(|&xk| vec![xk; n]).collect(),
    };
    let mut prev_change = f64::INFINITY;
    let mut factor = 0.0;
    let mut growth = 0;
    let mut iterations = 0;
    loop {
        if iterations >= cfg.max_iter {
            return Err(Error::Convergence {
                iterations,
                residual: prev_change,
            });
        }
        let (next, _) = bishop_map(m, &u, &w_values, x, n)?;
        let change = sup_change(&next, &u);
        iterations += 1;
        if !change.is_finite() {
            return Err(Error::NoContraction {
                steps: growth,
                last_change: change,
            });
        }
        if prev_change.is_finite() && prev_change > 0.0 {
            factor = change / prev_change;
            if change > prev_change {
                growth += 1;
                if growth >= GROWTH_STEPS {
                    return Err(Error::NoContraction {
                        steps: growth,
                        last_change: change,
                    });
                }
            } else {
                growth = 0;
            }
        }
        u = next;
        prev_change = change;
        if change < cfg.tol {
            break;
        }
    }
    let (check, h) = bishop_map(m, &u, &w_values, x, n)?;
    let attachment_residual = sup_change(&check, &u);
    let z = u
        .iter()
        .zip(&h)
        .map(|(uk, hk)| {
            BoundaryFunction::from_complex(
                uk.iter()
                    .zip(hk)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let holo = z
        .iter()
        .chain(&w_values)
        .map(holomorphy_residual)
        .fold(0.0, f64::max);
    Ok(AnalyticDisc {
        z,
        w: w.to_vec(),
        w_values,
        x: x.to_vec(),
        attachment_residual,
        holomorphy_residual: holo,
        iterations,
        contraction_factor: factor,
    })
}

/// `A(τ)` for `|τ| < 1`: the `z` block from its nonnegative-frequency
/// series, the `w` block in closed form.
pub fn disc_interior_eval(a: &AnalyticDisc, tau: Complex64) -> Result<CVec> {
    if tau.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "|τ| = {} is not inside the unit disc",
            tau.norm()
        )));
    }
    let mut out: CVec = a.z.iter().map(|f| f.holomorphic_eval(tau)).collect();
    for f in &a.w {
        out.push(f.eval(tau)?);
    }
    Ok(out)
}

/// Boundary samples (other than `τ = 1`) violating the wedge predicate.
#[derive(Clone, Debug)]
pub struct BoundaryMembership {
    pub checked: usize,
    pub failing: Vec<usize>,
    /// Smallest predicate value over the checked samples.
    pub min_margin: f64,
    /// The disc is constant, so nothing is attached to an open wedge.
    pub degenerate: bool,
}

impl BoundaryMembership {
    pub fn attached(&self) -> bool {
        self.failing.is_empty() && !self.degenerate
    }
}

pub fn wedge_membership_of_boundary(a: &AnalyticDisc, v: &WedgeSpec) -> Result<BoundaryMembership> {
    let n = a.grid_size();
    let l = a.l();
    let mut failing = Vec::new();
    let mut min_margin = f64::INFINITY;
    for j in 1..n {
        let p = a.boundary_point(j);
        let x: Vec<f64> = p[..l].iter().map(|c| c.re).collect();
        let margin = v.predicate_margin(&x, &p[l..]);
        // no predicates: the wedge is all of M near the origin
        if margin.is_nan() || margin == f64::NEG_INFINITY {
            return Err(Error::Domain(format!(
                "wedge predicate not finite at boundary sample {j}"
            )));
        }
        min_margin = min_margin.min(margin);
        if margin <= 0.0 {
            failing.push(j);
        }
    }
    Ok(BoundaryMembership {
        checked: n - 1,
        failing,
        min_margin,
        degenerate: a.is_constant(),
    })
}

/// Angle of boundary sample `j`, re-exported for reports.
pub fn sample_angle(j: usize, n: usize) -> f64 {
    theta(j, n)
}

/// `(1−τ)^α` at boundary sample `j`.
pub fn factor_at(alpha: f64, j: usize, n: usize) -> Result<Complex64> {
    singular_factor(alpha, Complex64::cis(theta(j, n)))
}
