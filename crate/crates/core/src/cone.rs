//! Convex cones in real coordinate spaces.
//!
//! Tangent cones live in `ℝ^{2N}` (realified `ℂ^N`, see [`crate::manifold`]),
//! Levi cones in `ℝ^l`. Closed-membership questions for generated cones and
//! Minkowski sums go through the simplex in [`crate::lp`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp;
use crate::manifold::realify;

/// Relative slack used for closed faces.
pub const FACE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub normal: Vec<f64>,
    /// `a·v > 0` when set, `a·v ≥ 0` otherwise.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cone {
    Polyhedral {
        dim: usize,
        faces: Vec<Face>,
    },
    /// `lineality + {r(cos φ e1 + sin φ e2) : r ≥ 0, φ ∈ [phi0, phi1]}`.
    Sector {
        dim: usize,
        e1: Vec<f64>,
        e2: Vec<f64>,
        phi0: f64,
        phi1: f64,
        lineality: Vec<Vec<f64>>,
    },
    FullSpace {
        dim: usize,
    },
    /// Conic hull of `generators` plus a linear subspace.
    Generated {
        dim: usize,
        generators: Vec<Vec<f64>>,
        lineality: Vec<Vec<f64>>,
    },
    Sum(Vec<Cone>),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn unit(dim: usize, k: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[k] = s;
    v
}

impl Cone {
    /// Polyhedral cone from complex normals, paired with vectors through
    /// `Σ Re a Re v + Im a Im v`.
    pub fn polyhedral_complex(normals: &[(Vec<Complex64>, bool)]) -> Result<Self> {
        let dim = normals
            .first()
            .map(|(a, _)| 2 * a.len())
            .ok_or_else(|| Error::InvalidInput("polyhedral cone needs a face".into()))?;
        let faces = normals
            .iter()
            .map(|(a, strict)| Face {
                normal: realify(a),
                strict: *strict,
            })
            .collect();
        Self::polyhedral(dim, faces)
    }

    pub fn polyhedral(dim: usize, faces: Vec<Face>) -> Result<Self> {
        for f in &faces {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "face normal".into(),
                    expected: dim,
                    actual: f.normal.len(),
                });
            }
            if norm(&f.normal) == 0.0 {
                return Err(Error::InvalidInput("zero face normal".into()));
            }
        }
        Ok(Cone::Polyhedral { dim, faces })
    }

    /// Sector cone; `e1`, `e2` are orthonormalized here and the opening
    /// `phi1 - phi0` must lie in `[0, π]`.
    pub fn sector(
        e1: Vec<f64>,
        e2: Vec<f64>,
        phi0: f64,
        phi1: f64,
        lineality: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let dim = e1.len();
        if e2.len() != dim || lineality.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                what: "sector data".into(),
                expected: dim,
                actual: e2.len(),
            });
        }
        let span = phi1 - phi0;
        if !(0.0..=std::f64::consts::PI + 1e-12).contains(&span) {
            return Err(Error::InvalidInput(format!(
                "sector opening {span} outside [0, π]"
            )));
        }
        let n1 = norm(&e1);
        if n1 == 0.0 {
            return Err(Error::InvalidInput("degenerate sector plane".into()));
        }
        let e1: Vec<f64> = e1.iter().map(|v| v / n1).collect();
        let p = dot(&e2, &e1);
        let e2: Vec<f64> = e2.iter().zip(&e1).map(|(a, b)| a - p * b).collect();
        let n2 = norm(&e2);
        if n2 < 1e-12 {
            return Err(Error::InvalidInput("degenerate sector plane".into()));
        }
        let e2: Vec<f64> = e2.iter().map(|v| v / n2).collect();
        // lineality must stay out of the sector plane
        let lineality = crate::manifold::orthonormalize(lineality);
        for l in &lineality {
            if dot(l, &e1).abs() > 1e-9 || dot(l, &e2).abs() > 1e-9 {
                return Err(Error::InvalidInput(
                    "sector lineality must be orthogonal to the sector plane".into(),
                ));
            }
        }
        Ok(Cone::Sector {
            dim,
            e1,
            e2,
            phi0,
            phi1,
            lineality,
        })
    }

    pub fn generated(dim: usize, generators: Vec<Vec<f64>>, lineality: Vec<Vec<f64>>) -> Self {
        Cone::Generated {
            dim,
            generators,
            lineality,
        }
    }

    /// The same cone with every strict face relaxed.
    pub fn closure(&self) -> Cone {
        match self {
            Cone::Polyhedral { dim, faces } => Cone::Polyhedral {
                dim: *dim,
                faces: faces
                    .iter()
                    .map(|f| Face {
                        normal: f.normal.clone(),
                        strict: false,
                    })
                    .collect(),
            },
            Cone::Sum(parts) => Cone::Sum(parts.iter().map(Cone::closure).collect()),
            other => other.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Cone::Polyhedral { dim, .. }
            | Cone::Sector { dim, .. }
            | Cone::FullSpace { dim }
            | Cone::Generated { dim, .. } => *dim,
            Cone::Sum(parts) => parts.first().map_or(0, |c| c.dim()),
        }
    }

    /// Membership (strict faces strict, everything else closed).
    pub fn contains(&self, v: &[f64]) -> bool {
        let scale = norm(v);
        match self {
            Cone::Polyhedral { faces, .. } => faces.iter().all(|f| {
                let s = dot(&f.normal, v);
                let tol = FACE_TOL * scale * norm(&f.normal);
                if f.strict {
                    s > tol
                } else {
                    s >= -tol
                }
            }),
            Cone::Sector { .. } => self.sector_margin(v).is_some_and(|m| m >= -1e-12),
            Cone::FullSpace { .. } => true,
            Cone::Generated { .. } | Cone::Sum(_) => {
                if scale == 0.0 {
                    return true;
                }
                sum_contains(std::slice::from_ref(self), v, &[])
            }
        }
    }

    /// Signed angular margin of `v` inside a sector, `None` when `v` has a
    /// component outside `lineality ⊕ plane` or lies in the lineality.
    fn sector_margin(&self, v: &[f64]) -> Option<f64> {
        let Cone::Sector {
            e1,
            e2,
            phi0,
            phi1,
            lineality,
            ..
        } = self
        else {
            return None;
        };
        let scale = norm(v).max(1e-300);
        let mut rest = v.to_vec();
        for l in lineality {
            let d = dot(&rest, l);
            rest.iter_mut().zip(l).for_each(|(a, b)| *a -= d * b);
        }
        let (a, b) = (dot(&rest, e1), dot(&rest, e2));
        rest.iter_mut()
            .zip(e1.iter().zip(e2))
            .for_each(|(r, (p, q))| *r -= a * p + b * q);
        if norm(&rest) > 1e-10 * scale {
            return None;
        }
        let r = a.hypot(b);
        if r <= 1e-12 * scale {
            // inside the lineality: on the boundary unless the sector is empty
            return Some(0.0);
        }
        let phi = b.atan2(a);
        let two_pi = 2.0 * std::f64::consts::PI;
        let mid = 0.5 * (phi0 + phi1);
        let half = 0.5 * (phi1 - phi0);
        let mut d = (phi - mid).rem_euclid(two_pi);
        if d > std::f64::consts::PI {
            d -= two_pi;
        }
        Some((half - d.abs()).min(std::f64::consts::FRAC_PI_2) * r / scale)
    }

    /// Whether `v` is in the interior with margin, relative to the span of
    /// `basis` (orthonormal). Polyhedral and sector cones use their face
    /// geometry; generated cones and sums test `v̂ ± margin·e_k`.
    pub fn interior_contains(&self, v: &[f64], margin: f64, basis: &[Vec<f64>]) -> bool {
        let scale = norm(v);
        if scale == 0.0 {
            return false;
        }
        match self {
            Cone::Polyhedral { faces, .. } => faces
                .iter()
                .all(|f| dot(&f.normal, v) > margin * scale * norm(&f.normal)),
            Cone::Sector { .. } => self.sector_margin(v).is_some_and(|m| m > margin),
            Cone::FullSpace { .. } => true,
            Cone::Generated { .. } | Cone::Sum(_) => {
                let vhat: Vec<f64> = v.iter().map(|a| a / scale).collect();
                basis.iter().all(|e| {
                    [1.0, -1.0].iter().all(|s| {
                        let p: Vec<f64> = vhat
                            .iter()
                            .zip(e)
                            .map(|(a, b)| a + s * margin * b)
                            .collect();
                        self.contains(&p)
                    })
                })
            }
        }
    }

    /// Standard-basis interior test in the full ambient space.
    pub fn interior_contains_full(&self, v: &[f64], margin: f64) -> bool {
        let dim = self.dim();
        let basis: Vec<Vec<f64>> = (0..dim).map(|k| unit(dim, k, 1.0)).collect();
        self.interior_contains(v, margin, &basis)
    }

    /// Generators and lineality vectors describing the cone for the LP.
    fn pieces(&self, out: &mut Vec<Piece>) {
        match self {
            Cone::Polyhedral { dim, faces } => out.push(Piece::Faces {
                dim: *dim,
                normals: faces.iter().map(|f| f.normal.clone()).collect(),
            }),
            Cone::Sector {
                e1,
                e2,
                phi0,
                phi1,
                lineality,
                ..
            } => {
                let ray = |phi: f64| -> Vec<f64> {
                    e1.iter()
                        .zip(e2)
                        .map(|(a, b)| phi.cos() * a + phi.sin() * b)
                        .collect()
                };
                out.push(Piece::Hull {
                    generators: vec![ray(*phi0), ray(0.5 * (phi0 + phi1)), ray(*phi1)],
                    lineality: lineality.clone(),
                })
            }
            Cone::FullSpace { dim } => out.push(Piece::Hull {
                generators: vec![],
                lineality: (0..*dim).map(|k| unit(*dim, k, 1.0)).collect(),
            }),
            Cone::Generated {
                generators,
                lineality,
                ..
            } => out.push(Piece::Hull {
                generators: generators.clone(),
                lineality: lineality.clone(),
            }),
            Cone::Sum(parts) => parts.iter().for_each(|c| c.pieces(out)),
        }
    }
}

enum Piece {
    Faces {
        dim: usize,
        normals: Vec<Vec<f64>>,
    },
    Hull {
        generators: Vec<Vec<f64>>,
        lineality: Vec<Vec<f64>>,
    },
}

/// Whether `v = Σ_k v_k` with `v_k` in the closure of `cones[k]` and
/// `c·v_k = 0` for every row `c` of `constraints`.
pub fn sum_contains(cones: &[Cone], v: &[f64], constraints: &[Vec<f64>]) -> bool {
    let m = v.len();
    let mut pieces = Vec::new();
    cones.iter().for_each(|c| c.pieces(&mut pieces));
    if pieces.is_empty() {
        return norm(v) == 0.0;
    }
    // columns: (entries in main rows, entries in extra rows keyed by row index)
    let mut columns: Vec<(Vec<f64>, Vec<(usize, f64)>)> = Vec::new();
    let mut extra_rows = 0usize;
    for piece in &pieces {
        match piece {
            Piece::Faces { dim, normals } => {
                let face_rows = extra_rows;
                let cons_rows = face_rows + normals.len();
                extra_rows = cons_rows + constraints.len();
                for k in 0..*dim {
                    for s in [1.0, -1.0] {
                        let mut extra: Vec<(usize, f64)> = normals
                            .iter()
                            .enumerate()
                            .map(|(i, a)| (face_rows + i, s * a[k]))
                            .collect();
                        extra.extend(
                            constraints
                                .iter()
                                .enumerate()
                                .map(|(i, c)| (cons_rows + i, s * c[k])),
                        );
                        columns.push((unit(m, k, s), extra));
                    }
                }
                for i in 0..normals.len() {
                    columns.push((vec![0.0; m], vec![(face_rows + i, -1.0)]));
                }
            }
            Piece::Hull {
                generators,
                lineality,
            } => {
                let cons_rows = extra_rows;
                extra_rows += constraints.len();
                let col = |g: &Vec<f64>, s: f64| {
                    let main: Vec<f64> = g.iter().map(|a| s * a).collect();
                    let extra = constraints
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (cons_rows + i, s * dot(c, g)))
                        .collect();
                    (main, extra)
                };
                for g in generators {
                    columns.push(col(g, 1.0));
                }
                for l in lineality {
                    columns.push(col(l, 1.0));
                    columns.push(col(l, -1.0));
                }
            }
        }
    }
    let rows = m + extra_rows;
    let mut a = vec![vec![0.0; columns.len()]; rows];
    for (j, (main, extra)) in columns.iter().enumerate() {
        for i in 0..m {
            a[i][j] = main[i];
        }
        for &(r, val) in extra {
            a[m + r][j] = val;
        }
    }
    let mut b = v.to_vec();
    b.resize(rows, 0.0);
    lp::feasible(&a, &b).is_some()
}

/// Tangent-cone arithmetic for two-dimensional plane slices: the measure of
/// `{φ : indicator(φ)}` on the circle by uniform sampling and bisection of
/// every sign change.
pub fn arc_measure(resolution: usize, tol: f64, indicator: impl Fn(f64) -> bool) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let step = two_pi / resolution as f64;
    let flags: Vec<bool> = (0..resolution)
        .map(|j| indicator(j as f64 * step))
        .collect();
    if flags.iter().all(|&f| f) {
        return two_pi;
    }
    if flags.iter().all(|&f| !f) {
        return 0.0;
    }
    let bisect = |mut inside: f64, mut outside: f64| {
        while (inside - outside).abs() > tol {
            let mid = 0.5 * (inside + outside);
            if indicator(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let start = flags.iter().position(|&f| !f).unwrap();
    let mut total = 0.0;
    let mut j = 0;
    while j < resolution {
        let idx = (start + j) % resolution;
        if flags[idx] {
            let first = start + j;
            let mut last = first;
            while last + 1 < start + resolution && flags[(last + 1) % resolution] {
                last += 1;
            }
            let left = bisect(first as f64 * step, (first - 1) as f64 * step);
            let right = bisect(last as f64 * step, (last + 1) as f64 * step);
            total += right - left;
            j = last - start + 1;
        } else {
            j += 1;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polyhedral_from_complex_normals() {
        // Im w1 >= 0, Im w2 >= 0 in C^3 with a leading normal coordinate
        let cone = Cone::polyhedral_complex(&[
            (vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], false),
            (vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], false),
        ])
        .unwrap();
        assert_eq!(cone.dim(), 6);
        assert!(cone.contains(&realify(&[c(1.0, 0.0), c(0.0, 1.0), c(-3.0, 0.0)])));
        assert!(!cone.contains(&realify(&[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)])));
    }

    #[test]
    fn sector_membership() {
        let cone = Cone::sector(
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            0.0,
            0.75 * PI,
            vec![vec![1.0, 0.0, 0.0]],
        )
        .unwrap();
        let at = |phi: f64, x: f64| vec![x, phi.cos(), phi.sin()];
        assert!(cone.contains(&at(0.5, 7.0)));
        assert!(!cone.contains(&at(-0.5, 0.0)));
        assert!(cone.interior_contains_full(&at(1.0, 1.0), 1e-3));
        assert!(!cone.interior_contains_full(&at(0.0, 1.0), 1e-3));
        assert!(Cone::sector(vec![1.0, 0.0], vec![0.0, 1.0], 0.0, 4.0, vec![]).is_err());
    }

    #[test]
    fn generated_and_sums() {
        let quarter = Cone::generated(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![]);
        assert!(quarter.contains(&[0.3, 0.2]));
        assert!(!quarter.contains(&[-0.1, 0.2]));
        let opposite = Cone::generated(2, vec![vec![-1.0, 0.0], vec![0.0, -1.0]], vec![]);
        assert!(sum_contains(
            &[quarter.clone(), opposite.clone()],
            &[-1.0, 1.0],
            &[]
        ));
        assert!(
            Cone::Sum(vec![quarter.clone(), opposite]).interior_contains_full(&[1.0, -1.0], 0.1)
        );
        assert!(quarter.interior_contains_full(&[1.0, 1.0], 0.1));
        assert!(!quarter.interior_contains_full(&[1.0, 0.0], 0.1));
    }

    #[test]
    fn sums_with_faces_and_constraints() {
        let up = Cone::polyhedral(
            2,
            vec![Face {
                normal: vec![0.0, 1.0],
                strict: true,
            }],
        )
        .unwrap();
        let down = Cone::polyhedral(
            2,
            vec![Face {
                normal: vec![0.0, -1.0],
                strict: false,
            }],
        )
        .unwrap();
        assert!(sum_contains(&[up.clone(), down.clone()], &[0.0, -5.0], &[]));
        assert!(!sum_contains(&[up.clone()], &[0.0, -5.0], &[]));
        // pieces confined to the first axis cannot produce the second
        assert!(!sum_contains(&[up, down], &[0.0, 1.0], &[vec![0.0, 1.0]]));
    }

    #[test]
    fn arcs() {
        let m = arc_measure(720, 1e-9, |phi| phi.sin() > 0.0);
        assert!((m - PI).abs() < 1e-8);
        let m = arc_measure(720, 1e-9, |phi| (phi - 0.1).rem_euclid(2.0 * PI) > 6.0);
        assert!((m - (2.0 * PI - 6.0)).abs() < 1e-8, "{m}");
        assert_eq!(arc_measure(720, 1e-9, |_| true), 2.0 * PI);
        assert_eq!(arc_measure(720, 1e-9, |_| false), 0.0);
    }
}
