//! Graph manifolds `M = {y = h(x, w)}` through the origin of `ℂ^N`.
//!
//! Coordinates on `ℂ^N = ℂ^l × ℂ^n` are ordered `(z_1..z_l, w_1..w_n)` with
//! `z = x + iy`. Tangent vectors are complex `N`-vectors; whenever a real
//! picture is needed they are realified as `(Re v_1..Re v_N, Im v_1..Im v_N)`.
//! In these coordinates `T_0M = {y = 0}` and `T^c_0M = {z = 0}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{gradient, parse_with, second_derivatives, DerivativeMode, Expression};

pub type CVec = Vec<Complex64>;

/// Threshold above which second-order pluriharmonic terms are reported.
pub const PLURIHARMONIC_TOL: f64 = 1e-8;

pub fn realify(v: &[Complex64]) -> Vec<f64> {
    v.iter()
        .map(|c| c.re)
        .chain(v.iter().map(|c| c.im))
        .collect()
}

pub fn complexify(r: &[f64]) -> CVec {
    let n = r.len() / 2;
    (0..n).map(|k| Complex64::new(r[k], r[n + k])).collect()
}

pub fn times_i(v: &[Complex64]) -> CVec {
    v.iter().map(|c| c * Complex64::i()).collect()
}

pub fn cnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Rank of a family of real vectors, relative tolerance `rtol`.
pub fn real_rank(vectors: &[Vec<f64>], rtol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors[0].len();
    let m = DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rtol * top).count()
}

/// Least-squares (minimum norm) coefficients of `target` in the columns.
pub fn solve_least_squares(columns: &[Vec<f64>], target: &[f64]) -> Option<Vec<f64>> {
    let rows = target.len();
    let a = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    let b = DVector::from_column_slice(target);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-12)
        .ok()
        .map(|x| x.iter().cloned().collect())
}

/// The `l` component functions of a graph manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct DefiningMap {
    components: Vec<Expression>,
    l: usize,
    n: usize,
}

impl DefiningMap {
    /// Parses the components and checks the normalization `h(0) = 0`,
    /// `dh(0) = 0` to `1e-9`.
    pub fn new<S: AsRef<str>>(sources: &[S], l: usize, n: usize) -> Result<Self> {
        if sources.len() != l {
            return Err(Error::DimensionMismatch {
                what: "defining components".into(),
                expected: l,
                actual: sources.len(),
            });
        }
        if l == 0 {
            return Err(Error::InvalidInput("codimension must be positive".into()));
        }
        let components = sources
            .iter()
            .map(|s| parse_with(s.as_ref(), l, n))
            .collect::<Result<Vec<_>>>()?;
        let map = Self { components, l, n };
        let x0 = vec![0.0; l];
        let w0 = vec![Complex64::new(0.0, 0.0); n];
        for (k, e) in map.components.iter().enumerate() {
            let v = e.eval_unchecked(&x0, &w0);
            if v.abs() > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "h{}(0) = {v:e}; the base point must be the origin",
                    k + 1
                )));
            }
            let g = gradient(e, &x0, &w0);
            let gmax = g.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if gmax > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "dh{}(0) has magnitude {gmax:e}; coordinates must satisfy h'(0) = 0",
                    k + 1
                )));
            }
        }
        Ok(map)
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.l, self.n)
    }

    pub fn eval(&self, x: &[f64], w: &[Complex64]) -> Result<Vec<f64>> {
        if x.len() != self.l || w.len() != self.n {
            return Err(Error::DimensionMismatch {
                what: "manifold chart point".into(),
                expected: self.l + self.n,
                actual: x.len() + w.len(),
            });
        }
        Ok(self.eval_unchecked(x, w))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], w: &[Complex64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|e| e.eval_unchecked(x, w))
            .collect()
    }
}

/// Quadratic part of each `h_k` at the origin, split into its hermitian
/// (Levi) part and everything else.
#[derive(Clone, Debug)]
pub struct NormalizationReport {
    /// `∂²h_k/∂w_i∂w̄_j` per component.
    pub hermitian: Vec<DMatrix<Complex64>>,
    /// Largest `|∂²h_k/∂w_i∂w_j|`.
    pub pluriharmonic: f64,
    /// Largest second derivative involving an `x` variable.
    pub x_mixed: f64,
    pub flagged: bool,
}

/// A graph manifold with its Levi matrices at the origin.
#[derive(Clone, Debug)]
pub struct GraphManifold {
    defining: DefiningMap,
    normalization: NormalizationReport,
}

impl PartialEq for GraphManifold {
    fn eq(&self, other: &Self) -> bool {
        self.defining == other.defining
    }
}

impl GraphManifold {
    pub fn new(defining: DefiningMap) -> Result<Self> {
        let normalization = normalize(&defining)?;
        Ok(Self {
            defining,
            normalization,
        })
    }

    pub fn from_sources<S: AsRef<str>>(sources: &[S], l: usize, n: usize) -> Result<Self> {
        Self::new(DefiningMap::new(sources, l, n)?)
    }

    pub fn defining(&self) -> &DefiningMap {
        &self.defining
    }

    /// Codimension.
    pub fn l(&self) -> usize {
        self.defining.l
    }

    /// CR dimension.
    pub fn n(&self) -> usize {
        self.defining.n
    }

    /// Complex dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.defining.l + self.defining.n
    }

    /// True when `h` carries second-order terms other than the Levi part.
    pub fn harmonic_quadratic_flag(&self) -> bool {
        self.normalization.flagged
    }

    pub fn normalization(&self) -> &NormalizationReport {
        &self.normalization
    }

    pub fn levi_matrices(&self) -> &[DMatrix<Complex64>] {
        &self.normalization.hermitian
    }

    pub fn h(&self, x: &[f64], w: &[Complex64]) -> Result<Vec<f64>> {
        self.defining.eval(x, w)
    }

    /// `L(w, w)`, one real value per normal direction.
    pub fn levi_form(&self, w: &[Complex64]) -> Result<Vec<f64>> {
        if w.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "complex tangent vector".into(),
                expected: self.n(),
                actual: w.len(),
            });
        }
        let norm = cnorm(w);
        if norm > 10.0 {
            return Err(Error::Domain(format!(
                "|w| = {norm} exceeds the scale guard 10"
            )));
        }
        Ok(self.levi_form_unchecked(w))
    }

    pub(crate) fn levi_form_unchecked(&self, w: &[Complex64]) -> Vec<f64> {
        self.normalization
            .hermitian
            .iter()
            .map(|m| hermitian_form(m, w, w).re)
            .collect()
    }

    /// Canonical projection onto `T_0ℂ^N / T_0M`: the `y` part of the
    /// `z` block.
    pub fn pr(&self, v: &[Complex64]) -> Vec<f64> {
        v[..self.l()].iter().map(|c| c.im).collect()
    }

    /// A real basis of `T_0M` as complex vectors.
    pub fn tangent_basis(&self) -> Vec<CVec> {
        let big_n = self.ambient();
        let unit = |k: usize, c: Complex64| {
            let mut v = vec![Complex64::new(0.0, 0.0); big_n];
            v[k] = c;
            v
        };
        let mut out: Vec<CVec> = (0..self.l())
            .map(|k| unit(k, Complex64::new(1.0, 0.0)))
            .collect();
        for j in self.l()..big_n {
            out.push(unit(j, Complex64::new(1.0, 0.0)));
            out.push(unit(j, Complex64::i()));
        }
        out
    }

    pub fn is_tangent(&self, v: &[Complex64], tol: f64) -> bool {
        self.pr(v).iter().all(|y| y.abs() <= tol)
    }

    /// The point of `M` over the chart coordinates `(x, w)`.
    pub fn point(&self, x: &[f64], w: &[Complex64]) -> CVec {
        let y = self.defining.eval_unchecked(x, w);
        x.iter()
            .zip(&y)
            .map(|(&a, &b)| Complex64::new(a, b))
            .chain(w.iter().cloned())
            .collect()
    }

    /// Chart coordinates `(x, w)` of the transverse projection of `z` onto
    /// `M` along the `y` directions.
    pub fn chart(&self, z: &[Complex64]) -> (Vec<f64>, CVec) {
        let l = self.l();
        (z[..l].iter().map(|c| c.re).collect(), z[l..].to_vec())
    }

    /// `y - h(x, w)` at an ambient point.
    pub fn normal_offset(&self, z: &[Complex64]) -> Vec<f64> {
        let (x, w) = self.chart(z);
        let h = self.defining.eval_unchecked(&x, &w);
        z[..self.l()]
            .iter()
            .zip(&h)
            .map(|(c, hk)| c.im - hk)
            .collect()
    }
}

/// `Σ_{i,j} m_ij a_i b̄_j`.
pub fn hermitian_form(m: &DMatrix<Complex64>, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            acc += m[(i, j)] * a[i] * b[j].conj();
        }
    }
    acc
}

fn normalize(map: &DefiningMap) -> Result<NormalizationReport> {
    let (l, n) = map.signature();
    let x0 = vec![0.0; l];
    let w0 = vec![Complex64::new(0.0, 0.0); n];
    let mut hermitian = Vec::with_capacity(l);
    let mut pluriharmonic: f64 = 0.0;
    let mut x_mixed: f64 = 0.0;
    for e in map.components() {
        let d = second_derivatives(e, &x0, &w0, DerivativeMode::Wirtinger)?;
        let mixed = d.mixed.expect("wirtinger mode fills mixed");
        let pure = d.pure.expect("wirtinger mode fills pure");
        pluriharmonic = pure.iter().map(|c| c.norm()).fold(pluriharmonic, f64::max);
        for i in 0..l {
            for j in 0..d.hessian.ncols() {
                x_mixed = x_mixed.max(d.hessian[(i, j)].abs());
            }
        }
        hermitian.push(mixed);
    }
    Ok(NormalizationReport {
        hermitian,
        pluriharmonic,
        x_mixed,
        flagged: pluriharmonic.max(x_mixed) > PLURIHARMONIC_TOL,
    })
}

/// Reports whether `h` has second-order terms besides its Levi part. No
/// change of coordinates is attempted.
pub fn harmonic_normalization_check(m: &GraphManifold) -> &NormalizationReport {
    m.normalization()
}

/// A real subspace of `T_0M`, given by spanning vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpec {
    span: Vec<CVec>,
}

impl EdgeSpec {
    pub fn new(span: Vec<CVec>, manifold: &GraphManifold) -> Result<Self> {
        for (k, v) in span.iter().enumerate() {
            if v.len() != manifold.ambient() {
                return Err(Error::DimensionMismatch {
                    what: format!("edge vector {k}"),
                    expected: manifold.ambient(),
                    actual: v.len(),
                });
            }
            if !manifold.is_tangent(v, 1e-10) {
                return Err(Error::InvalidInput(format!(
                    "edge vector {k} is not tangent to M at 0"
                )));
            }
        }
        Ok(Self { span })
    }

    pub fn span(&self) -> &[CVec] {
        &self.span
    }

    /// Real dimension of the edge's tangent space.
    pub fn dimension(&self) -> usize {
        real_rank(
            &self.span.iter().map(|v| realify(v)).collect::<Vec<_>>(),
            1e-10,
        )
    }

    /// An orthonormal real basis of `T_0E`, realified.
    pub fn orthonormal_basis(&self) -> Vec<Vec<f64>> {
        orthonormalize(self.span.iter().map(|v| realify(v)).collect())
    }
}

/// Gram-Schmidt with rank detection.
pub fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let scale = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut u = v;
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = u.iter().zip(b).map(|(a, c)| a * c).sum();
                u.iter_mut().zip(b).for_each(|(a, c)| *a -= d * c);
            }
        }
        let norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-10 * scale.max(1e-300) && norm > 1e-14 {
            basis.push(u.into_iter().map(|a| a / norm).collect());
        }
    }
    basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    /// Real dimension of `T_0E + iT_0E`.
    pub rank: usize,
    pub required: usize,
}

/// Whether `T_0E + iT_0E = ℂ^N`.
pub fn genericity_check(edge: &EdgeSpec, big_n: usize) -> GenericityReport {
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    for v in edge.span() {
        vecs.push(realify(v));
        vecs.push(realify(&times_i(v)));
    }
    let rank = real_rank(&vecs, 1e-10);
    GenericityReport {
        generic: rank == 2 * big_n,
        rank,
        required: 2 * big_n,
    }
}
