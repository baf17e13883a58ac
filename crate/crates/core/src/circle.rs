//! Spectral analysis on the unit circle.
//!
//! Functions on the circle are stored as samples on the uniform grid
//! `θ_j = 2πj/N` together with their discrete Fourier coefficients
//! `c_k = N⁻¹ Σ_j f(θ_j) e^{-ikθ_j}`. The coefficient vector uses FFT order:
//! slot `j < N/2` holds frequency `j`, slot `j > N/2` holds frequency `j - N`,
//! and slot `N/2` is the Nyquist frequency, which every operator here treats as
//! belonging to neither half of the spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 256;
pub const DEFAULT_GRID: usize = 2048;

/// Default relative tail bound for [`radial_derivative_at_one`].
pub const DEFAULT_TAIL_FRACTION: f64 = 1e-8;

fn check_grid(n: usize) -> Result<()> {
    if n < MIN_GRID {
        return Err(Error::Config(format!(
            "grid size {n} is below the minimum {MIN_GRID}"
        )));
    }
    if !n.is_power_of_two() {
        return Err(Error::Config(format!(
            "grid size {n} is not a power of two"
        )));
    }
    Ok(())
}

fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Signed frequency of FFT slot `j` on a grid of size `n`. The Nyquist slot
/// reports `n/2`.
pub fn frequency(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Sampled function on the unit circle with cached Fourier coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFunction {
    values: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl BoundaryFunction {
    pub fn from_complex(values: Vec<Complex64>) -> Result<Self> {
        check_grid(values.len())?;
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite boundary sample".into()));
        }
        let real = values.iter().all(|v| v.im == 0.0);
        let coeffs = forward(&values);
        Ok(Self {
            values,
            coeffs,
            real,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_complex(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(θ)` on the grid of size `n`.
    pub fn from_fn_real(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_grid(n)?;
        let vals: Vec<f64> = (0..n).map(|j| f(theta(j, n))).collect();
        Self::from_real(&vals)
    }

    /// Samples `f(τ)` at `τ = e^{iθ_j}`.
    pub fn from_fn_complex(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_grid(n)?;
        Self::from_complex((0..n).map(|j| f(Complex64::cis(theta(j, n)))).collect())
    }

    /// Builds a function from FFT-ordered coefficients.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        check_grid(coeffs.len())?;
        Self::from_complex(inverse(&coeffs))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_real(&vec![0.0; n])
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of frequency `k`, zero outside the representable band.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.grid_size() as i64;
        if k.abs() >= n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[k.rem_euclid(n) as usize]
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Value at `τ = 1`, i.e. at `θ = 0`.
    pub fn value_at_one(&self) -> Complex64 {
        self.values[0]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Relative error of the coefficient → sample round trip.
    pub fn roundtrip_error(&self) -> f64 {
        let back = inverse(&self.coeffs);
        let scale = self.sup_norm().max(f64::MIN_POSITIVE);
        back.iter()
            .zip(&self.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::from_complex(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::DimensionMismatch {
                what: "boundary grid".into(),
                expected: self.grid_size(),
                actual: other.grid_size(),
            });
        }
        Self::from_complex(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn real_part(&self) -> Result<Self> {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    pub fn imag_part(&self) -> Result<Self> {
        self.map(|v| Complex64::new(v.im, 0.0))
    }

    /// Spectral derivative in θ.
    pub fn derivative(&self) -> Result<Self> {
        let n = self.grid_size();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, frequency(j, n) as f64)
                }
            })
            .collect();
        Self::from_coefficients(coeffs)
    }

    /// Harmonic extension into the disc.
    pub fn harmonic_extension(&self) -> HarmonicField {
        HarmonicField {
            boundary: self.clone(),
        }
    }

    /// Evaluates the nonnegative-frequency part of the Fourier series at
    /// `τ`. For boundary values of a holomorphic function this is the
    /// holomorphic extension.
    pub fn holomorphic_eval(&self, tau: Complex64) -> Complex64 {
        let n = self.grid_size();
        // Horner on c_0 + c_1 τ + ... + c_{n/2-1} τ^{n/2-1}
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (0..n / 2).rev() {
            acc = acc * tau + self.coeffs[j];
        }
        acc
    }
}

pub fn theta(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// Harmonic extension `Σ c_k r^{|k|} e^{ikθ}` of a boundary function.
#[derive(Clone, Debug)]
pub struct HarmonicField {
    pub boundary: BoundaryFunction,
}

impl HarmonicField {
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let r = tau.norm();
        if r > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "|τ| = {r} lies outside the closed disc"
            )));
        }
        let n = self.boundary.grid_size();
        let coeffs = self.boundary.coefficients();
        let mut pos = Complex64::new(0.0, 0.0);
        let mut neg = Complex64::new(0.0, 0.0);
        let tau_bar = tau.conj();
        for k in (1..n / 2).rev() {
            pos = pos * tau + coeffs[k];
            neg = neg * tau_bar + coeffs[n - k];
        }
        Ok(coeffs[0] + pos * tau + neg * tau_bar)
    }
}

/// Normalized Hilbert transform: the boundary trace of the harmonic conjugate
/// of the harmonic extension of `f`, pinned to vanish at `τ = 1`.
pub fn hilbert_t1(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    if !f.is_real() {
        let scale = f.sup_norm().max(1.0);
        if f.values().iter().any(|v| v.im.abs() > 1e-14 * scale) {
            return Err(Error::InvalidInput(
                "hilbert_t1 expects a real-valued boundary function".into(),
            ));
        }
    }
    let n = f.grid_size();
    let minus_i = Complex64::new(0.0, -1.0);
    let coeffs: Vec<Complex64> = f
        .coefficients()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            if j == 0 || j == n / 2 {
                Complex64::new(0.0, 0.0)
            } else if j < n / 2 {
                minus_i * c
            } else {
                -minus_i * c
            }
        })
        .collect();
    let g = inverse(&coeffs);
    let pin = g[0].re;
    BoundaryFunction::from_real(&g.iter().map(|v| v.re - pin).collect::<Vec<_>>())
}

/// Relative size of `Σ_{|k| > N/4} |k||c_k|` within `Σ |k||c_k|`.
pub fn radial_tail_fraction(f: &BoundaryFunction) -> f64 {
    let n = f.grid_size();
    let (mut total, mut tail) = (0.0, 0.0);
    for (j, c) in f.coefficients().iter().enumerate() {
        if j == n / 2 {
            continue;
        }
        let k = frequency(j, n).unsigned_abs() as usize;
        let term = k as f64 * c.norm();
        total += term;
        if k > n / 4 {
            tail += term;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// `∂_r` of the harmonic extension at `τ = 1`, i.e. `Σ_k |k| c_k`, with the
/// default tail bound.
pub fn radial_derivative_at_one(f: &BoundaryFunction) -> Result<Complex64> {
    radial_derivative_at_one_with(f, DEFAULT_TAIL_FRACTION)
}

/// As [`radial_derivative_at_one`], accepting a tail fraction up to
/// `max_tail`. Functions with a Hölder singularity at `τ = 1` have slowly
/// decaying coefficients and need a looser bound.
pub fn radial_derivative_at_one_with(f: &BoundaryFunction, max_tail: f64) -> Result<Complex64> {
    let tail = radial_tail_fraction(f);
    if tail > max_tail {
        return Err(Error::accuracy(
            "Fourier tail of the radial derivative series is too large",
            tail,
        ));
    }
    let n = f.grid_size();
    Ok(f.coefficients()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != n / 2)
        .map(|(j, &c)| c * frequency(j, n).unsigned_abs() as f64)
        .sum())
}

/// Principal branch of `(1-τ)^α` on the closed unit disc, real and positive
/// on `(0, 1)`. The cut sits on `[1, ∞)` in the `τ` variable.
pub fn singular_factor(alpha: f64, tau: Complex64) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidInput(format!(
            "exponent {alpha} outside (0, 2]"
        )));
    }
    if tau.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "|τ| = {} lies outside the closed disc",
            tau.norm()
        )));
    }
    let base = Complex64::new(1.0, 0.0) - tau;
    if base.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(base.powf(alpha))
}

/// Fraction of the spectral energy carried by strictly negative frequencies.
/// Zero means boundary values of a holomorphic function.
pub fn holomorphy_residual(f: &BoundaryFunction) -> f64 {
    let n = f.grid_size();
    let mut total = 0.0;
    let mut negative = 0.0;
    for (j, c) in f.coefficients().iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if j > n / 2 {
            negative += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        negative / total
    }
}

/// Discrete Hölder estimate split into its sup part and seminorm part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderEstimate {
    pub sup: f64,
    pub seminorm: f64,
}

impl HolderEstimate {
    pub fn norm(&self) -> f64 {
        self.sup + self.seminorm
    }
}

/// Discrete `C^α` estimate: `sup|f|` plus the largest difference quotient
/// `|f(θ_i) - f(θ_j)| / |θ_i - θ_j|^α` over pairs at most `π/4` apart.
pub fn holder_norm(f: &BoundaryFunction, alpha: f64) -> HolderEstimate {
    let n = f.grid_size();
    let window = n / 8;
    let h = 2.0 * PI / n as f64;
    let vals = f.values();
    let mut semi: f64 = 0.0;
    for i in 0..n {
        for d in 1..=window {
            let j = (i + d) % n;
            let q = (vals[i] - vals[j]).norm() / (d as f64 * h).powf(alpha);
            semi = semi.max(q);
        }
    }
    HolderEstimate {
        sup: f.sup_norm(),
        seminorm: semi,
    }
}

/// Discrete `C^{1,β}` estimate: `sup|f| + sup|f'| + [f']_β`.
pub fn c1_beta_norm(f: &BoundaryFunction, beta: f64) -> Result<f64> {
    let d = f.derivative()?;
    Ok(f.sup_norm() + holder_norm(&d, beta).norm())
}

/// Element of the class spanned by `(1-τ)^α`, `(1-τ̄)^α` and a smooth
/// remainder.
#[derive(Clone, Debug)]
pub struct SingularFunction {
    alpha: f64,
    pub coeff_plus: Complex64,
    pub coeff_minus: Complex64,
    pub remainder: BoundaryFunction,
}

impl SingularFunction {
    pub fn new(
        alpha: f64,
        coeff_plus: Complex64,
        coeff_minus: Complex64,
        remainder: BoundaryFunction,
    ) -> Result<Self> {
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "singular exponent {alpha} outside (1/2, 1]"
            )));
        }
        Ok(Self {
            alpha,
            coeff_plus,
            coeff_minus,
            remainder,
        })
    }

    /// A smooth function viewed as a member of the class.
    pub fn smooth(alpha: f64, remainder: BoundaryFunction) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(alpha, zero, zero, remainder)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `β = 2α - 1`, the Hölder exponent of the remainder's derivative.
    pub fn beta(&self) -> f64 {
        2.0 * self.alpha - 1.0
    }

    pub fn grid_size(&self) -> usize {
        self.remainder.grid_size()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.coeff_minus == Complex64::new(0.0, 0.0)
    }

    /// Value at `τ` in the closed disc. The remainder is extended harmonically.
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let plus = singular_factor(self.alpha, tau)?;
        let minus = singular_factor(self.alpha, tau.conj())?;
        let rest = self.remainder.harmonic_extension().eval(tau)?;
        Ok(self.coeff_plus * plus + self.coeff_minus * minus + rest)
    }

    /// Samples on the boundary grid.
    pub fn boundary_values(&self) -> Result<BoundaryFunction> {
        let n = self.grid_size();
        let vals = (0..n)
            .map(|j| {
                let tau = Complex64::cis(theta(j, n));
                let plus = singular_factor(self.alpha, tau)?;
                let minus = singular_factor(self.alpha, tau.conj())?;
                Ok(self.coeff_plus * plus + self.coeff_minus * minus + self.remainder.values()[j])
            })
            .collect::<Result<Vec<_>>>()?;
        BoundaryFunction::from_complex(vals)
    }

    /// The two summands of the class norm: the `C^α` norm of the singular
    /// part and the `C^{1,β}` norm of the remainder. Callers combine them.
    pub fn norm_parts(&self) -> Result<(f64, f64)> {
        let n = self.grid_size();
        let weight = self.coeff_plus.norm() + self.coeff_minus.norm();
        let singular = if weight == 0.0 {
            0.0
        } else {
            let factor =
                BoundaryFunction::from_fn_complex(n, |t| singular_factor(self.alpha, t).unwrap())?;
            weight * holder_norm(&factor, self.alpha).norm()
        };
        let smooth = c1_beta_norm(&self.remainder, self.beta().max(1e-3))?;
        Ok((singular, smooth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &BoundaryFunction, f: impl Fn(f64) -> f64) -> f64 {
        let n = a.grid_size();
        (0..n)
            .map(|j| (a.values()[j].re - f(theta(j, n))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            BoundaryFunction::from_real(&[0.0; 128]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BoundaryFunction::from_real(&[0.0; 300]),
            Err(Error::Config(_))
        ));
        let mut v = vec![0.0; 256];
        v[3] = f64::NAN;
        assert!(matches!(
            BoundaryFunction::from_real(&v),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn roundtrip_is_tight() {
        let f = BoundaryFunction::from_fn_real(1024, |t| (3.0 * t).sin() + 0.2 * t.cos().powi(3))
            .unwrap();
        assert!(f.roundtrip_error() < 1e-12);
    }

    #[test]
    fn t1_of_constant_vanishes() {
        let f = BoundaryFunction::from_fn_real(512, |_| 4.5).unwrap();
        let g = hilbert_t1(&f).unwrap();
        assert!(g.sup_norm() < 1e-14);
    }

    #[test]
    fn t1_of_cosine_is_sine() {
        let f = BoundaryFunction::from_fn_real(512, f64::cos).unwrap();
        let g = hilbert_t1(&f).unwrap();
        assert!(max_diff(&g, f64::sin) < 1e-13);
    }

    #[test]
    fn t1_of_chord_square() {
        // 2 - 2cos θ = |1 - τ|²; its conjugate pinned at τ = 1 is -2 sin θ
        let f = BoundaryFunction::from_fn_complex(512, |t| c((c(1.0, 0.0) - t).norm_sqr(), 0.0))
            .unwrap();
        let g = hilbert_t1(&f).unwrap();
        assert!(max_diff(&g, |t| -2.0 * t.sin()) < 1e-13);
    }

    #[test]
    fn t1_rejects_complex_input() {
        let f = BoundaryFunction::from_fn_complex(256, |t| t).unwrap();
        assert!(matches!(hilbert_t1(&f), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn radial_derivative_examples() {
        let k = BoundaryFunction::from_fn_real(512, |_| 1.0).unwrap();
        assert!(radial_derivative_at_one(&k).unwrap().norm() < 1e-14);
        let f = BoundaryFunction::from_fn_real(512, |t| 2.0 - 2.0 * t.cos()).unwrap();
        let d = radial_derivative_at_one(&f).unwrap();
        assert!((d.re + 2.0).abs() < 1e-12 && d.im.abs() < 1e-12);
    }

    #[test]
    fn radial_derivative_of_holder_profile_is_negative() {
        let f =
            BoundaryFunction::from_fn_complex(4096, |t| c((c(1.0, 0.0) - t).norm().powf(1.5), 0.0))
                .unwrap();
        // default tail bound cannot be met by a C^{1,1/2} profile
        assert!(matches!(
            radial_derivative_at_one(&f),
            Err(Error::Accuracy { .. })
        ));
        let d = radial_derivative_at_one_with(&f, 0.5).unwrap();
        assert!(d.re < 0.0);
    }

    #[test]
    fn singular_factor_examples() {
        assert!((singular_factor(0.6, c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = singular_factor(0.75, c(-1.0, 0.0)).unwrap();
        assert!((v - c(2f64.powf(0.75), 0.0)).norm() < 1e-14);
        let v = singular_factor(0.6, c(0.0, 1.0)).unwrap();
        let expect = Complex64::from_polar(2f64.sqrt().powf(0.6), -PI * 0.6 / 4.0);
        assert!((v - expect).norm() < 1e-14);
        assert_eq!(singular_factor(0.7, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            singular_factor(0.7, c(1.1, 0.0)),
            Err(Error::Domain(_))
        ));
        // positive real on (0, 1)
        for t in [0.1, 0.5, 0.99] {
            let v = singular_factor(0.8, c(t, 0.0)).unwrap();
            assert!(v.re > 0.0 && v.im == 0.0);
        }
    }

    #[test]
    fn holomorphy_residual_examples() {
        let sq = BoundaryFunction::from_fn_complex(512, |t| t * t).unwrap();
        assert!(holomorphy_residual(&sq) < 1e-28);
        let cj = BoundaryFunction::from_fn_complex(512, |t| t.conj()).unwrap();
        assert!((holomorphy_residual(&cj) - 1.0).abs() < 1e-14);
        let s =
            BoundaryFunction::from_fn_complex(4096, |t| singular_factor(0.6, t).unwrap()).unwrap();
        assert!(holomorphy_residual(&s) < 1e-6);
        assert_eq!(
            holomorphy_residual(&BoundaryFunction::zeros(256).unwrap()),
            0.0
        );
    }

    #[test]
    fn holder_norm_examples() {
        let k = BoundaryFunction::from_fn_real(512, |_| 3.0).unwrap();
        assert_eq!(holder_norm(&k, 0.5).norm(), 3.0);

        let chord =
            BoundaryFunction::from_fn_complex(2048, |t| c((c(1.0, 0.0) - t).norm(), 0.0)).unwrap();
        let est = holder_norm(&chord, 1.0);
        assert!((2.0..=2.0 + 1e-3).contains(&est.sup));
        assert!(est.seminorm <= 1.0 && est.seminorm > 1.0 - 1e-3);

        let rough = |n| {
            let f = BoundaryFunction::from_fn_complex(n, |t| {
                c((c(1.0, 0.0) - t).norm().powf(0.6), 0.0)
            })
            .unwrap();
            holder_norm(&f, 0.8).seminorm
        };
        // the C^0.8 seminorm of a C^0.6 profile grows like h^{-0.2}
        let ratio = rough(4096) / rough(1024);
        assert!((ratio / 4f64.powf(0.2) - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn harmonic_extension_approaches_boundary() {
        let f = BoundaryFunction::from_fn_real(1024, |t| (t.cos() + 0.3 * (2.0 * t).sin()).exp())
            .unwrap();
        let field = f.harmonic_extension();
        for j in [0usize, 100, 517] {
            let t = theta(j, 1024);
            let v = field.eval(Complex64::from_polar(1.0 - 1e-6, t)).unwrap();
            assert!((v - f.values()[j]).norm() < 1e-4);
        }
        assert!(field.eval(c(1.5, 0.0)).is_err());
    }

    #[test]
    fn singular_function_vanishes_at_one() {
        let rem = BoundaryFunction::from_fn_real(512, |t| 0.3 + t.cos()).unwrap();
        let s = SingularFunction::new(0.7, c(0.2, 0.1), c(0.0, 0.4), rem.clone()).unwrap();
        let v = s.boundary_values().unwrap();
        assert!((v.value_at_one() - rem.value_at_one()).norm() < 1e-15);
        assert!((s.eval(c(1.0, 0.0)).unwrap() - rem.value_at_one()).norm() < 1e-10);
        assert!(SingularFunction::new(0.5, c(1.0, 0.0), c(0.0, 0.0), rem).is_err());
    }
}
