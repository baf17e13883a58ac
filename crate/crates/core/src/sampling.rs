//! Deterministic low-discrepancy sampling.

use std::f64::consts::PI;

use num_complex::Complex64;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// Halton point `index` in `[0, 1)^dim`; `dim <= 16`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len(), "halton dimension {dim} exceeds 16");
    PRIMES[..dim]
        .iter()
        .map(|&b| radical_inverse(index, b))
        .collect()
}

/// Unit vectors on the sphere in `ℝ^dim`, Halton points pushed through
/// Box-Muller and normalized. `seed` offsets the sequence.
#[derive(Clone, Debug)]
pub struct SphereSampler {
    dim: usize,
    next: u64,
}

impl SphereSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            next: seed + 1,
        }
    }

    pub fn sample(&mut self) -> Vec<f64> {
        loop {
            let pairs = self.dim.div_ceil(2);
            let u = halton(self.next, 2 * pairs);
            self.next += 1;
            let mut g = Vec::with_capacity(2 * pairs);
            for k in 0..pairs {
                let (u1, u2) = (u[2 * k], u[2 * k + 1]);
                if u1 <= 0.0 {
                    continue;
                }
                let r = (-2.0 * u1.ln()).sqrt();
                g.push(r * (2.0 * PI * u2).cos());
                g.push(r * (2.0 * PI * u2).sin());
            }
            if g.len() < self.dim {
                continue;
            }
            g.truncate(self.dim);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return g.into_iter().map(|v| v / norm).collect();
            }
        }
    }

    /// Unit vector in `ℂ^n` (a point of the sphere in `ℝ^{2n}`).
    pub fn sample_complex(&mut self) -> Vec<Complex64> {
        let v = self.sample();
        let n = self.dim / 2;
        (0..n)
            .map(|j| Complex64::new(v[2 * j], v[2 * j + 1]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }

    #[test]
    fn sphere_samples_are_unit_and_spread() {
        let mut s = SphereSampler::new(4, 0);
        let pts: Vec<Vec<f64>> = (0..2000).map(|_| s.sample()).collect();
        for p in &pts {
            let n: f64 = p.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        for k in 0..4 {
            let mean: f64 = pts.iter().map(|p| p[k]).sum::<f64>() / pts.len() as f64;
            assert!(mean.abs() < 0.05, "coordinate {k} mean {mean}");
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<_> = {
            let mut s = SphereSampler::new(3, 7);
            (0..5).map(|_| s.sample()).collect()
        };
        let b: Vec<_> = {
            let mut s = SphereSampler::new(3, 7);
            (0..5).map(|_| s.sample()).collect()
        };
        assert_eq!(a, b);
    }
}
