//! Equispaced complex samples and the trapezoid-weighted Fourier transform.

use super::ExtremalError;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Samples `f(x_j)` at `x_j = -L/2 + j L/N`, `j = 0..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    pub samples: Vec<Complex64>,
    pub length: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>, length: f64) -> Result<SampledSignal, ExtremalError> {
        let n = samples.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(ExtremalError::InvalidSignal(format!(
                "sample count {n} must be a power of two"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(ExtremalError::InvalidSignal(format!("length {length} must be > 0")));
        }
        Ok(SampledSignal { samples, length })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, length: f64, f: F) -> Result<SampledSignal, ExtremalError> {
        let h = length / n as f64;
        let samples = (0..n).map(|j| f(-0.5 * length + j as f64 * h)).collect();
        SampledSignal::new(samples, length)
    }

    pub fn from_real<F: Fn(f64) -> f64>(n: usize, length: f64, f: F) -> Result<SampledSignal, ExtremalError> {
        SampledSignal::from_fn(n, length, |x| Complex64::new(f(x), 0.0))
    }

    /// `1_{[a,b]}` with value 1/2 at the endpoints.
    pub fn indicator(a: f64, b: f64, n: usize, length: f64) -> Result<SampledSignal, ExtremalError> {
        let h = length / n as f64;
        let tol = 1e-9 * h;
        SampledSignal::from_real(n, length, |x| {
            if (x - a).abs() <= tol || (x - b).abs() <= tol {
                0.5
            } else if x > a && x < b {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn gaussian(n: usize, length: f64) -> Result<SampledSignal, ExtremalError> {
        SampledSignal::from_real(n, length, |x| (-PI * x * x).exp())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.samples.len() as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.point(j)).collect()
    }

    pub fn scale(&self, c: f64) -> SampledSignal {
        SampledSignal {
            samples: self.samples.iter().map(|z| z * c).collect(),
            length: self.length,
        }
    }

    /// `h Σ |f_j|^p` to the power `1/p`, or the max for `p = ∞`.
    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        let s: f64 = self.samples.iter().map(|z| z.norm().powf(p)).sum();
        (self.spacing() * s).powf(1.0 / p)
    }

    /// A random sum of Gaussian wave packets, well inside `[-L/4, L/4]` with
    /// frequencies well inside the dual band.
    pub fn random_packets(n: usize, length: f64, rng: &mut ChaCha8Rng) -> Result<SampledSignal, ExtremalError> {
        let band = 0.25 * n as f64 / length;
        let k = rng.gen_range(1..=4);
        let packets: Vec<(f64, f64, f64, Complex64)> = (0..k)
            .map(|_| {
                let centre = rng.gen_range(-0.15..0.15) * length;
                let width = rng.gen_range(0.3..3.0);
                let freq = rng.gen_range(-0.5..0.5) * band.min(4.0);
                let amp = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
                (centre, width, freq, amp)
            })
            .collect();
        SampledSignal::from_fn(n, length, |x| {
            packets
                .iter()
                .map(|(c, w, f, a)| {
                    let u = (x - c) / w;
                    a * (-PI * u * u).exp() * Complex64::from_polar(1.0, 2.0 * PI * f * x)
                })
                .sum()
        })
    }

    pub fn random_batch(count: usize, n: usize, length: f64, seed: u64) -> Result<Vec<SampledSignal>, ExtremalError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| SampledSignal::random_packets(n, length, &mut rng)).collect()
    }
}

/// `f̂(ξ_k) ≈ h Σ_j f(x_j) e^{-2πi x_j ξ_k}` on `ξ_k = (k - N/2)/L`; the
/// result lives on a symmetric grid of length `N/L`.
pub fn dft(f: &SampledSignal) -> SampledSignal {
    let n = f.len();
    let h = f.spacing();
    let mut buf: Vec<Complex64> = f
        .samples
        .iter()
        .enumerate()
        .map(|(j, z)| if j % 2 == 0 { *z } else { -*z })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let samples = buf
        .into_iter()
        .enumerate()
        .map(|(k, z)| {
            let sign = if (k + half) % 2 == 0 { 1.0 } else { -1.0 };
            z * (h * sign)
        })
        .collect();
    SampledSignal {
        samples,
        length: n as f64 / f.length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_transform() {
        let f = SampledSignal::indicator(-0.5, 0.5, 4096, 64.0).unwrap();
        let g = dft(&f);
        assert!((g.samples[2048].re - 1.0).abs() < 1e-12);
        // ξ = 1/2 sits at k = 2048 + 32
        let xi = g.point(2048 + 32);
        assert!((xi - 0.5).abs() < 1e-12);
        let sinc = (PI * xi).sin() / (PI * xi);
        assert!((g.samples[2048 + 32].re - sinc).abs() < 1e-3);
    }

    #[test]
    fn gaussian_is_fixed() {
        let f = SampledSignal::gaussian(4096, 32.0).unwrap();
        let g = dft(&f);
        for k in (0..4096).step_by(97) {
            let xi = g.point(k);
            assert!((g.samples[k] - Complex64::new((-PI * xi * xi).exp(), 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn discrete_plancherel() {
        let batch = SampledSignal::random_batch(5, 1024, 64.0, 3).unwrap();
        for f in batch {
            let r = dft(&f).norm(2.0) / f.norm(2.0);
            assert!((r - 1.0).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(SampledSignal::new(vec![Complex64::new(0.0, 0.0); 6], 1.0).is_err());
        assert!(SampledSignal::new(vec![Complex64::new(0.0, 0.0); 8], 0.0).is_err());
    }
}
