use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalized 3D discrete Fourier transform on an `n³` row-major cube
/// (first index fastest), done axis by axis.
#[derive(Clone)]
pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fft3").field("n", &self.n).finish()
    }
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// `X_k = Σ_m x_m e^{-2πi km/n}` along every axis.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(&*self.forward, data);
    }

    /// `x_m = Σ_k X_k e^{+2πi km/n}` along every axis (no 1/n factor).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(&*self.inverse, data);
    }

    fn run(&self, plan: &dyn Fft<f64>, data: &mut [Complex64]) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "Fft3: wrong buffer length");
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];

        // axis 0 is contiguous
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut scratch);
        }

        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut strided = |base: usize, stride: usize| {
            for (m, slot) in line.iter_mut().enumerate() {
                *slot = data[base + m * stride];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for (m, v) in line.iter().enumerate() {
                data[base + m * stride] = *v;
            }
        };
        for k2 in 0..n {
            for i0 in 0..n {
                strided(i0 + n * n * k2, n);
            }
        }
        for i1 in 0..n {
            for i0 in 0..n {
                strided(i0 + n * i1, n * n);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_forward(n: usize, data: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        let w = -2.0 * std::f64::consts::PI / n as f64;
        for k2 in 0..n {
            for k1 in 0..n {
                for k0 in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m2 in 0..n {
                        for m1 in 0..n {
                            for m0 in 0..n {
                                let ph = w * ((k0 * m0 + k1 * m1 + k2 * m2) % n) as f64;
                                acc += data[m0 + n * (m1 + n * m2)] * Complex64::from_polar(1.0, ph);
                            }
                        }
                    }
                    out[k0 + n * (k1 + n * k2)] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 4;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let expected = naive_forward(n, &data);
        let mut got = data.clone();
        Fft3::new(n).forward(&mut got);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64).sqrt(), -(i as f64 * 0.3).sin()))
            .collect();
        let fft = Fft3::new(n);
        let mut buf = data.clone();
        fft.forward(&mut buf);
        fft.inverse(&mut buf);
        let scale = 1.0 / (n * n * n) as f64;
        for (a, b) in buf.iter().zip(&data) {
            assert!((a * scale - b).norm() < 1e-12);
        }
    }
}
