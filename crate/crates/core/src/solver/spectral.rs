use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::params::ComplexValue;

/// Forward/inverse FFT pair normalised so that `inverse(forward(u)) == u`.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<ComplexValue>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Spectral {
            n,
            forward,
            inverse,
            scratch: vec![ComplexValue::default(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalised forward transform, in place.
    pub fn forward(&mut self, buf: &mut [ComplexValue]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Inverse transform scaled by `1/N`, in place.
    pub fn inverse(&mut self, buf: &mut [ComplexValue]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// `∂u/∂S` by spectral differentiation. The Nyquist mode is dropped so
    /// that the derivative of a real field stays real.
    pub fn derivative(&mut self, u: &[ComplexValue], kappa: &[f64], out: &mut Vec<ComplexValue>) {
        out.clear();
        out.extend_from_slice(u);
        self.forward(out);
        let nyquist = self.n / 2;
        for (j, (v, &k)) in out.iter_mut().zip(kappa).enumerate() {
            *v = if j == nyquist {
                ComplexValue::default()
            } else {
                *v * ComplexValue::new(0.0, k)
            };
        }
        self.inverse(out);
    }
}
