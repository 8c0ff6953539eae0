//! Fourier transforms on the torus grid and diagonal (symbol) operators.
//!
//! Frequencies along axis `a` are `2π m / Lₐ` with integer `m` in
//! `[-Nₐ/2, Nₐ/2)`, stored in FFT order. Even symbols (functions of `|k|²`)
//! keep the Nyquist mode; odd derivatives zero it.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::manifold::torus::TorusSpec;

type CacheKey = ([usize; 3], [u64; 3]);

thread_local! {
    static GRIDS: RefCell<HashMap<CacheKey, Rc<SpectralGrid>>> = RefCell::new(HashMap::new());
}

/// FFT plans and wavenumber tables for one torus grid.
pub struct SpectralGrid {
    spec: TorusSpec,
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
    wavenumbers: [Vec<f64>; 3],
    k_sq: Vec<f64>,
}

impl SpectralGrid {
    /// Shared per-thread instance for `spec`.
    pub fn for_spec(spec: &TorusSpec) -> Rc<SpectralGrid> {
        let key = (spec.resolution(), spec.side_lengths().map(|l| l.to_bits()));
        GRIDS.with(|cache| {
            cache
                .borrow_mut()
                .entry(key)
                .or_insert_with(|| Rc::new(SpectralGrid::build(*spec)))
                .clone()
        })
    }

    fn build(spec: TorusSpec) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let n = spec.resolution();
        let l = spec.side_lengths();
        let forward = [0, 1, 2].map(|a| planner.plan_fft_forward(n[a]));
        let inverse = [0, 1, 2].map(|a| planner.plan_fft_inverse(n[a]));
        let wavenumbers = [0, 1, 2].map(|a| {
            (0..n[a])
                .map(|i| {
                    let m = if i < n[a] / 2 { i as f64 } else { i as f64 - n[a] as f64 };
                    2.0 * PI * m / l[a]
                })
                .collect::<Vec<_>>()
        });
        let mut k_sq = Vec::with_capacity(spec.len());
        for i in 0..n[0] {
            let a = wavenumbers[0][i] * wavenumbers[0][i];
            for j in 0..n[1] {
                let b = wavenumbers[1][j] * wavenumbers[1][j];
                for k in 0..n[2] {
                    k_sq.push(a + b + wavenumbers[2][k] * wavenumbers[2][k]);
                }
            }
        }
        Self {
            spec,
            forward,
            inverse,
            wavenumbers,
            k_sq,
        }
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    /// `|k|²` for every coefficient, in FFT order.
    pub fn k_sq(&self) -> &[f64] {
        &self.k_sq
    }

    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        let [n0, n1, n2] = self.spec.resolution();
        // axis 2: contiguous lines
        plans[2].process(data);

        let mut line = vec![Complex64::default(); n0.max(n1)];
        let mut scratch = vec![
            Complex64::default();
            plans[0]
                .get_inplace_scratch_len()
                .max(plans[1].get_inplace_scratch_len())
        ];

        // axis 1
        for i in 0..n0 {
            let plane = &mut data[i * n1 * n2..(i + 1) * n1 * n2];
            for k in 0..n2 {
                for j in 0..n1 {
                    line[j] = plane[j * n2 + k];
                }
                plans[1].process_with_scratch(&mut line[..n1], &mut scratch);
                for j in 0..n1 {
                    plane[j * n2 + k] = line[j];
                }
            }
        }

        // axis 0: gather columns in blocks to stay cache friendly
        let stride = n1 * n2;
        const BLOCK: usize = 16;
        let mut block = vec![Complex64::default(); BLOCK * n0];
        let mut col = 0;
        while col < stride {
            let width = BLOCK.min(stride - col);
            for i in 0..n0 {
                let row = &data[i * stride + col..i * stride + col + width];
                for (c, v) in row.iter().enumerate() {
                    block[c * n0 + i] = *v;
                }
            }
            for c in 0..width {
                plans[0].process_with_scratch(&mut block[c * n0..(c + 1) * n0], &mut scratch);
            }
            for i in 0..n0 {
                let row = &mut data[i * stride + col..i * stride + col + width];
                for (c, v) in row.iter_mut().enumerate() {
                    *v = block[c * n0 + i];
                }
            }
            col += width;
        }
    }

    /// Unnormalized forward DFT of real grid values.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Forward DFT of two real fields at once, packed as `a + i b`.
    fn forward_packed(&self, a: &[f64], b: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse DFT (normalized by `1/N`), in place.
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.spec.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Inverse DFT keeping the real part.
    pub fn inverse_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        self.inverse_in_place(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Coefficients `c_k` such that `u(x) = Σ c_k exp(i k·x)`.
    pub fn coefficients(&self, values: &[f64]) -> Vec<Complex64> {
        let scale = 1.0 / self.spec.len() as f64;
        let mut c = self.forward(values);
        for v in c.iter_mut() {
            *v *= scale;
        }
        c
    }

    /// Applies the real multiplier `symbol(|k|²)`.
    pub fn apply_symbol(&self, values: &[f64], symbol: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut data = self.forward(values);
        for (c, &k2) in data.iter_mut().zip(&self.k_sq) {
            *c *= symbol(k2);
        }
        self.inverse_real(data)
    }

    /// Applies one real even multiplier to two fields with a single complex transform.
    pub fn apply_symbol_pair(&self, a: &[f64], b: &[f64], symbol: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let mut data = self.forward_packed(a, b);
        for (c, &k2) in data.iter_mut().zip(&self.k_sq) {
            *c *= symbol(k2);
        }
        self.inverse_in_place(&mut data);
        data.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    /// Periodic convolution `Σ_y f(y) g(x − y)` with a kernel even under
    /// `x → −x`, whose transform is therefore real.
    pub fn convolve_even(&self, values: &[f64], kernel: &[f64]) -> Vec<f64> {
        let g = self.forward(kernel);
        let mut data = self.forward(values);
        for (c, k) in data.iter_mut().zip(&g) {
            *c *= k.re;
        }
        self.inverse_real(data)
    }

    /// `∫ ū · symbol(-Δ) u` evaluated spectrally: `(dV/N) Σ symbol(|k|²) |û_k|²`.
    pub fn quadratic_form(&self, values: &[f64], symbol: impl Fn(f64) -> f64) -> f64 {
        let data = self.forward(values);
        self.quadratic_form_coeffs(&data, symbol)
    }

    pub(crate) fn quadratic_form_coeffs(&self, data: &[Complex64], symbol: impl Fn(f64) -> f64) -> f64 {
        let acc: f64 = data
            .chunks(1024)
            .zip(self.k_sq.chunks(1024))
            .map(|(c, k)| c.iter().zip(k).map(|(z, &k2)| symbol(k2) * z.norm_sqr()).sum::<f64>())
            .sum();
        acc * self.spec.cell_volume() / self.spec.len() as f64
    }

    /// Spectral first derivative along `axis` (Nyquist mode zeroed).
    pub fn derivative(&self, values: &[f64], axis: usize) -> Vec<f64> {
        let n = self.spec.resolution();
        let mut data = self.forward(values);
        let kw = &self.wavenumbers[axis];
        for idx in 0..data.len() {
            let ijk = self.spec.unravel(idx);
            let m = ijk[axis];
            let k = if m == n[axis] / 2 { 0.0 } else { kw[m] };
            data[idx] *= Complex64::new(0.0, k);
        }
        self.inverse_real(data)
    }
}
