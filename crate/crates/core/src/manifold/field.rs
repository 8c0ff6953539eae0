use std::ops::{Add, Mul, Sub};

use crate::error::{Result, SbppError};
use crate::manifold::torus::TorusSpec;

/// Real scalar field sampled on the collocation grid of a [`TorusSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    spec: TorusSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(spec: TorusSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(SbppError::InvalidArgument(format!(
                "expected {} values for resolution {:?}, got {}",
                spec.len(),
                spec.resolution(),
                values.len()
            )));
        }
        let field = Self { spec, values };
        field.validate()?;
        Ok(field)
    }

    /// Builds a field without the finiteness check. Used internally on
    /// values produced by arithmetic on already-validated fields.
    pub(crate) fn from_raw(spec: TorusSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        Self { spec, values }
    }

    pub fn zeros(spec: TorusSpec) -> Self {
        Self::constant(spec, 0.0)
    }

    pub fn constant(spec: TorusSpec, c: f64) -> Self {
        Self {
            spec,
            values: vec![c; spec.len()],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(spec: TorusSpec, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..spec.len()).map(|idx| f(spec.point(idx))).collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Rejects fields holding NaN or infinities.
    pub fn validate(&self) -> Result<()> {
        let mut count = 0;
        let mut first = usize::MAX;
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                count += 1;
                first = first.min(i);
            }
        }
        if count > 0 {
            return Err(SbppError::NonFinite { count, first });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.spec, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.spec, other.spec);
        Self::from_raw(
            self.spec,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a + s * b)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn has_positive_part(&self) -> bool {
        self.values.iter().any(|&v| v > 0.0)
    }

    /// Cell-volume weighted sum: the periodic trapezoidal rule.
    pub fn integral(&self) -> f64 {
        self.spec.cell_volume() * sum(&self.values)
    }

    /// Grid inner product `∫ u v`.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        debug_assert_eq!(self.spec, other.spec);
        self.spec.cell_volume() * dot(&self.values, &other.values)
    }

    /// Circular shift by whole cells: `out[i + s] = self[i]`.
    pub fn shift(&self, cells: [i64; 3]) -> Self {
        let [n0, n1, n2] = self.spec.resolution();
        let n = [n0 as i64, n1 as i64, n2 as i64];
        let s = [
            cells[0].rem_euclid(n[0]) as usize,
            cells[1].rem_euclid(n[1]) as usize,
            cells[2].rem_euclid(n[2]) as usize,
        ];
        let mut out = vec![0.0; self.values.len()];
        for i in 0..n0 {
            let ti = (i + s[0]) % n0;
            for j in 0..n1 {
                let tj = (j + s[1]) % n1;
                let src = self.spec.index(i, j, 0);
                let dst = self.spec.index(ti, tj, 0);
                for k in 0..n2 {
                    out[dst + (k + s[2]) % n2] = self.values[src + k];
                }
            }
        }
        Self::from_raw(self.spec, out)
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scale(rhs)
    }
}

/// Blocked summation in a fixed order (bit-reproducible).
pub(crate) fn sum(values: &[f64]) -> f64 {
    values.chunks(1024).map(|c| c.iter().sum::<f64>()).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.chunks(1024)
        .zip(b.chunks(1024))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .sum()
}
