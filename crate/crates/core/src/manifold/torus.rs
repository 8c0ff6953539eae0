use crate::error::{Result, SbppError};

/// Flat rectangular 3-torus together with its collocation grid.
///
/// Grid point `(i, j, k)` sits at `(i·h₀, j·h₁, k·h₂)` with `hₐ = Lₐ / Nₐ`;
/// values are stored row-major with the last axis fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusSpec {
    side_lengths: [f64; 3],
    resolution: [usize; 3],
}

impl TorusSpec {
    pub const MIN_RESOLUTION: usize = 8;

    pub fn new(side_lengths: [f64; 3], resolution: [usize; 3]) -> Result<Self> {
        for (axis, &l) in side_lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(SbppError::InvalidTorus(format!(
                    "side length {l} on axis {axis} must be positive and finite"
                )));
            }
        }
        for (axis, &n) in resolution.iter().enumerate() {
            if n < Self::MIN_RESOLUTION || n % 2 != 0 {
                return Err(SbppError::InvalidTorus(format!(
                    "resolution {n} on axis {axis} must be even and >= {}",
                    Self::MIN_RESOLUTION
                )));
            }
        }
        Ok(Self {
            side_lengths,
            resolution,
        })
    }

    /// Cube of side `side` with `n` points per axis.
    pub fn cube(side: f64, n: usize) -> Result<Self> {
        Self::new([side; 3], [n; 3])
    }

    pub fn side_lengths(&self) -> [f64; 3] {
        self.side_lengths
    }

    pub fn resolution(&self) -> [usize; 3] {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> [f64; 3] {
        [
            self.side_lengths[0] / self.resolution[0] as f64,
            self.side_lengths[1] / self.resolution[1] as f64,
            self.side_lengths[2] / self.resolution[2] as f64,
        ]
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.side_lengths.iter().product()
    }

    pub fn min_side(&self) -> f64 {
        self.side_lengths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.resolution[1] + j) * self.resolution[2] + k
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let [_, n1, n2] = self.resolution;
        [idx / (n1 * n2), (idx / n2) % n1, idx % n2]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        let h = self.spacing();
        [ijk[0] as f64 * h[0], ijk[1] as f64 * h[1], ijk[2] as f64 * h[2]]
    }

    /// Wraps a point into the fundamental domain `[0, L)`.
    pub fn wrap(&self, x: [f64; 3]) -> [f64; 3] {
        let mut out = x;
        for a in 0..3 {
            out[a] = x[a].rem_euclid(self.side_lengths[a]);
            // rem_euclid can return L itself for tiny negative inputs
            if out[a] >= self.side_lengths[a] {
                out[a] = 0.0;
            }
        }
        out
    }

    /// Minimal periodic displacement `x - y`, each component in `[-L/2, L/2)`.
    pub fn displacement(&self, x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
        let mut d = [0.0; 3];
        for a in 0..3 {
            let l = self.side_lengths[a];
            let mut v = (x[a] - y[a]).rem_euclid(l);
            if v >= 0.5 * l {
                v -= l;
            }
            d[a] = v;
        }
        d
    }

    pub fn distance(&self, x: [f64; 3], y: [f64; 3]) -> f64 {
        let d = self.displacement(x, y);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// Nearest grid index to a physical point.
    pub fn nearest_index(&self, x: [f64; 3]) -> [usize; 3] {
        let h = self.spacing();
        let w = self.wrap(x);
        let mut ijk = [0; 3];
        for a in 0..3 {
            ijk[a] = ((w[a] / h[a]).round() as usize) % self.resolution[a];
        }
        ijk
    }
}

/// Equation parameters: ε, exponent p, charge q and cutoff radius r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub eps: f64,
    pub p: f64,
    pub q: f64,
    pub cutoff_r: f64,
}

impl ModelParams {
    /// Validates `eps > 0`, `q > 0`, `r > 0` and `4 < p <= 6`.
    ///
    /// The closed endpoint `p = 6` is admitted so that the quadratic
    /// closed form of the constant solution can serve as a fixture; the
    /// configuration layer restricts runs to the open interval.
    pub fn new(eps: f64, p: f64, q: f64, cutoff_r: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(SbppError::InvalidParams(format!("eps = {eps} must be > 0")));
        }
        if !(p > 4.0 && p <= 6.0) {
            return Err(SbppError::InvalidParams(format!("p = {p} must satisfy 4 < p <= 6")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(SbppError::InvalidParams(format!("q = {q} must be > 0")));
        }
        if !(cutoff_r.is_finite() && cutoff_r > 0.0) {
            return Err(SbppError::InvalidParams(format!("cutoff_r = {cutoff_r} must be > 0")));
        }
        Ok(Self { eps, p, q, cutoff_r })
    }

    /// Checks the cutoff radius against a concrete torus.
    pub fn check_torus(&self, torus: &TorusSpec) -> Result<()> {
        if self.cutoff_r >= 0.5 * torus.min_side() {
            return Err(SbppError::InvalidParams(format!(
                "cutoff_r = {} must be < min(side_lengths)/2 = {}",
                self.cutoff_r,
                0.5 * torus.min_side()
            )));
        }
        Ok(())
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(eps, self.p, self.q, self.cutoff_r)
    }
}
