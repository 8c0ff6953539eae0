use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::{ModelParams, TorusSpec};

/// An axis-aligned periodic box of grid cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    /// First grid index per axis (the box may wrap around).
    pub start: [usize; 3],
    /// Number of grid points per axis.
    pub len: [usize; 3],
    /// Representative point (box center).
    pub center: [f64; 3],
}

impl Cell {
    pub fn contains_index(&self, spec: &TorusSpec, idx: [usize; 3]) -> bool {
        let n = spec.resolution();
        (0..3).all(|a| (idx[a] + n[a] - self.start[a]) % n[a] < self.len[a])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    pub spec: TorusSpec,
    /// Smallest box side.
    pub cell_side: f64,
    pub cells: Vec<Cell>,
}

impl PartitionSpec {
    /// Congruent boxes whose side is the smallest grid-aligned size `≥ 2ε`
    /// that divides the resolution evenly along each axis.
    pub fn cubes(spec: &TorusSpec, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(SbppError::InvalidArgument(format!("eps = {eps} must be > 0")));
        }
        let n = spec.resolution();
        let h = spec.spacing();
        let mut m = [0usize; 3];
        for a in 0..3 {
            let need = ((2.0 * eps / h[a]) - 1e-9).ceil().max(1.0) as usize;
            m[a] = (need..=n[a]).find(|d| n[a] % d == 0).ok_or_else(|| {
                SbppError::InvalidPartition(format!("2ε = {} exceeds the torus along axis {a}", 2.0 * eps))
            })?;
        }
        Self::boxes(spec, m, [0, 0, 0])
    }

    /// Regular boxes of `m[a]` points per axis, offset by `offset` points.
    pub fn boxes(spec: &TorusSpec, m: [usize; 3], offset: [usize; 3]) -> Result<Self> {
        let n = spec.resolution();
        let h = spec.spacing();
        for a in 0..3 {
            if m[a] == 0 || n[a] % m[a] != 0 {
                return Err(SbppError::InvalidPartition(format!(
                    "box length {} does not divide resolution {} on axis {a}",
                    m[a], n[a]
                )));
            }
        }
        let counts = [n[0] / m[0], n[1] / m[1], n[2] / m[2]];
        let mut cells = Vec::with_capacity(counts.iter().product());
        for i in 0..counts[0] {
            for j in 0..counts[1] {
                for k in 0..counts[2] {
                    let c = [i, j, k];
                    let mut start = [0; 3];
                    let mut center = [0.0; 3];
                    for a in 0..3 {
                        start[a] = (c[a] * m[a] + offset[a]) % n[a];
                        // grid points cover [start, start + m) in cells
                        center[a] = (start[a] as f64 + 0.5 * (m[a] - 1) as f64) * h[a];
                    }
                    cells.push(Cell {
                        start,
                        len: m,
                        center: spec.wrap(center),
                    });
                }
            }
        }
        let side = (0..3).map(|a| m[a] as f64 * h[a]).fold(f64::INFINITY, f64::min);
        Ok(Self {
            spec: *spec,
            cell_side: side,
            cells,
        })
    }

    /// Owner cell of every grid point; fails unless each point has exactly one.
    pub fn owners(&self) -> Result<Vec<usize>> {
        let spec = &self.spec;
        let n = spec.resolution();
        let mut owner = vec![usize::MAX; spec.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for di in 0..cell.len[0] {
                for dj in 0..cell.len[1] {
                    for dk in 0..cell.len[2] {
                        let idx = spec.index(
                            (cell.start[0] + di) % n[0],
                            (cell.start[1] + dj) % n[1],
                            (cell.start[2] + dk) % n[2],
                        );
                        if owner[idx] != usize::MAX {
                            return Err(SbppError::InvalidPartition(format!(
                                "cells {} and {c} overlap",
                                owner[idx]
                            )));
                        }
                        owner[idx] = c;
                    }
                }
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(SbppError::InvalidPartition(format!("grid point {i} is not covered")));
        }
        Ok(owner)
    }

    /// Checks coverage, disjointness, the ball sandwich
    /// `B(c, side/4) ⊂ cell ⊂ B(c, side)`, and returns the overlap number `ν`
    /// of the enclosing balls.
    pub fn validate(&self) -> Result<usize> {
        self.owners()?;
        let h = self.spec.spacing();
        for cell in &self.cells {
            let mut d2 = 0.0;
            for a in 0..3 {
                let half = 0.5 * cell.len[a] as f64 * h[a];
                if half < 0.25 * self.cell_side {
                    return Err(SbppError::InvalidPartition("cell too thin for its inner ball".into()));
                }
                d2 += half * half;
            }
            if d2.sqrt() > self.cell_side * (1.0 + 1e-12) {
                return Err(SbppError::InvalidPartition("cell not inside its enclosing ball".into()));
            }
        }
        Ok(self.overlap_number())
    }

    /// Largest number of enclosing balls `B(c_j, cell_side)` containing a
    /// single cell center.
    pub fn overlap_number(&self) -> usize {
        let r = self.cell_side;
        self.cells
            .iter()
            .map(|ci| {
                self.cells
                    .iter()
                    .filter(|cj| self.spec.distance(ci.center, cj.center) <= r * (1.0 + 1e-12))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Best cell of a partition for the `γ`-witness `(1/ε³)∫_cell (u⁺)ᵖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionWitness {
    pub cell: usize,
    pub value: f64,
    pub overlap: usize,
}

/// Cell maximizing `(1/ε³)∫_cell (u⁺)ᵖ`, lowest index on ties.
pub fn good_partition_check(u: &ScalarField, params: &ModelParams, part: &PartitionSpec) -> Result<PartitionWitness> {
    u.validate()?;
    if *u.spec() != part.spec {
        return Err(SbppError::InvalidPartition(
            "partition built for a different grid".into(),
        ));
    }
    if part.cell_side < 2.0 * params.eps * (1.0 - 1e-12) {
        return Err(SbppError::InvalidPartition(format!(
            "cell side {} below 2ε = {}",
            part.cell_side,
            2.0 * params.eps
        )));
    }
    let overlap = part.validate()?;
    let owners = part.owners()?;
    let mut acc = vec![0.0; part.cells.len()];
    for (i, &v) in u.values().iter().enumerate() {
        if v > 0.0 {
            acc[owners[i]] += v.powf(params.p);
        }
    }
    let scale = u.spec().cell_volume() / params.eps.powi(3);
    let mut best = 0;
    for (c, &v) in acc.iter().enumerate() {
        if v > acc[best] {
            best = c;
        }
    }
    Ok(PartitionWitness {
        cell: best,
        value: acc[best] * scale,
        overlap,
    })
}
