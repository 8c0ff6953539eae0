//! Structured initial fields for descent and multi-start runs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::{ModelParams, TorusSpec};

/// Gaussian width of generated bumps, in units of ε.
pub const BUMP_WIDTH: f64 = 0.5;
/// Peak height of generated bumps before projection.
pub const BUMP_HEIGHT: f64 = 4.0;

/// Descriptor of an initial field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSpec {
    /// Gaussian bump of width `BUMP_WIDTH·ε` at a point.
    OneBump {
        center: [f64; 3],
    },
    /// Two equal bumps half a period apart along `axis`.
    TwoBump {
        center: [f64; 3],
        axis: usize,
    },
    Constant,
    /// A few Gaussian bumps with random centers and heights.
    Random {
        seed: u64,
    },
}

impl InitSpec {
    pub fn build(&self, spec: &TorusSpec, params: &ModelParams) -> Result<ScalarField> {
        match *self {
            InitSpec::OneBump { center } => Ok(gaussian(spec, center, params.eps, BUMP_HEIGHT)),
            InitSpec::TwoBump { center, axis } => {
                if axis > 2 {
                    return Err(SbppError::InvalidArgument(format!("axis {axis} out of range")));
                }
                let mut other = center;
                other[axis] += 0.5 * spec.side_lengths()[axis];
                let a = gaussian(spec, center, params.eps, BUMP_HEIGHT);
                let b = gaussian(spec, spec.wrap(other), params.eps, BUMP_HEIGHT);
                Ok(&a + &b)
            }
            InitSpec::Constant => Ok(ScalarField::constant(*spec, 1.0)),
            InitSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let count = rng.gen_range(2..=4);
                let mut u = ScalarField::zeros(*spec);
                let sides = spec.side_lengths();
                for _ in 0..count {
                    let c = [
                        rng.gen::<f64>() * sides[0],
                        rng.gen::<f64>() * sides[1],
                        rng.gen::<f64>() * sides[2],
                    ];
                    let h = BUMP_HEIGHT * rng.gen_range(0.5..1.5);
                    u = &u + &gaussian(spec, c, params.eps, h);
                }
                Ok(u)
            }
        }
    }
}

fn gaussian(spec: &TorusSpec, center: [f64; 3], eps: f64, height: f64) -> ScalarField {
    let s2 = 2.0 * (BUMP_WIDTH * eps).powi(2);
    ScalarField::from_fn(*spec, |x| {
        let d = spec.displacement(x, center);
        height * (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / s2).exp()
    })
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitSpec::OneBump { center: c } => write!(f, "one-bump@{},{},{}", c[0], c[1], c[2]),
            InitSpec::TwoBump { center: c, axis } => {
                write!(f, "two-bump@{},{},{}/{axis}", c[0], c[1], c[2])
            }
            InitSpec::Constant => write!(f, "constant"),
            InitSpec::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for InitSpec {
    type Err = SbppError;

    /// Parses `one-bump@x,y,z`, `two-bump@x,y,z/axis`, `constant`, `random:seed`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || SbppError::Config(format!("unrecognized initializer '{s}'"));
        let point = |t: &str| -> Result<[f64; 3]> {
            let v: Vec<f64> = t
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            <[f64; 3]>::try_from(v).map_err(|_| bad())
        };
        let s = s.trim();
        if s == "constant" {
            Ok(InitSpec::Constant)
        } else if let Some(rest) = s.strip_prefix("random:") {
            Ok(InitSpec::Random {
                seed: rest.trim().parse().map_err(|_| bad())?,
            })
        } else if let Some(rest) = s.strip_prefix("one-bump@") {
            Ok(InitSpec::OneBump { center: point(rest)? })
        } else if let Some(rest) = s.strip_prefix("two-bump@") {
            let (pt, axis) = rest.split_once('/').ok_or_else(bad)?;
            let axis: usize = axis.trim().parse().map_err(|_| bad())?;
            if axis > 2 {
                return Err(bad());
            }
            Ok(InitSpec::TwoBump {
                center: point(pt)?,
                axis,
            })
        } else {
            Err(bad())
        }
    }
}
