//! Grid geometry, spectral transforms, quadrature and ε-rescaled norms on
//! the flat 3-torus.

pub mod field;
pub mod io;
pub mod norms;
pub mod spectral;
pub mod torus;

pub use field::ScalarField;
pub use norms::{gradient, laplacian, norm_1eps_sq, norm_p_eps, positive_part};
pub use spectral::SpectralGrid;
pub use torus::{ModelParams, TorusSpec};
