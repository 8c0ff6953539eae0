//! Concentrated trial states built from the whole-space ground state:
//! the limit profile `U`, the bumps `W_{ξ,ε}`, the map `Ψ_ε`, and the cone
//! used to reach energies above the ground level.

pub mod bump;
pub mod cone;
pub mod profile;

pub use bump::{build_bump, cutoff, psi_map, BumpSpec};
pub use cone::{
    cone_point, high_energy_search, reference_bump, ConeGrid, HighEnergyOutcome, HighEnergyStatus, MinimaxOptions,
};
pub use profile::{compute_limit_ground_state, GroundStateProfile};
