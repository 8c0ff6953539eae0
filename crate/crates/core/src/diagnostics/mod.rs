//! Where states concentrate: the Γ-weighted barycenter, the ball of
//! maximal Γ-mass, partition witnesses, and the bump-limit audit.

pub mod audit;
pub mod barycenter;
pub mod concentration;
pub mod partition;

pub use audit::{audit_csv, w_limits_audit, AuditRow, AUDIT_COLUMNS};
pub use barycenter::{barycenter, circular_mean, Barycenter};
pub use concentration::{concentration_center, ConcentrationReport};
pub use partition::{good_partition_check, Cell, PartitionSpec, PartitionWitness};
