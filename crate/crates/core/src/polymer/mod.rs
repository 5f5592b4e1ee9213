//! Quenched polymer estimators on a [`BrownianLattice`](crate::environment::BrownianLattice).

mod estimate;
mod identity;
mod kac;
mod lpp;
mod transfer;

pub use estimate::{default_dt, estimate_free_energy, lpp_limit_estimate};
pub use identity::{
    chernoff_check, moment_identity_check, ChernoffPoint, MomentIdentity, MAX_MC_PATHS,
};
pub use kac::{
    grand_partition, kac_concentration, kac_from_lattice, x_grid, KacDiagnostic, KAC_WINDOW,
};
pub use lpp::{lpp_dp, lpp_dp_strided, lpp_min_dp, lpp_profile};
pub use transfer::{
    gamma_n_dp, log_partition_dp, log_partition_interval, log_simplex_volume, partition_profile,
    ProfileMode, TransferProfile, TIE_CAP,
};
