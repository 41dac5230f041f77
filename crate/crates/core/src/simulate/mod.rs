//! Monte Carlo simulation of the process, empirical maxima laws, extremal
//! index estimators and the dynamical-systems view of the process.

mod config;
mod dynamics;
mod extremal;
mod kernel;
mod maxlaw;
mod trajectory;

pub use config::MonteCarloConfig;
pub use dynamics::{
    check_conjugacy, doa_convergence, invariance_defect, iterate_map, iterate_map_exact, lyapunov,
    map_point, orbit_lyapunov, ConjugacyReport, DoaPoint, Orbit,
};
pub use extremal::{
    default_runs_horizon, estimate_extremal_index, estimate_extremal_index_both, ThetaEstimate,
    ThetaMethod,
};
pub use kernel::{ScanPlan, ScanStats, WindowOutcome};
pub use maxlaw::{empirical_max_law, EmpiricalLaw, Mode};
pub use trajectory::{simulate_ar, simulate_ar_replication, Trajectory};
