//! Stationary law, exact maxima laws and extremal behaviour of the Bernoulli
//! autoregressive process
//!
//! `X_{k+1} = beta X_k + eps_{k+1}`, `eps ∈ {0, 1 - beta}`, `P(eps = 0) = p`,
//!
//! with `0 < beta <= 1/2`. The stationary law is a Cantor-type distribution,
//! the maxima are attracted to a max-semistable (not max-stable) law and the
//! extremal index equals `p`.

pub mod digits;
pub mod error;
pub mod evt;
pub mod exact;
pub mod exactlaw;
pub mod marginal;
pub mod parallel;
pub mod params;
pub mod simulate;
pub mod stats;
pub mod verify;

pub use digits::{Compare, DigitStream, Threshold};
pub use error::{Error, Result};
pub use evt::{
    limit_law_dependent, limit_law_iid, msstable_general, norming_sequences, same_type_q, MssLaw,
};
pub use exactlaw::{closed_form, make_levels, p_recursion, run_automaton, LevelSet};
pub use marginal::{
    cdf, cdf_exact, cdf_modulus, continuity_bound, nu, psi, psi_exact, quantile, quantile_exact,
    sample_digits, sample_stationary, symmetry_check, CdfValue, DEFAULT_DEPTH,
};
pub use params::{Beta, Params};
pub use simulate::{
    empirical_max_law, estimate_extremal_index, simulate_ar, EmpiricalLaw, Mode, MonteCarloConfig,
    ThetaEstimate, ThetaMethod,
};
