//! Exact finite-n laws of the maximum `M_s = max(X_0, .., X_{s-1})` at the
//! levels `u_n = 1 + beta^n x`, and the dependence structure behind them.

mod association;
mod automaton;
mod blocking;
mod enumeration;
mod levels;
mod recursion;

pub use association::{
    check_conditional_bound, check_product_bound, ConditionalBound, ConditionalTerm, ProductBound,
};
pub use automaton::{run_automaton, run_automaton_path};
pub use blocking::{blocking_bounds, blocking_gap, BlockingBounds, BlockingGap, EllRule};
pub use enumeration::{
    enumerate_atoms, max_event_brackets, max_law_bracket, Atom, AtomTable, Bracket, WeightCounts,
    MAX_EVENT_BITS, MAX_EVENT_STEPS, MAX_LISTED_BITS,
};
pub use levels::{make_levels, make_levels_exact, LevelSet};
pub use recursion::{closed_form, p_recursion, Entry, MaxLawTable, Provenance};
