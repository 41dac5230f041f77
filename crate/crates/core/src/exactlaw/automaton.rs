use crate::error::{argument, domain, Result};

/// `P(M_s <= u_n)` at `x = -1` from the run-length automaton.
///
/// At `x = -1` the event `X_t > u_n` is the event that the `n` most recent
/// digits of `X_t` are all ones. The digits of `X_0, .., X_{s-1}` together form
/// one i.i.d. Bernoulli(q) string of length `s + n - 1`, so the probability is
/// that of seeing no run of `n` ones in that string.
pub fn run_automaton(q: f64, n: u32, s: u64) -> Result<f64> {
    Ok(*run_automaton_path(q, n, s)?.last().expect("s >= 1"))
}

/// `P(M_t <= u_n)` for `t = 1..=s`.
pub fn run_automaton_path(q: f64, n: u32, s: u64) -> Result<Vec<f64>> {
    if !(q > 0.0 && q < 1.0) {
        return domain(format!("q must lie in (0, 1), got {q}"));
    }
    if n < 2 || s < 1 {
        return argument(format!(
            "run automaton needs n >= 2 and s >= 1, got n = {n}, s = {s}"
        ));
    }
    let p = 1.0 - q;
    let n = n as usize;
    // state[r] = P(no run of n yet, current run of ones has length r).
    let mut state = vec![0.0f64; n];
    state[0] = 1.0;
    let mut next = vec![0.0f64; n];
    let mut step = |state: &mut Vec<f64>| {
        let total: f64 = state.iter().sum();
        next[0] = p * total;
        for r in 1..n {
            next[r] = q * state[r - 1];
        }
        std::mem::swap(state, &mut next);
    };
    for _ in 0..n - 1 {
        step(&mut state);
    }
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        step(&mut state);
        out.push(state.iter().sum());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_strings_by_hand() {
        // Length-3 binary strings with no "11": 000, 001, 010, 100, 101.
        assert!((run_automaton(0.5, 2, 2).unwrap() - 0.625).abs() < 1e-15);
        // s = 1 is the marginal: 1 - q^n.
        assert!((run_automaton(0.25, 3, 1).unwrap() - (1.0 - 0.25f64.powi(3))).abs() < 1e-15);
        assert!(run_automaton(0.0, 2, 2).is_err());
        assert!(run_automaton(0.5, 0, 2).is_err());
    }

    #[test]
    fn path_is_nonincreasing() {
        let path = run_automaton_path(0.5, 4, 200).unwrap();
        assert!(path.windows(2).all(|w| w[1] <= w[0]));
    }
}
