//! Exhaustive enumeration over truncated digit strings.
//!
//! The randomness behind `X_0, .., X_m` is the first `K` digits of `X_0`
//! together with the innovations `eps_1 .. eps_m`: `2^{K+m}` equally shaped
//! atoms. Probabilities of threshold events are sums of atom weights; digits
//! beyond the first `K` of `X_0` are left unknown, which turns each
//! probability into a bracket.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::digits::{Compare, Threshold};
use crate::error::{argument, Error, Result};
use crate::params::Params;

/// Largest `K + m` for which atoms may be listed one by one.
pub const MAX_LISTED_BITS: u32 = 24;
/// Largest `K + m` accepted by the event evaluator.
pub const MAX_EVENT_BITS: u32 = 64;
/// Largest number of innovations accepted by the event evaluator.
pub const MAX_EVENT_STEPS: u32 = 24;

/// One atom: the first `K` digits of `X_0` and the innovation digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Bit `j` is digit `b_j` of `X_0`.
    pub x0_word: u64,
    /// Bit `t - 1` is one when `eps_t = 1 - beta`.
    pub innovation_word: u64,
    pub weight: f64,
}

impl Atom {
    /// `X_0, .., X_m` with the unknown digits of `X_0` set to zero.
    pub fn trajectory(&self, params: &Params, k: u32, m: u32) -> Vec<f64> {
        let beta = params.beta().value();
        let c = 1.0 - beta;
        let x0 = (0..k).rev().fold(0.0, |acc, j| {
            acc * beta + c * ((self.x0_word >> j) & 1) as f64
        });
        let mut out = Vec::with_capacity(m as usize + 1);
        out.push(x0);
        let mut x = x0;
        for t in 1..=m {
            x = beta * x + c * ((self.innovation_word >> (t - 1)) & 1) as f64;
            out.push(x);
        }
        out
    }
}

/// The `2^{K+m}` atoms for a parameter pair.
#[derive(Debug, Clone)]
pub struct AtomTable {
    params: Params,
    k: u32,
    m: u32,
}

pub fn enumerate_atoms(params: &Params, k: u32, m: u32) -> Result<AtomTable> {
    if k + m > MAX_LISTED_BITS {
        return Err(Error::Resource(format!(
            "K + m = {} exceeds the listing limit {MAX_LISTED_BITS}",
            k + m
        )));
    }
    Ok(AtomTable {
        params: params.clone(),
        k,
        m,
    })
}

impl AtomTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> u64 {
        1u64 << (self.k + self.m)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        let (p, q) = (self.params.p(), self.params.q());
        let k = self.k;
        let kmask = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
        (0..self.len()).map(move |idx| {
            let ones = idx.count_ones() as i32;
            let zeros = (self.k + self.m) as i32 - ones;
            Atom {
                x0_word: idx & kmask,
                innovation_word: idx >> k,
                weight: p.powi(zeros) * q.powi(ones),
            }
        })
    }

    /// Sum of all atom weights, exactly: `(p + q)^{K+m} = 1`.
    pub fn total_weight_exact(&self) -> BigRational {
        let n = (self.k + self.m) as usize;
        let mut counts = WeightCounts::new(n);
        for ones in 0..=n {
            counts.add(n - ones, ones, binomial(n as u64, ones as u64));
        }
        counts.exact(&self.params)
    }

    /// Sum of all atom weights in floating point.
    pub fn total_weight(&self) -> f64 {
        let mut w: Vec<f64> = self.atoms().map(|a| a.weight).collect();
        w.sort_by(f64::total_cmp);
        w.iter().sum()
    }

    /// Probability that `Y_i = X_{t+i} - beta^i X_t` takes its largest value
    /// `1 - beta^i`, i.e. that the first `i` innovations all equal `1 - beta`.
    pub fn y_law_top(&self, i: u32) -> Result<(f64, BigRational)> {
        if i == 0 || i > self.m {
            return argument(format!("need 1 <= i <= m = {}, got {i}", self.m));
        }
        let n = (self.k + self.m) as usize;
        let mut counts = WeightCounts::new(n);
        let mask = (1u64 << i) - 1;
        for a in self.atoms() {
            if a.innovation_word & mask == mask {
                let ones = (a.x0_word.count_ones() + a.innovation_word.count_ones()) as usize;
                counts.add(n - ones, ones, 1);
            }
        }
        Ok((counts.value(&self.params), counts.exact(&self.params)))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Multiset of cylinder weights `p^zeros q^ones`, kept as integer counts so
/// the total can be formed exactly or summed smallest-first.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCounts {
    n: usize,
    counts: Vec<u64>,
}

impl WeightCounts {
    pub fn new(max_digits: usize) -> Self {
        WeightCounts {
            n: max_digits,
            counts: vec![0; (max_digits + 1) * (max_digits + 1)],
        }
    }

    #[inline]
    pub fn add(&mut self, zeros: usize, ones: usize, count: u64) {
        self.counts[zeros * (self.n + 1) + ones] += count;
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let w = self.n + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(idx, &c)| (idx / w, idx % w, c))
    }

    pub fn value(&self, params: &Params) -> f64 {
        let (p, q) = (params.p(), params.q());
        let mut terms: Vec<f64> = self
            .terms()
            .map(|(z, o, c)| c as f64 * p.powi(z as i32) * q.powi(o as i32))
            .collect();
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }

    pub fn exact(&self, params: &Params) -> BigRational {
        let (p, q) = (params.p_exact(), params.q_exact());
        let mut ppow = vec![BigRational::one()];
        let mut qpow = vec![BigRational::one()];
        for _ in 0..self.n {
            ppow.push(ppow.last().unwrap() * p);
            qpow.push(qpow.last().unwrap() * q);
        }
        self.terms().fold(BigRational::zero(), |acc, (z, o, c)| {
            acc + &ppow[z] * &qpow[o] * BigRational::from_integer(c.into())
        })
    }
}

/// Probability of an event as a bracket `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    /// Weight of cylinders on which the event certainly holds.
    pub certain: WeightCounts,
    /// Weight of cylinders the truncation leaves undecided.
    pub undecided: WeightCounts,
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn is_exact(&self) -> bool {
        self.undecided.is_zero()
    }

    pub fn lower_exact(&self, params: &Params) -> BigRational {
        self.certain.exact(params)
    }

    pub fn upper_exact(&self, params: &Params) -> BigRational {
        self.certain.exact(params) + self.undecided.exact(params)
    }

    /// Whether `v` lies in the bracket up to `tol`.
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

/// Brackets for `P(max_{t in J} X_t <= u)` for each index set `J`, where
/// `X_0` is known to `k` digits and `m` is the largest index used.
///
/// Atoms whose outcome is already decided by a prefix of the digit string are
/// summed as one cylinder, so the cost grows with the number of undecided
/// prefixes rather than with `2^{K+m}`.
pub fn max_event_brackets(
    params: &Params,
    threshold: &Threshold,
    index_sets: &[Vec<u32>],
    k: u32,
) -> Result<Vec<Bracket>> {
    let m = index_sets
        .iter()
        .flat_map(|s| s.iter().copied())
        .max()
        .ok_or_else(|| Error::Argument("no indices given".into()))?;
    if index_sets.iter().any(|s| s.is_empty()) {
        return argument("every index set must be non-empty");
    }
    if m > MAX_EVENT_STEPS || k + m > MAX_EVENT_BITS {
        return Err(Error::Resource(format!(
            "K + m = {} with m = {m} exceeds the enumeration limits",
            k + m
        )));
    }
    let mut tracked: Vec<u32> = index_sets.iter().flatten().copied().collect();
    tracked.sort_unstable();
    tracked.dedup();
    let slot_of = |t: u32| tracked.binary_search(&t).expect("tracked");
    let sets: Vec<Vec<usize>> = index_sets
        .iter()
        .map(|s| s.iter().map(|&t| slot_of(t)).collect())
        .collect();
    let total = (k + m) as usize;
    let mut search = Search {
        threshold,
        starts: tracked.iter().map(|&t| (m - t) as usize).collect(),
        known_len: tracked.iter().map(|&t| (t + k) as usize).collect(),
        total,
        sets,
        certain: vec![WeightCounts::new(total); index_sets.len()],
        undecided: vec![WeightCounts::new(total); index_sets.len()],
    };
    let first = *search.starts.iter().min().expect("non-empty");
    let status = vec![Status::Pending; tracked.len()];
    search.visit(first, 0, 0, &status);
    Ok(search
        .certain
        .into_iter()
        .zip(search.undecided)
        .map(|(c, u)| {
            let lower = c.value(params);
            let upper = lower + u.value(params);
            Bracket {
                certain: c,
                undecided: u,
                lower,
                upper,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pending,
    Decided(Compare),
}

struct Search<'a> {
    threshold: &'a Threshold,
    /// Position in the combined string where each tracked point begins.
    starts: Vec<usize>,
    known_len: Vec<usize>,
    total: usize,
    sets: Vec<Vec<usize>>,
    certain: Vec<WeightCounts>,
    undecided: Vec<WeightCounts>,
}

impl Search<'_> {
    /// Depth-first walk over the combined string
    /// `eps_m .. eps_1 b_0 .. b_{K-1}`; `X_t` reads it from position `m - t`.
    fn visit(&mut self, pos: usize, zeros: usize, ones: usize, status: &[Status]) {
        if status.iter().all(|s| matches!(s, Status::Decided(_))) {
            self.record(zeros, ones, status);
            return;
        }
        if pos == self.total {
            let mut fin = status.to_vec();
            for (i, s) in fin.iter_mut().enumerate() {
                if *s == Status::Pending {
                    *s = Status::Decided(self.threshold.after_equal_prefix(self.known_len[i]));
                }
            }
            self.record(zeros, ones, &fin);
            return;
        }
        for digit in 0..2u8 {
            let mut next = status.to_vec();
            for (i, s) in next.iter_mut().enumerate() {
                if *s != Status::Pending || self.starts[i] > pos {
                    continue;
                }
                let offset = pos - self.starts[i];
                *s = match self.threshold.digit(offset) {
                    None => Status::Decided(Compare::Ambiguous),
                    Some(t) if digit < t => Status::Decided(Compare::Below),
                    Some(t) if digit > t => Status::Decided(Compare::Above),
                    Some(_) => Status::Pending,
                };
            }
            let (z, o) = if digit == 0 {
                (zeros + 1, ones)
            } else {
                (zeros, ones + 1)
            };
            self.visit(pos + 1, z, o, &next);
        }
    }

    fn record(&mut self, zeros: usize, ones: usize, status: &[Status]) {
        for (e, set) in self.sets.iter().enumerate() {
            let mut any_undecided = false;
            let mut fails = false;
            for &slot in set {
                match status[slot] {
                    Status::Decided(Compare::Below) => {}
                    Status::Decided(Compare::Above) => {
                        fails = true;
                        break;
                    }
                    _ => any_undecided = true,
                }
            }
            if fails {
                continue;
            }
            if any_undecided {
                self.undecided[e].add(zeros, ones, 1);
            } else {
                self.certain[e].add(zeros, ones, 1);
            }
        }
    }
}

/// Bracket for `P(M_s <= u)` with `X_0` known to `k` digits.
pub fn max_law_bracket(params: &Params, u: &BigRational, s: u32, k: u32) -> Result<Bracket> {
    if s < 1 {
        return argument("s must be at least 1");
    }
    let threshold = Threshold::for_level(params, u);
    let set: Vec<u32> = (0..s).collect();
    Ok(max_event_brackets(params, &threshold, &[set], k)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_step_atoms() {
        let pr = Params::new(0.3, 0.2).unwrap();
        let t = enumerate_atoms(&pr, 0, 1).unwrap();
        let w: Vec<f64> = t.atoms().map(|a| a.weight).collect();
        assert_eq!(w, vec![0.2, pr.q()]);
        assert!(enumerate_atoms(&pr, 20, 5).is_err());
    }

    #[test]
    fn weights_sum_to_one() {
        let pr = Params::new(0.4, 0.3).unwrap();
        let t = enumerate_atoms(&pr, 6, 4).unwrap();
        assert_eq!(t.total_weight_exact(), BigRational::one());
        assert!((t.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn top_innovation_word() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let t = enumerate_atoms(&pr, 3, 4).unwrap();
        for i in 1..=4 {
            let (v, e) = t.y_law_top(i).unwrap();
            assert_eq!(e, num_traits::pow::pow(pr.q_exact().clone(), i as usize));
            assert!((v - 0.5f64.powi(i as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_bracket_matches_closed_value() {
        // P(X_0 <= 1 - beta^3) = 1 - q^3 at x = -1.
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let u = BigRational::new(26.into(), 27.into());
        let b = max_law_bracket(&pr, &u, 1, 6).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.lower_exact(&pr), BigRational::new(7.into(), 8.into()));
    }
}
