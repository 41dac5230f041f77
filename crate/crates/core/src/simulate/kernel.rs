//! Inner loops of the Monte Carlo routines.
//!
//! The dependent process is simulated on its digit string: `X_{t+1}` is `X_t`
//! with the new innovation digit prepended. A 128-bit register holds the most
//! recent 128 digits, most recent first, so a threshold test is one integer
//! comparison. For the i.i.d. control each observation is a fresh stationary
//! draw whose digits are generated only until the comparison is decided.

use rand::RngCore;

use crate::digits::{BernoulliWords, Compare, DigitReader, PackedThreshold};

const TOP: u128 = 1u128 << 127;

/// Outcome of `M <= u` over a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowOutcome {
    Below,
    Above,
    Ambiguous,
}

impl WindowOutcome {
    fn update(&mut self, c: Compare) {
        match (*self, c) {
            (WindowOutcome::Above, _) => {}
            (_, Compare::Above) => *self = WindowOutcome::Above,
            (WindowOutcome::Below, Compare::Ambiguous) => *self = WindowOutcome::Ambiguous,
            _ => {}
        }
    }
}

/// Per-replication statistics for one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanStats {
    pub exceedances: u64,
    pub clusters: u64,
    /// `M_window <= u` over the first `window` observations.
    pub window: WindowOutcome,
    /// Observations whose comparison the truncation left undecided; they are
    /// counted as non-exceedances.
    pub ambiguous: u64,
}

/// What a scan should compute.
#[derive(Debug, Clone, Copy)]
pub struct ScanPlan {
    pub horizon: u64,
    /// Window for the maximum.
    pub window: u64,
    /// Minimum number of non-exceedances separating clusters.
    pub run_gap: u64,
    /// Stop once the window outcome is known to be `Above` and the horizon
    /// equals the window.
    pub stop_early: bool,
}

struct Clusters {
    last: Option<u64>,
    gap: u64,
    exceedances: u64,
    clusters: u64,
}

impl Clusters {
    #[inline]
    fn exceed(&mut self, t: u64) {
        self.exceedances += 1;
        match self.last {
            Some(l) if t - l - 1 < self.gap => {}
            _ => self.clusters += 1,
        }
        self.last = Some(t);
    }
}

fn finish(c: Clusters, window: WindowOutcome, ambiguous: u64) -> ScanStats {
    ScanStats {
        exceedances: c.exceedances,
        clusters: c.clusters,
        window,
        ambiguous,
    }
}

/// Dependent process with `X_0` known to `depth` digits.
pub fn scan_dependent<R: RngCore>(
    words: &BernoulliWords,
    rng: &mut R,
    depth: u32,
    thr: &PackedThreshold,
    plan: ScanPlan,
) -> ScanStats {
    let mut reader = DigitReader::new(words.clone(), rng);
    let depth = depth.min(128) as usize;
    let mut reg = 0u128;
    for i in 0..depth {
        reg |= (reader.next_digit() as u128) << (127 - i);
    }
    let mut mask: u128 = if depth == 128 {
        u128::MAX
    } else {
        !(u128::MAX >> depth)
    };
    let mut len = depth;
    let mut clusters = Clusters {
        last: None,
        gap: plan.run_gap,
        exceedances: 0,
        clusters: 0,
    };
    let mut window = WindowOutcome::Below;
    let mut ambiguous = 0u64;
    let mut t = 0u64;
    // Warm-up while the register still has unknown low digits.
    while t < plan.horizon && len < 128 {
        if t > 0 {
            reg = (reg >> 1) | ((reader.next_digit() as u128) << 127);
            mask = (mask >> 1) | TOP;
            len += 1;
        }
        let c = thr.compare(reg, mask, len);
        match c {
            Compare::Above => clusters.exceed(t),
            Compare::Ambiguous => ambiguous += 1,
            Compare::Below => {}
        }
        if t < plan.window {
            window.update(c);
        }
        t += 1;
        if plan.stop_early && window == WindowOutcome::Above && plan.horizon <= plan.window {
            return finish(clusters, window, ambiguous);
        }
    }
    if t >= plan.horizon {
        return finish(clusters, window, ambiguous);
    }
    let bits = thr.bits;
    let exact_known = thr.known == 128 && !thr.empty;
    let on_equal = thr.on_equal[128];
    let mut first = t == 0;
    while t < plan.horizon {
        if !first {
            reg = (reg >> 1) | ((reader.next_digit() as u128) << 127);
        }
        first = false;
        let c = if exact_known {
            if reg < bits {
                Compare::Below
            } else if reg > bits {
                Compare::Above
            } else {
                on_equal
            }
        } else {
            thr.compare(reg, u128::MAX, 128)
        };
        if c != Compare::Below {
            match c {
                Compare::Above => clusters.exceed(t),
                _ => ambiguous += 1,
            }
            if t < plan.window {
                window.update(c);
                if plan.stop_early && window == WindowOutcome::Above && plan.horizon <= plan.window
                {
                    return finish(clusters, window, ambiguous);
                }
            }
        }
        t += 1;
    }
    finish(clusters, window, ambiguous)
}

/// Decides a fresh stationary draw against a threshold, drawing digits lazily
/// and comparing up to 64 buffered digits at a time.
#[inline]
fn fresh_compare<R: RngCore>(
    reader: &mut DigitReader<R>,
    thr: &PackedThreshold,
    depth: usize,
) -> Compare {
    if thr.empty {
        return Compare::Above;
    }
    let limit = depth.min(thr.known);
    let mut i = 0usize;
    while i < limit {
        reader.ensure();
        let avail = (reader.left as usize).min(limit - i);
        let mask = if avail == 64 {
            u64::MAX
        } else {
            (1u64 << avail) - 1
        };
        let t = (thr.rev >> i) as u64;
        let diff = (reader.buf ^ t) & mask;
        if diff != 0 {
            let pos = diff.trailing_zeros();
            let d = (reader.buf >> pos) & 1;
            reader.consume(pos + 1);
            return if d == 0 {
                Compare::Below
            } else {
                Compare::Above
            };
        }
        reader.consume(avail as u32);
        i += avail;
    }
    if depth > thr.known {
        Compare::Ambiguous
    } else {
        thr.on_equal[depth]
    }
}

/// I.i.d. sequence with the stationary marginal, each draw known to `depth` digits.
pub fn scan_iid<R: RngCore>(
    words: &BernoulliWords,
    rng: &mut R,
    depth: u32,
    thr: &PackedThreshold,
    plan: ScanPlan,
) -> ScanStats {
    let mut reader = DigitReader::new(words.clone(), rng);
    let depth = depth.min(128) as usize;
    let mut clusters = Clusters {
        last: None,
        gap: plan.run_gap,
        exceedances: 0,
        clusters: 0,
    };
    let mut window = WindowOutcome::Below;
    let mut ambiguous = 0u64;
    for t in 0..plan.horizon {
        let c = fresh_compare(&mut reader, thr, depth);
        match c {
            Compare::Above => clusters.exceed(t),
            Compare::Ambiguous => ambiguous += 1,
            Compare::Below => {}
        }
        if t < plan.window {
            window.update(c);
            if plan.stop_early && window == WindowOutcome::Above && plan.horizon <= plan.window {
                break;
            }
        }
    }
    finish(clusters, window, ambiguous)
}

/// Window outcomes of one dependent trajectory against several thresholds,
/// ordered by increasing level.
pub fn window_dependent<R: RngCore>(
    words: &BernoulliWords,
    rng: &mut R,
    depth: u32,
    thresholds: &[PackedThreshold],
    window: u64,
) -> Vec<WindowOutcome> {
    let mut reader = DigitReader::new(words.clone(), rng);
    let depth = depth.min(128) as usize;
    let mut reg = 0u128;
    for i in 0..depth {
        reg |= (reader.next_digit() as u128) << (127 - i);
    }
    let mut mask: u128 = if depth == 128 {
        u128::MAX
    } else {
        !(u128::MAX >> depth)
    };
    let mut len = depth;
    let mut out = vec![WindowOutcome::Below; thresholds.len()];
    // Thresholds below `live` have all been exceeded already.
    let mut live = 0usize;
    for t in 0..window {
        if t > 0 {
            reg = (reg >> 1) | ((reader.next_digit() as u128) << 127);
            if len < 128 {
                mask = (mask >> 1) | TOP;
                len += 1;
            }
        }
        if thresholds[live].compare(reg, mask, len) == Compare::Below {
            continue;
        }
        for (k, thr) in thresholds.iter().enumerate().skip(live) {
            let c = thr.compare(reg, mask, len);
            if c == Compare::Below {
                break;
            }
            out[k].update(c);
        }
        while live < thresholds.len() && out[live] == WindowOutcome::Above {
            live += 1;
        }
        if live == thresholds.len() {
            break;
        }
    }
    out
}

/// Window outcomes of one i.i.d. sequence against several thresholds.
pub fn window_iid<R: RngCore>(
    words: &BernoulliWords,
    rng: &mut R,
    depth: u32,
    thresholds: &[PackedThreshold],
    window: u64,
) -> Vec<WindowOutcome> {
    let mut reader = DigitReader::new(words.clone(), rng);
    let depth = depth.min(128) as usize;
    let mut out = vec![WindowOutcome::Below; thresholds.len()];
    let mut decided = vec![None; thresholds.len()];
    for _ in 0..window {
        decided.iter_mut().for_each(|d| *d = None);
        let mut open = thresholds.len();
        let mut i = 0usize;
        while open > 0 {
            if i == depth {
                for (k, thr) in thresholds.iter().enumerate() {
                    if decided[k].is_none() {
                        decided[k] = Some(thr.on_equal[depth]);
                    }
                }
                break;
            }
            let d = reader.next_digit();
            for (k, thr) in thresholds.iter().enumerate() {
                if decided[k].is_some() {
                    continue;
                }
                let c = if thr.empty {
                    Some(Compare::Above)
                } else if i >= thr.known {
                    Some(Compare::Ambiguous)
                } else {
                    let t = ((thr.bits >> (127 - i)) & 1) as u8;
                    match d.cmp(&t) {
                        std::cmp::Ordering::Less => Some(Compare::Below),
                        std::cmp::Ordering::Greater => Some(Compare::Above),
                        std::cmp::Ordering::Equal => None,
                    }
                };
                if c.is_some() {
                    decided[k] = c;
                    open -= 1;
                }
            }
            i += 1;
        }
        for (k, d) in decided.iter().enumerate() {
            out[k].update(d.unwrap_or(Compare::Ambiguous));
        }
        if out.iter().all(|o| *o == WindowOutcome::Above) {
            break;
        }
    }
    out
}
