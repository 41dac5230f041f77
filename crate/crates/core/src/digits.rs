//! Digit-level representation of the stationary law.
//!
//! A point `x = (1 - beta) * sum_j b_j beta^j` is identified with its digit
//! string `b_0 b_1 ...`, where `b_0` is the most recent innovation. For
//! `beta <= 1/2` the map from strings to points is nondecreasing for the
//! lexicographic order, so `X <= u` can be decided by comparing strings with
//! the string of `sup(support ∩ [0, u])`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::params::{Beta, Params};

/// Source of independent Bernoulli(q) digits, 64 at a time.
///
/// Each batch compares 64 uniform 64-bit fixed-point numbers against `q`
/// lane by lane, most significant bit first, stopping once every lane is
/// decided. `q` is rounded to 64 fractional bits.
#[derive(Debug, Clone)]
pub struct BernoulliWords {
    q_fixed: u64,
}

impl BernoulliWords {
    pub fn new(q: f64) -> Self {
        let q_fixed = if q >= 1.0 {
            u64::MAX
        } else if q <= 0.0 {
            0
        } else {
            (q * 2f64.powi(64)).round().min(u64::MAX as f64) as u64
        };
        BernoulliWords { q_fixed }
    }

    pub fn for_params(params: &Params) -> Self {
        Self::new(params.q())
    }

    /// 64 independent digits; bit `i` is one with probability `q`.
    #[inline]
    pub fn word<R: RngCore>(&self, rng: &mut R) -> u64 {
        let q = self.q_fixed;
        let mut undecided = u64::MAX;
        let mut ones = 0u64;
        let mut bit = 63i32;
        while bit >= 0 {
            let r = rng.next_u64();
            if (q >> bit) & 1 == 1 {
                ones |= undecided & !r;
                undecided &= r;
            } else {
                undecided &= !r;
            }
            // Lanes still tied with the remaining zero bits of q compare >= q.
            if undecided == 0 || q & ((1u64 << bit) - 1) == 0 {
                break;
            }
            bit -= 1;
        }
        ones
    }
}

/// Buffered single-digit reader over [`BernoulliWords`].
#[derive(Debug, Clone)]
pub struct DigitReader<R> {
    words: BernoulliWords,
    rng: R,
    pub(crate) buf: u64,
    pub(crate) left: u32,
}

impl<R: RngCore> DigitReader<R> {
    pub fn new(words: BernoulliWords, rng: R) -> Self {
        DigitReader {
            words,
            rng,
            buf: 0,
            left: 0,
        }
    }

    #[inline]
    pub fn next_digit(&mut self) -> u8 {
        if self.left == 0 {
            self.buf = self.words.word(&mut self.rng);
            self.left = 64;
        }
        let d = (self.buf & 1) as u8;
        self.buf >>= 1;
        self.left -= 1;
        d
    }

    /// The next 64 digits as a word (bit 0 first), bypassing the buffer.
    #[inline]
    pub fn next_word(&mut self) -> u64 {
        self.words.word(&mut self.rng)
    }

    /// Refills the buffer if it is empty.
    #[inline]
    pub(crate) fn ensure(&mut self) {
        if self.left == 0 {
            self.buf = self.words.word(&mut self.rng);
            self.left = 64;
        }
    }

    /// Discards the next `n <= left` buffered digits.
    #[inline]
    pub(crate) fn consume(&mut self, n: u32) {
        self.buf = if n >= 64 { 0 } else { self.buf >> n };
        self.left -= n;
    }

    pub fn into_rng(self) -> R {
        self.rng
    }
}

/// What follows the explicitly stored digits of a [`Threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Zeros,
    Ones,
    Unknown,
}

/// Outcome of comparing a (partially known) point with a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compare {
    /// `X <= u` for every completion of the known digits (up to a null set).
    Below,
    /// `X > u` for every completion of the known digits (up to a null set).
    Above,
    /// The known digits do not decide the comparison.
    Ambiguous,
}

/// Digit string of `sup(support ∩ [0, u])` for a level `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    digits: Vec<u8>,
    tail: Tail,
    /// `u < 0`: no point of the support lies below the level.
    empty: bool,
}

impl Threshold {
    /// Greedy descent of `u`, storing at most `max_digits` digits.
    pub fn new(beta: &Beta, u: &BigRational, max_digits: usize) -> Threshold {
        if u.is_negative() {
            return Threshold {
                digits: Vec::new(),
                tail: Tail::Zeros,
                empty: true,
            };
        }
        let a = beta.numer().clone();
        let d = beta.denom().clone();
        let c = &d - &a;
        let mut num: BigInt = u.numer().clone();
        let mut den: BigInt = u.denom().clone();
        let mut digits = Vec::new();
        let tail = loop {
            if num >= den {
                break Tail::Ones;
            }
            if num.is_zero() {
                break Tail::Zeros;
            }
            if digits.len() >= max_digits {
                break Tail::Unknown;
            }
            let nd = &num * &d;
            let cden = &c * &den;
            let aden = &a * &den;
            if nd >= cden {
                digits.push(1);
                num = nd - cden;
                den = aden;
            } else if nd <= aden {
                digits.push(0);
                num = nd;
                den = aden;
            } else {
                // Inside a gap: the supremum is the right end of the left piece.
                digits.push(0);
                break Tail::Ones;
            }
        };
        Threshold {
            digits,
            tail,
            empty: false,
        }
    }

    pub fn for_level(params: &Params, u: &BigRational) -> Threshold {
        Self::new(params.beta(), u, 192)
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn stored(&self) -> &[u8] {
        &self.digits
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Digit `i` of the threshold string, if determined.
    #[inline]
    pub fn digit(&self, i: usize) -> Option<u8> {
        if let Some(&d) = self.digits.get(i) {
            return Some(d);
        }
        match self.tail {
            Tail::Zeros => Some(0),
            Tail::Ones => Some(1),
            Tail::Unknown => None,
        }
    }

    /// Outcome for a point whose first `len` digits equal the threshold's
    /// first `len` digits and whose later digits are unknown.
    pub fn after_equal_prefix(&self, len: usize) -> Compare {
        if self.empty {
            return Compare::Above;
        }
        let rest = if len < self.digits.len() {
            &self.digits[len..]
        } else {
            &[][..]
        };
        match self.tail {
            Tail::Zeros if rest.iter().all(|&b| b == 0) => Compare::Above,
            Tail::Ones if rest.iter().all(|&b| b == 1) => Compare::Below,
            _ => Compare::Ambiguous,
        }
    }

    /// Compares a digit string whose first `digits.len()` digits are known.
    pub fn compare(&self, digits: &[u8]) -> Compare {
        if self.empty {
            return Compare::Above;
        }
        for (i, &b) in digits.iter().enumerate() {
            match self.digit(i) {
                Some(t) if b < t => return Compare::Below,
                Some(t) if b > t => return Compare::Above,
                Some(_) => {}
                None => return Compare::Ambiguous,
            }
        }
        self.after_equal_prefix(digits.len())
    }

    /// First 128 digits packed most-significant-first, with the outcome table
    /// for equal prefixes of every length `0..=128`.
    pub fn packed(&self) -> PackedThreshold {
        let mut bits = 0u128;
        let mut known = 128usize;
        for i in 0..128 {
            match self.digit(i) {
                Some(1) => bits |= 1u128 << (127 - i),
                Some(_) => {}
                None => {
                    known = i;
                    break;
                }
            }
        }
        let mut on_equal = [Compare::Ambiguous; 129];
        for (len, slot) in on_equal.iter_mut().enumerate() {
            *slot = if len <= known {
                self.after_equal_prefix(len)
            } else {
                Compare::Ambiguous
            };
        }
        PackedThreshold {
            bits,
            rev: bits.reverse_bits(),
            known,
            on_equal,
            empty: self.empty,
        }
    }
}

/// A threshold packed into a 128-bit register for fast comparisons.
#[derive(Debug, Clone)]
pub struct PackedThreshold {
    pub bits: u128,
    /// The same digits least-significant-first: bit `i` is digit `i`.
    pub rev: u128,
    /// Number of leading digits that are determined.
    pub known: usize,
    pub on_equal: [Compare; 129],
    pub empty: bool,
}

impl PackedThreshold {
    /// Compares a register whose top `len` bits are known (`mask` selects them).
    #[inline]
    pub fn compare(&self, reg: u128, mask: u128, len: usize) -> Compare {
        if self.empty {
            return Compare::Above;
        }
        let diff = (reg ^ self.bits) & mask;
        if diff == 0 {
            return self.on_equal[len];
        }
        let lead = diff.leading_zeros() as usize;
        if lead >= self.known {
            return Compare::Ambiguous;
        }
        if (reg >> (127 - lead)) & 1 == 1 {
            Compare::Above
        } else {
            Compare::Below
        }
    }
}

/// Finite digit expansion `b_0 .. b_{K-1}` of a point of the support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitStream {
    digits: Vec<u8>,
}

impl DigitStream {
    pub fn new(digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&b| b <= 1));
        DigitStream { digits }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `(1 - beta) * sum_j b_j beta^j`, evaluated by Horner's rule.
    pub fn value(&self, beta: f64) -> f64 {
        let c = 1.0 - beta;
        self.digits
            .iter()
            .rev()
            .fold(0.0, |acc, &b| acc * beta + c * b as f64)
    }

    pub fn value_exact(&self, beta: &Beta) -> BigRational {
        let b = beta.exact();
        let c = BigRational::one() - &b;
        self.digits
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, &d| {
                acc * &b
                    + if d == 1 {
                        c.clone()
                    } else {
                        BigRational::zero()
                    }
            })
    }

    /// Drops the leading digit; this is the action of the expanding map.
    pub fn shift(&self) -> DigitStream {
        DigitStream {
            digits: self.digits.iter().skip(1).copied().collect(),
        }
    }

    /// Prepends a new most recent digit; this is one step of the AR recursion.
    pub fn push_front(&self, digit: u8) -> DigitStream {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(digit);
        digits.extend_from_slice(&self.digits);
        DigitStream { digits }
    }
}
