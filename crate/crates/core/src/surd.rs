//! Continued fractions of surds `k^(1/s)` with exact integer arithmetic,
//! convergent scanning, and triple construction `d = p^s - k q^s`.
//!
//! Partial quotients are extracted on the Stern-Brocot tree: every digit
//! decision is a comparison of `k^(1/s)` against a mediant `x/y`, i.e. the
//! exact integer comparison `x^s <=> k y^s`. Large quotients (the value
//! 77733 shows up already for 109^(1/5)) are located with exponential
//! doubling plus binary search, so no floating point ever enters the
//! decision path.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::ln_biguint;
use crate::error::{Error, Result};
use crate::gains::AbcTriple;

/// Continued fraction prefix of `k^(1/s)` with its convergents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdCf {
    pub k: u64,
    pub s: u32,
    pub quotients: Vec<BigUint>,
    pub convergents: Vec<(BigUint, BigUint)>,
}

/// A convergent `p/q` of `k^(1/s)` turned into a candidate triple via
/// `d = p^s - k q^s`, with the worst-case quality estimate next to the
/// actual quality.
#[derive(Debug, Clone, PartialEq)]
pub struct SurdCandidate {
    pub p: BigUint,
    pub q: BigUint,
    /// `p^s - k q^s` before gcd reduction.
    pub diff: BigInt,
    pub triple: AbcTriple,
    pub predicted_quality: f64,
    pub actual_quality: f64,
}

/// Streaming generator of the partial quotients of `k^(1/s)`, one
/// `(quotient, convergent)` pair at a time.
pub struct SurdQuotients {
    k: BigUint,
    s: u32,
    p_prev: BigUint,
    q_prev: BigUint,
    p_cur: BigUint,
    q_cur: BigUint,
    prev_side: Ordering,
    cur_side: Ordering,
    started: bool,
}

impl SurdQuotients {
    pub fn new(k: u64, s: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroInput { what: "k" });
        }
        if s < 2 {
            return Err(Error::DegreeTooSmall { degree: s });
        }
        let kb = BigUint::from(k);
        let a0 = kb.nth_root(s);
        if a0.pow(s) == kb {
            return Err(Error::PerfectPower { k, s });
        }
        Ok(Self {
            k: kb,
            s,
            p_prev: BigUint::one(),
            q_prev: BigUint::zero(),
            p_cur: a0.clone(),
            q_cur: BigUint::one(),
            // side of alpha relative to 1/0 = infinity, and to a0/1
            prev_side: Ordering::Less,
            cur_side: Ordering::Greater,
            started: false,
        })
    }

    // alpha versus x/y, decided by k y^s <=> x^s. y = 0 encodes infinity.
    fn side(&self, x: &BigUint, y: &BigUint) -> Ordering {
        (&self.k * y.pow(self.s)).cmp(&x.pow(self.s))
    }

    fn mediant_side(&self, t: &BigUint) -> Ordering {
        self.side(
            &(t * &self.p_cur + &self.p_prev),
            &(t * &self.q_cur + &self.q_prev),
        )
    }
}

impl Iterator for SurdQuotients {
    type Item = (BigUint, (BigUint, BigUint));

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            return Some((self.p_cur.clone(), (self.p_cur.clone(), self.q_cur.clone())));
        }
        // The next quotient is the largest t for which the mediant
        // (t p + p') / (t q + q') still lies on the previous side of alpha.
        debug_assert_eq!(self.mediant_side(&BigUint::one()), self.prev_side);
        let mut lo = BigUint::one();
        let mut hi = BigUint::from(2u32);
        while self.mediant_side(&hi) == self.prev_side {
            lo = hi.clone();
            hi <<= 1;
        }
        while &lo + 1u32 < hi {
            let mid = (&lo + &hi) >> 1;
            if self.mediant_side(&mid) == self.prev_side {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = lo;
        let p = &t * &self.p_cur + &self.p_prev;
        let q = &t * &self.q_cur + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p_cur, p.clone());
        self.q_prev = std::mem::replace(&mut self.q_cur, q.clone());
        std::mem::swap(&mut self.prev_side, &mut self.cur_side);
        Some((t, (p, q)))
    }
}

/// First `count` partial quotients of `k^(1/s)`, with convergents.
/// Rejects perfect s-th powers, whose root is rational.
pub fn cf_surd(k: u64, s: u32, count: usize) -> Result<SurdCf> {
    if count == 0 {
        return Err(Error::ZeroInput { what: "count" });
    }
    let mut quotients = Vec::with_capacity(count);
    let mut convergents = Vec::with_capacity(count);
    for (a, conv) in SurdQuotients::new(k, s)?.take(count) {
        quotients.push(a);
        convergents.push(conv);
    }
    Ok(SurdCf {
        k,
        s,
        quotients,
        convergents,
    })
}

/// Convergents `p_i/q_i` of a partial-quotient sequence by the standard
/// recurrence `p_i = a_i p_{i-1} + p_{i-2}`.
pub fn convergents_of(quotients: &[BigUint]) -> Vec<(BigUint, BigUint)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut q_prev) = (BigUint::zero(), BigUint::one());
    let (mut p, mut q) = (BigUint::one(), BigUint::zero());
    for a in quotients {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Worst-case quality estimate for the triple built from a convergent
/// `p/q` of `k^(1/s)` followed by the partial quotient `e`:
/// `log(k q^s) / (log(k q^s) + log(k s) - log e)`.
pub fn predicted_quality(k: u64, s: u32, q: &BigUint, e: &BigUint) -> f64 {
    let log_kqs = ln_biguint(&(BigUint::from(k) * q.pow(s)));
    let log_ks = ln_biguint(&BigUint::from(k as u128 * s as u128));
    let log_e = ln_biguint(e);
    log_kqs / (log_kqs + log_ks - log_e)
}

/// Scans convergents of `k^(1/s)` with `q <= max_q`, forms the triple from
/// the proper permutation of `|d|, p^s, k q^s` after gcd reduction, and
/// keeps candidates whose actual quality reaches `min_quality`.
pub fn search_from_surd(
    k: u64,
    s: u32,
    max_q: &BigUint,
    min_quality: f64,
) -> Result<Vec<SurdCandidate>> {
    let mut it = SurdQuotients::new(k, s)?;
    let kb = BigUint::from(k);
    let mut out = Vec::new();
    let mut prev: Option<(BigUint, BigUint)> = None;
    loop {
        let (quot, (p, q)) = it.next().expect("surd quotients never end");
        if let Some((cp, cq)) = prev.take() {
            if let Some(cand) = candidate(&kb, k, s, &cp, &cq, &quot, min_quality) {
                out.push(cand);
            }
        }
        if &q > max_q {
            break;
        }
        prev = Some((p, q));
    }
    Ok(out)
}

fn candidate(
    kb: &BigUint,
    k: u64,
    s: u32,
    p: &BigUint,
    q: &BigUint,
    e: &BigUint,
    min_quality: f64,
) -> Option<SurdCandidate> {
    let ps = p.pow(s);
    let kqs = kb * q.pow(s);
    let diff = BigInt::from(ps.clone()) - BigInt::from(kqs.clone());
    if diff.is_zero() {
        return None;
    }
    let d_abs = diff.magnitude().clone();
    let g = d_abs.gcd(&ps).gcd(&kqs);
    let (x, y, sum) = if diff.is_positive() {
        (&d_abs / &g, &kqs / &g, &ps / &g)
    } else {
        (&d_abs / &g, &ps / &g, &kqs / &g)
    };
    let triple = AbcTriple::new(x, y, sum).ok()?;
    let actual_quality = triple.quality();
    if actual_quality < min_quality {
        return None;
    }
    Some(SurdCandidate {
        p: p.clone(),
        q: q.clone(),
        diff,
        triple,
        predicted_quality: predicted_quality(k, s, q, e),
        actual_quality,
    })
}
