//! Enumeration of all abc-triples with `c < N` at desk scale, backed by a
//! radical sieve, plus an independent brute-force oracle for testing.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gains::AbcTriple;

/// Hard cap on the sieve size (a `u32` per integer).
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Quadratic-cost oracle cap.
pub const MAX_ORACLE_LIMIT: u64 = 100_000;

/// `rad[n]` for every `1 <= n <= limit`, built by one multiplicative pass:
/// each prime multiplies the slot of each of its multiples.
pub struct RadicalTable {
    limit: u64,
    rad: Vec<u32>,
}

impl RadicalTable {
    pub fn build(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::ZeroInput { what: "limit" });
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::SieveLimitTooLarge {
                limit,
                cap: MAX_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut rad = vec![1u32; n + 1];
        rad[0] = 0;
        for p in 2..=n {
            // p is prime iff no smaller prime has touched its slot.
            if rad[p] == 1 {
                for m in (p..=n).step_by(p) {
                    rad[m] *= p as u32;
                }
            }
        }
        Ok(Self { limit, rad })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Radical of `n`; panics outside `1..=limit`.
    pub fn radical(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.limit, "n = {n} outside the sieve");
        u64::from(self.rad[n as usize])
    }
}

/// Streams every abc-triple (quality > 1) with `c < limit`, ordered by
/// `c` ascending then `a` ascending.
///
/// For coprime parts `rad(abc) = rad(a) rad(b) rad(c)`, so the sieve
/// answers the quality predicate exactly; `rad(a) rad(c) >= c` is a cheap
/// necessary rejection applied before the gcd.
pub fn enumerate_abc(limit: u64) -> Result<EnumerateAbc> {
    if limit < 3 {
        return Err(Error::ZeroInput { what: "limit" });
    }
    let table = RadicalTable::build(limit - 1)?;
    Ok(EnumerateAbc {
        table,
        limit,
        c: 3,
        a: 1,
    })
}

pub struct EnumerateAbc {
    table: RadicalTable,
    limit: u64,
    c: u64,
    a: u64,
}

impl EnumerateAbc {
    /// Read-only access to the underlying sieve.
    pub fn table(&self) -> &RadicalTable {
        &self.table
    }
}

impl Iterator for EnumerateAbc {
    type Item = AbcTriple;

    fn next(&mut self) -> Option<Self::Item> {
        while self.c < self.limit {
            let c = self.c;
            let rc = self.table.radical(c);
            let step = if c.is_multiple_of(2) { 2 } else { 1 };
            let mut a = self.a;
            while 2 * a < c {
                let ra = self.table.radical(a);
                if ra * rc < c {
                    let b = c - a;
                    if a.gcd(&b) == 1 {
                        let rb = self.table.radical(b);
                        if (ra as u128) * (rb as u128) * (rc as u128) < c as u128 {
                            self.a = a + step;
                            let t = AbcTriple::from_u64(a, b, c)
                                .expect("sieve emits only valid triples");
                            return Some(t);
                        }
                    }
                }
                a += step;
            }
            self.c += 1;
            self.a = 1;
        }
        None
    }
}

/// Independent test oracle: double loop over `(a, c)`, gcd check, and a
/// radical comparison using per-number trial division (no sieve).
pub fn brute_force_oracle(limit: u64) -> Result<Vec<AbcTriple>> {
    if limit > MAX_ORACLE_LIMIT {
        return Err(Error::OracleLimitTooLarge {
            limit,
            cap: MAX_ORACLE_LIMIT,
        });
    }
    let mut rads = vec![0u64; limit as usize];
    for n in 1..limit {
        rads[n as usize] = radical_by_trial_division(n);
    }
    let mut out = Vec::new();
    for c in 3..limit {
        for a in 1..c.div_ceil(2) {
            let b = c - a;
            if a.gcd(&b) != 1 {
                continue;
            }
            let r = rads[a as usize] as u128 * rads[b as usize] as u128 * rads[c as usize] as u128;
            if r < c as u128 {
                out.push(AbcTriple::from_u64(a, b, c)?);
            }
        }
    }
    Ok(out)
}

fn radical_by_trial_division(n: u64) -> u64 {
    let mut m = n;
    let mut r = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            r *= p;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        r *= m;
    }
    r
}
