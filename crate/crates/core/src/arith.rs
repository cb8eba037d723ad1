//! Exact integer arithmetic: factorization, radicals, valuations, maximal
//! d-th-power splitting, modular inverses and the Chinese remainder theorem.
//!
//! All gain metrics are quotients of logarithms of factored quantities, so
//! logs are always accumulated as `Σ e·ln p` over a factorization instead of
//! converting the (possibly huge) integer itself.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division strips every prime below this bound before Pollard rho
/// takes over.
const TRIAL_BOUND: u64 = 1_000_000;

/// Primes below this are stripped from a precomputed list before anything
/// else; the rest of the trial range is scanned only for composites that
/// survive a primality check.
const SMALL_PRIME_BOUND: u64 = 10_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMALL_PRIME_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Prime-power decomposition of a positive integer, sorted by prime.
/// The empty factorization represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    entries: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(prime, exponent)` pairs, primes strictly ascending, exponents >= 1.
    pub fn entries(&self) -> &[(BigUint, u32)] {
        &self.entries
    }

    /// Expands the factorization back into the integer it represents.
    pub fn value(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Product of the distinct primes; 1 for the empty factorization.
    pub fn radical(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    /// Natural log of the represented integer, as `Σ e·ln p`.
    pub fn log(&self) -> f64 {
        self.entries.iter().map(|(p, e)| scaled_ln(p, *e)).sum()
    }

    /// Natural log of the radical, as `Σ ln p`.
    pub fn log_radical(&self) -> f64 {
        self.entries.iter().map(|(p, _)| scaled_ln(p, 1)).sum()
    }

    /// Largest exponent present; 0 for the empty factorization.
    pub fn max_exponent(&self) -> u32 {
        self.entries.iter().map(|(_, e)| *e).max().unwrap_or(0)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Splits `n = root^d * cofactor` with `root` maximal:
    /// `root = Π p^(e/d)`, `cofactor = Π p^(e mod d)`.
    pub fn split_dth_power(&self, d: u32) -> (BigUint, BigUint) {
        let mut root = BigUint::one();
        let mut cofactor = BigUint::one();
        for (p, e) in &self.entries {
            root *= p.pow(e / d);
            cofactor *= p.pow(e % d);
        }
        (root, cofactor)
    }

    /// `root * cofactor` of the maximal d-th-power split, i.e. the
    /// contribution of this part to an enhanced radical.
    pub fn split_product(&self, d: u32) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e / d + e % d))
    }

    /// Log of [`Self::split_product`].
    pub fn split_log(&self, d: u32) -> f64 {
        self.entries
            .iter()
            .map(|(p, e)| scaled_ln(p, e / d + e % d))
            .sum()
    }

    /// The value with the exponent of `p` lowered to 1, i.e. `n / p^(e-1)`.
    /// Used by the single p-adic enhanced radical; `p` must divide `n`.
    pub fn reduce_prime_to_unit(&self, p: &BigUint) -> BigUint {
        self.entries.iter().fold(BigUint::one(), |acc, (q, e)| {
            acc * q.pow(if q == p { 1 } else { *e })
        })
    }

    /// Log of [`Self::reduce_prime_to_unit`].
    pub fn reduce_prime_to_unit_log(&self, p: &BigUint) -> f64 {
        self.entries
            .iter()
            .map(|(q, e)| scaled_ln(q, if q == p { 1 } else { *e }))
            .sum()
    }

    fn from_u64_map(map: std::collections::BTreeMap<u64, u32>) -> Self {
        Self {
            entries: map
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

// e * ln(p), skipping the multiply for e == 1 so that the same prime
// contributes bit-identical terms to radical logs and split logs.
fn scaled_ln(p: &BigUint, e: u32) -> f64 {
    let lp = ln_biguint(p);
    if e == 1 {
        lp
    } else {
        f64::from(e) * lp
    }
}

/// Natural log of an arbitrary-size positive integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    if let Some(v) = n.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    // Beyond f64 range: take the top bits and add the shift back.
    let shift = n.bits() - 900;
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Prime factorization by trial division below 10^6 plus Brent's variant of
/// Pollard rho with a Miller-Rabin certificate for the surviving cofactor.
/// Deterministic: the same input always yields the same output.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorizeZero);
    }
    if let Some(v) = n.to_u64() {
        return Ok(Factorization::from_u64_map(factorize_u64(v)));
    }
    factorize_big(n)
}

/// Product of the distinct primes of a factorization.
pub fn radical(f: &Factorization) -> BigUint {
    f.radical()
}

/// Splits `n = root^d * cofactor` with `root` maximal.
pub fn split_dth_power(n: &BigUint, d: u32) -> Result<(BigUint, BigUint)> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d });
    }
    Ok(factorize(n)?.split_dth_power(d))
}

/// Largest `e` with `p^e | n`; `p` must be prime and `n` positive.
pub fn valuation(n: &BigUint, p: &BigUint) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput { what: "n" });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { value: p.clone() });
    }
    let mut e = 0;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Combines residues over pairwise coprime moduli into the unique residue
/// modulo their product. The empty input yields `(0, 1)`.
pub fn crt_combine(residues: &[(BigUint, BigUint)]) -> Result<(BigUint, BigUint)> {
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for (v, m) in residues {
        if m.is_zero() {
            return Err(Error::ZeroInput { what: "modulus" });
        }
        let g = modulus.gcd(m);
        if !g.is_one() {
            return Err(Error::NonCoprimeModuli { gcd: g });
        }
        // value' = value + modulus * t with t = (v - value) / modulus (mod m)
        let inv = mod_inverse(&(&modulus % m), m).expect("moduli checked coprime");
        let diff = BigInt::from(v % m) - BigInt::from(&value % m);
        let t = (diff * BigInt::from(inv)).mod_floor(&BigInt::from(m.clone()));
        value += &modulus * t.to_biguint().unwrap();
        modulus *= m;
    }
    Ok((value, modulus))
}

/// Inverse of `a` modulo `m`, when it exists. `mod_inverse(_, 1) = 0`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let m_int = BigInt::from(m.clone());
    let ext = BigInt::from(a % m).extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(&m_int).to_biguint().unwrap())
}

/// Primality test. Deterministic Miller-Rabin below 2^64; for larger inputs
/// the fixed base set {2, ..., 41} is a proven certificate up to ~3.3e24 and
/// an extremely strong probable-prime test beyond.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => miller_rabin_big(n),
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn factorize_u64(n: u64) -> std::collections::BTreeMap<u64, u32> {
    let mut out = std::collections::BTreeMap::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.insert(p, e);
        }
    }
    if m == 1 {
        return out;
    }
    if m < SMALL_PRIME_BOUND * SMALL_PRIME_BOUND || is_prime_u64(m) {
        *out.entry(m).or_insert(0) += 1;
        return out;
    }
    // Composite with no factor below 10^4: finish the trial range, then rho.
    let mut p = SMALL_PRIME_BOUND + 1;
    while p <= TRIAL_BOUND && p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.insert(p, e);
            if m == 1 {
                return out;
            }
            if is_prime_u64(m) {
                *out.entry(m).or_insert(0) += 1;
                return out;
            }
        }
        p += 2;
    }
    if p * p > m {
        *out.entry(m).or_insert(0) += 1;
        return out;
    }
    split_rho_u64(m, &mut out);
    out
}

fn split_rho_u64(n: u64, out: &mut std::collections::BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_brent_u64(n);
    split_rho_u64(d, out);
    split_rho_u64(n / d, out);
}

// Brent's cycle variant of Pollard rho. The caller guarantees n is odd,
// composite and free of small factors, so this always terminates with a
// proper factor; the polynomial constant c is bumped deterministically on
// the rare failure.
fn pollard_brent_u64(n: u64) -> u64 {
    for c in 1u64.. {
        if let Some(d) = brent_cycle_u64(n, c) {
            return d;
        }
    }
    unreachable!()
}

fn brent_cycle_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| {
        let y = mul_mod_u64(x, x, n);
        if y + c >= n {
            y + c - n
        } else {
            y + c
        }
    };
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let (mut x, mut ys) = (y, y);
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
        }
        r <<= 1;
        if r > 1 << 24 {
            return None;
        }
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn factorize_big(n: &BigUint) -> Result<Factorization> {
    let mut entries: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if (&m % &pb).is_zero() {
            let mut e = 0;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            entries.push((pb, e));
        }
        if let Some(v) = m.to_u64() {
            for (p, e) in factorize_u64(v) {
                entries.push((BigUint::from(p), e));
            }
            entries.sort();
            return Ok(Factorization { entries });
        }
    }
    let mut p = SMALL_PRIME_BOUND + 1;
    while p <= TRIAL_BOUND {
        let pb = BigUint::from(p);
        if (&m % &pb).is_zero() {
            let mut e = 0;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            entries.push((pb, e));
            if let Some(v) = m.to_u64() {
                for (q, e) in factorize_u64(v) {
                    entries.push((BigUint::from(q), e));
                }
                entries.sort();
                return Ok(Factorization { entries });
            }
        }
        p += 2;
    }
    let mut stack = vec![m];
    let mut found: Vec<BigUint> = Vec::new();
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if let Some(v) = x.to_u64() {
            for (q, e) in factorize_u64(v) {
                for _ in 0..e {
                    found.push(BigUint::from(q));
                }
            }
            continue;
        }
        if miller_rabin_big(&x) {
            found.push(x);
            continue;
        }
        let d = pollard_brent_big(&x);
        stack.push(&x / &d);
        stack.push(d);
    }
    found.sort();
    for p in found {
        match entries.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => entries.push((p, 1)),
        }
    }
    entries.sort();
    Ok(Factorization { entries })
}

fn pollard_brent_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        while g.is_one() && r <= 1 << 20 {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            r <<= 1;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return g;
        }
    }
    unreachable!()
}
