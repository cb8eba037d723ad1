//! p-adic machinery: Hensel lifting of d-th roots modulo prime powers,
//! p-adic digit strings, the rank-2 approximation lattice with Gauss
//! reduction, continued fractions of rationals, and the surd explanation of
//! a gain witness.
//!
//! A residue `α` modulo `M` determines the lattice
//! `Λ = {(x, y) : x ≡ y·α (mod M)}`; its short vectors are the best rational
//! approximations `x/y` to `α` in the M-adic sense. Gauss reduction of the
//! obvious basis `(M, 0), (α, 1)` finds a shortest vector, and the reduction
//! quotients play the role of partial quotients of a continued fraction.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, mod_inverse};
use crate::error::{Error, Result};
use crate::gains::{
    multiple_enhanced_radical, real_enhanced_radical, single_enhanced_radical, AbcTriple, GainKind,
    GainWitness, Part,
};

/// A residue class `value (mod modulus)` with `0 <= value < modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    modulus: BigUint,
}

impl Residue {
    pub fn new(value: BigUint, modulus: BigUint) -> Result<Self> {
        if modulus < BigUint::from(2u32) {
            return Err(Error::ModulusTooSmall { modulus });
        }
        if value >= modulus {
            return Err(Error::UnreducedResidue { value, modulus });
        }
        Ok(Self { value, modulus })
    }

    /// Reduces an arbitrary integer into the class.
    pub fn reduce(value: &BigInt, modulus: BigUint) -> Result<Self> {
        if modulus < BigUint::from(2u32) {
            return Err(Error::ModulusTooSmall { modulus });
        }
        let m = BigInt::from(modulus.clone());
        let v = value.mod_floor(&m).to_biguint().unwrap();
        Ok(Self { value: v, modulus })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// All `r` with `r^d ≡ u (mod p^n)`, ascending; empty when `u` is not a
/// d-th power residue. Requires a unit `u` and `gcd(d, p) = 1` (the ramified
/// case has non-unique lifts and is rejected).
pub fn hensel_dth_root(u: &Residue, d: u32) -> Result<Vec<Residue>> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d });
    }
    let f = factorize(u.modulus())?;
    if f.entries().len() != 1 {
        return Err(Error::NotPrimePower {
            modulus: u.modulus().clone(),
        });
    }
    let (p, n) = (f.entries()[0].0.clone(), f.entries()[0].1);
    if (BigUint::from(d) % &p).is_zero() {
        return Err(Error::RamifiedRoot { d, p });
    }
    if !u.value().gcd(&p).is_one() {
        return Err(Error::NotAUnit {
            value: u.value().clone(),
            modulus: u.modulus().clone(),
        });
    }

    let base_roots = roots_mod_prime(&(u.value() % &p), &p, d)?;
    let mut out = Vec::with_capacity(base_roots.len());
    for r in base_roots {
        let lifted = hensel_lift(&r, u.value(), &p, n, d);
        out.push(Residue {
            value: lifted,
            modulus: u.modulus().clone(),
        });
    }
    out.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(out)
}

// d-th roots of a unit modulo the prime p itself.
fn roots_mod_prime(u: &BigUint, p: &BigUint, d: u32) -> Result<Vec<BigUint>> {
    if let Some(p64) = p.to_u64().filter(|&p64| p64 <= 1 << 20) {
        let um = u.to_u64().unwrap();
        let mut roots = Vec::new();
        for x in 1..p64 {
            if pow_mod(x, d as u64, p64) == um {
                roots.push(BigUint::from(x));
            }
        }
        return Ok(roots);
    }
    // Large prime: only the bijective case x -> x^d is handled.
    let order = p - 1u32;
    let d_big = BigUint::from(d);
    if !d_big.gcd(&order).is_one() {
        return Err(Error::RootSearchTooLarge { p: p.clone() });
    }
    let inv = mod_inverse(&d_big, &order).unwrap();
    Ok(vec![u.modpow(&inv, p)])
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

// Newton lifting of a simple root of x^d - u from mod p to mod p^n.
// f'(r) = d r^(d-1) is a unit, so precision doubles each step.
fn hensel_lift(root: &BigUint, u: &BigUint, p: &BigUint, n: u32, d: u32) -> BigUint {
    let mut r = root.clone();
    let mut prec = 1u32;
    let d_big = BigUint::from(d);
    let d_minus_1 = BigUint::from(d - 1);
    while prec < n {
        let prec2 = (2 * prec).min(n);
        let m = p.pow(prec2);
        let fr = (r.modpow(&d_big, &m) + &m - u % &m) % &m;
        let df = d_big.clone() * r.modpow(&d_minus_1, &m) % &m;
        let inv = mod_inverse(&df, &m).expect("derivative is a unit");
        r = (&r + &m - fr * inv % &m) % &m;
        prec = prec2;
    }
    r
}

/// The first `count` base-p digits of the p-adic expansion of `num/den`,
/// least significant first. The denominator must be coprime to `p`.
pub fn padic_digits(num: &BigInt, den: &BigInt, p: u64, count: usize) -> Result<Vec<u64>> {
    if !is_prime(&BigUint::from(p)) {
        return Err(Error::NotPrime {
            value: BigUint::from(p),
        });
    }
    if den.is_zero() {
        return Err(Error::ZeroInput {
            what: "denominator",
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let modulus = BigUint::from(p).pow(count as u32);
    let m_int = BigInt::from(modulus.clone());
    let den_red = den.mod_floor(&m_int).to_biguint().unwrap();
    let inv = mod_inverse(&den_red, &modulus).ok_or(Error::DenominatorNotUnit { p })?;
    let mut alpha = (num * BigInt::from(inv))
        .mod_floor(&m_int)
        .to_biguint()
        .unwrap();
    let p_big = BigUint::from(p);
    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        let (q, r) = alpha.div_rem(&p_big);
        digits.push(r.to_u64().unwrap());
        alpha = q;
    }
    Ok(digits)
}

/// Digit string in the positional notation `0.x0x1x2...`, grouped in blocks
/// of five for single-character digits.
pub fn format_digits(digits: &[u64], grouped: bool) -> String {
    let mut s = String::from("0.");
    if digits.iter().any(|&d| d > 9) {
        s.push_str(
            &digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        return s;
    }
    for (i, d) in digits.iter().enumerate() {
        if grouped && i > 0 && i % 5 == 0 {
            s.push(' ');
        }
        s.push(char::from(b'0' + *d as u8));
    }
    s
}

/// A 2x2 integer basis stored as two column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub col0: (BigInt, BigInt),
    pub col1: (BigInt, BigInt),
}

impl Basis {
    pub fn determinant(&self) -> BigInt {
        &self.col0.0 * &self.col1.1 - &self.col1.0 * &self.col0.1
    }
}

/// Basis `(M, 0), (α, 1)` of the approximation lattice of `α (mod M)`.
pub fn approximation_lattice(target: &Residue) -> Basis {
    Basis {
        col0: (BigInt::from(target.modulus().clone()), BigInt::zero()),
        col1: (BigInt::from(target.value().clone()), BigInt::one()),
    }
}

fn norm2(v: &(BigInt, BigInt)) -> BigInt {
    &v.0 * &v.0 + &v.1 * &v.1
}

fn dot(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> BigInt {
    &u.0 * &v.0 + &u.1 * &v.1
}

/// Lagrange-Gauss reduction: repeatedly subtract the optimal integer
/// multiple `k` of the shorter column from the longer one until neither can
/// be shortened. Returns the reduced basis and the trace of quotients `k`.
/// When two `k` tie in resulting norm the smaller is taken.
pub fn gauss_reduce(basis: &Basis) -> Result<(Basis, Vec<BigInt>)> {
    if basis.determinant().is_zero() {
        return Err(Error::SingularBasis);
    }
    let mut b = basis.clone();
    let mut trace = Vec::new();
    loop {
        let n0 = norm2(&b.col0);
        let n1 = norm2(&b.col1);
        let reduce_first = n0 >= n1;
        let (longer, shorter, longer_norm) = if reduce_first {
            (&b.col0, &b.col1, &n0)
        } else {
            (&b.col1, &b.col0, &n1)
        };
        let m = norm2(shorter);
        // Nearest integer to dot/m, rounding halves down.
        let two = BigInt::from(2);
        let numerator = dot(longer, shorter) * &two + &m - BigInt::one();
        let k = numerator.div_floor(&(&m * &two));
        let candidate = (&longer.0 - &k * &shorter.0, &longer.1 - &k * &shorter.1);
        if norm2(&candidate) >= *longer_norm {
            break;
        }
        trace.push(k);
        if reduce_first {
            b.col0 = candidate;
        } else {
            b.col1 = candidate;
        }
    }
    Ok((b, trace))
}

/// A best rational approximation to a residue: the shortest nonzero vector
/// `(x, y)` of its approximation lattice, plus the reduction trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicApproximation {
    pub target: Residue,
    pub vector: (BigInt, BigInt),
    pub trace: Vec<BigInt>,
}

/// Shortest nonzero lattice vector for `target`, normalized to `y > 0`
/// (or `x > 0` when `y = 0`).
pub fn best_padic_approx(target: &Residue) -> PadicApproximation {
    let basis = approximation_lattice(target);
    let (reduced, trace) = gauss_reduce(&basis).expect("lattice basis is never singular");
    let mut v = if norm2(&reduced.col0) < norm2(&reduced.col1) {
        reduced.col0
    } else {
        reduced.col1
    };
    if v.1.is_negative() || (v.1.is_zero() && v.0.is_negative()) {
        v = (-v.0, -v.1);
    }
    PadicApproximation {
        target: target.clone(),
        vector: v,
        trace,
    }
}

/// Canonical continued fraction of `num/den` by Euclid's algorithm; the
/// last quotient is >= 2 whenever the expansion has more than one term.
pub fn cf_rational(num: &BigUint, den: &BigUint) -> Vec<BigUint> {
    assert!(!den.is_zero(), "denominator must be positive");
    let mut quotients = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    loop {
        let (q, r) = a.div_rem(&b);
        quotients.push(q);
        if r.is_zero() {
            break;
        }
        a = b;
        b = r;
    }
    quotients
}

/// How a surd is rendered: `(num/den)^(±1/d)`, optionally negated when the
/// degree is even and the congruence carries a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdDescription {
    pub radicand_num: BigUint,
    pub radicand_den: BigUint,
    pub degree: u32,
    pub inverted: bool,
    pub negated: bool,
}

impl fmt::Display for SurdDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        if self.radicand_den.is_one() {
            write!(f, "{}", self.radicand_num)?;
        } else {
            write!(f, "({}/{})", self.radicand_num, self.radicand_den)?;
        }
        if self.inverted {
            write!(f, "^(-1/{})", self.degree)
        } else {
            write!(f, "^(1/{})", self.degree)
        }
    }
}

/// The p-adic reading of a gain witness: the exact congruence
/// `lhs_root^d * lhs_cof ≡ sign * rhs_root^d * rhs_cof (mod modulus)`
/// behind the gain, the surd it approximates and the approximating
/// fraction, with the continued fraction of the underlying residue.
#[derive(Debug, Clone, PartialEq)]
pub struct SurdExplanation {
    pub star: Part,
    pub degree: u32,
    pub modulus: BigUint,
    pub modulus_factors: Vec<(BigUint, u32)>,
    pub lhs_root: BigUint,
    pub lhs_cof: BigUint,
    pub rhs_root: BigUint,
    pub rhs_cof: BigUint,
    pub sign: i8,
    pub surd: SurdDescription,
    pub approximation: (BigUint, BigUint),
    pub cf_quotients: Vec<BigUint>,
}

impl SurdExplanation {
    pub fn congruence(&self) -> String {
        format!(
            "{}^{} * {} == {}{}^{} * {} (mod {})",
            self.lhs_root,
            self.degree,
            self.lhs_cof,
            if self.sign < 0 { "-" } else { "" },
            self.rhs_root,
            self.degree,
            self.rhs_cof,
            self.modulus,
        )
    }
}

/// Reconstructs the surd approximation a witness exploits.
///
/// Writing the non-star parts as `β^d b'` and `γ^d c'`, the identity
/// `a + b = c` reduces modulo the star's prime powers to a congruence
/// between those products, i.e. to a statement that `γ/β` (or its inverse)
/// is a good M-adic approximation to a d-th root.
pub fn explain_gain(t: &AbcTriple, w: &GainWitness) -> Result<SurdExplanation> {
    let d = w.degree;
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d });
    }
    let (star, modulus, modulus_factors, expected) = match w.kind {
        GainKind::Real => {
            if w.star.is_some() || w.prime.is_some() {
                return Err(Error::WitnessMismatch);
            }
            (
                Part::A,
                t.a().clone(),
                t.factorization(Part::A).entries().to_vec(),
                real_enhanced_radical(t, d),
            )
        }
        GainKind::MultiplePadic => {
            let star = w.star.ok_or(Error::WitnessMismatch)?;
            (
                star,
                t.part_value(star).clone(),
                t.factorization(star).entries().to_vec(),
                multiple_enhanced_radical(t, star, d),
            )
        }
        GainKind::SinglePadic => {
            let p = w.prime.as_ref().ok_or(Error::WitnessMismatch)?;
            let star = crate::gains::part_of_prime(t, p)?;
            let e = t.factorization(star).exponent_of(p);
            (
                star,
                p.pow(e),
                vec![(p.clone(), e)],
                single_enhanced_radical(t, p, d)?,
            )
        }
    };
    if expected != w.enhanced_radical {
        return Err(Error::WitnessMismatch);
    }

    // lhs is the sum side of the congruence when the star is a summand,
    // the larger summand when the star is the sum itself.
    let (lhs_part, rhs_part, sign): (Part, Part, i8) = match star {
        Part::A => (Part::C, Part::B, 1),  // c ≡ b (mod a-side)
        Part::B => (Part::C, Part::A, 1),  // c ≡ a
        Part::C => (Part::B, Part::A, -1), // b ≡ -a
    };
    let (lhs_root, lhs_cof) = t.factorization(lhs_part).split_dth_power(d);
    let (rhs_root, rhs_cof) = t.factorization(rhs_part).split_dth_power(d);

    let lhs = BigInt::from(lhs_root.pow(d) * &lhs_cof);
    let rhs = BigInt::from(rhs_root.pow(d) * &rhs_cof);
    let delta = if sign > 0 { lhs - rhs } else { lhs + rhs };
    if !delta.mod_floor(&BigInt::from(modulus.clone())).is_zero() {
        return Err(Error::WitnessMismatch);
    }

    // Orientation convention, chosen so the approximating fraction is the
    // residue of the printed surd: star = a or c approximates
    // (rhs_cof/lhs_cof)^(1/d) by lhs_root/rhs_root; star = b presents the
    // inverse. An odd degree absorbs the sign into the approximation.
    let (approximation, surd) = match star {
        Part::A => (
            (lhs_root.clone(), rhs_root.clone()),
            SurdDescription {
                radicand_num: rhs_cof.clone(),
                radicand_den: lhs_cof.clone(),
                degree: d,
                inverted: false,
                negated: false,
            },
        ),
        Part::B => (
            (rhs_root.clone(), lhs_root.clone()),
            SurdDescription {
                radicand_num: rhs_cof.clone(),
                radicand_den: lhs_cof.clone(),
                degree: d,
                inverted: true,
                negated: false,
            },
        ),
        Part::C => (
            (lhs_root.clone(), rhs_root.clone()),
            SurdDescription {
                radicand_num: rhs_cof.clone(),
                radicand_den: lhs_cof.clone(),
                degree: d,
                inverted: false,
                negated: d.is_multiple_of(2),
            },
        ),
    };

    let cf_quotients = if modulus.is_one() {
        vec![BigUint::zero()]
    } else {
        let inv = mod_inverse(&(&approximation.1 % &modulus), &modulus)
            .expect("approximation denominator is coprime to the modulus");
        let alpha = &approximation.0 * inv % &modulus;
        cf_rational(&alpha, &modulus)
    };

    Ok(SurdExplanation {
        star,
        degree: d,
        modulus,
        modulus_factors,
        lhs_root,
        lhs_cof,
        rhs_root,
        rhs_cof,
        sign,
        surd,
        approximation,
        cf_quotients,
    })
}
