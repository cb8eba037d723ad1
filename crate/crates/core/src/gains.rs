//! Quality and the approximation-gain / power-gain family for abc-triples.
//!
//! Every metric has the shape `log c / log r` for an "enhanced radical" `r`
//! obtained by shrinking the contribution of one or more parts:
//!
//! * real: extract maximal d-th powers from `b` and `c`, keep `a` whole;
//! * multiple p-adic: one chosen part contributes only its radical;
//! * single p-adic: one prime power `p^(e-1)` is removed from its part.
//!
//! The complementary power gain is `log r / log rad(abc)`, so
//! `gain * power gain = quality` for every choice, and maximizing the gain
//! is the same as minimizing the enhanced radical. Searches therefore
//! compare enhanced radicals exactly as integers, which also makes witness
//! tie-breaking exact: candidates are scanned in lexicographic order
//! (star `a < b < c`, then prime ascending, then degree ascending) and only
//! a strictly smaller radical displaces the incumbent.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorize, Factorization};
use crate::error::{Error, Result};

/// Position of a part inside a normalized triple `a + b = c`, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    A,
    B,
    C,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::A, Part::B, Part::C];

    /// The other two parts, in canonical order.
    pub fn others(self) -> [Part; 2] {
        match self {
            Part::A => [Part::B, Part::C],
            Part::B => [Part::A, Part::C],
            Part::C => [Part::A, Part::B],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Part::A => "a",
            Part::B => "b",
            Part::C => "c",
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A validated coprime triple `a + b = c` with `a < b`, carrying the
/// factorization of each part. Quality may be below 1; the abc-triple
/// predicate (`quality > 1`) is a separate query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcTriple {
    a: BigUint,
    b: BigUint,
    c: BigUint,
    fa: Factorization,
    fb: Factorization,
    fc: Factorization,
}

impl AbcTriple {
    /// Validates and normalizes a triple: the two summands may come in
    /// either order, but must be positive, distinct, coprime and sum to `c`.
    pub fn new(a: BigUint, b: BigUint, c: BigUint) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::ZeroInput {
                what: "triple part",
            });
        }
        if &a + &b != c {
            return Err(Error::SumMismatch { a, b, c });
        }
        if a == b {
            return Err(Error::EqualSummands);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let g = a.gcd(&b);
        if !g.is_one() {
            return Err(Error::CommonFactor { gcd: g });
        }
        let fa = factorize(&a)?;
        let fb = factorize(&b)?;
        let fc = factorize(&c)?;
        Ok(Self {
            a,
            b,
            c,
            fa,
            fb,
            fc,
        })
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(BigUint::from(a), BigUint::from(b), BigUint::from(c))
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    pub fn part_value(&self, part: Part) -> &BigUint {
        match part {
            Part::A => &self.a,
            Part::B => &self.b,
            Part::C => &self.c,
        }
    }

    pub fn factorization(&self, part: Part) -> &Factorization {
        match part {
            Part::A => &self.fa,
            Part::B => &self.fb,
            Part::C => &self.fc,
        }
    }

    pub fn log_c(&self) -> f64 {
        self.fc.log()
    }

    /// `ln rad(abc)`; the parts are coprime so their prime sets are disjoint.
    pub fn log_radical(&self) -> f64 {
        self.fa.log_radical() + self.fb.log_radical() + self.fc.log_radical()
    }

    pub fn radical(&self) -> BigUint {
        self.fa.radical() * self.fb.radical() * self.fc.radical()
    }

    /// `log c / log rad(abc)`.
    pub fn quality(&self) -> f64 {
        self.log_c() / self.log_radical()
    }

    /// The defining predicate: quality strictly above 1.
    pub fn is_abc_triple(&self) -> bool {
        self.quality() > 1.0
    }
}

impl fmt::Display for AbcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} = {}", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GainKind {
    Real,
    MultiplePadic,
    SinglePadic,
}

/// The argument achieving an extremal gain: the degree, the starred part
/// (absent for the real gain), the prime (single p-adic only) and the
/// enhanced radical itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainWitness {
    pub kind: GainKind,
    pub degree: u32,
    pub star: Option<Part>,
    pub prime: Option<BigUint>,
    pub enhanced_radical: BigUint,
}

/// All gain and power-gain values of a triple plus the witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    pub quality: f64,
    pub rag: f64,
    pub rpg: f64,
    pub mpag: f64,
    pub mpg: f64,
    pub sag: f64,
    pub spg: f64,
    pub cag: f64,
    pub cpg: f64,
    pub real: GainWitness,
    pub multiple: GainWitness,
    pub single: GainWitness,
}

// Degrees worth searching: beyond the largest exponent of the two split
// parts the enhanced radical stabilizes, so [2, D+1] covers everything,
// the D+1 slot being the stabilized value.
fn degree_range(f1: &Factorization, f2: &Factorization) -> RangeInclusive<u32> {
    let top = f1.max_exponent().max(f2.max_exponent()).max(1);
    2..=top + 1
}

/// `a * β * b' * γ * c'` where `b = β^d b'` and `c = γ^d c'` with `β`, `γ`
/// maximal.
pub fn real_enhanced_radical(t: &AbcTriple, d: u32) -> BigUint {
    t.a() * t.factorization(Part::B).split_product(d) * t.factorization(Part::C).split_product(d)
}

fn real_enhanced_radical_log(t: &AbcTriple, d: u32) -> f64 {
    t.factorization(Part::A).log()
        + t.factorization(Part::B).split_log(d)
        + t.factorization(Part::C).split_log(d)
}

/// d-th degree real approximation gain `log c / log rrad_d`.
pub fn rag_d(t: &AbcTriple, d: u32) -> f64 {
    t.log_c() / real_enhanced_radical_log(t, d)
}

/// d-th degree real power gain `log rrad_d / log rad(abc)`.
pub fn rpg_d(t: &AbcTriple, d: u32) -> f64 {
    real_enhanced_radical_log(t, d) / t.log_radical()
}

/// Extremal real gains: `rag = max_d rag_d`, `rpg = min_d rpg_d`; the same
/// degree attains both.
pub fn real_gain(t: &AbcTriple) -> (f64, f64, GainWitness) {
    let mut best: Option<(u32, BigUint)> = None;
    for d in degree_range(t.factorization(Part::B), t.factorization(Part::C)) {
        let radical = real_enhanced_radical(t, d);
        if best.as_ref().is_none_or(|(_, r)| radical < *r) {
            best = Some((d, radical));
        }
    }
    let (d, radical) = best.expect("degree range is never empty");
    let log = real_enhanced_radical_log(t, d);
    (
        t.log_c() / log,
        log / t.log_radical(),
        GainWitness {
            kind: GainKind::Real,
            degree: d,
            star: None,
            prime: None,
            enhanced_radical: radical,
        },
    )
}

/// `rad(a*) * β * b' * γ * c'` with the splits taken over the two non-star
/// parts. The product does not depend on the order of those two parts.
pub fn multiple_enhanced_radical(t: &AbcTriple, star: Part, d: u32) -> BigUint {
    Part::ALL.iter().fold(BigUint::from(1u32), |acc, &part| {
        let f = t.factorization(part);
        if part == star {
            acc * f.radical()
        } else {
            acc * f.split_product(d)
        }
    })
}

fn multiple_enhanced_radical_log(t: &AbcTriple, star: Part, d: u32) -> f64 {
    Part::ALL
        .iter()
        .map(|&part| {
            let f = t.factorization(part);
            if part == star {
                f.log_radical()
            } else {
                f.split_log(d)
            }
        })
        .sum()
}

/// Extremal multiple p-adic gains over every `(star, d)` choice.
pub fn multiple_padic_gain(t: &AbcTriple) -> (f64, f64, GainWitness) {
    let mut best: Option<(Part, u32, BigUint)> = None;
    for star in Part::ALL {
        let [x, y] = star.others();
        for d in degree_range(t.factorization(x), t.factorization(y)) {
            let radical = multiple_enhanced_radical(t, star, d);
            if best.as_ref().is_none_or(|(_, _, r)| radical < *r) {
                best = Some((star, d, radical));
            }
        }
    }
    let (star, d, radical) = best.expect("degree range is never empty");
    let log = multiple_enhanced_radical_log(t, star, d);
    (
        t.log_c() / log,
        log / t.log_radical(),
        GainWitness {
            kind: GainKind::MultiplePadic,
            degree: d,
            star: Some(star),
            prime: None,
            enhanced_radical: radical,
        },
    )
}

/// The part of the triple the prime `p` divides; by coprimality there is at
/// most one.
pub fn part_of_prime(t: &AbcTriple, p: &BigUint) -> Result<Part> {
    Part::ALL
        .into_iter()
        .find(|&part| t.factorization(part).exponent_of(p) > 0)
        .ok_or_else(|| Error::PrimeOutsideTriple { p: p.clone() })
}

/// `(a*/p^(e-1)) * β * b' * γ * c'` where `a*` is the part `p` divides with
/// exponent `e` and the splits are taken over the two other parts.
pub fn single_enhanced_radical(t: &AbcTriple, p: &BigUint, d: u32) -> Result<BigUint> {
    let star = part_of_prime(t, p)?;
    Ok(Part::ALL.iter().fold(BigUint::from(1u32), |acc, &part| {
        let f = t.factorization(part);
        if part == star {
            acc * f.reduce_prime_to_unit(p)
        } else {
            acc * f.split_product(d)
        }
    }))
}

fn single_enhanced_radical_log(t: &AbcTriple, star: Part, p: &BigUint, d: u32) -> f64 {
    Part::ALL
        .iter()
        .map(|&part| {
            let f = t.factorization(part);
            if part == star {
                f.reduce_prime_to_unit_log(p)
            } else {
                f.split_log(d)
            }
        })
        .sum()
}

/// Extremal single p-adic gains over every prime of `abc` and every degree.
pub fn single_padic_gain(t: &AbcTriple) -> (f64, f64, GainWitness) {
    let mut primes: Vec<(BigUint, Part)> = Vec::new();
    for part in Part::ALL {
        for (p, _) in t.factorization(part).entries() {
            primes.push((p.clone(), part));
        }
    }
    primes.sort();
    let mut best: Option<(BigUint, Part, u32, BigUint)> = None;
    for (p, star) in primes {
        let [x, y] = star.others();
        for d in degree_range(t.factorization(x), t.factorization(y)) {
            let radical = single_enhanced_radical(t, &p, d).expect("p divides its part");
            if best.as_ref().is_none_or(|(_, _, _, r)| radical < *r) {
                best = Some((p.clone(), star, d, radical));
            }
        }
    }
    let (p, star, d, radical) = best.expect("c >= 3 has at least one prime");
    let log = single_enhanced_radical_log(t, star, &p, d);
    (
        t.log_c() / log,
        log / t.log_radical(),
        GainWitness {
            kind: GainKind::SinglePadic,
            degree: d,
            star: Some(star),
            prime: Some(p),
            enhanced_radical: radical,
        },
    )
}

/// `cag = max(rag, sag)`, `cpg = min(rpg, spg)`; the same side wins both.
pub fn combined_gain(t: &AbcTriple) -> (f64, f64) {
    let (rag, rpg, rw) = real_gain(t);
    let (sag, spg, sw) = single_padic_gain(t);
    combine(rag, rpg, &rw, sag, spg, &sw)
}

fn combine(
    rag: f64,
    rpg: f64,
    rw: &GainWitness,
    sag: f64,
    spg: f64,
    sw: &GainWitness,
) -> (f64, f64) {
    // Smaller enhanced radical <=> larger gain; decided on integers.
    if rw.enhanced_radical <= sw.enhanced_radical {
        (rag, rpg)
    } else {
        (sag, spg)
    }
}

/// Every metric plus its witnesses, computed once.
pub fn full_report(t: &AbcTriple) -> GainReport {
    let quality = t.quality();
    let (rag, rpg, real) = real_gain(t);
    let (mpag, mpg, multiple) = multiple_padic_gain(t);
    let (sag, spg, single) = single_padic_gain(t);
    let (cag, cpg) = combine(rag, rpg, &real, sag, spg, &single);
    GainReport {
        quality,
        rag,
        rpg,
        mpag,
        mpg,
        sag,
        spg,
        cag,
        cpg,
        real,
        multiple,
        single,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn reyssat() -> AbcTriple {
        AbcTriple::new(big(2), big(3).pow(10) * big(109), big(23).pow(5)).unwrap()
    }

    // a = 3^2*7^3, b = 17^3, c = 2^6*5^3
    fn cube_example() -> AbcTriple {
        AbcTriple::from_u64(3087, 4913, 8000).unwrap()
    }

    fn assert_close(v: f64, expected: f64) {
        assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
    }

    #[test]
    fn make_triple_validation() {
        assert!(reyssat().is_abc_triple());

        let t = AbcTriple::from_u64(3, 2, 5).unwrap();
        assert_eq!(t.a(), &big(2));
        assert_eq!(t.b(), &big(3));

        assert_eq!(
            AbcTriple::from_u64(2, 4, 6),
            Err(Error::CommonFactor { gcd: big(2) })
        );
        assert_eq!(AbcTriple::from_u64(1, 1, 2), Err(Error::EqualSummands));
        assert!(matches!(
            AbcTriple::from_u64(2, 57395628, 6436343),
            Err(Error::SumMismatch { .. })
        ));
        assert!(matches!(
            AbcTriple::from_u64(0, 9, 9),
            Err(Error::ZeroInput { .. })
        ));
    }

    #[test]
    fn low_quality_triples_are_representable() {
        // p - 6, p + 6, 2p family: quality <= 1 but still a valid input.
        let t = AbcTriple::from_u64(7, 19, 26).unwrap();
        assert!(!t.is_abc_triple());
        let (rag, rpg, w) = real_gain(&t);
        assert_eq!(rag, t.quality());
        assert_eq!(rpg, 1.0);
        assert_eq!(w.degree, 2);
        assert_eq!(w.enhanced_radical, big(7 * 19 * 26));
        assert_close(t.quality(), 0.3998427027032748);
    }

    #[test]
    fn quality_goldens() {
        assert_close(reyssat().quality(), 1.6299116841270482);
        assert!((cube_example().quality() - 1.09863).abs() < 2e-5);
        let t = AbcTriple::from_u64(1, 8, 9).unwrap();
        assert_close(t.quality(), 1.226294385530917);
    }

    #[test]
    fn real_enhanced_radical_goldens() {
        let t = reyssat();
        assert_eq!(real_enhanced_radical(&t, 5), big(45126));
        assert_eq!(
            real_enhanced_radical(&t, 2),
            big(2) * big(3).pow(5) * big(23).pow(3) * big(109)
        );
        let t = AbcTriple::from_u64(1, 8, 9).unwrap();
        assert_eq!(real_enhanced_radical(&t, 2), big(12));
    }

    #[test]
    fn per_degree_gains_match_reyssat_records() {
        let t = reyssat();
        assert!((rag_d(&t, 5) - 1.46283).abs() < 2e-5);
        assert!((rpg_d(&t, 5) - 1.11421).abs() < 2e-5);
        assert!((rag_d(&t, 10) - 0.70744).abs() < 2e-5);
        assert!((rpg_d(&t, 10) - 2.30392).abs() < 2e-5);
        assert!((rag_d(&t, 11) - 0.48918).abs() < 2e-5);
        assert!((rpg_d(&t, 11) - 3.33188).abs() < 2e-5);
    }

    #[test]
    fn per_degree_product_identity() {
        let t = reyssat();
        for d in 2..=15 {
            assert!((rag_d(&t, d) * rpg_d(&t, d) - t.quality()).abs() < 1e-12);
        }
    }

    #[test]
    fn real_gain_witnesses() {
        let t = reyssat();
        let (rag, rpg, w) = real_gain(&t);
        assert!((rag - 1.46283).abs() < 2e-5);
        assert!((rpg - 1.11421).abs() < 2e-5);
        assert_eq!(w.degree, 5);
        assert_eq!(w.enhanced_radical, big(45126));

        let t = AbcTriple::new(big(1), big(2).pow(4) * big(5), big(3).pow(4)).unwrap();
        let (rag, rpg, w) = real_gain(&t);
        assert!((rag - 1.29203).abs() < 2e-5);
        assert_eq!(rpg, 1.0);
        assert_eq!(w.degree, 4);
    }

    #[test]
    fn stabilized_degree_gives_abc() {
        let t = reyssat();
        let abc = t.a() * t.b() * t.c();
        assert_eq!(real_enhanced_radical(&t, 11), abc);
        assert_eq!(real_enhanced_radical(&t, 40), abc);
    }

    #[test]
    fn multiple_enhanced_radical_goldens() {
        let t = cube_example();
        assert_eq!(multiple_enhanced_radical(&t, Part::A, 3), big(7140));
        assert_eq!(multiple_enhanced_radical(&t, Part::C, 3), big(10710));
        let r = reyssat();
        assert_eq!(multiple_enhanced_radical(&r, Part::B, 5), big(15042));
    }

    #[test]
    fn multiple_gain_goldens() {
        let (mpag, _, w) = multiple_padic_gain(&reyssat());
        assert!((mpag - 1.62991).abs() < 2e-5);
        // Ties with (c, 10); star order prefers b.
        assert_eq!(w.star, Some(Part::B));
        assert_eq!(w.degree, 5);

        let t = AbcTriple::new(big(1), big(2) * big(3).pow(7), big(5).pow(4) * big(7)).unwrap();
        let (mpag, _, _) = multiple_padic_gain(&t);
        assert!((mpag - 1.56788).abs() < 2e-5);

        let (mpag, _, w) = multiple_padic_gain(&cube_example());
        assert!((mpag - 1.01281).abs() < 2e-5);
        assert_eq!((w.star, w.degree), (Some(Part::A), 3));
    }

    #[test]
    fn single_enhanced_radical_goldens() {
        let t = cube_example();
        assert_eq!(single_enhanced_radical(&t, &big(7), 3).unwrap(), big(21420));
        assert_eq!(
            single_enhanced_radical(&t, &big(2), 3).unwrap(),
            big(267750)
        );
        assert_eq!(
            single_enhanced_radical(&t, &big(17), 3).unwrap(),
            big(21420)
        );
        assert_eq!(
            single_enhanced_radical(&t, &big(11), 3),
            Err(Error::PrimeOutsideTriple { p: big(11) })
        );
    }

    #[test]
    fn single_gain_goldens() {
        let (sag, _, w) = single_padic_gain(&reyssat());
        assert!((sag - 1.62991).abs() < 2e-5);
        // (p=3, d=5) ties with (p=23, d=10); smallest prime wins.
        assert_eq!(w.prime, Some(big(3)));
        assert_eq!(w.degree, 5);

        let (sag, _, w) = single_padic_gain(&cube_example());
        assert!((sag - 0.90123).abs() < 2e-5);
        // (7, 3) ties with (17, 3).
        assert_eq!(w.prime, Some(big(7)));

        // sag can sit well below the quality.
        let t = AbcTriple::new(big(7).pow(3), big(3).pow(10), big(2).pow(11) * big(29)).unwrap();
        let (sag, _, _) = single_padic_gain(&t);
        assert!((sag - 1.40956).abs() < 2e-5);
        assert!((t.quality() - 1.54707).abs() < 2e-5);
    }

    #[test]
    fn combined_gain_goldens() {
        let t = AbcTriple::new(
            BigUint::one(),
            big(2).pow(19) * big(5).pow(3) * big(4909).pow(3),
            big(11).pow(5) * big(31).pow(4) * big(43) * big(601) * big(2017),
        )
        .unwrap();
        let (rag, _, _) = real_gain(&t);
        let (sag, _, _) = single_padic_gain(&t);
        let (cag, _) = combined_gain(&t);
        assert!((rag - 0.92954).abs() < 2e-5);
        assert!((sag - 0.90325).abs() < 2e-5);
        assert_eq!(cag, rag);

        let (cag, _) = combined_gain(&reyssat());
        assert!((cag - 1.62991).abs() < 2e-5);

        let (cag, _) = combined_gain(&cube_example());
        assert!((cag - 0.90123).abs() < 2e-5);
    }

    #[test]
    fn full_report_goldens() {
        let r = full_report(&reyssat());
        assert!((r.quality - 1.62991).abs() < 2e-5);
        assert!((r.rag - 1.46283).abs() < 2e-5);
        assert!((r.rpg - 1.11421).abs() < 2e-5);
        assert!((r.mpag - 1.62991).abs() < 2e-5);
        assert!((r.sag - 1.62991).abs() < 2e-5);

        let t = AbcTriple::new(
            big(3) * big(11),
            big(2).pow(7) * big(5).pow(6),
            big(7).pow(6) * big(17),
        )
        .unwrap();
        let r = full_report(&t);
        assert!((r.rag - 1.28721).abs() < 2e-5);
        assert!((r.rpg - 1.06552).abs() < 2e-5);
        assert!((r.quality - 1.37156).abs() < 2e-5);

        let t = AbcTriple::new(
            big(2).pow(49),
            big(7).pow(7) * big(19).pow(3) * big(123499),
            big(3).pow(13) * big(5).pow(5) * big(503).pow(2),
        )
        .unwrap();
        let r = full_report(&t);
        assert!((r.rpg - 2.94376).abs() < 2e-5);
        assert!((r.rag - 0.45020).abs() < 2e-5);
        assert!((r.quality - 1.32528).abs() < 2e-5);
    }

    #[test]
    fn theorem_multiple_dominates_real() {
        // mrad_{a,d} <= rrad_d pointwise, so the multiple gain dominates.
        for (a, b, c) in [(1u64, 8, 9), (5, 27, 32), (3087, 4913, 8000), (7, 19, 26)] {
            let t = AbcTriple::from_u64(a, b, c).unwrap();
            let r = full_report(&t);
            assert!(r.multiple.enhanced_radical <= r.real.enhanced_radical);
            assert!(r.mpag >= r.rag - 1e-12);
        }
    }

    #[test]
    fn permutation_order_independence() {
        // The two non-star parts enter the product symmetrically.
        let t = cube_example();
        for star in Part::ALL {
            let [x, y] = star.others();
            for d in 2..=8 {
                let forward =
                    t.factorization(x).split_product(d) * t.factorization(y).split_product(d);
                let backward =
                    t.factorization(y).split_product(d) * t.factorization(x).split_product(d);
                assert_eq!(forward, backward);
                let full = multiple_enhanced_radical(&t, star, d);
                assert_eq!(full, t.factorization(star).radical() * forward);
            }
        }
    }
}
