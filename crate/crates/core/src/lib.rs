//! Approximation-gain and power-gain analysis for abc-triples.
//!
//! The quality of a coprime triple `a + b = c` is
//! `log c / log rad(abc)`. This crate splits that quality into a product
//! `gain * power gain` for a family of "enhanced radicals": the real gain
//! (maximal d-th powers extracted from `b` and `c`), the multiple p-adic
//! gain (one part reduced to its radical), the single p-adic gain (one
//! prime power removed) and their combination. Each gain is explained by a
//! rational approximation to a surd, found via continued fractions in the
//! real case and via two-dimensional approximation lattices in the p-adic
//! case.
//!
//! The crate also enumerates abc-triples below a bound with a radical
//! sieve and drives a batch reporting pipeline (CSV reports, top-k
//! selection criteria, histograms and scatter data).

pub mod arith;
pub mod enumerate;
pub mod error;
pub mod gains;
pub mod padic;
pub mod report;
pub mod surd;

pub use arith::Factorization;
pub use error::{Error, Result};
pub use gains::{AbcTriple, GainKind, GainReport, GainWitness, Part};
pub use padic::{PadicApproximation, Residue, SurdExplanation};
pub use report::{ReportCriteria, ReportRow};
