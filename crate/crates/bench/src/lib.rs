//! Benchmark-only crate; see `benches/gains.rs`.
