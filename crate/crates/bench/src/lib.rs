//! Criterion benchmarks for darbouxlie; see `benches/verification.rs`.
