//! Criterion benchmarks for `mqg-core`; see `benches/mqg.rs`.
