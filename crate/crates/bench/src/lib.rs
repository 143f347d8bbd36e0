//! Criterion benchmarks for `dfqkd-core`; see `benches/`.
