//! Criterion benchmarks for counting and search; see `benches/`.
