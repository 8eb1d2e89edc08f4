//! Criterion benchmarks for dynet-core; see `benches/`.
