//! Criterion benchmarks for `war-core`; see `benches/`.
