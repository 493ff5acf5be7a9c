//! Criterion benchmarks for fapkit live in `benches/`.
