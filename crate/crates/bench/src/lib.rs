//! Criterion benchmarks for the enumeration-heavy pipelines; see `benches/`.
