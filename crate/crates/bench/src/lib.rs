//! Criterion benchmarks for hypermotif live under `benches/`.
