//! Criterion benchmarks for the geometry kernels live under `benches/`.
