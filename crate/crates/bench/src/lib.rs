//! Criterion benchmarks for the conelab kernels; see `benches/`.
