//! Criterion benchmarks for the `schatten` kernels live in `benches/`.
