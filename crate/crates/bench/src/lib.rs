//! Benchmarks for the core kernels live in `benches/`.

pub use frobenius_core;
