//! Benchmarks for the mutation engine live under `benches/`.
