//! Criterion benchmarks for the torstab analysis pipeline; see `benches/`.
