//! Criterion benchmarks for `spohn-core`; see `benches/`.
