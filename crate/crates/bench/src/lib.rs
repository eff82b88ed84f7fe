//! Benchmarks for the qcong workspace live under `benches/`.
