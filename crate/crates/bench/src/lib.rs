//! Benchmarks live in `benches/core_ops.rs`; run them with `cargo bench -p geofix-bench`.
