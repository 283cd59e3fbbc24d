//! Benchmark-only crate; see `benches/core_paths.rs`.
