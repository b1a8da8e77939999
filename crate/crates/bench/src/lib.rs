//! Holds no code; the kernel benchmarks are under `benches/`.
