//! Criterion benchmarks for `coupon-core` live under `benches/`.
