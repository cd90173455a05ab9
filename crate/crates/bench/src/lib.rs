//! Criterion benchmarks for the sampling, core and restriction pipeline.
