//! Criterion benchmarks for field arithmetic and the permutation oracles;
//! see benches/.
