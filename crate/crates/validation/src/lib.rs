//! Home of the `acceptance` test target; no library code.
//!
//! Kept as its own package so that a failing criterion does not stop cargo
//! before the other packages' tests have run.
