//! Library surface of the `envcert` front end: problem-file ingestion and
//! report/plot output, shared by the binary and the test suites.

pub mod output;
pub mod problem;
