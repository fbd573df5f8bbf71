//! Batch front end for the subbergman toolkit: job descriptions in, report
//! envelopes out. The binary target wraps [`run::run`] with flag parsing and
//! exit-code handling; everything observable lives here so tests can drive
//! it directly.

pub mod acceptance;
pub mod job;
pub mod report;
pub mod run;
