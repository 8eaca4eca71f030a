//! Library side of the `zomega` binary, split out so the integration tests
//! can drive runs without spawning a process.

pub mod config;
pub mod report;
pub mod run;
