//! Verification pipelines, report documents and configuration for the
//! `k3mahler` command-line tool.

pub mod config;
pub mod pipeline;
pub mod report;
