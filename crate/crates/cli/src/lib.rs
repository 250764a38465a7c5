//! Batch experiment runner and subcommands for the `lacuna` binary.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod experiments;
pub mod manifest;
pub mod table;

pub use config::{ExperimentConfig, ValidationError};
pub use experiments::run;
pub use manifest::RunManifest;

/// 2 for bad input, 3 for numerical failure, 1 for anything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<ValidationError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<lacuna::Error>() {
            return if e.is_numerical() { 3 } else { 2 };
        }
    }
    1
}
