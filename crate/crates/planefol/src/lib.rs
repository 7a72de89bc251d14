//! Reports, catalog, phase portraits and the command line for plane
//! polynomial foliations, on top of the exact algebra in `planefol-core`.

pub mod catalog;
pub mod cli;
pub mod config;
pub mod json;
pub mod portrait;

pub use planefol_core as core;
