//! Front end for `rif-core`: expression parsing, named examples, settings,
//! JSON reports and the `rif-lab` command dispatcher.

pub mod app;
pub mod config;
pub mod parse;
pub mod registry;
pub mod report;
