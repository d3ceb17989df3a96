//! Front end for `ssr-sim`: the verification suite, sweep tables and state
//! inspection.

pub mod commands;
pub mod report;
pub mod suite;
pub mod table;
