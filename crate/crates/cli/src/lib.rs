//! Command-line front end: file formats, JSON documents and subcommands.

pub mod commands;
pub mod doc;
pub mod input;

pub use commands::{cmd_axiom, cmd_recheck, cmd_reproduce, cmd_table, cmd_tally, AxiomArgs, Output};
pub use doc::VerdictDoc;
pub use input::{parse_profile, render_profile, ProfileFile, RuleConfig};
