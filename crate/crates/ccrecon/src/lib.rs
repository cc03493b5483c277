//! Std companion of `ccrecon-core`: graph files, transcript JSON, the
//! independent verification oracle, summary tables and the command line.

pub mod cli;
pub mod graph_file;
pub mod oracle;
pub mod report;
pub mod transcript_json;
