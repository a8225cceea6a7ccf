//! Std companion to `sboxlab-core`: Sbox and report file formats, CSV
//! export, a threaded search driver and the `sboxlab` command-line tool.

pub mod cli;
pub mod csv;
pub mod format;
pub mod parallel;
pub mod report;

pub use format::{parse_sbox, write_sbox, FormatError};
