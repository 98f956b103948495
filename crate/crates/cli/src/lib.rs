//! Library backing the `wpls` command-line tool: benchmark harness, command
//! implementations, and their error-to-exit-code mapping.

pub mod bench;
pub mod commands;
