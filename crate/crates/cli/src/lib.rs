//! Library side of the `hecke-ce` command-line tool: acceptance checks and
//! output rendering.

pub mod checks;
pub mod output;
