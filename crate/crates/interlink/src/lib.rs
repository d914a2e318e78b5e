//! Documents, DOT export and the `interlink` command line on top of
//! [`interlink_core`].

pub mod cli;
pub mod dot;
pub mod io;

pub use dot::export_dot;
pub use io::{
    emit_instance, emit_report, parse_instance, parse_instance_with_warnings, parse_links,
    parse_report, DocumentError, ParsedInstance,
};
