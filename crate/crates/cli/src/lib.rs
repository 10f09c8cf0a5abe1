//! Command-file front end: parse `.loom` documents, run their checks and
//! report the results as JSON or text.

pub mod printer;
pub mod render;
pub mod runner;
pub mod syntax;

pub use printer::format_document;
pub use render::render_text;
pub use runner::{run, RunOptions, SCHEMA_VERSION};
pub use syntax::{parse, Diagnostic, Document, Severity, DIAGNOSTIC_CODES};
