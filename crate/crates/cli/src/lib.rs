//! File formats, verification reports and the `selfaffine` command line on
//! top of `selfaffine-core`.

pub mod app;
pub mod formats;
pub mod report;

pub use app::{run, Cli};
