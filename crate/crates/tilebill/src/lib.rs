//! IO, command line, SVG rendering and the session server for
//! [`tilebill_core`].

pub mod cli;
pub mod io;
pub mod render;
pub mod session;

pub use tilebill_core as core;
