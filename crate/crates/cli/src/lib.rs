//! Command-line front end and the fixture runner.

pub mod app;
pub mod checks;
