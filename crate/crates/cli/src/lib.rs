//! Library surface of the command-line front end: the file formats and the
//! error type, shared between the binary and its integration tests.

pub mod io;

use std::fmt;

#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<ctrlqual::Error> for CliError {
    fn from(e: ctrlqual::Error) -> Self {
        Self(e.to_string())
    }
}
