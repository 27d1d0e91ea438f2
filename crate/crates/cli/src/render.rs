//! Output assembly: 17-significant-digit number formatting, minimal CSV
//! writing, and the file-or-stdout sink. Everything is built as one string
//! and written in a single call, so identical configurations produce
//! byte-identical outputs.

use std::fmt;
use std::fs;
use std::path::Path;

use hardy_chsh::frame::DegenerateGeometry;
use hardy_chsh::Error;

/// Command failures carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed grids, unwritable outputs: exit 1.
    Config(String),
    /// Parameter point where the construction only exists as a limit: exit 2.
    Degenerate(String),
    /// Verification suites reported failing checks: exit 3.
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Degenerate(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "error: {msg}"),
            CliError::Degenerate(msg) => write!(f, "degenerate: {msg}"),
            CliError::Verification(failures) => {
                write!(f, "verification failed: {failures} checks out of tolerance")
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::DegenerateGeometry(kind) => CliError::Degenerate(kind.to_string()),
            Error::DegenerateDirection { .. } | Error::ConditioningOnNullEvent { .. } => {
                CliError::Degenerate(err.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

pub fn degenerate(kind: DegenerateGeometry) -> CliError {
    CliError::Degenerate(kind.to_string())
}

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV document under assembly. Fields are quoted only when they contain
/// a delimiter, so numeric output stays clean.
#[derive(Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new() -> Self {
        Csv::default()
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let mut first = true;
        for field in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            let raw = field.as_ref();
            if raw.contains([',', '"', '\n']) {
                self.text.push('"');
                self.text.push_str(&raw.replace('"', "\"\""));
                self.text.push('"');
            } else {
                self.text.push_str(raw);
            }
        }
        self.text.push('\n');
    }

    /// Separator between blocks of different schema.
    pub fn blank(&mut self) {
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Writes to the path when given, stdout otherwise.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|err| CliError::Config(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips_exactly() {
        for x in [0.1, 2.0 / 3.0, 5.0f64.sqrt(), 6.02e23, -13.0 / 14.0] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_quotes_only_fields_with_delimiters() {
        let mut csv = Csv::new();
        csv.row(&["concurrence", "subset"]);
        csv.row(&["0.5", "qt,qs"]);
        assert_eq!(csv.finish(), "concurrence,subset\n0.5,\"qt,qs\"\n");
    }
}
