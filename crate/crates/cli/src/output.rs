use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::args::Format;
use crate::CliError;

/// Formats a float so that it round-trips and always shows a decimal point.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Header-bearing table, written once the command has finished.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: Option<&Path>, format: Format) -> Result<(), CliError> {
        let sink: Box<dyn Write> = match out {
            Some(p) => Box::new(
                File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
            ),
            None => Box::new(io::stdout().lock()),
        };
        let delimiter = match format {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        };
        let mut w = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(sink);
        let io_err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_err)?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Prints a one-line summary; to stderr when the table itself goes to stdout.
pub fn summary(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}
