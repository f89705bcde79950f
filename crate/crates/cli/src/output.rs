//! CSV output: header row, `,` separator, `.` decimals, LF line endings.

use crate::CliError;

pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header.iter().map(|h| h.as_ref()))?;
        Ok(Table { writer })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> Result<(), CliError> {
        self.writer.write_record(fields.iter().map(|f| f.as_ref()))?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        self.writer
            .into_inner()
            .map_err(|e| CliError::Input(format!("csv buffer: {}", e.error())))
    }
}

/// Shortest representation that parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x}")
}
