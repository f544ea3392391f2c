//! Where results go: JSON lines on stdout, or files under `--out`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> Result<Self, CliError> {
        if let Some(d) = dir {
            fs::create_dir_all(d)?;
        }
        Ok(Sink {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// One JSON object per line, to `<dir>/<name>.jsonl` or stdout.
    pub fn jsonl<T: Serialize>(&self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let mut out = self.writer(&format!("{name}.jsonl"))?;
        for row in rows {
            serde_json::to_writer(&mut out, row)?;
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    /// A single document: pretty-printed in a file, one line on stdout.
    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut out = self.writer(&format!("{name}.json"))?;
        if self.dir.is_some() {
            serde_json::to_writer_pretty(&mut out, value)?;
        } else {
            serde_json::to_writer(&mut out, value)?;
        }
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }

    pub fn writer(&self, file: &str) -> io::Result<Box<dyn Write>> {
        Ok(match &self.dir {
            Some(d) => Box::new(BufWriter::new(File::create(d.join(file))?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}
