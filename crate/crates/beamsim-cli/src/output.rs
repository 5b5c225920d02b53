//! Deterministic CSV/JSON emission with per-file checksums.
//!
//! Floats are serialized with 17 significant digits so a double-precision
//! value round-trips exactly; files are UTF-8 with LF line endings.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::errors::CliError;

/// 17-significant-digit scientific notation (exact f64 round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub fn fmt_deg(radians: f64) -> String {
    fmt_f64(radians.to_degrees())
}

/// Checksum entry for one emitted file.
#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Writes `prefix`-derived files and records their checksums for the manifest.
pub struct OutputWriter {
    prefix: String,
    files: Vec<OutputFile>,
}

impl OutputWriter {
    pub fn new(prefix: &str) -> Result<Self, CliError> {
        if let Some(parent) = Path::new(prefix).parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        Ok(Self {
            prefix: prefix.to_string(),
            files: Vec::new(),
        })
    }

    pub fn path_for(&self, suffix: &str) -> PathBuf {
        PathBuf::from(format!("{}.{suffix}", self.prefix))
    }

    /// Writes one output file and records its checksum.
    pub fn write(&mut self, suffix: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.path_for(suffix);
        std::fs::write(&path, contents)?;
        let digest = Sha256::digest(contents.as_bytes());
        self.files.push(OutputFile {
            path: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            sha256: hex_string(&digest),
            bytes: contents.len(),
        });
        Ok(path)
    }

    pub fn files(&self) -> &[OutputFile] {
        &self.files
    }
}

/// Simple CSV assembly: header plus rows, LF-terminated.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut buf = String::new();
        buf.push_str(header);
        buf.push('\n');
        Self { buf }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.buf.push(',');
            }
            self.buf.push_str(cell.as_ref());
            first = false;
        }
        self.buf.push('\n');
    }

    /// Appends a `# key = value` footer line.
    pub fn footer(&mut self, key: &str, value: &str) {
        self.buf.push_str("# ");
        self.buf.push_str(key);
        self.buf.push_str(" = ");
        self.buf.push_str(value);
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
