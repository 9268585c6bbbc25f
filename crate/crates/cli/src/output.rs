use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Provenance block written at the top of every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub gamma: f64,
    pub quantizer_levels: usize,
    pub full_scale: f64,
    pub fs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Metadata {
    fn comment_lines(&self) -> Vec<String> {
        let mut v = vec![
            format!("# tool: {} {}", self.tool, self.version),
            format!("# config_sha256: {}", self.config_sha256),
            format!("# gamma: {}", self.gamma),
            format!("# quantizer_levels: {}", self.quantizer_levels),
            format!("# full_scale_v: {}", self.full_scale),
            format!("# fs_hz: {}", self.fs),
        ];
        if let Some(s) = self.seed {
            v.push(format!("# seed: {s}"));
        }
        v
    }
}

pub struct Output {
    dir: PathBuf,
    meta: Metadata,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Output {
    pub fn new(dir: &Path, meta: Metadata) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            meta,
        })
    }

    fn create(&self, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(io_err(&path))?;
        Ok((path, BufWriter::new(file)))
    }

    /// CSV preceded by `#` metadata lines.
    pub fn csv<I>(&self, name: &str, header: &[String], rows: I) -> Result<PathBuf, CliError>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let (path, mut w) = self.create(name)?;
        let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
            for line in self.meta.comment_lines() {
                writeln!(w, "{line}")?;
            }
            let mut c = csv::Writer::from_writer(w);
            c.write_record(header)?;
            for r in rows {
                c.write_record(&r)?;
            }
            c.flush()
        };
        write(&mut w).map_err(io_err(&path))?;
        Ok(path)
    }

    /// CSV body produced by `body`, preceded by `#` metadata lines.
    pub fn csv_with<F>(&self, name: &str, body: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let (path, mut w) = self.create(name)?;
        let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
            for line in self.meta.comment_lines() {
                writeln!(w, "{line}")?;
            }
            body(w)?;
            w.flush()
        };
        write(&mut w).map_err(io_err(&path))?;
        Ok(path)
    }

    /// Pretty JSON object with the metadata under `"metadata"` and the
    /// payload's fields alongside it.
    pub fn json<T: Serialize>(&self, name: &str, payload: &T) -> Result<PathBuf, CliError> {
        #[derive(Serialize)]
        struct Doc<'a, T> {
            #[serde(flatten)]
            payload: &'a T,
            metadata: &'a Metadata,
        }
        let (path, mut w) = self.create(name)?;
        let doc = Doc {
            payload,
            metadata: &self.meta,
        };
        let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
            w.flush()
        };
        write(&mut w).map_err(io_err(&path))?;
        Ok(path)
    }
}

/// Single-column stream with a header row.
pub fn stream_rows(values: &[f64]) -> impl Iterator<Item = Vec<String>> + '_ {
    values.iter().map(|v| vec![v.to_string()])
}
