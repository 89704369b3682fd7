use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Lower and upper winding numbers mapped to black and white in field images.
pub const IMAGE_RANGE: (f64, f64) = (-2.0, 2.0);

pub struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn open(&mut self, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        log::debug!("writing {}", path.display());
        self.written.push(path.clone());
        Ok((path, BufWriter::new(file)))
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<(), CliError> {
        let (path, file) = self.open(name)?;
        let mut w = csv::Writer::from_writer(file);
        for row in rows {
            w.serialize(row).map_err(|e| CliError::csv(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let (path, mut file) = self.open(name)?;
        serde_json::to_writer_pretty(&mut file, value).map_err(|e| CliError::io(&path, e.into()))?;
        writeln!(file).and_then(|_| file.flush()).map_err(|e| CliError::io(&path, e))
    }

    pub fn with_writer(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let (path, mut file) = self.open(name)?;
        f(&mut file).and_then(|_| file.flush()).map_err(|e| CliError::io(&path, e))
    }
}

/// Binary 16-bit graymap, big-endian samples, rows in grid order.
pub fn write_pgm(out: &mut impl Write, values: &[f64], nx: usize, ny: usize) -> std::io::Result<()> {
    let (lo, hi) = IMAGE_RANGE;
    write!(
        out,
        "P5\n# winding number, linear from {lo} (black) to {hi} (white), clamped; first row is the lowest y\n{nx} {ny}\n65535\n"
    )?;
    let mut bytes = Vec::with_capacity(values.len() * 2);
    for &w in values {
        let t = ((w - lo) / (hi - lo)).clamp(0.0, 1.0);
        let level = (t * 65535.0).round() as u16;
        bytes.extend_from_slice(&level.to_be_bytes());
    }
    out.write_all(&bytes)
}
