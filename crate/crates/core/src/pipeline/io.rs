use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::compile::CompiledFields;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFormat {
    /// JSON header plus a raw f64 little-endian payload.
    #[default]
    Binary,
    /// JSON header plus CSV rows t, x, j1, j2.
    Csv,
}

/// Header written next to the payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub format_version: u32,
    pub format: FieldFormat,
    pub units: String,
    /// Binary: J₁ block then J₂ block, each t-major (x fastest).
    pub payload_layout: String,
    pub payload: String,
    pub payload_sha256: String,
    pub compiled: CompiledFields,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    pub time_samples: usize,
    pub space_samples: usize,
    /// t-major, x fastest.
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
}

impl FieldData {
    pub fn j1_at(&self, k: usize, i: usize) -> f64 {
        self.j1[k * self.space_samples + i]
    }

    pub fn j2_at(&self, k: usize, i: usize) -> f64 {
        self.j2[k * self.space_samples + i]
    }
}

/// Every sample of J₁ and J₂.
pub fn materialize(compiled: &CompiledFields) -> FieldData {
    let g = compiled.grid;
    let mut j1 = Vec::with_capacity(g.time_samples * g.space_samples);
    let mut j2 = Vec::with_capacity(g.time_samples * g.space_samples);
    for k in 0..g.time_samples {
        j1.extend(compiled.j1_row(k));
        j2.extend(compiled.j2_row(k));
    }
    FieldData {
        time_samples: g.time_samples,
        space_samples: g.space_samples,
        j1,
        j2,
    }
}

struct HashingWriter<W: Write> {
    inner: W,
    hash: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hash.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

/// Stream the fields to `<dir>/<stem>.bin` (or `.csv`) and write the header to
/// `<dir>/<stem>.json`. Returns the header path.
pub fn write_fields(compiled: &CompiledFields, dir: &Path, stem: &str, format: FieldFormat) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let g = compiled.grid;
    let payload = match format {
        FieldFormat::Binary => format!("{stem}.bin"),
        FieldFormat::Csv => format!("{stem}.csv"),
    };
    let mut out = HashingWriter {
        inner: BufWriter::new(File::create(dir.join(&payload))?),
        hash: Sha256::new(),
    };
    match format {
        FieldFormat::Binary => {
            for rows in [0, 1] {
                for k in 0..g.time_samples {
                    let row = if rows == 0 { compiled.j1_row(k) } else { compiled.j2_row(k) };
                    for v in row {
                        out.write_all(&v.to_le_bytes())?;
                    }
                }
            }
        }
        FieldFormat::Csv => {
            writeln!(out, "t,x,j1,j2")?;
            for k in 0..g.time_samples {
                let t = g.time(k);
                let (a, b) = (compiled.j1_row(k), compiled.j2_row(k));
                for i in 0..g.space_samples {
                    // Display prints the shortest representation that round-trips
                    writeln!(out, "{},{},{},{}", t, g.position(i), a[i], b[i])?;
                }
            }
        }
    }
    out.flush()?;
    let header = FieldHeader {
        format_version: FORMAT_VERSION,
        format,
        units: format!("m = {} (ħ = c = 1)", compiled.config.mass),
        payload_layout: match format {
            FieldFormat::Binary => "f64 little-endian; J1 block then J2 block; each t-major with x fastest".into(),
            FieldFormat::Csv => "rows t,x,j1,j2; t-major with x fastest".into(),
        },
        payload,
        payload_sha256: hex::encode(out.hash.finalize()),
        compiled: compiled.clone(),
    };
    let path = dir.join(format!("{stem}.json"));
    serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), &header)?;
    Ok(path)
}

pub fn read_header(path: &Path) -> Result<FieldHeader> {
    let h: FieldHeader = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    if h.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported field format version {}", h.format_version)));
    }
    Ok(h)
}

/// Load the payload named by the header at `path`, checking its digest.
pub fn read_fields(path: &Path) -> Result<(FieldHeader, FieldData)> {
    let header = read_header(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut bytes = Vec::new();
    File::open(dir.join(&header.payload))?.read_to_end(&mut bytes)?;
    let digest = hex::encode(Sha256::digest(&bytes));
    if digest != header.payload_sha256 {
        return Err(Error::Format("payload digest does not match header".into()));
    }
    let g = header.compiled.grid;
    let count = g.time_samples * g.space_samples;
    let (j1, j2) = match header.format {
        FieldFormat::Binary => {
            if bytes.len() != 16 * count {
                return Err(Error::Format(format!("payload has {} bytes, expected {}", bytes.len(), 16 * count)));
            }
            let values: Vec<f64> = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            let (a, b) = values.split_at(count);
            (a.to_vec(), b.to_vec())
        }
        FieldFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(bytes.as_slice());
            let mut j1 = Vec::with_capacity(count);
            let mut j2 = Vec::with_capacity(count);
            for rec in rdr.records() {
                let rec = rec?;
                let parse = |i: usize| -> Result<f64> {
                    rec.get(i)
                        .ok_or_else(|| Error::Format("short CSV row".into()))?
                        .parse::<f64>()
                        .map_err(|e| Error::Format(e.to_string()))
                };
                j1.push(parse(2)?);
                j2.push(parse(3)?);
            }
            if j1.len() != count {
                return Err(Error::Format(format!("CSV has {} rows, expected {count}", j1.len())));
            }
            (j1, j2)
        }
    };
    Ok((
        header,
        FieldData {
            time_samples: g.time_samples,
            space_samples: g.space_samples,
            j1,
            j2,
        },
    ))
}
