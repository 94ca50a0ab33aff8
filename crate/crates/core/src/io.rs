//! File formats read and written by the command-line tool.
//!
//! Matrices are JSON arrays of rows, each entry a `[re, im]` pair. Floats are
//! written in shortest round-trip form and parsed exactly, so writing a state
//! and reading it back reproduces every bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{validate_channel, QuantumChannel, DEFAULT_CHANNEL_TOL};
use crate::classical::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{validate_density, BipartiteState, DEFAULT_STATE_TOL};

/// Version of the on-disk formats, reported by `--version`.
pub const FORMAT_VERSION: u32 = 1;

type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixRows>,
}

pub fn matrix_to_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let parsed: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    if parsed.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    ComplexMatrix::from_rows(&parsed)
}

impl StateFile {
    pub fn from_state(rho: &BipartiteState) -> Self {
        Self {
            dim_a: rho.dim_a(),
            dim_b: rho.dim_b(),
            matrix: matrix_to_rows(rho.matrix()),
            tol: None,
        }
    }

    /// Validates the matrix as a density operator on `C^{dim_a} ⊗ C^{dim_b}`,
    /// using `tol` when present.
    pub fn into_state(self) -> Result<BipartiteState> {
        let m = matrix_from_rows(&self.matrix)?;
        let n = self.dim_a * self.dim_b;
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims ({}, {})",
                m.rows(),
                m.cols(),
                self.dim_a,
                self.dim_b
            )));
        }
        validate_density(m, (self.dim_a, self.dim_b), self.tol.unwrap_or(DEFAULT_STATE_TOL))
    }
}

impl ChannelFile {
    pub fn from_channel(channel: &QuantumChannel) -> Self {
        Self {
            dim_in: channel.dim_in(),
            dim_out: channel.dim_out(),
            kraus: channel.kraus().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn into_channel(self) -> Result<QuantumChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(|k| matrix_from_rows(k))
            .collect::<Result<Vec<_>>>()?;
        let channel = validate_channel(kraus, DEFAULT_CHANNEL_TOL)?;
        if (channel.dim_in(), channel.dim_out()) != (self.dim_in, self.dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "kraus operators map {} -> {}, file declares {} -> {}",
                channel.dim_in(),
                channel.dim_out(),
                self.dim_in,
                self.dim_out
            )));
        }
        Ok(channel)
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_state(text: &str) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

pub fn state_to_json(rho: &BipartiteState) -> String {
    serde_json::to_string(&StateFile::from_state(rho)).expect("state serializes")
}

pub fn read_state(path: &Path) -> Result<BipartiteState> {
    parse_state(&read_text(path)?)
}

pub fn write_state(path: &Path, rho: &BipartiteState) -> Result<()> {
    write_text(path, &state_to_json(rho))
}

pub fn parse_channel(text: &str) -> Result<QuantumChannel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_channel()
}

pub fn channel_to_json(channel: &QuantumChannel) -> String {
    serde_json::to_string(&ChannelFile::from_channel(channel)).expect("channel serializes")
}

pub fn read_channel(path: &Path) -> Result<QuantumChannel> {
    parse_channel(&read_text(path)?)
}

pub fn write_channel(path: &Path, channel: &QuantumChannel) -> Result<()> {
    write_text(path, &channel_to_json(channel))
}

/// One row per outcome of A, one column per outcome of B, no header.
pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: `{field}` is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("distribution file is empty".into()));
    }
    JointDistribution::from_rows(&rows)
}

pub fn distribution_to_csv(p: &JointDistribution) -> String {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for row in p.to_rows() {
        writer
            .write_record(row.iter().map(|x| x.to_string()))
            .expect("writing to memory succeeds");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("ascii output")
}

pub fn read_distribution(path: &Path) -> Result<JointDistribution> {
    parse_distribution(&read_text(path)?)
}

pub fn write_distribution(path: &Path, p: &JointDistribution) -> Result<()> {
    write_text(path, &distribution_to_csv(p))
}
