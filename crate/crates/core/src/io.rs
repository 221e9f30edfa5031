//! On-disk formats.
//!
//! CField, version 1: 8-byte magic "CFLD0001", a little-endian u32 length
//! prefix, a UTF-8 JSON header, then the payload as little-endian IEEE-754
//! double pairs (re, im), point-major, blade-minor, row-major over axes.
//! A pure-JSON variant (the same header object plus a nested "data" array)
//! is accepted for fields of at most 10^5 complex numbers.
//!
//! CWT tensors: magic "CWTT0001", the same header scheme carrying scales,
//! weights, spin nodes (blade coefficients) and the translation-grid header,
//! with the payload laid out as one CField payload per (scale, spin).
//!
//! All writes go through a write-temp-then-rename so a crash never leaves a
//! half-written file behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cwt::{CwtGrid, CwtTensor};
use crate::error::{CliffError, Result};
use crate::grid::{CliffordField, Domain, GridSpec};
use crate::spin::{SpinQuadrature, Spinor};

pub const CFIELD_MAGIC: &[u8; 8] = b"CFLD0001";
pub const CWTT_MAGIC: &[u8; 8] = b"CWTT0001";

/// Largest field stored in the pure-JSON variant: 10^5 complex numbers.
pub const JSON_FIELD_LIMIT: usize = 100_000;

const ORDER: &str = "point-major, blade-minor, row-major";

#[derive(Debug, Serialize, Deserialize)]
struct FieldHeader {
    n: usize,
    shape: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    blades: usize,
    dtype: String,
    order: String,
    domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<Vec<Vec<[f64; 2]>>>,
}

impl FieldHeader {
    fn of(field: &CliffordField) -> FieldHeader {
        FieldHeader {
            n: field.dim(),
            shape: field.grid().shape().to_vec(),
            spacing: field.grid().spacing().to_vec(),
            origin: field.grid().origin().to_vec(),
            blades: field.blades(),
            dtype: "c128".into(),
            order: ORDER.into(),
            domain: match field.domain() {
                Domain::Space => "space".into(),
                Domain::Frequency => "frequency".into(),
            },
            data: None,
        }
    }

    fn validate(&self) -> Result<(GridSpec, Domain)> {
        if self.dtype != "c128" {
            return Err(format_err(8, format!("unsupported dtype '{}'", self.dtype)));
        }
        if self.blades != 1 << self.n {
            return Err(format_err(
                8,
                format!("blades = {} does not equal 2^{}", self.blades, self.n),
            ));
        }
        if self.order != ORDER {
            return Err(format_err(8, format!("unsupported order '{}'", self.order)));
        }
        let domain = match self.domain.as_str() {
            "space" => Domain::Space,
            "frequency" => Domain::Frequency,
            other => return Err(format_err(8, format!("unknown domain '{other}'"))),
        };
        let grid = GridSpec::new(self.shape.clone(), self.spacing.clone(), self.origin.clone())?;
        if self.shape.len() != self.n {
            return Err(format_err(8, "shape length does not match n".into()));
        }
        Ok((grid, domain))
    }
}

fn format_err(offset: u64, message: String) -> CliffError {
    CliffError::FileFormat { offset, message }
}

/// Atomic file write: temp file in the target directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile_in(dir)?;
    tmp.1.write_all(bytes)?;
    tmp.1.sync_all()?;
    drop(tmp.1);
    fs::rename(&tmp.0, path)?;
    Ok(())
}

fn tempfile_in(dir: &Path) -> Result<(std::path::PathBuf, fs::File)> {
    // nanosecond suffix avoids collisions between concurrent writers
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let path = dir.join(format!(".cliffwave-tmp-{}-{stamp}", std::process::id()));
    let file = fs::File::create(&path)?;
    Ok((path, file))
}

fn push_payload(out: &mut Vec<u8>, data: &[Complex64]) {
    out.reserve(data.len() * 16);
    for c in data {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
}

fn parse_payload(bytes: &[u8], offset: usize, count: usize) -> Result<Vec<Complex64>> {
    let need = count * 16;
    if bytes.len() < offset + need {
        return Err(format_err(
            bytes.len() as u64,
            format!(
                "payload truncated: need {} bytes from offset {offset}, file has {}",
                need,
                bytes.len()
            ),
        ));
    }
    let mut data = Vec::with_capacity(count);
    let mut at = offset;
    for _ in 0..count {
        let re = f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let im = f64::from_le_bytes(bytes[at + 8..at + 16].try_into().unwrap());
        data.push(Complex64::new(re, im));
        at += 16;
    }
    Ok(data)
}

fn encode_with_header(magic: &[u8; 8], header_json: &[u8], payload: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + header_json.len() + payload.len() * 16);
    out.extend_from_slice(magic);
    out.extend_from_slice(&(header_json.len() as u32).to_le_bytes());
    out.extend_from_slice(header_json);
    push_payload(&mut out, payload);
    out
}

fn split_header<'a>(bytes: &'a [u8], magic: &[u8; 8]) -> Result<(&'a [u8], usize)> {
    if bytes.len() < 8 || &bytes[..8] != magic {
        let found = bytes
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        return Err(format_err(
            0,
            format!(
                "magic mismatch at offset 0: expected {:?}, found 0x{found}",
                std::str::from_utf8(magic).unwrap()
            ),
        ));
    }
    if bytes.len() < 12 {
        return Err(format_err(8, "missing header length prefix".into()));
    }
    let len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if bytes.len() < 12 + len {
        return Err(format_err(
            12,
            format!("header claims {len} bytes but only {} remain", bytes.len() - 12),
        ));
    }
    Ok((&bytes[12..12 + len], 12 + len))
}

/// Serialize a field in the binary CField layout.
pub fn encode_field(field: &CliffordField) -> Result<Vec<u8>> {
    let header = serde_json::to_vec(&FieldHeader::of(field))?;
    Ok(encode_with_header(CFIELD_MAGIC, &header, field.data()))
}

/// Serialize a field in the pure-JSON variant (small fields only).
pub fn encode_field_json(field: &CliffordField) -> Result<Vec<u8>> {
    if field.data().len() > JSON_FIELD_LIMIT {
        return Err(CliffError::Config(format!(
            "JSON variant limited to {JSON_FIELD_LIMIT} complex numbers, field has {}",
            field.data().len()
        )));
    }
    let blades = field.blades();
    let mut header = FieldHeader::of(field);
    header.data = Some(
        field
            .data()
            .chunks(blades)
            .map(|point| point.iter().map(|c| [c.re, c.im]).collect())
            .collect(),
    );
    Ok(serde_json::to_vec(&header)?)
}

/// Parse either CField representation, dispatching on the leading bytes.
pub fn decode_field(bytes: &[u8]) -> Result<CliffordField> {
    if bytes.first() == Some(&b'{') {
        let header: FieldHeader = serde_json::from_slice(bytes)
            .map_err(|e| format_err(0, format!("JSON field parse failed: {e}")))?;
        let (grid, domain) = header.validate()?;
        let data_rows = header
            .data
            .as_ref()
            .ok_or_else(|| format_err(0, "JSON field variant lacks a data array".into()))?;
        if data_rows.len() != grid.len() {
            return Err(format_err(
                0,
                format!("data has {} points, grid needs {}", data_rows.len(), grid.len()),
            ));
        }
        let blades = header.blades;
        let mut data = Vec::with_capacity(grid.len() * blades);
        for row in data_rows {
            if row.len() != blades {
                return Err(format_err(0, "point row length differs from blade count".into()));
            }
            data.extend(row.iter().map(|p| Complex64::new(p[0], p[1])));
        }
        if data.len() > JSON_FIELD_LIMIT {
            return Err(format_err(0, "JSON field exceeds the size limit".into()));
        }
        return CliffordField::from_raw(grid, header.n, domain, data);
    }
    let (header_bytes, payload_at) = split_header(bytes, CFIELD_MAGIC)?;
    let header: FieldHeader = serde_json::from_slice(header_bytes)
        .map_err(|e| format_err(12, format!("header parse failed: {e}")))?;
    let (grid, domain) = header.validate()?;
    let count = grid.len() * header.blades;
    let data = parse_payload(bytes, payload_at, count)?;
    CliffordField::from_raw(grid, header.n, domain, data)
}

pub fn write_field(path: &Path, field: &CliffordField) -> Result<()> {
    let bytes = if path.extension().and_then(|e| e.to_str()) == Some("json") {
        encode_field_json(field)?
    } else {
        encode_field(field)?
    };
    atomic_write(path, &bytes)
}

pub fn read_field(path: &Path) -> Result<CliffordField> {
    decode_field(&fs::read(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct TensorHeader {
    scales: Vec<f64>,
    scale_log_weights: Vec<f64>,
    spin_nodes: Vec<Vec<f64>>,
    spin_weights: Vec<f64>,
    field: FieldHeader,
}

/// Serialize a coefficient tensor in the binary CWTT layout.
pub fn encode_tensor(tensor: &CwtTensor) -> Result<Vec<u8>> {
    let grid = tensor.grid();
    let translations = CliffordField::zeros(grid.translations().clone(), tensor.dim());
    let header = TensorHeader {
        scales: grid.scales().to_vec(),
        scale_log_weights: grid.log_weights().to_vec(),
        spin_nodes: grid
            .spins()
            .nodes()
            .iter()
            .map(|s| s.multivector().coeffs().iter().map(|c| c.re).collect())
            .collect(),
        spin_weights: grid.spins().weights().to_vec(),
        field: FieldHeader::of(&translations),
    };
    let header_json = serde_json::to_vec(&header)?;
    Ok(encode_with_header(CWTT_MAGIC, &header_json, tensor.data()))
}

/// Parse a CWTT file back into a tensor (including its parameter grid).
pub fn decode_tensor(bytes: &[u8]) -> Result<CwtTensor> {
    let (header_bytes, payload_at) = split_header(bytes, CWTT_MAGIC)?;
    let header: TensorHeader = serde_json::from_slice(header_bytes)
        .map_err(|e| format_err(12, format!("header parse failed: {e}")))?;
    let (grid, _) = header.field.validate()?;
    let n = header.field.n;
    let nodes = header
        .spin_nodes
        .iter()
        .map(|coeffs| {
            if coeffs.len() != 1 << n {
                return Err(format_err(12, "spin node coefficient count mismatch".into()));
            }
            let mv = crate::algebra::Multivector::from_coeffs(
                n,
                coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            );
            Spinor::from_multivector(mv)
        })
        .collect::<Result<Vec<_>>>()?;
    let spins = SpinQuadrature::from_parts(n, nodes, header.spin_weights.clone())?;
    let cwt_grid = CwtGrid::new(header.scales.clone(), header.scale_log_weights.clone(), spins, grid)?;
    let count = cwt_grid.slice_count() * (cwt_grid.translations().len() << n);
    let data = parse_payload(bytes, payload_at, count)?;
    CwtTensor::from_raw(cwt_grid, n, data)
}

pub fn write_tensor(path: &Path, tensor: &CwtTensor) -> Result<()> {
    atomic_write(path, &encode_tensor(tensor)?)
}

pub fn read_tensor(path: &Path) -> Result<CwtTensor> {
    decode_tensor(&fs::read(path)?)
}
