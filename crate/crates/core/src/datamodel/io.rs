use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use crate::error::{DataError, Error, Result};

use super::{Instance, Pool};

/// Header magic of the little-endian binary matrix format.
pub const BINMAT_MAGIC: &[u8; 4] = b"ANK1";

const BINMAT_HEADER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolFormat {
    /// One JSON object per line: `{"id", "text"?, "label"?, "embedding"}`.
    Jsonl,
    /// `ANK1`, `u32 N`, `u32 d`, then `N*d` `f32` row-major.
    Binmat,
}

impl FromStr for PoolFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(PoolFormat::Jsonl),
            "binmat" => Ok(PoolFormat::Binmat),
            other => Err(Error::config(format!("unknown pool format {other:?}"))),
        }
    }
}

impl PoolFormat {
    /// Guesses the format from a file extension, defaulting to JSONL.
    pub fn from_path(path: &Path) -> PoolFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("binmat") => PoolFormat::Binmat,
            _ => PoolFormat::Jsonl,
        }
    }
}

pub fn load_pool(path: impl AsRef<Path>, format: PoolFormat) -> Result<Pool> {
    load_pool_with_ids(path, format, None)
}

/// Loads a pool. For binmat files `ids` names an optional sidecar with one
/// id per line; without it rows are named `row<i>`.
pub fn load_pool_with_ids(
    path: impl AsRef<Path>,
    format: PoolFormat,
    ids: Option<&Path>,
) -> Result<Pool> {
    let path = path.as_ref();
    let instances = match format {
        PoolFormat::Jsonl => read_jsonl(path)?,
        PoolFormat::Binmat => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let ids = ids.map(read_id_file).transpose()?;
            parse_binmat(&bytes, ids)?
        }
    };
    Ok(Pool::new(instances)?)
}

fn read_jsonl(path: &Path) -> Result<Vec<Instance>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: Instance = serde_json::from_str(&line).map_err(|e| DataError::Parse {
            line: n + 1,
            message: e.to_string(),
        })?;
        out.push(inst);
    }
    Ok(out)
}

fn read_id_file(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().to_string())
        .collect())
}

pub(crate) fn parse_binmat(bytes: &[u8], ids: Option<Vec<String>>) -> Result<Vec<Instance>, DataError> {
    if bytes.len() < BINMAT_HEADER || &bytes[..4] != BINMAT_MAGIC {
        return Err(DataError::Invalid("binmat: missing ANK1 header".into()));
    }
    let read_u32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let (n, d) = (read_u32(4), read_u32(8));
    if n == 0 {
        return Err(DataError::EmptyPool);
    }
    if d == 0 {
        return Err(DataError::Invalid("binmat: dimension must be at least 1".into()));
    }
    let expected = n
        .checked_mul(d)
        .and_then(|c| c.checked_mul(4))
        .and_then(|c| c.checked_add(BINMAT_HEADER));
    if expected != Some(bytes.len()) {
        return Err(DataError::Invalid(format!(
            "binmat: header declares {n}x{d} but payload is {} bytes",
            bytes.len() - BINMAT_HEADER
        )));
    }
    if let Some(ids) = &ids {
        if ids.len() != n {
            return Err(DataError::Invalid(format!(
                "id sidecar has {} ids for {n} rows",
                ids.len()
            )));
        }
    }
    let mut ids = ids.map(Vec::into_iter);
    let payload = &bytes[BINMAT_HEADER..];
    Ok((0..n)
        .map(|row| {
            let embedding = payload[row * d * 4..(row + 1) * d * 4]
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
                .collect();
            let id = match ids.as_mut() {
                Some(it) => it.next().unwrap(),
                None => format!("row{row}"),
            };
            Instance::new(id, embedding)
        })
        .collect())
}

/// Instances as JSONL text, one object per line.
pub fn pool_to_jsonl(instances: &[Instance]) -> String {
    let mut out = String::new();
    for inst in instances {
        out.push_str(&serde_json::to_string(inst).expect("instance serializes"));
        out.push('\n');
    }
    out
}

/// Writes instances as JSONL, one object per line.
pub fn save_pool_jsonl(path: impl AsRef<Path>, instances: &[Instance]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, pool_to_jsonl(instances)).map_err(|e| Error::io(path, e))
}

/// Writes embeddings as binmat (`f32`). Ids are not stored.
pub fn save_pool_binmat(path: impl AsRef<Path>, instances: &[Instance]) -> Result<()> {
    let path = path.as_ref();
    let d = instances.first().map_or(0, |i| i.embedding.len());
    let mut buf = Vec::with_capacity(BINMAT_HEADER + instances.len() * d * 4);
    buf.extend_from_slice(BINMAT_MAGIC);
    buf.extend_from_slice(&(instances.len() as u32).to_le_bytes());
    buf.extend_from_slice(&(d as u32).to_le_bytes());
    for inst in instances {
        if inst.embedding.len() != d {
            return Err(DataError::DimensionMismatch {
                id: inst.id.clone(),
                expected: d,
                found: inst.embedding.len(),
            }
            .into());
        }
        for &x in &inst.embedding {
            buf.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}
