//! Append-only JSONL store of solver results. One record per line; lines
//! that fail to parse are skipped with a warning.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{find_unhit_box, PointSet3};
use crate::matrix::BinaryMatrix;
use crate::verify::find_zero_minor;

pub const SCHEMA: u32 = 1;
pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Alpha2d,
    Marks3d,
    Enumerate,
    ConstructVerify,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Alpha2d => "alpha2d",
            ProblemKind::Marks3d => "marks3d",
            ProblemKind::Enumerate => "enumerate",
            ProblemKind::ConstructVerify => "construct-verify",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha2d" => Ok(ProblemKind::Alpha2d),
            "marks3d" => Ok(ProblemKind::Marks3d),
            "enumerate" => Ok(ProblemKind::Enumerate),
            "construct-verify" => Ok(ProblemKind::ConstructVerify),
            _ => Err(Error::Domain(format!("unknown problem kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofStatus {
    Exact,
    BoundsOnly,
}

pub type Params = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: u32,
    pub kind: ProblemKind,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<u64>,
    /// Relative paths resolve against the cache file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_path: Option<String>,
    pub runtime_ms: u64,
    pub solver_version: String,
    pub proof_status: ProofStatus,
}

impl CacheRecord {
    pub fn new(kind: ProblemKind, params: Params, proof_status: ProofStatus) -> Self {
        CacheRecord {
            schema: SCHEMA,
            kind,
            params,
            value: None,
            class_count: None,
            lower: None,
            upper: None,
            certificate_path: None,
            runtime_ms: 0,
            solver_version: SOLVER_VERSION.to_string(),
            proof_status,
        }
    }

    fn param(&self, key: &str) -> Result<usize> {
        self.params
            .get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| Error::Domain(format!("{} record lacks parameter {key:?}", self.kind.name())))
    }
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<V: Into<Value>>(pairs: impl IntoIterator<Item = (&'static str, V)>) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v.into())).collect()
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn base_dir(&self) -> PathBuf {
        self.path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn resolve(&self, cert: &str) -> PathBuf {
        let p = Path::new(cert);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir().join(p)
        }
    }

    /// Writes `text` under `certs/` next to the cache file and returns the
    /// relative path to store in a record.
    pub fn store_certificate(&self, name: &str, text: &str) -> Result<String> {
        let rel = format!("certs/{name}");
        let full = self.resolve(&rel);
        if let Some(dir) = full.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&full, text)?;
        Ok(rel)
    }

    /// One `write` per record on an append-mode handle.
    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(line.as_bytes())?;
        Ok(())
    }

    /// Every parseable record in file order.
    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) if r.schema == SCHEMA => out.push(r),
                Ok(r) => log::warn!("{}:{}: skipping record with schema {}", self.path.display(), i + 1, r.schema),
                Err(e) => log::warn!("{}:{}: skipping corrupt record: {e}", self.path.display(), i + 1),
            }
        }
        Ok(out)
    }

    /// The most recent record for `(kind, params)` whose certificate still
    /// verifies.
    pub fn lookup(&self, kind: ProblemKind, params: &Params) -> Result<Option<CacheRecord>> {
        for r in self.records()?.into_iter().rev() {
            if r.kind != kind || &r.params != params {
                continue;
            }
            match self.verify_record(&r) {
                Ok(()) => return Ok(Some(r)),
                Err(e) => log::warn!("{}: ignoring {} record: {e}", self.path.display(), kind.name()),
            }
        }
        Ok(None)
    }

    /// Re-checks the certificate a record points to, if any.
    pub fn verify_record(&self, r: &CacheRecord) -> Result<()> {
        let Some(path) = &r.certificate_path else {
            return Ok(());
        };
        let text = fs::read_to_string(self.resolve(path))?;
        match r.kind {
            ProblemKind::Alpha2d | ProblemKind::ConstructVerify => {
                let m: BinaryMatrix = text.parse()?;
                let k = r.param("k")?;
                if let Some(w) = find_zero_minor(&m, k)? {
                    return Err(Error::Contract(format!(
                        "certificate {path} has a zero minor on rows {:?}, columns {:?}",
                        w.rows.to_vec(),
                        w.cols.to_vec()
                    )));
                }
                check_count(path, r.value, m.ones_count())
            }
            ProblemKind::Marks3d => {
                let s: PointSet3 = text.parse()?;
                if let Some(b) = find_unhit_box(&s) {
                    return Err(Error::Contract(format!("certificate {path} leaves box {b:?} unhit")));
                }
                check_count(path, r.value, s.len())
            }
            ProblemKind::Enumerate => Ok(()),
        }
    }
}

fn check_count(path: &str, claimed: Option<u64>, actual: usize) -> Result<()> {
    match claimed {
        Some(v) if v as usize != actual => Err(Error::Contract(format!(
            "certificate {path} has {actual} entries, record claims {v}"
        ))),
        _ => Ok(()),
    }
}
