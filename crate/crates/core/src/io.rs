//! File formats: graph instances, vectors, run manifests and atomic writes.
//!
//! Every JSON artifact embeds its [`RunManifest`]; CSV artifacts get a
//! sidecar `<path>.manifest.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::reconstruct::IterRecord;
use crate::weights::WeightAssignment;

/// On-disk instance: `{"n", "edges", "v_in", "v_out", "rho"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub v_in: usize,
    pub v_out: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn from_graph(g: &GraphInstance, w: Option<&WeightAssignment>) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            v_in: g.v_in(),
            v_out: g.v_out(),
            rho: w.map(|w| w.rho().to_vec()),
        }
    }

    pub fn build(&self) -> Result<(GraphInstance, Option<WeightAssignment>)> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = GraphInstance::new(self.n, &edges, self.v_in, self.v_out)?;
        let w = self.rho.clone().map(|rho| WeightAssignment::new(&g, rho)).transpose()?;
        Ok((g, w))
    }
}

/// A loaded instance with the SHA-256 of its file contents.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: GraphInstance,
    pub weights: Option<WeightAssignment>,
    pub sha256: String,
}

impl Instance {
    pub fn require_weights(&self) -> Result<&WeightAssignment> {
        self.weights
            .as_ref()
            .ok_or_else(|| Error::Format("instance has no \"rho\" field; weights are required".into()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let bytes = std::fs::read(path)?;
    let file: InstanceFile = serde_json::from_slice(&bytes)?;
    let (graph, weights) = file.build()?;
    Ok(Instance {
        graph,
        weights,
        sha256: sha256_hex(&bytes),
    })
}

/// Reads a vertex-indexed vector: a bare JSON array, an object holding the
/// array under one of `keys`, or a CSV whose last column holds the values
/// and whose first column is the vertex id.
pub fn load_vector(path: &Path, keys: &[&str]) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        return parse_vector_csv(&text);
    }
    let value: Value = serde_json::from_str(&text)?;
    let array = match &value {
        Value::Array(_) => &value,
        Value::Object(map) => keys.iter().find_map(|k| map.get(*k)).ok_or_else(|| {
            Error::Format(format!("{}: expected an array or an object with one of {keys:?}", path.display()))
        })?,
        _ => return Err(Error::Format(format!("{}: expected a JSON array", path.display()))),
    };
    Ok(serde_json::from_value(array.clone())?)
}

fn parse_vector_csv(text: &str) -> Result<Vec<f64>> {
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (k, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Format(format!("line {}: expected \"vertex,value\"", k + 1));
        let v = fields.first().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let x = fields.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        rows.push((v, x));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(Error::Format("CSV vertex ids must be 0..n without gaps".into()));
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}

/// Provenance embedded in every artifact. Worker counts and timestamps are
/// deliberately absent so identical runs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub instance_path: String,
    pub instance_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub output_path: Option<String>,
    pub flags: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, instance_path: &Path, instance: &Instance, output: Option<&Path>) -> Self {
        Self {
            command: command.into(),
            instance_path: instance_path.display().to_string(),
            instance_sha256: instance.sha256.clone(),
            seed: None,
            output_path: output.map(|p| p.display().to_string()),
            flags: BTreeMap::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn flag(mut self, key: &str, value: impl ToString) -> Self {
        self.flags.insert(key.into(), value.to_string());
        self
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serialises")
    }
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn to_json_bytes(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialise");
    s.push('\n');
    s.into_bytes()
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes a CSV artifact and its manifest sidecar.
pub fn write_csv_with_manifest(path: &Path, csv: &str, manifest: &RunManifest) -> Result<()> {
    write_atomic(&sidecar_path(path), &to_json_bytes(&manifest.to_value()))?;
    write_atomic(path, csv.as_bytes())
}

pub fn occupation_json(tau: &[f64], std_err: Option<&[f64]>, manifest: &RunManifest) -> Value {
    let mut v = json!({ "tau": tau });
    if let Some(se) = std_err {
        v["std_err"] = json!(se);
    }
    v["manifest"] = manifest.to_value();
    v
}

/// `vertex,tau` rows, plus a `std_err` column when given.
pub fn occupation_csv(tau: &[f64], std_err: Option<&[f64]>) -> String {
    let mut s = String::from(if std_err.is_some() { "vertex,tau,std_err\n" } else { "vertex,tau\n" });
    for (v, t) in tau.iter().enumerate() {
        match std_err {
            Some(se) => writeln!(s, "{v},{t},{}", se[v]),
            None => writeln!(s, "{v},{t}"),
        }
        .unwrap();
    }
    s
}

pub fn weights_json(rho: &[f64], manifest: &RunManifest) -> Value {
    json!({ "rho": rho, "manifest": manifest.to_value() })
}

pub fn iteration_csv(log: &[IterRecord]) -> String {
    let mut s = String::from("iter,cost,step\n");
    for r in log {
        writeln!(s, "{},{},{}", r.iter, r.cost, r.step).unwrap();
    }
    s
}
