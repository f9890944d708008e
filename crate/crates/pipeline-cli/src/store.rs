//! Append-only, content-addressed certificate store.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::record::Record;
use crate::PipelineError;

/// Part of every key, so certificates from other formula versions never match.
pub const CODE_VERSION: &str = concat!("gkw-cert/", env!("CARGO_PKG_VERSION"), "/r1");

/// Kind plus ordered parameters of a stored computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertKey {
    pub kind: String,
    pub params: Vec<(String, String)>,
}

impl CertKey {
    pub fn new(kind: &str) -> Self {
        CertKey {
            kind: kind.to_string(),
            params: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Display) -> Self {
        self.params.push((name.to_string(), value.to_string()));
        self
    }

    fn canonical(&self) -> String {
        let mut s = format!("version={CODE_VERSION}\nkind={}\n", self.kind);
        for (k, v) in &self.params {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    /// First 128 bits of the SHA-256 of the canonical key, in hex.
    pub fn digest(&self) -> String {
        let h = Sha256::digest(self.canonical().as_bytes());
        h[..16].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn file_name(&self) -> String {
        format!("{}-{}.txt", self.kind, self.digest())
    }

    fn header(&self) -> Record {
        let mut r = Record::new();
        r.push("key.version", CODE_VERSION)
            .push("key.kind", &self.kind);
        for (k, v) in &self.params {
            r.push(format!("key.{k}"), v);
        }
        r
    }
}

/// Outcome of a stored computation: its record, or the failure message.
pub type Stored = Result<Record, String>;

#[derive(Debug)]
pub struct CertificateStore {
    dir: PathBuf,
    pub hits: usize,
    pub misses: usize,
}

impl CertificateStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(CertificateStore {
            dir,
            hits: 0,
            misses: 0,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CertKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Stored outcome for `key`, without touching the counters.
    pub fn load(&self, key: &CertKey) -> Result<Option<Stored>, PipelineError> {
        let p = self.path(key);
        if !p.exists() {
            return Ok(None);
        }
        let rec = Record::parse(&fs::read_to_string(p)?)?;
        Ok(Some(match rec.require("status")? {
            "ok" => Ok(rec),
            _ => Err(rec.get("error").unwrap_or("unknown failure").to_string()),
        }))
    }

    /// Write once; an existing file is never replaced.
    fn put(&self, key: &CertKey, outcome: &Stored) -> Result<PathBuf, PipelineError> {
        let p = self.path(key);
        if p.exists() {
            return Ok(p);
        }
        let mut rec = key.header();
        match outcome {
            Ok(body) => {
                rec.push("status", "ok");
                rec.extend(body);
            }
            Err(msg) => {
                rec.push("status", "failed")
                    .push("error", msg.replace('\n', " "));
            }
        }
        let tmp = self.dir.join(format!(".{}.tmp", key.file_name()));
        fs::write(&tmp, rec.to_text())?;
        fs::rename(&tmp, &p)?;
        Ok(p)
    }

    /// Reuse the stored outcome or compute and store it. Returns the outcome
    /// and whether it was a hit. Certification failures are stored too;
    /// other errors propagate.
    pub fn get_or_compute(
        &mut self,
        key: &CertKey,
        compute: impl FnOnce() -> Result<Record, PipelineError>,
    ) -> Result<(Stored, bool), PipelineError> {
        if let Some(s) = self.load(key)? {
            self.hits += 1;
            return Ok((s, true));
        }
        self.misses += 1;
        let outcome = match compute() {
            Ok(r) => Ok(r),
            Err(e) if e.is_certification_failure() => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        self.put(key, &outcome)?;
        // re-read so hit and miss paths return identical records
        let stored = self.load(key)?.expect("just written");
        Ok((stored, false))
    }
}
