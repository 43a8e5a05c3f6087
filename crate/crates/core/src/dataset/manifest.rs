use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{DatasetConfig, FORMAT_VERSION};
use super::DatasetError;
use crate::sampling::ClassSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub instance_id: u64,
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub class_id: u64,
    /// 1-based training label.
    pub label: u64,
    pub dir: String,
    pub spec: ClassSpec,
    pub images: Vec<ImageRecord>,
}

/// One line of `manifest.jsonl`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header { format_version: u32, config: DatasetConfig },
    Class(ClassRecord),
    Digest { images: u64, sha256: String },
}

/// In-memory form of `manifest.jsonl`: a header line, one line per class,
/// and a digest line over all image hashes in (class, instance) order.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub format_version: u32,
    pub config: DatasetConfig,
    pub classes: Vec<ClassRecord>,
    pub digest: String,
}

impl Manifest {
    pub fn new(config: DatasetConfig, classes: Vec<ClassRecord>) -> Self {
        let digest = Self::compute_digest(&classes);
        Self {
            format_version: FORMAT_VERSION,
            config: config.content(),
            classes,
            digest,
        }
    }

    pub fn compute_digest(classes: &[ClassRecord]) -> String {
        let mut h = Sha256::new();
        for img in classes.iter().flat_map(|c| &c.images) {
            h.update(img.sha256.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn image_count(&self) -> u64 {
        self.classes.iter().map(|c| c.images.len() as u64).sum()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &Line| {
            out.push_str(&serde_json::to_string(line).expect("manifest serializes"));
            out.push('\n');
        };
        push(&Line::Header {
            format_version: self.format_version,
            config: self.config.clone(),
        });
        for c in &self.classes {
            push(&Line::Class(c.clone()));
        }
        push(&Line::Digest {
            images: self.image_count(),
            sha256: self.digest.clone(),
        });
        out
    }

    pub fn parse(text: &str) -> Result<Self, DatasetError> {
        let bad = |m: String| DatasetError::Manifest(m);
        let mut header = None;
        let mut classes = Vec::new();
        let mut digest = None;
        for (n, raw) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let line: Line = serde_json::from_str(raw).map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
            match line {
                Line::Header { format_version, config } => header = Some((format_version, config)),
                Line::Class(c) => classes.push(c),
                Line::Digest { images, sha256 } => digest = Some((images, sha256)),
            }
        }
        let (format_version, config) = header.ok_or_else(|| bad("missing header line".into()))?;
        let (images, digest) = digest.ok_or_else(|| bad("missing digest line".into()))?;
        let manifest = Self {
            format_version,
            config,
            classes,
            digest,
        };
        if manifest.image_count() != images {
            return Err(bad(format!(
                "digest line counts {images} images, found {}",
                manifest.image_count()
            )));
        }
        if Self::compute_digest(&manifest.classes) != manifest.digest {
            return Err(bad("dataset digest does not match image hashes".into()));
        }
        Ok(manifest)
    }

    pub fn read(path: &Path) -> Result<Self, DatasetError> {
        Self::parse(&fs::read_to_string(path).map_err(DatasetError::io(path))?)
    }

    /// Writes through a temporary file and renames into place.
    pub fn write(&self, path: &Path) -> Result<(), DatasetError> {
        write_atomic(path, self.to_jsonl().as_bytes())
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(DatasetError::io(&tmp))?;
    f.write_all(bytes).map_err(DatasetError::io(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(DatasetError::io(path))
}
