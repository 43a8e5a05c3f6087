use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{class_spec, encode_image, sha256_hex, DatasetError, Manifest};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum VerifyIssue {
    Missing {
        file: String,
    },
    /// File on disk or fresh render disagrees with the manifest hash.
    Mismatch {
        file: String,
        expected: String,
        on_disk: String,
        rendered: String,
    },
    /// Re-sampled class parameters disagree with the manifest record.
    ClassSpec {
        class_id: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub total: u64,
    pub checked: u64,
    pub issues: Vec<VerifyIssue>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// `ceil(fraction · total)` evenly strided flat indices.
pub fn sample_indices(total: u64, fraction: f64) -> Vec<u64> {
    if total == 0 {
        return Vec::new();
    }
    // tolerance keeps e.g. 0.01 × 1000 from ceiling to 11
    let count = ((fraction * total as f64 - 1e-9).ceil() as u64).clamp(1, total);
    (0..count)
        .map(|k| (u128::from(k) * u128::from(total) / u128::from(count)) as u64)
        .collect()
}

/// Re-renders a sample of the dataset next to `manifest_path` and compares
/// hashes against both the manifest and the files on disk.
pub fn verify(manifest_path: &Path, fraction: f64) -> Result<VerifyReport, DatasetError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(DatasetError::Config(format!(
            "fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let manifest = Manifest::read(manifest_path)?;
    let root = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let config = &manifest.config;
    config.validate()?;
    if manifest.classes.len() as u64 != config.classes
        || manifest
            .classes
            .iter()
            .any(|c| c.images.len() as u64 != config.instances)
    {
        return Err(DatasetError::Manifest(
            "record counts disagree with the config echo".into(),
        ));
    }

    let mut issues: Vec<VerifyIssue> = manifest
        .classes
        .par_iter()
        .map(|rec| class_spec(config, rec.class_id).map(|s| (rec.class_id, s == rec.spec)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(class_id, _)| VerifyIssue::ClassSpec { class_id })
        .collect();

    let picks = sample_indices(config.total_images(), fraction);
    let n = config.instances;
    let image_issues = picks
        .par_iter()
        .map(|&idx| {
            let rec = &manifest.classes[(idx / n) as usize];
            let img = &rec.images[(idx % n) as usize];
            let on_disk = match fs::read(root.join(&img.file)) {
                Ok(bytes) => sha256_hex(&bytes),
                Err(_) => return Ok(Some(VerifyIssue::Missing { file: img.file.clone() })),
            };
            let rendered = sha256_hex(&encode_image(
                config,
                &class_spec(config, rec.class_id)?,
                img.instance_id,
            )?);
            Ok(
                (on_disk != img.sha256 || rendered != img.sha256).then(|| VerifyIssue::Mismatch {
                    file: img.file.clone(),
                    expected: img.sha256.clone(),
                    on_disk,
                    rendered,
                }),
            )
        })
        .collect::<Result<Vec<_>, DatasetError>>()?;
    issues.extend(image_issues.into_iter().flatten());

    Ok(VerifyReport {
        total: config.total_images(),
        checked: picks.len() as u64,
        issues,
    })
}
