//! Dataset compilation: `C` classes × `N` images written as
//! `root/class_{c:05}/img_{i:05}.png`, plus `root/manifest.jsonl` and a
//! `root/config.json` echo of the content-defining configuration.
//!
//! Every image is addressed by `(seed, class, instance)`, so the bytes on disk
//! do not depend on the worker count or the order work is scheduled in.

mod compile;
mod config;
mod manifest;
pub mod presets;
mod verify;

use std::path::PathBuf;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::raster::{render, Canvas, RenderError};
use crate::sampling::{sample_class, sample_instance, ClassSpec, RangeError};

pub use compile::{bench, compile, compile_with, BenchReport, CompileOptions};
pub use config::{DatasetConfig, FORMAT_VERSION};
pub use manifest::{ClassRecord, ImageRecord, Manifest};
pub use verify::{sample_indices, verify, VerifyIssue, VerifyReport};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const CONFIG_FILE: &str = "config.json";
pub const CHECKPOINT_FILE: &str = ".checkpoint.jsonl";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Manifest(String),
    #[error("compile interrupted after {written} new images; rerun to resume")]
    Interrupted { written: usize },
    #[error("index out of bounds: class {class_id} of {classes}, instance {instance_id} of {instances}")]
    OutOfBounds {
        class_id: u64,
        instance_id: u64,
        classes: u64,
        instances: u64,
    },
}

impl DatasetError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Self::Io { path, source }
    }
}

pub fn class_dir(class_id: u64) -> String {
    format!("class_{class_id:05}")
}

/// Path of an image relative to the dataset root.
pub fn image_path(class_id: u64, instance_id: u64) -> String {
    format!("class_{class_id:05}/img_{instance_id:05}.png")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders image `instance_id` of an already sampled class.
pub fn render_image(config: &DatasetConfig, class: &ClassSpec, instance_id: u64) -> Result<Canvas, DatasetError> {
    let inst = sample_instance(config.seed, class, instance_id, &config.ranges)?;
    Ok(render(class, &inst, config.width, config.height)?)
}

/// Renders and PNG-encodes one image, returning the file bytes.
pub fn encode_image(config: &DatasetConfig, class: &ClassSpec, instance_id: u64) -> Result<Vec<u8>, DatasetError> {
    Ok(render_image(config, class, instance_id)?.encode_png()?)
}

pub fn class_spec(config: &DatasetConfig, class_id: u64) -> Result<ClassSpec, DatasetError> {
    Ok(sample_class(config.seed, class_id, &config.ranges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_names() {
        assert_eq!(class_dir(3), "class_00003");
        assert_eq!(image_path(12, 7), "class_00012/img_00007.png");
        assert_eq!(image_path(123_456, 0), "class_123456/img_00000.png");
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
