use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::raster::MIN_CANVAS_SIDE;
use crate::sampling::SamplingRanges;

pub const FORMAT_VERSION: u32 = 1;

/// Dataset configuration, read from TOML or JSON.
///
/// ```toml
/// version = 1
/// classes = 1000
/// instances = 1000
/// seed = 42
/// width = 512
/// height = 512
///
/// [ranges]
/// orbits = [1, 200]
/// frequency = [0, 40]
/// amplitude = 0.5
/// ```
///
/// Every field is optional and defaults to the baseline. `output` and
/// `workers` do not affect content and are left out of the manifest echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub version: u32,
    pub classes: u64,
    pub instances: u64,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub ranges: SamplingRanges,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            version: FORMAT_VERSION,
            classes: 1000,
            instances: 1000,
            seed: 0,
            width: 512,
            height: 512,
            ranges: SamplingRanges::baseline(),
            output: None,
            workers: None,
        }
    }
}

impl DatasetConfig {
    pub fn total_images(&self) -> u64 {
        self.classes * self.instances
    }

    /// The fields that determine image content.
    pub fn content(&self) -> Self {
        Self {
            output: None,
            workers: None,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.version != FORMAT_VERSION {
            return Err(DatasetError::Config(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        if self.classes < 1 || self.instances < 1 {
            return Err(DatasetError::Config("classes and instances must be at least 1".into()));
        }
        if self.classes.checked_mul(self.instances).is_none() {
            return Err(DatasetError::Config("classes × instances overflows".into()));
        }
        if self.width < MIN_CANVAS_SIDE || self.height < MIN_CANVAS_SIDE {
            return Err(DatasetError::Config(format!(
                "image size must be at least {MIN_CANVAS_SIDE}x{MIN_CANVAS_SIDE}"
            )));
        }
        if self.workers == Some(0) {
            return Err(DatasetError::Config("workers must be at least 1".into()));
        }
        self.ranges.validate()?;
        Ok(())
    }

    /// Parses JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<Self, DatasetError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| DatasetError::Config(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| DatasetError::Config(e.to_string()))
        }
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = fs::read_to_string(path).map_err(DatasetError::io(path))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
