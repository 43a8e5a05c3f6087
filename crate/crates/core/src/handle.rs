//! Read-only, index-addressed access to a dataset without touching disk.
//!
//! This is what data loaders (and the Python module) use: `render_indexed`
//! returns exactly the pixels the compiled PNG for the same triple holds.

use std::path::Path;

use crate::dataset::{class_spec, render_image, DatasetConfig, DatasetError};
use crate::raster::Canvas;
use crate::sampling::ClassSpec;

#[derive(Debug, Clone)]
pub struct DatasetHandle {
    config: DatasetConfig,
}

impl DatasetHandle {
    pub fn new(config: DatasetConfig) -> Result<Self, DatasetError> {
        config.validate()?;
        Ok(Self {
            config: config.content(),
        })
    }

    /// Opens a config file, or the `config.json`/`manifest.jsonl` of a compiled dataset.
    pub fn open(path: &Path) -> Result<Self, DatasetError> {
        if path.extension().is_some_and(|e| e == "jsonl") {
            return Self::new(crate::dataset::Manifest::read(path)?.config);
        }
        Self::new(DatasetConfig::load(path)?)
    }

    pub fn config(&self) -> &DatasetConfig {
        &self.config
    }

    /// `classes × instances`.
    pub fn len(&self) -> u64 {
        self.config.total_images()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> (u32, u32) {
        (self.config.height, self.config.width)
    }

    fn check(&self, class_id: u64, instance_id: u64) -> Result<(), DatasetError> {
        if class_id >= self.config.classes || instance_id >= self.config.instances {
            return Err(DatasetError::OutOfBounds {
                class_id,
                instance_id,
                classes: self.config.classes,
                instances: self.config.instances,
            });
        }
        Ok(())
    }

    pub fn class_params(&self, class_id: u64) -> Result<ClassSpec, DatasetError> {
        self.check(class_id, 0)?;
        class_spec(&self.config, class_id)
    }

    /// Returns `(label, canvas)`; the label is the 0-based class id.
    pub fn render_indexed(&self, class_id: u64, instance_id: u64) -> Result<(u64, Canvas), DatasetError> {
        self.check(class_id, instance_id)?;
        let spec = class_spec(&self.config, class_id)?;
        Ok((class_id, render_image(&self.config, &spec, instance_id)?))
    }

    /// Flat index in (class, instance) order.
    pub fn get(&self, index: u64) -> Result<(u64, Canvas), DatasetError> {
        let n = self.config.instances;
        self.render_indexed(index / n, index % n)
    }
}
