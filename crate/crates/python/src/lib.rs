//! Python module `visatom`: in-memory access to a dataset for data loaders.
//!
//! ```python
//! import visatom
//! ds = visatom.open("dataset/manifest.jsonl")
//! label, pixels = ds.render_indexed(0, 0)   # pixels: bytes, row-major, len h*w
//! ```

use std::path::PathBuf;

use pyo3::exceptions::{PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use visatom::dataset::{DatasetConfig, DatasetError};
use visatom::DatasetHandle;

fn to_py_err(e: DatasetError) -> PyErr {
    match e {
        DatasetError::OutOfBounds { .. } => PyIndexError::new_err(e.to_string()),
        DatasetError::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Maps a possibly negative Python index into `0..len`.
pub fn normalize_index(index: i64, len: u64) -> Option<u64> {
    let i = if index < 0 {
        i128::from(index) + i128::from(len)
    } else {
        i128::from(index)
    };
    (0..i128::from(len)).contains(&i).then_some(i as u64)
}

/// Read-only dataset view. Images are rendered on demand, never read from disk.
#[pyclass(name = "Dataset", module = "visatom", frozen)]
pub struct Dataset {
    handle: DatasetHandle,
}

impl Dataset {
    pub fn handle(&self) -> &DatasetHandle {
        &self.handle
    }
}

#[pymethods]
impl Dataset {
    /// Builds a dataset from config text (JSON or TOML).
    #[staticmethod]
    pub fn from_config(text: &str) -> PyResult<Self> {
        let config = DatasetConfig::parse(text).map_err(to_py_err)?;
        Ok(Self {
            handle: DatasetHandle::new(config).map_err(to_py_err)?,
        })
    }

    pub fn __len__(&self) -> usize {
        self.handle.len() as usize
    }

    /// `(height, width)` of every image.
    #[getter]
    pub fn shape(&self) -> (u32, u32) {
        self.handle.shape()
    }

    #[getter]
    pub fn classes(&self) -> u64 {
        self.handle.config().classes
    }

    #[getter]
    pub fn instances(&self) -> u64 {
        self.handle.config().instances
    }

    #[getter]
    pub fn seed(&self) -> u64 {
        self.handle.config().seed
    }

    /// Effective configuration as JSON.
    pub fn config_json(&self) -> String {
        self.handle.config().to_json()
    }

    /// Returns `(label, pixels)` where `label` is the class id and `pixels`
    /// holds `height * width` gray levels in row-major order.
    pub fn render_indexed<'py>(
        &self,
        py: Python<'py>,
        class_id: u64,
        instance_id: u64,
    ) -> PyResult<(u64, Bound<'py, PyBytes>)> {
        let (label, canvas) = py
            .detach(|| self.handle.render_indexed(class_id, instance_id))
            .map_err(to_py_err)?;
        Ok((label, PyBytes::new(py, canvas.pixels())))
    }

    /// Same pixels as `render_indexed`, encoded as the PNG the CLI writes.
    pub fn render_png<'py>(&self, py: Python<'py>, class_id: u64, instance_id: u64) -> PyResult<Bound<'py, PyBytes>> {
        let bytes = py
            .detach(|| {
                let (_, canvas) = self.handle.render_indexed(class_id, instance_id)?;
                canvas.encode_png().map_err(DatasetError::from)
            })
            .map_err(to_py_err)?;
        Ok(PyBytes::new(py, &bytes))
    }

    /// Class parameters as a plain dict.
    pub fn class_params<'py>(&self, py: Python<'py>, class_id: u64) -> PyResult<Bound<'py, PyAny>> {
        let spec = self.handle.class_params(class_id).map_err(to_py_err)?;
        let text = serde_json::to_string(&spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
        py.import("json")?.call_method1("loads", (text,))
    }

    /// Flat index in (class, instance) order; negative indices count from the end.
    pub fn __getitem__<'py>(&self, py: Python<'py>, index: i64) -> PyResult<(u64, Bound<'py, PyBytes>)> {
        let len = self.handle.len();
        let i = normalize_index(index, len)
            .ok_or_else(|| PyIndexError::new_err(format!("index {index} out of range for {len} images")))?;
        let n = self.handle.config().instances;
        self.render_indexed(py, i / n, i % n)
    }

    pub fn __repr__(&self) -> String {
        let c = self.handle.config();
        format!(
            "Dataset(classes={}, instances={}, seed={}, shape=({}, {}))",
            c.classes, c.instances, c.seed, c.height, c.width
        )
    }
}

/// Opens a config file (TOML/JSON), a `config.json` echo or a `manifest.jsonl`.
#[pyfunction]
pub fn open(path: PathBuf) -> PyResult<Dataset> {
    Ok(Dataset {
        handle: DatasetHandle::open(&path).map_err(to_py_err)?,
    })
}

#[pymodule]
#[pyo3(name = "visatom")]
pub fn visatom_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_function(wrap_pyfunction!(open, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
