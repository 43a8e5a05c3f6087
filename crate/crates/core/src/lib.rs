//! Deterministic generator for formula-driven contour-image datasets.
//!
//! An image is a set of concentric elliptical orbits, each modulated radially
//! by a mixture of two sinusoids plus noise, sampled at `q` angles and drawn
//! as closed polylines on a black grayscale canvas. Classes fix the shape
//! parameters; images within a class vary gray levels, nucleus position and
//! noise.
//!
//! * [`geometry`]: orbits, waves and quantized contours
//! * [`sampling`]: seeded class and image parameter draws
//! * [`raster`]: world-to-pixel framing, line drawing and PNG encoding
//! * [`dataset`]: on-disk compilation, manifests, verification and previews

pub mod cli;
pub mod dataset;
pub mod geometry;
pub mod handle;
pub mod preview;
pub mod raster;
pub mod rng;
pub mod sampling;

pub use dataset::{compile, verify, DatasetConfig, Manifest, VerifyReport};
pub use geometry::{
    build_visual_atom, orbit_point, orbit_sequence, quantize_wave, visual_wave_point, wave_value, NoiseRealization,
    OrbitParams, Point, Polyline, VisualAtomShape, WaveParams,
};
pub use handle::DatasetHandle;
pub use raster::{draw_polyline, make_view, render, Canvas, ViewTransform};
pub use rng::derive_seed;
pub use sampling::{sample_class, sample_instance, ClassSpec, InstanceSpec, ParamRange, SamplingRanges};
