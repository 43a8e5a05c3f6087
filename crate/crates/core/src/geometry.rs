//! Orbits, waves and quantized contours.
//!
//! Everything here is a pure function of its arguments. An atom is a set of
//! `K` concentric ellipses `(a_k, b_k)`; each ellipse is modulated radially by
//! a wave `Φ(θ) = λ₁ sin(n₁θ) + λ₂ sin(n₂θ) + η ε(θ)` and then sampled at `q`
//! evenly spaced angles to produce a closed polyline.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::ClassSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("orbit semi-axes must be positive and finite, got a={a}, b={b}")]
    InvalidOrbit { a: f64, b: f64 },
    #[error("orbit interval must be non-negative and finite, got {0}")]
    InvalidInterval(f64),
    #[error("an atom needs at least one orbit, got K={0}")]
    NoOrbits(u32),
    #[error("quantization must be at least 3, got q={0}")]
    Quantization(u32),
    #[error("noise realization has {got} samples, expected {expected}")]
    NoiseLength { expected: usize, got: usize },
    #[error("noise sample {0} lies outside [-1, 1]")]
    NoiseSample(f64),
    #[error("expected {expected} noise realizations (one per orbit), got {got}")]
    NoiseCount { expected: usize, got: usize },
    #[error("wave amplitudes and noise level must be non-negative and finite")]
    InvalidWave,
}

/// A point in world or pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Semi-axes of one elliptical orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    a: f64,
    b: f64,
}

impl OrbitParams {
    pub fn new(a: f64, b: f64) -> Result<Self, GeometryError> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(GeometryError::InvalidOrbit { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Implicit form `x²/a² + y²/b² − 1`; zero on the ellipse.
    pub fn implicit(&self, p: Point) -> f64 {
        (p.x * p.x) / (self.a * self.a) + (p.y * p.y) / (self.b * self.b) - 1.0
    }
}

/// Wave parameters of one orbit.
///
/// Frequencies are integers so that the wave is 2π-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub n1: u32,
    pub n2: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub eta: f64,
}

impl WaveParams {
    pub fn new(n1: u32, n2: u32, lambda1: f64, lambda2: f64, eta: f64) -> Result<Self, GeometryError> {
        let ok = |v: f64| v >= 0.0 && v.is_finite();
        if ok(lambda1) && ok(lambda2) && ok(eta) {
            Ok(Self {
                n1,
                n2,
                lambda1,
                lambda2,
                eta,
            })
        } else {
            Err(GeometryError::InvalidWave)
        }
    }

    /// Upper bound on `|Φ|` given noise samples in `[-1, 1]`.
    pub fn amplitude_bound(&self) -> f64 {
        self.lambda1 + self.lambda2 + self.eta
    }
}

/// One period of the noise function, sampled on the quantization grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRealization {
    samples: Vec<f64>,
}

impl NoiseRealization {
    pub fn new(samples: Vec<f64>) -> Result<Self, GeometryError> {
        if let Some(&bad) = samples.iter().find(|s| !(-1.0..=1.0).contains(*s)) {
            return Err(GeometryError::NoiseSample(bad));
        }
        Ok(Self { samples })
    }

    pub fn zeros(q: usize) -> Self {
        Self { samples: vec![0.0; q] }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Closed polyline; edge `i` joins `points[i]` and `points[(i + 1) % q]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All `q` edges including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Mean distance of the vertices from the origin.
    pub fn mean_radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).sum::<f64>() / self.points.len() as f64
    }
}

/// The union of all quantized visual waves of an atom, one polyline per orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisualAtomShape {
    polylines: Vec<Polyline>,
}

impl VisualAtomShape {
    pub fn polylines(&self) -> &[Polyline] {
        &self.polylines
    }

    pub fn orbit_count(&self) -> usize {
        self.polylines.len()
    }
}

/// Point on the ellipse at angle `theta`.
pub fn orbit_point(orbit: OrbitParams, theta: f64) -> Point {
    Point::new(orbit.a * theta.cos(), orbit.b * theta.sin())
}

/// Orbits `(a1 + k·c, b1 + k·c)` for `k = 0..K`.
pub fn orbit_sequence(a1: f64, b1: f64, c: f64, k: u32) -> Result<Vec<OrbitParams>, GeometryError> {
    if k < 1 {
        return Err(GeometryError::NoOrbits(k));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(GeometryError::InvalidInterval(c));
    }
    OrbitParams::new(a1, b1)?;
    (0..k)
        .map(|i| {
            let step = f64::from(i) * c;
            OrbitParams::new(a1 + step, b1 + step)
        })
        .collect()
}

pub fn wave_value(wave: &WaveParams, noise_sample: f64, theta: f64) -> f64 {
    wave.lambda1 * (f64::from(wave.n1) * theta).sin()
        + wave.lambda2 * (f64::from(wave.n2) * theta).sin()
        + wave.eta * noise_sample
}

/// The orbit point at `theta` scaled radially by `phi + 1`.
///
/// No clamping: with a large noise level `phi + 1` can be negative and the
/// point then lies on the opposite side of the nucleus.
pub fn visual_wave_point(orbit: OrbitParams, phi: f64, theta: f64) -> Point {
    let r = phi + 1.0;
    Point::new(orbit.a * r * theta.cos(), orbit.b * r * theta.sin())
}

/// Grid angle `2πi/q`.
pub fn grid_angle(i: usize, q: usize) -> f64 {
    TAU * i as f64 / q as f64
}

pub fn quantize_wave(
    orbit: OrbitParams,
    wave: &WaveParams,
    noise: &NoiseRealization,
    q: u32,
) -> Result<Polyline, GeometryError> {
    if q < 3 {
        return Err(GeometryError::Quantization(q));
    }
    let q = q as usize;
    if noise.len() != q {
        return Err(GeometryError::NoiseLength {
            expected: q,
            got: noise.len(),
        });
    }
    let points = noise
        .samples
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let theta = grid_angle(i, q);
            visual_wave_point(orbit, wave_value(wave, eps, theta), theta)
        })
        .collect();
    Ok(Polyline { points })
}

/// Builds the `K` quantized contours of a class with one noise realization per orbit.
pub fn build_visual_atom(spec: &ClassSpec, noises: &[NoiseRealization]) -> Result<VisualAtomShape, GeometryError> {
    let orbits = spec.orbits()?;
    if noises.len() != orbits.len() {
        return Err(GeometryError::NoiseCount {
            expected: orbits.len(),
            got: noises.len(),
        });
    }
    let polylines = orbits
        .iter()
        .zip(noises)
        .enumerate()
        .map(|(k, (&orbit, noise))| quantize_wave(orbit, &spec.wave_for_orbit(k)?, noise, spec.quantization))
        .collect::<Result<_, _>>()?;
    Ok(VisualAtomShape { polylines })
}
