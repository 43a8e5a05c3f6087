//! Class-level and image-level parameter sampling.
//!
//! Class parameters (orbit count, first orbit, interval, frequencies,
//! amplitudes, quantization, noise level) are drawn once per class from the
//! class seed. Image parameters (line thickness, per-orbit gray level, nucleus
//! position) and the noise realizations are drawn per image from the image
//! seed. All draws are uniform over the configured range.
//!
//! Two classes may draw identical parameters; no deduplication is done.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{orbit_sequence, GeometryError, NoiseRealization, OrbitParams, Point, WaveParams};
use crate::rng::{derive_seed, orbit_seed, Stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RangeError {
    #[error("range `{name}` has min {min} > max {max}")]
    Inverted {
        name: &'static str,
        min: String,
        max: String,
    },
    #[error("range `{name}` must be finite")]
    NotFinite { name: &'static str },
    #[error("range `{name}` must lie within {allowed}, got [{min}, {max}]")]
    OutOfDomain {
        name: &'static str,
        allowed: &'static str,
        min: String,
        max: String,
    },
}

/// Inclusive `[min, max]` range; a fixed value has `min == max`.
///
/// Serialized as a bare value when fixed and as `[min, max]` otherwise, and
/// accepts either form on input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange<T> {
    pub min: T,
    pub max: T,
}

impl<T: Copy> ParamRange<T> {
    pub const fn new(min: T, max: T) -> Self {
        Self { min, max }
    }

    pub const fn fixed(v: T) -> Self {
        Self { min: v, max: v }
    }
}

impl<T: PartialOrd> ParamRange<T> {
    pub fn contains(&self, v: &T) -> bool {
        &self.min <= v && v <= &self.max
    }
}

impl<T: Serialize + PartialEq> Serialize for ParamRange<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.min == self.max {
            self.min.serialize(s)
        } else {
            [&self.min, &self.max].serialize(s)
        }
    }
}

impl<'de, T: Deserialize<'de> + Copy> Deserialize<'de> for ParamRange<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Fixed(T),
            Pair([T; 2]),
        }
        Ok(match Repr::<T>::deserialize(d)? {
            Repr::Fixed(v) => Self::fixed(v),
            Repr::Pair([min, max]) => Self::new(min, max),
        })
    }
}

impl<T: fmt::Display + PartialEq> fmt::Display for ParamRange<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "[{}, {}]", self.min, self.max)
        }
    }
}

/// Sampling range for every class and image parameter.
///
/// Defaults are the baseline ranges. `axis_a`/`axis_b` are the semi-axes of
/// the first orbit; `nucleus` applies to both coordinates independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingRanges {
    pub orbits: ParamRange<u32>,
    pub axis_a: ParamRange<f64>,
    pub axis_b: ParamRange<f64>,
    pub orbit_interval: ParamRange<f64>,
    pub frequency: ParamRange<u32>,
    pub amplitude: ParamRange<f64>,
    pub quantization: ParamRange<u32>,
    pub noise: ParamRange<f64>,
    pub line_thickness: ParamRange<u32>,
    pub line_color: ParamRange<f64>,
    pub nucleus: ParamRange<f64>,
    /// Draw `(n1, n2, λ1, λ2)` independently for every orbit instead of once per class.
    pub per_orbit_waves: bool,
}

impl Default for SamplingRanges {
    fn default() -> Self {
        Self::baseline()
    }
}

impl SamplingRanges {
    pub const fn baseline() -> Self {
        Self {
            orbits: ParamRange::new(1, 200),
            axis_a: ParamRange::new(1.0, 400.0),
            axis_b: ParamRange::new(1.0, 400.0),
            orbit_interval: ParamRange::fixed(1.0),
            frequency: ParamRange::new(0, 20),
            amplitude: ParamRange::fixed(0.5),
            quantization: ParamRange::new(200, 1000),
            noise: ParamRange::new(0.0, 1.0),
            line_thickness: ParamRange::fixed(1),
            line_color: ParamRange::new(0.0, 1.0),
            nucleus: ParamRange::new(-1.0, 1.0),
            per_orbit_waves: false,
        }
    }

    pub fn validate(&self) -> Result<(), RangeError> {
        check_int("orbits", self.orbits, 1, u32::MAX, ">= 1")?;
        check_int("frequency", self.frequency, 0, u32::MAX, ">= 0")?;
        check_int("quantization", self.quantization, 3, u32::MAX, ">= 3")?;
        check_int("line_thickness", self.line_thickness, 1, u32::MAX, ">= 1")?;
        check_real("axis_a", self.axis_a, |v| v > 0.0, "(0, inf)")?;
        check_real("axis_b", self.axis_b, |v| v > 0.0, "(0, inf)")?;
        check_real("orbit_interval", self.orbit_interval, |v| v >= 0.0, "[0, inf)")?;
        check_real("amplitude", self.amplitude, |v| v >= 0.0, "[0, inf)")?;
        check_real("noise", self.noise, |v| v >= 0.0, "[0, inf)")?;
        check_real("line_color", self.line_color, |v| (0.0..=1.0).contains(&v), "[0, 1]")?;
        check_real("nucleus", self.nucleus, |v| (-1.0..=1.0).contains(&v), "[-1, 1]")?;
        Ok(())
    }
}

fn check_int(
    name: &'static str,
    r: ParamRange<u32>,
    lo: u32,
    hi: u32,
    allowed: &'static str,
) -> Result<(), RangeError> {
    if r.min > r.max {
        return Err(RangeError::Inverted {
            name,
            min: r.min.to_string(),
            max: r.max.to_string(),
        });
    }
    if r.min < lo || r.max > hi {
        return Err(RangeError::OutOfDomain {
            name,
            allowed,
            min: r.min.to_string(),
            max: r.max.to_string(),
        });
    }
    Ok(())
}

fn check_real(
    name: &'static str,
    r: ParamRange<f64>,
    ok: impl Fn(f64) -> bool,
    allowed: &'static str,
) -> Result<(), RangeError> {
    if !r.min.is_finite() || !r.max.is_finite() {
        return Err(RangeError::NotFinite { name });
    }
    if r.min > r.max {
        return Err(RangeError::Inverted {
            name,
            min: r.min.to_string(),
            max: r.max.to_string(),
        });
    }
    if !ok(r.min) || !ok(r.max) {
        return Err(RangeError::OutOfDomain {
            name,
            allowed,
            min: r.min.to_string(),
            max: r.max.to_string(),
        });
    }
    Ok(())
}

/// Frequencies and amplitudes of the two sinusoids of one orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonics {
    pub n1: u32,
    pub n2: u32,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Parameters fixed for every image of one class.
///
/// `n1, n2, lambda1, lambda2` are shared by all orbits unless `orbit_waves`
/// is non-empty, in which case it holds one entry per orbit (and the shared
/// fields mirror orbit 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub class_id: u64,
    pub orbit_count: u32,
    pub a1: f64,
    pub b1: f64,
    pub orbit_interval: f64,
    pub n1: u32,
    pub n2: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub quantization: u32,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orbit_waves: Vec<Harmonics>,
}

impl ClassSpec {
    pub fn orbits(&self) -> Result<Vec<OrbitParams>, GeometryError> {
        orbit_sequence(self.a1, self.b1, self.orbit_interval, self.orbit_count)
    }

    pub fn harmonics(&self, orbit: usize) -> Harmonics {
        self.orbit_waves.get(orbit).copied().unwrap_or(Harmonics {
            n1: self.n1,
            n2: self.n2,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
        })
    }

    pub fn wave_for_orbit(&self, orbit: usize) -> Result<WaveParams, GeometryError> {
        let h = self.harmonics(orbit);
        WaveParams::new(h.n1, h.n2, h.lambda1, h.lambda2, self.eta)
    }

    /// Largest `max(a_k, b_k) · (1 + λ1 + λ2 + η)` over the orbits; no
    /// contour point lies further than this from the nucleus along either axis.
    pub fn bounding_radius(&self) -> f64 {
        let last = f64::from(self.orbit_count.saturating_sub(1)) * self.orbit_interval;
        (0..self.orbit_count.max(1) as usize)
            .map(|k| {
                let h = self.harmonics(k);
                1.0 + h.lambda1 + h.lambda2 + self.eta
            })
            .fold(0.0_f64, f64::max)
            * (self.a1.max(self.b1) + last)
    }
}

/// Per-image parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub instance_id: u64,
    pub line_thickness: u32,
    pub orbit_colors: Vec<f64>,
    pub nucleus: Point,
    pub noises: Vec<NoiseRealization>,
}

pub fn sample_class(master_seed: u64, class_id: u64, ranges: &SamplingRanges) -> Result<ClassSpec, RangeError> {
    ranges.validate()?;
    let seed = derive_seed(master_seed, class_id, None);
    let mut s = Stream::new(seed);
    let draw_u32 = |s: &mut Stream, r: ParamRange<u32>| s.int(r.min.into(), r.max.into()) as u32;

    let orbit_count = draw_u32(&mut s, ranges.orbits);
    let a1 = s.real(ranges.axis_a.min, ranges.axis_a.max);
    let b1 = s.real(ranges.axis_b.min, ranges.axis_b.max);
    let orbit_interval = s.real(ranges.orbit_interval.min, ranges.orbit_interval.max);
    let draw_harmonics = |s: &mut Stream| Harmonics {
        n1: draw_u32(s, ranges.frequency),
        n2: draw_u32(s, ranges.frequency),
        lambda1: s.real(ranges.amplitude.min, ranges.amplitude.max),
        lambda2: s.real(ranges.amplitude.min, ranges.amplitude.max),
    };
    let shared = draw_harmonics(&mut s);
    let quantization = draw_u32(&mut s, ranges.quantization);
    let eta = s.real(ranges.noise.min, ranges.noise.max);

    let orbit_waves: Vec<Harmonics> = if ranges.per_orbit_waves {
        (0..u64::from(orbit_count))
            .map(|k| draw_harmonics(&mut Stream::new(orbit_seed(seed, k))))
            .collect()
    } else {
        Vec::new()
    };
    let first = orbit_waves.first().copied().unwrap_or(shared);

    Ok(ClassSpec {
        class_id,
        orbit_count,
        a1,
        b1,
        orbit_interval,
        n1: first.n1,
        n2: first.n2,
        lambda1: first.lambda1,
        lambda2: first.lambda2,
        quantization,
        eta,
        orbit_waves,
    })
}

pub fn sample_instance(
    master_seed: u64,
    class_spec: &ClassSpec,
    instance_id: u64,
    ranges: &SamplingRanges,
) -> Result<InstanceSpec, RangeError> {
    ranges.validate()?;
    let mut s = Stream::new(derive_seed(master_seed, class_spec.class_id, Some(instance_id)));
    let k = class_spec.orbit_count as usize;
    let q = class_spec.quantization as usize;

    let line_thickness = s.int(ranges.line_thickness.min.into(), ranges.line_thickness.max.into()) as u32;
    let orbit_colors = (0..k)
        .map(|_| s.real(ranges.line_color.min, ranges.line_color.max))
        .collect();
    let nucleus = Point::new(
        s.real(ranges.nucleus.min, ranges.nucleus.max),
        s.real(ranges.nucleus.min, ranges.nucleus.max),
    );
    let noises = (0..k)
        .map(|_| {
            let samples = (0..q).map(|_| s.real(-1.0, 1.0)).collect();
            NoiseRealization::new(samples).expect("uniform draws lie in [-1, 1]")
        })
        .collect();

    Ok(InstanceSpec {
        instance_id,
        line_thickness,
        orbit_colors,
        nucleus,
        noises,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn baseline_class_in_table_ranges() {
        let spec = sample_class(42, 0, &SamplingRanges::baseline()).unwrap();
        assert!(spec.n1 <= 20 && spec.n2 <= 20);
        assert!((200..=1000).contains(&spec.quantization));
        assert!((1..=200).contains(&spec.orbit_count));
        assert_eq!(spec.orbit_interval, 1.0);
        assert_eq!((spec.lambda1, spec.lambda2), (0.5, 0.5));
        assert!(spec.orbit_waves.is_empty());
    }

    #[test]
    fn degenerate_ranges_give_fixed_values() {
        let r = SamplingRanges {
            orbits: ParamRange::fixed(3),
            axis_a: ParamRange::fixed(10.0),
            axis_b: ParamRange::fixed(20.0),
            orbit_interval: ParamRange::fixed(2.0),
            frequency: ParamRange::fixed(4),
            amplitude: ParamRange::fixed(0.25),
            quantization: ParamRange::fixed(300),
            noise: ParamRange::fixed(0.1),
            ..SamplingRanges::baseline()
        };
        for seed in [0, 1, 42, u64::MAX] {
            let spec = sample_class(seed, 5, &r).unwrap();
            assert_eq!(
                spec,
                ClassSpec {
                    class_id: 5,
                    orbit_count: 3,
                    a1: 10.0,
                    b1: 20.0,
                    orbit_interval: 2.0,
                    n1: 4,
                    n2: 4,
                    lambda1: 0.25,
                    lambda2: 0.25,
                    quantization: 300,
                    eta: 0.1,
                    orbit_waves: vec![],
                }
            );
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let r = SamplingRanges::baseline();
        assert_eq!(sample_class(42, 0, &r).unwrap(), sample_class(42, 0, &r).unwrap());
        let c = sample_class(42, 0, &r).unwrap();
        assert_eq!(
            sample_instance(42, &c, 3, &r).unwrap(),
            sample_instance(42, &c, 3, &r).unwrap()
        );
    }

    #[test]
    fn baseline_instance_ranges() {
        let r = SamplingRanges::baseline();
        for class_id in 0..20 {
            let c = sample_class(7, class_id, &r).unwrap();
            let inst = sample_instance(7, &c, 0, &r).unwrap();
            assert_eq!(inst.line_thickness, 1);
            assert_eq!(inst.orbit_colors.len(), c.orbit_count as usize);
            assert_eq!(inst.noises.len(), c.orbit_count as usize);
            assert!(inst.noises.iter().all(|n| n.len() == c.quantization as usize));
            assert!(inst.orbit_colors.iter().all(|v| (0.0..=1.0).contains(v)));
            assert!((-1.0..=1.0).contains(&inst.nucleus.x) && (-1.0..=1.0).contains(&inst.nucleus.y));
        }
    }

    #[test]
    fn instance_id_does_not_touch_class() {
        let r = SamplingRanges::baseline();
        let c = sample_class(42, 3, &r).unwrap();
        let before = c.clone();
        for i in 0..5 {
            sample_instance(42, &c, i, &r).unwrap();
        }
        assert_eq!(c, before);
        assert_ne!(
            sample_instance(42, &c, 0, &r).unwrap(),
            sample_instance(42, &c, 1, &r).unwrap()
        );
    }

    #[test]
    fn class_ids_give_distinct_specs() {
        let r = SamplingRanges::baseline();
        let distinct: HashSet<String> = (0..1000)
            .map(|c| {
                let spec = ClassSpec {
                    class_id: 0,
                    ..sample_class(42, c, &r).unwrap()
                };
                serde_json::to_string(&spec).unwrap()
            })
            .collect();
        assert!(distinct.len() >= 999);
    }

    #[test]
    fn order_independent() {
        let r = SamplingRanges::baseline();
        let forward: Vec<_> = (0..50).map(|c| sample_class(9, c, &r).unwrap()).collect();
        let mut backward: Vec<_> = (0..50).rev().map(|c| sample_class(9, c, &r).unwrap()).collect();
        backward.reverse();
        assert_eq!(forward, backward);
    }

    #[test]
    fn per_orbit_waves_sample_each_orbit() {
        let r = SamplingRanges {
            per_orbit_waves: true,
            amplitude: ParamRange::new(0.0, 1.0),
            ..SamplingRanges::baseline()
        };
        let c = sample_class(42, 0, &r).unwrap();
        assert_eq!(c.orbit_waves.len(), c.orbit_count as usize);
        assert_eq!(c.harmonics(0), c.orbit_waves[0]);
        assert_eq!(c.n1, c.orbit_waves[0].n1);
        assert!(c.orbit_waves.iter().all(|h| h.n1 <= 20 && h.lambda2 <= 1.0));
        if c.orbit_count > 3 {
            assert!(c.orbit_waves.windows(2).any(|w| w[0] != w[1]));
        }
    }

    #[test]
    fn invalid_ranges_rejected() {
        let inverted = SamplingRanges {
            frequency: ParamRange::new(5, 2),
            ..SamplingRanges::baseline()
        };
        assert!(matches!(
            sample_class(0, 0, &inverted),
            Err(RangeError::Inverted { name: "frequency", .. })
        ));
        let small_q = SamplingRanges {
            quantization: ParamRange::new(2, 10),
            ..SamplingRanges::baseline()
        };
        assert!(matches!(
            small_q.validate(),
            Err(RangeError::OutOfDomain {
                name: "quantization",
                ..
            })
        ));
        let bad_axis = SamplingRanges {
            axis_a: ParamRange::new(0.0, 1.0),
            ..SamplingRanges::baseline()
        };
        assert!(bad_axis.validate().is_err());
        let nan = SamplingRanges {
            noise: ParamRange::new(0.0, f64::NAN),
            ..SamplingRanges::baseline()
        };
        assert!(matches!(nan.validate(), Err(RangeError::NotFinite { name: "noise" })));
        let c = sample_class(0, 0, &SamplingRanges::baseline()).unwrap();
        let bad_color = SamplingRanges {
            line_color: ParamRange::new(0.0, 2.0),
            ..SamplingRanges::baseline()
        };
        assert!(sample_instance(0, &c, 0, &bad_color).is_err());
    }

    #[test]
    fn range_serde_accepts_both_forms() {
        let r: SamplingRanges = toml::from_str("frequency = [0, 40]\namplitude = 1.0\n").unwrap();
        assert_eq!(r.frequency, ParamRange::new(0, 40));
        assert_eq!(r.amplitude, ParamRange::fixed(1.0));
        assert_eq!(r.quantization, SamplingRanges::baseline().quantization);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["frequency"], serde_json::json!([0, 40]));
        assert_eq!(json["amplitude"], serde_json::json!(1.0));
        assert!(toml::from_str::<SamplingRanges>("frequncy = 3").is_err());
    }

    #[test]
    fn bounding_radius_matches_formula() {
        let c = ClassSpec {
            class_id: 0,
            orbit_count: 3,
            a1: 2.0,
            b1: 5.0,
            orbit_interval: 1.0,
            n1: 1,
            n2: 2,
            lambda1: 0.5,
            lambda2: 0.25,
            quantization: 10,
            eta: 0.25,
            orbit_waves: vec![],
        };
        assert!((c.bounding_radius() - 7.0 * 2.0).abs() < 1e-12);
    }
}
