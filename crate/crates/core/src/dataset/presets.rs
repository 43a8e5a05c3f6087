//! Named range presets for the frequency, orbit-count, quantization and
//! amplitude ablations. Each preset is the baseline with exactly one range
//! replaced.

use crate::sampling::{ParamRange, SamplingRanges};

pub const FREQUENCY_ROWS: [(u32, u32); 6] = [(0, 20), (0, 40), (0, 60), (2, 20), (10, 20), (20, 20)];
pub const ORBIT_ROWS: [(u32, u32); 4] = [(1, 200), (20, 200), (100, 200), (200, 200)];
pub const QUANTIZATION_ROWS: [(u32, u32); 5] = [(200, 1000), (800, 1000), (3, 200), (3, 500), (3, 1000)];
pub const AMPLITUDE_ROWS: [(f64, f64); 5] = [(0.5, 0.5), (0.0, 0.5), (1.0, 1.0), (0.5, 1.0), (0.0, 1.0)];

/// Which range a preset overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ablation {
    Baseline,
    Frequency,
    Orbits,
    Quantization,
    Amplitude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub ablation: Ablation,
    pub ranges: SamplingRanges,
}

pub fn all() -> Vec<Preset> {
    let base = SamplingRanges::baseline;
    let mut out = vec![Preset {
        name: "baseline".into(),
        ablation: Ablation::Baseline,
        ranges: base(),
    }];
    out.extend(FREQUENCY_ROWS.iter().map(|&(lo, hi)| Preset {
        name: format!("freq-{lo}-{hi}"),
        ablation: Ablation::Frequency,
        ranges: SamplingRanges {
            frequency: ParamRange::new(lo, hi),
            ..base()
        },
    }));
    out.extend(ORBIT_ROWS.iter().map(|&(lo, hi)| Preset {
        name: format!("orbits-{lo}-{hi}"),
        ablation: Ablation::Orbits,
        ranges: SamplingRanges {
            orbits: ParamRange::new(lo, hi),
            ..base()
        },
    }));
    out.extend(QUANTIZATION_ROWS.iter().map(|&(lo, hi)| Preset {
        name: format!("quant-{lo}-{hi}"),
        ablation: Ablation::Quantization,
        ranges: SamplingRanges {
            quantization: ParamRange::new(lo, hi),
            ..base()
        },
    }));
    out.extend(AMPLITUDE_ROWS.iter().map(|&(lo, hi)| Preset {
        name: format!("amp-{lo}-{hi}"),
        ablation: Ablation::Amplitude,
        ranges: SamplingRanges {
            amplitude: ParamRange::new(lo, hi),
            ..base()
        },
    }));
    out
}

pub fn by_name(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|p| p.name).collect()
}
