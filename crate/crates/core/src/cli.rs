//! Command-line front end.
//!
//! Configuration is layered: config file, then `--preset`, then individual
//! flags. The effective configuration is echoed to stderr as one JSON line
//! before anything runs; feeding that line back through `--config` reproduces
//! the same dataset. Results go to stdout as JSON lines.
//!
//! Exit status: 0 on success, 1 on runtime failure (including verification
//! mismatches), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::dataset::{self, presets, CompileOptions, DatasetConfig, MANIFEST_FILE};
use crate::preview::preview;
use crate::sampling::ParamRange;

#[derive(Debug, Parser)]
#[command(
    name = "visatom",
    version,
    about = "Generate contour-image datasets from waves on elliptical orbits"
)]
pub struct Cli {
    /// Print progress on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Do not echo the effective configuration.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a dataset to disk.
    Generate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output root directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a contact sheet of a few classes.
    Preview {
        #[command(flatten)]
        config: ConfigArgs,
        /// Class ids to show, one row each (default: 0..4).
        #[arg(long = "class", value_name = "ID")]
        class_ids: Vec<u64>,
        /// Samples per class.
        #[arg(long, default_value_t = 4)]
        samples: u32,
        /// Output PNG path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print sampled class parameters, one JSON line per class.
    Inspect {
        #[command(flatten)]
        config: ConfigArgs,
        /// Class ids (default: every class).
        #[arg(long = "class", value_name = "ID")]
        class_ids: Vec<u64>,
    },
    /// Re-render a sample of a compiled dataset and compare hashes.
    Verify {
        /// Path to manifest.jsonl or to the dataset root.
        manifest: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
    },
    /// Measure in-memory render throughput.
    Bench {
        #[command(flatten)]
        config: ConfigArgs,
        /// Number of images to render.
        #[arg(long, default_value_t = 400)]
        images: u64,
    },
    /// List the built-in range presets.
    Presets,
}

/// Configuration layering shared by the subcommands that build a config.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// TOML or JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Start from a named range preset (see `visatom presets`).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of classes C.
    #[arg(long)]
    pub classes: Option<u64>,
    /// Images per class N.
    #[arg(long)]
    pub instances: Option<u64>,
    /// Square image side in pixels.
    #[arg(long)]
    pub size: Option<u32>,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    #[arg(long, env = "VISATOM_WORKERS")]
    pub workers: Option<usize>,

    /// Number of orbits K.
    #[arg(long)]
    pub orbits_min: Option<u32>,
    #[arg(long)]
    pub orbits_max: Option<u32>,
    /// First-orbit semi-axes a1 and b1.
    #[arg(long)]
    pub axis_min: Option<f64>,
    #[arg(long)]
    pub axis_max: Option<f64>,
    /// Orbit interval c (fixed).
    #[arg(long)]
    pub orbit_interval: Option<f64>,
    /// Frequencies n1, n2.
    #[arg(long)]
    pub freq_min: Option<u32>,
    #[arg(long)]
    pub freq_max: Option<u32>,
    /// Amplitudes λ1, λ2.
    #[arg(long)]
    pub amp_min: Option<f64>,
    #[arg(long)]
    pub amp_max: Option<f64>,
    /// Quantization q.
    #[arg(long)]
    pub quant_min: Option<u32>,
    #[arg(long)]
    pub quant_max: Option<u32>,
    /// Noise level η.
    #[arg(long)]
    pub noise_min: Option<f64>,
    #[arg(long)]
    pub noise_max: Option<f64>,
    /// Line thickness in pixels (fixed).
    #[arg(long)]
    pub line_thickness: Option<u32>,
    /// Gray level of each orbit.
    #[arg(long)]
    pub color_min: Option<f64>,
    #[arg(long)]
    pub color_max: Option<f64>,
    /// Nucleus position, per coordinate.
    #[arg(long)]
    pub nucleus_min: Option<f64>,
    #[arg(long)]
    pub nucleus_max: Option<f64>,
    /// Sample wave parameters independently for every orbit.
    #[arg(long)]
    pub per_orbit_waves: bool,
}

fn set<T: Copy>(range: &mut ParamRange<T>, min: Option<T>, max: Option<T>) {
    if let Some(v) = min {
        range.min = v;
    }
    if let Some(v) = max {
        range.max = v;
    }
}

impl ConfigArgs {
    pub fn resolve(&self) -> anyhow::Result<DatasetConfig> {
        let mut cfg = match &self.config {
            Some(path) => DatasetConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => DatasetConfig::default(),
        };
        if let Some(name) = &self.preset {
            let Some(p) = presets::by_name(name) else {
                bail!(
                    "unknown preset `{name}`; known presets: {}",
                    presets::names().join(", ")
                );
            };
            cfg.ranges = p.ranges;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.classes {
            cfg.classes = v;
        }
        if let Some(v) = self.instances {
            cfg.instances = v;
        }
        if let Some(v) = self.size {
            cfg.width = v;
            cfg.height = v;
        }
        if let Some(v) = self.width {
            cfg.width = v;
        }
        if let Some(v) = self.height {
            cfg.height = v;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        let r = &mut cfg.ranges;
        set(&mut r.orbits, self.orbits_min, self.orbits_max);
        set(&mut r.axis_a, self.axis_min, self.axis_max);
        set(&mut r.axis_b, self.axis_min, self.axis_max);
        set(&mut r.orbit_interval, self.orbit_interval, self.orbit_interval);
        set(&mut r.frequency, self.freq_min, self.freq_max);
        set(&mut r.amplitude, self.amp_min, self.amp_max);
        set(&mut r.quantization, self.quant_min, self.quant_max);
        set(&mut r.noise, self.noise_min, self.noise_max);
        set(&mut r.line_thickness, self.line_thickness, self.line_thickness);
        set(&mut r.line_color, self.color_min, self.color_max);
        set(&mut r.nucleus, self.nucleus_min, self.nucleus_max);
        if self.per_orbit_waves {
            r.per_orbit_waves = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn line(out: &mut dyn Write, value: &impl serde::Serialize) -> anyhow::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

/// Runs a parsed invocation, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let echo = |cfg: &DatasetConfig| {
        if !cli.quiet {
            eprintln!("{}", cfg.to_json());
        }
    };
    match cli.command {
        Command::Generate { config, out: root } => {
            let mut cfg = config.resolve()?;
            if root.is_some() {
                cfg.output = root;
            }
            if cfg.output.is_none() {
                bail!("no output root: pass --out or set `output` in the config");
            }
            echo(&cfg);
            let start = Instant::now();
            let opts = CompileOptions {
                progress: cli.verbose > 0,
                ..Default::default()
            };
            let manifest = dataset::compile_with(&cfg, &opts)?;
            let root = cfg.output.expect("checked above");
            line(
                out,
                &json!({
                    "command": "generate",
                    "classes": cfg.classes,
                    "instances": cfg.instances,
                    "images": manifest.image_count(),
                    "output": root,
                    "manifest": root.join(MANIFEST_FILE),
                    "digest": manifest.digest,
                    "seconds": start.elapsed().as_secs_f64(),
                }),
            )?;
        }
        Command::Preview {
            config,
            class_ids,
            samples,
            out: path,
        } => {
            let cfg = config.resolve()?;
            echo(&cfg);
            let ids = if class_ids.is_empty() {
                (0..cfg.classes.min(4)).collect()
            } else {
                class_ids
            };
            let sheet = preview(&cfg, &ids, samples)?;
            std::fs::write(&path, sheet.encode_png()?).with_context(|| format!("writing {}", path.display()))?;
            line(
                out,
                &json!({
                    "command": "preview",
                    "classes": ids,
                    "samples": samples,
                    "width": sheet.width(),
                    "height": sheet.height(),
                    "output": path,
                }),
            )?;
        }
        Command::Inspect { config, class_ids } => {
            let cfg = config.resolve()?;
            echo(&cfg);
            let ids: Vec<u64> = if class_ids.is_empty() {
                (0..cfg.classes).collect()
            } else {
                class_ids
            };
            for c in ids {
                if c >= cfg.classes {
                    bail!("class {c} out of range (classes = {})", cfg.classes);
                }
                line(out, &dataset::class_spec(&cfg, c)?)?;
            }
        }
        Command::Verify { manifest, fraction } => {
            let path = if manifest.is_dir() {
                manifest.join(MANIFEST_FILE)
            } else {
                manifest
            };
            let report = dataset::verify(&path, fraction)?;
            line(out, &json!({ "command": "verify", "report": report }))?;
            if !report.is_ok() {
                bail!(
                    "{} of {} checked images failed verification",
                    report.issues.len(),
                    report.checked
                );
            }
        }
        Command::Bench { config, images } => {
            let cfg = config.resolve()?;
            echo(&cfg);
            let report = dataset::bench(&cfg, images, cfg.workers)?;
            line(out, &json!({ "command": "bench", "report": report }))?;
        }
        Command::Presets => {
            for p in presets::all() {
                line(out, &json!({ "name": p.name, "ranges": p.ranges }))?;
            }
        }
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
