use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::write_atomic;
use super::{
    class_dir, class_spec, encode_image, image_path, sha256_hex, ClassRecord, DatasetConfig, DatasetError, ImageRecord,
    Manifest, CHECKPOINT_FILE, CONFIG_FILE, MANIFEST_FILE,
};
use crate::sampling::ClassSpec;

#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    /// Abort with [`DatasetError::Interrupted`] once this many new images
    /// have been written. Used to exercise resumption.
    pub stop_after: Option<usize>,
    /// Report progress on stderr.
    pub progress: bool,
}

pub(crate) fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool, DatasetError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| DatasetError::Config(format!("thread pool: {e}")))
}

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    index: u64,
    sha256: String,
}

/// Completed images from a previous interrupted run, keyed by flat index.
///
/// An entry only counts if the file is still on disk with the recorded hash.
fn load_checkpoint(root: &Path, content: &DatasetConfig) -> Result<HashMap<u64, String>, DatasetError> {
    let path = root.join(CHECKPOINT_FILE);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
        Err(e) => return Err(DatasetError::io(&path)(e)),
    };
    let mut lines = BufReader::new(file).lines();
    let header = match lines.next() {
        Some(line) => line.map_err(DatasetError::io(&path))?,
        None => return Ok(HashMap::new()),
    };
    match DatasetConfig::parse(&header) {
        Ok(cfg) if cfg == *content => {}
        _ => {
            return Err(DatasetError::Config(format!(
                "{} belongs to a different configuration; remove it to start over",
                path.display()
            )))
        }
    }
    let n = content.instances;
    let mut done = HashMap::new();
    // a torn final line from a crash is skipped
    for line in lines.map_while(Result::ok) {
        let Ok(entry) = serde_json::from_str::<CheckpointEntry>(&line) else {
            continue;
        };
        let file = root.join(image_path(entry.index / n, entry.index % n));
        if fs::read(&file).is_ok_and(|bytes| sha256_hex(&bytes) == entry.sha256) {
            done.insert(entry.index, entry.sha256);
        }
    }
    Ok(done)
}

fn open_checkpoint(root: &Path, content: &DatasetConfig, fresh: bool) -> Result<File, DatasetError> {
    let path = root.join(CHECKPOINT_FILE);
    let mut f = OpenOptions::new()
        .create(true)
        .append(!fresh)
        .write(true)
        .truncate(fresh)
        .open(&path)
        .map_err(DatasetError::io(&path))?;
    if fresh {
        writeln!(f, "{}", content.to_json()).map_err(DatasetError::io(&path))?;
    }
    Ok(f)
}

pub fn compile(config: &DatasetConfig) -> Result<Manifest, DatasetError> {
    compile_with(config, &CompileOptions::default())
}

/// Writes every image of the dataset plus manifest and config echo.
///
/// An interrupted run leaves a checkpoint in the output root; calling again
/// with the same configuration skips the images already written.
pub fn compile_with(config: &DatasetConfig, opts: &CompileOptions) -> Result<Manifest, DatasetError> {
    config.validate()?;
    let root = config
        .output
        .as_deref()
        .ok_or_else(|| DatasetError::Config("no output root set".into()))?;
    let workers = config.workers.unwrap_or_else(default_workers);
    let content = config.content();
    let (classes, instances) = (config.classes, config.instances);
    let total = config.total_images();

    let specs: Vec<ClassSpec> = (0..classes).map(|c| class_spec(config, c)).collect::<Result<_, _>>()?;

    fs::create_dir_all(root).map_err(DatasetError::io(root))?;
    for c in 0..classes {
        let dir = root.join(class_dir(c));
        fs::create_dir_all(&dir).map_err(DatasetError::io(&dir))?;
    }

    let done = load_checkpoint(root, &content)?;
    let checkpoint = Mutex::new(open_checkpoint(root, &content, done.is_empty())?);
    let checkpoint_path = root.join(CHECKPOINT_FILE);

    let written = AtomicUsize::new(0);
    let finished = AtomicUsize::new(done.len());
    let report_every = (total / 100).max(1) as usize;

    let pool = build_pool(workers)?;
    let hashes: Vec<String> = pool.install(|| {
        (0..total as usize)
            .into_par_iter()
            .with_max_len(1)
            .map(|idx| {
                let idx = idx as u64;
                if let Some(h) = done.get(&idx) {
                    return Ok(h.clone());
                }
                if let Some(limit) = opts.stop_after {
                    if written.fetch_add(1, Ordering::SeqCst) >= limit {
                        return Err(DatasetError::Interrupted { written: limit });
                    }
                }
                let (c, i) = (idx / instances, idx % instances);
                let bytes = encode_image(config, &specs[c as usize], i)?;
                let hash = sha256_hex(&bytes);
                write_atomic(&root.join(image_path(c, i)), &bytes)?;
                {
                    let mut f = checkpoint.lock().expect("checkpoint lock");
                    let entry = serde_json::to_string(&CheckpointEntry {
                        index: idx,
                        sha256: hash.clone(),
                    })
                    .expect("entry serializes");
                    writeln!(f, "{entry}").map_err(DatasetError::io(&checkpoint_path))?;
                }
                let n = finished.fetch_add(1, Ordering::Relaxed) + 1;
                if opts.progress && (n % report_every == 0 || n as u64 == total) {
                    eprint!("\rrendered {n}/{total}");
                    if n as u64 == total {
                        eprintln!();
                    }
                }
                Ok(hash)
            })
            .collect::<Result<Vec<_>, DatasetError>>()
    })?;

    let mut hashes = hashes.into_iter();
    let records = specs
        .into_iter()
        .map(|spec| {
            let c = spec.class_id;
            let images = (0..instances)
                .map(|i| ImageRecord {
                    instance_id: i,
                    file: image_path(c, i),
                    sha256: hashes.next().expect("one hash per image"),
                })
                .collect();
            ClassRecord {
                class_id: c,
                label: c + 1,
                dir: class_dir(c),
                spec,
                images,
            }
        })
        .collect();

    let manifest = Manifest::new(content.clone(), records);
    manifest.write(&root.join(MANIFEST_FILE))?;
    let mut echo = serde_json::to_string_pretty(&content).expect("config serializes");
    echo.push('\n');
    write_atomic(&root.join(CONFIG_FILE), echo.as_bytes())?;
    drop(checkpoint);
    fs::remove_file(&checkpoint_path).map_err(DatasetError::io(&checkpoint_path))?;
    Ok(manifest)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub images: u64,
    pub workers: usize,
    pub width: u32,
    pub height: u32,
    pub seconds: f64,
    pub images_per_second: f64,
}

/// Renders, encodes and hashes `images` images in memory, cycling through the
/// dataset in (class, instance) order.
pub fn bench(config: &DatasetConfig, images: u64, workers: Option<usize>) -> Result<BenchReport, DatasetError> {
    config.validate()?;
    let workers = workers.or(config.workers).unwrap_or_else(default_workers);
    let n = config.instances;
    let class_count = images.div_ceil(n).min(config.classes);
    let specs: Vec<ClassSpec> = (0..class_count)
        .map(|c| class_spec(config, c))
        .collect::<Result<_, _>>()?;
    let pool = build_pool(workers)?;
    let start = Instant::now();
    pool.install(|| {
        (0..images as usize)
            .into_par_iter()
            .with_max_len(1)
            .try_for_each(|idx| {
                let idx = idx as u64;
                let (c, i) = ((idx / n) % class_count, idx % n);
                let bytes = encode_image(config, &specs[c as usize], i)?;
                std::hint::black_box(sha256_hex(&bytes));
                Ok::<_, DatasetError>(())
            })
    })?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchReport {
        images,
        workers,
        width: config.width,
        height: config.height,
        seconds,
        images_per_second: images as f64 / seconds,
    })
}
