use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ctnn_core::config::{sha256_file, RunConfig, RunManifest};
use ctnn_core::dataset::{
    export_dataset, generate_sequence, import_dataset, make_entries, Modality, SequenceSpec,
};
use ctnn_core::experiments::{
    run_efficiency_sweep, run_occlusion_demo, run_occlusion_sweep, train_model, training_data,
    write_training_outputs, ClassPrototypes, TrainingData, EFFICIENCY_CSV, OCCLUSION_CSV,
    WEIGHTS_FILE,
};
use ctnn_core::nn::load_weights_expecting;
use ctnn_core::{run_sequence, AutoEncoder};

use crate::{Cli, Command, Common, ConfigError, DemoFailed};

pub fn dispatch(cli: Cli) -> Result<()> {
    let mut config = base_config(&cli.common)?;
    let out = config.output_dir.clone();
    match cli.command {
        Command::GenData { per_class } => {
            if let Some(n) = per_class {
                config.dataset.per_class = n;
            }
            validate(&config)?;
            gen_data(&config, &out)
        }
        Command::Train { epochs, data } => {
            if let Some(n) = epochs {
                config.model.epochs = n;
            }
            validate(&config)?;
            train(&config, &out, data.as_deref())
        }
        Command::Run {
            threshold,
            similar,
            length,
            dump_frames,
        } => {
            if let Some(t) = threshold {
                config.threshold = t;
            }
            if let Some(s) = similar {
                config.sequence.similar_fraction = s;
            }
            if let Some(l) = length {
                config.sequence.length = l;
            }
            validate(&config)?;
            let weights = weights_path(&cli.common, &out);
            run(&config, &out, &weights, dump_frames)
        }
        Command::Sweep {
            efficiency,
            occlusion,
        } => {
            validate(&config)?;
            let weights = weights_path(&cli.common, &out);
            if efficiency {
                sweep_efficiency(&config, &out, &weights)?;
            }
            if occlusion {
                sweep_occlusion(&config, &out, &weights)?;
            }
            Ok(())
        }
        Command::DemoOcclusion {
            digit,
            modality,
            fraction,
        } => {
            validate(&config)?;
            if digit > 9 {
                return Err(ConfigError(format!("digit {digit} is out of range 0-9")).into());
            }
            if !(0.0..=1.0).contains(&fraction) {
                return Err(ConfigError(format!("fraction {fraction} outside [0, 1]")).into());
            }
            let weights = weights_path(&cli.common, &out);
            demo(&config, &out, &weights, digit, modality, fraction)
        }
    }
}

/// Defaults, then the config file, then the common flags.
fn base_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => {
            RunConfig::load(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<()> {
    config
        .validate()
        .map_err(|e| ConfigError(e.to_string()).into())
}

fn weights_path(common: &Common, out: &Path) -> PathBuf {
    common
        .weights
        .clone()
        .unwrap_or_else(|| out.join(WEIGHTS_FILE))
}

fn load_model(config: &RunConfig, path: &Path) -> Result<AutoEncoder> {
    load_weights_expecting(path, &config.model.topology)
        .with_context(|| format!("loading weights from {}", path.display()))
}

fn manifest(command: &str, config: &RunConfig) -> RunManifest {
    RunManifest::new(command, config)
        .with_seed("init", config.init_seed())
        .with_seed("shuffle", config.shuffle_seed())
        .with_seed("sequence", config.sequence_seed())
}

fn finish(
    mut m: RunManifest,
    out: &Path,
    outputs: &[PathBuf],
    weights: Option<&Path>,
) -> Result<()> {
    for p in outputs {
        m.record_output(out, p)?;
    }
    if let Some(w) = weights {
        m.weights_sha256 = Some(sha256_file(w)?);
    }
    m.write(out)?;
    Ok(())
}

fn gen_data(config: &RunConfig, out: &Path) -> Result<()> {
    let entries = make_entries(
        &config.dataset.renderer(),
        0..config.dataset.per_class,
        config.seed,
    )?;
    let rows = export_dataset(out, &entries)?;
    let mut outputs: Vec<PathBuf> = rows.iter().map(|r| out.join(&r.filename)).collect();
    outputs.push(out.join(ctnn_core::dataset::MANIFEST_NAME));
    finish(manifest("gen-data", config), out, &outputs, None)?;
    println!("wrote {} frames to {}", rows.len(), out.display());
    Ok(())
}

fn train(config: &RunConfig, out: &Path, data_dir: Option<&Path>) -> Result<()> {
    let mut data = training_data(config)?;
    if let Some(dir) = data_dir {
        if !dir.is_dir() {
            anyhow::bail!(ctnn_core::CtnnError::Io {
                path: dir.to_path_buf(),
                source: std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "dataset directory not found"
                ),
            });
        }
        let entries = import_dataset(dir)?;
        if entries.is_empty() {
            return Err(ConfigError(format!("dataset {} has no frames", dir.display())).into());
        }
        data = TrainingData {
            train: entries.into_iter().map(|e| e.frame).collect(),
            test: data.test,
        };
    }
    let (model, history) = train_model(config, &data)?;
    let (losses, weights) = write_training_outputs(&model, &history, out)?;
    finish(
        manifest("train", config),
        out,
        std::slice::from_ref(&losses),
        Some(&weights),
    )?;
    match history.last() {
        Some(r) => println!(
            "epoch {}: train_loss {:.6} test_loss {}",
            r.epoch,
            r.train_loss,
            r.test_loss.map_or("-".into(), |t| format!("{t:.6}"))
        ),
        None => println!("0 epochs: weights left at initialization"),
    }
    println!("wrote {} and {}", losses.display(), weights.display());
    Ok(())
}

fn run(config: &RunConfig, out: &Path, weights: &Path, dump_frames: bool) -> Result<()> {
    let model = load_model(config, weights)?;
    let spec = SequenceSpec {
        length: config.sequence.length,
        similar_fraction: config.sequence.similar_fraction,
        seed: config.sequence_seed(),
    };
    let sequence = generate_sequence(&config.dataset.renderer(), &spec)?;
    let trace = run_sequence(&model, config.threshold, &sequence.frames)?;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let trace_path = out.join("trace.csv");
    let seq_path = out.join("sequence.csv");
    fs::write(&trace_path, trace.to_csv())
        .with_context(|| format!("writing {}", trace_path.display()))?;
    fs::write(&seq_path, sequence.manifest_csv())
        .with_context(|| format!("writing {}", seq_path.display()))?;
    let mut outputs = vec![trace_path, seq_path];
    if dump_frames {
        let dir = out.join("frames");
        trace.dump_images(&dir)?;
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .with_context(|| format!("listing {}", dir.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        files.sort();
        outputs.extend(files);
    }
    finish(manifest("run", config), out, &outputs, Some(weights))?;
    println!("network_calls: {} / {}", trace.network_calls, trace.len());
    Ok(())
}

fn sweep_efficiency(config: &RunConfig, out: &Path, weights: &Path) -> Result<()> {
    let model = load_model(config, weights)?;
    let s = &config.sweep;
    let result = run_efficiency_sweep(
        &model,
        &config.dataset.renderer(),
        &s.thresholds,
        &s.similar_fractions,
        s.length,
        config.seed,
    )?;
    let path = out.join(EFFICIENCY_CSV);
    result.write(&path)?;
    finish(
        manifest("sweep --efficiency", config),
        out,
        std::slice::from_ref(&path),
        Some(weights),
    )?;
    println!("wrote {} rows to {}", result.rows.len(), path.display());
    Ok(())
}

fn sweep_occlusion(config: &RunConfig, out: &Path, weights: &Path) -> Result<()> {
    let model = load_model(config, weights)?;
    let test = training_data(config)?.test;
    let heatmap = run_occlusion_sweep(&model, &config.sweep.occlusion_fractions, &test)?;
    let path = out.join(OCCLUSION_CSV);
    heatmap.write(&path)?;
    finish(
        manifest("sweep --occlusion", config),
        out,
        std::slice::from_ref(&path),
        Some(weights),
    )?;
    let n = heatmap.fractions.len();
    println!(
        "wrote {} rows to {} (baseline B = {:.3})",
        n * n,
        path.display(),
        heatmap.baseline.value
    );
    Ok(())
}

fn demo(
    config: &RunConfig,
    out: &Path,
    weights: &Path,
    digit: u8,
    modality: Modality,
    fraction: f64,
) -> Result<()> {
    let model = load_model(config, weights)?;
    let test = training_data(config)?.test;
    let prototypes = ClassPrototypes::from_model(&model, &test)?;
    let frame = test
        .iter()
        .find(|f| f.label() == Some(digit))
        .context("no held-out frame for the requested digit")?;
    let result = run_occlusion_demo(&model, &prototypes, frame, modality, fraction)?;
    let name = match modality {
        Modality::Visual => "visual",
        Modality::Audio => "audio",
    };
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let paths = result.save(
        out,
        &format!("demo_d{digit}_{name}_{:.0}", fraction * 100.0),
    )?;
    finish(
        manifest("demo-occlusion", config),
        out,
        &paths,
        Some(weights),
    )?;
    println!(
        "digit {digit}, {name} occluded {:.0}%: nearest prototype {}",
        fraction * 100.0,
        result.predicted
    );
    if !result.recovered() {
        return Err(DemoFailed(format!(
            "reconstruction resembles digit {} instead of {digit}",
            result.predicted
        ))
        .into());
    }
    Ok(())
}
