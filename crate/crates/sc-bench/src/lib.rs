//! Per-frame wall-time benchmarks of the model's algorithm pipeline.
//!
//! Three variants of the bouncing-ball pipeline are driven for a configured
//! number of steps, each on its own fresh area and environment, and each
//! step's algorithm time becomes one sample:
//!
//! 1. `Encode` — only the encode call is timed (learning still happens so
//!    the workload stays realistic, it just isn't on the clock).
//! 2. `Encode, Learn` — encode plus learn timed together.
//! 3. `Encode, Learn, xD Predict, xD Decode` — encode, learn, and a
//!    D-step forecast (predict+decode per step) timed together.
//!
//! Environment stepping, frame rasterization, and the neuron-state feedback
//! copy are plumbing and stay off the clock. Reported statistics are the
//! arithmetic mean and the population standard deviation; throughput is
//! total synapses divided by the mean step time.

use std::io::Write;
use std::time::Instant;

use sc_core::{Area, Binding, ForestSpec, StimuliVector};
use sc_encoders::copy_neuron_states;
use sc_env_ball::{render_frame, BallEnv};
use thiserror::Error;

/// Steps dropped from the front of each sample series to let caches and
/// the allocator settle. Short runs (fewer than `WARMUP_STEPS + 2` steps)
/// keep every sample so at least two remain.
pub const WARMUP_STEPS: usize = 10;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("need at least 2 steps to compute a spread, got {steps}")]
    TooFewSteps { steps: usize },
    #[error("need at least 2 samples to compute a spread, got {samples}")]
    TooFewSamples { samples: usize },
    #[error(transparent)]
    Core(#[from] sc_core::Error),
    #[error(transparent)]
    Env(#[from] sc_env_ball::EnvError),
    #[error("could not write results")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;

/// Sizing for one benchmark run; the defaults are a desk-scale version of
/// the two-forest ball pipeline (scene forest + neuron-feedback forest).
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub neurons: usize,
    /// Synapses per dendrite in the scene forest; the context forest always
    /// has one synapse per dendrite.
    pub scene_synapses: u32,
    /// Dendrite threshold of the scene forest.
    pub scene_threshold: u32,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub steps: usize,
    pub forecast_depth: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            neurons: 50_000,
            scene_synapses: 50,
            scene_threshold: 13,
            width: 100,
            height: 100,
            seed: 42,
            steps: 1_000,
            forecast_depth: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    pub samples: usize,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub synapses_per_sec: f64,
}

/// Arithmetic mean and population standard deviation of `samples`
/// (milliseconds). At least two samples are required.
pub fn compute_stats(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(BenchError::TooFewSamples {
            samples: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    Ok((mean, variance.sqrt()))
}

fn fresh_pipeline(cfg: &BenchConfig) -> Result<(Area, BallEnv)> {
    let scene_size = (cfg.width * cfg.height) as u32;
    let specs = [
        ForestSpec::new(cfg.scene_synapses, scene_size, cfg.scene_threshold),
        ForestSpec::new(1, cfg.neurons as u32, 1),
    ];
    let area = Area::new(cfg.neurons, &specs, 2, 1)?;
    let env = BallEnv::new(cfg.seed, cfg.width, cfg.height)?;
    Ok((area, env))
}

/// Which portion of a pipeline step is on the clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Encode,
    EncodeLearn,
    EncodeLearnForecast,
}

fn run_variant(cfg: &BenchConfig, variant: Variant) -> Result<Vec<f64>> {
    let (mut area, mut env) = fresh_pipeline(cfg)?;
    let mut scene = StimuliVector::new(cfg.width * cfg.height);
    let mut context = StimuliVector::new(cfg.neurons);
    let mut samples = Vec::with_capacity(cfg.steps);
    for _ in 0..cfg.steps {
        env.step();
        render_frame(&env, &mut scene)?;
        let bindings = [Binding::new(0, &scene), Binding::new(1, &context)];

        let mut elapsed = 0.0f64;
        let clock = Instant::now();
        area.encode(&bindings)?;
        match variant {
            Variant::Encode => {
                elapsed += clock.elapsed().as_secs_f64();
                area.learn(&bindings)?;
            }
            Variant::EncodeLearn | Variant::EncodeLearnForecast => {
                area.learn(&bindings)?;
                elapsed += clock.elapsed().as_secs_f64();
            }
        }

        copy_neuron_states(&area, &mut context)?;

        if variant == Variant::EncodeLearnForecast {
            let clock = Instant::now();
            area.forecast(1, 0, cfg.forecast_depth)?;
            elapsed += clock.elapsed().as_secs_f64();
        }

        samples.push(elapsed * 1e3);
    }
    Ok(samples)
}

fn record(label: String, mut samples: Vec<f64>, total_synapses: u64) -> Result<BenchRecord> {
    if samples.len() >= WARMUP_STEPS + 2 {
        samples.drain(..WARMUP_STEPS);
    }
    let (mean_ms, stddev_ms) = compute_stats(&samples)?;
    Ok(BenchRecord {
        label,
        samples: samples.len(),
        mean_ms,
        stddev_ms,
        synapses_per_sec: total_synapses as f64 / (mean_ms / 1e3),
    })
}

/// Runs all three variants and returns their records in pipeline order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.steps < 2 {
        return Err(BenchError::TooFewSteps { steps: cfg.steps });
    }
    // Validate sizing before any timing starts.
    let (area, _) = fresh_pipeline(cfg)?;
    let total_synapses = area.total_synapses();
    drop(area);

    let d = cfg.forecast_depth;
    let variants = [
        ("Encode".to_string(), Variant::Encode),
        ("Encode, Learn".to_string(), Variant::EncodeLearn),
        (
            format!("Encode, Learn, x{d} Predict, x{d} Decode"),
            Variant::EncodeLearnForecast,
        ),
    ];
    variants
        .into_iter()
        .map(|(label, variant)| record(label, run_variant(cfg, variant)?, total_synapses))
        .collect()
}

/// Writes records as CSV: pinned header, one row per record. Labels are
/// quoted because they contain commas.
pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> Result<()> {
    writeln!(out, "label,samples,mean_ms,stddev_ms,synapses_per_sec")?;
    for r in records {
        writeln!(
            out,
            "\"{}\",{},{},{},{}",
            r.label, r.samples, r.mean_ms, r.stddev_ms, r.synapses_per_sec
        )?;
    }
    Ok(())
}
