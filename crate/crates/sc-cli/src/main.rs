use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use sc_bench::{run_bench, write_csv, BenchConfig, WARMUP_STEPS};
use sc_cli::{inspect, run_demo, DemoConfig};
use sc_core::ForestSpec;

#[derive(Parser)]
#[command(
    name = "sc-cli",
    version,
    about = "Online sequence learner demo: bouncing-ball prediction, benchmarks, checkpoint tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bouncing-ball demo and write one image per step
    Demo(DemoArgs),
    /// Time the per-frame algorithm variants and print a table
    Bench(BenchArgs),
    /// Summarize a saved checkpoint
    Inspect {
        /// Path to a .scx checkpoint
        checkpoint: PathBuf,
    },
}

fn parse_percent(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v <= 100.0 {
        Ok(v)
    } else {
        Err("must be in (0, 100]".into())
    }
}

#[derive(Args)]
struct SizingArgs {
    /// Neurons in the area
    #[arg(long, default_value_t = 50_000)]
    neurons: usize,
    /// Synapses per dendrite in the scene forest
    #[arg(long, default_value_t = 50)]
    synapses: u32,
    /// Scene dendrite threshold as a percentage of its synapses
    #[arg(long, value_parser = parse_percent, default_value_t = 25.0)]
    threshold_percent: f64,
    /// World and frame width in pixels
    #[arg(long, default_value_t = 100)]
    width: usize,
    /// World and frame height in pixels
    #[arg(long, default_value_t = 100)]
    height: usize,
    /// Environment seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct DemoArgs {
    #[command(flatten)]
    sizing: SizingArgs,
    /// Time steps to run
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// Future frames to predict and overlay each step (0 disables)
    #[arg(long, default_value_t = 20)]
    forecast: usize,
    /// Directory for the per-step images
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// Checkpoint to resume from if present and to save at the end
    #[arg(long, value_name = "FILE.scx")]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    sizing: SizingArgs,
    /// Timed steps per variant
    #[arg(long, default_value_t = 1_000)]
    steps: usize,
    /// Forecast depth of the third variant
    #[arg(long, default_value_t = 20)]
    forecast: usize,
    /// Also write the records to this CSV file
    #[arg(long, value_name = "FILE.csv")]
    csv: Option<PathBuf>,
}

fn demo_config(args: &DemoArgs) -> DemoConfig {
    DemoConfig {
        neurons: args.sizing.neurons,
        scene_synapses: args.sizing.synapses,
        threshold_percent: args.sizing.threshold_percent,
        forecast_depth: args.forecast,
        steps: args.steps,
        seed: args.sizing.seed,
        width: args.sizing.width,
        height: args.sizing.height,
    }
}

fn cmd_demo(args: DemoArgs) -> Result<()> {
    let cfg = demo_config(&args);
    let frames = run_demo(&cfg, &args.out_dir, args.checkpoint.as_deref())?;
    println!("wrote {frames} frame(s) to {}", args.out_dir.display());
    if let Some(path) = &args.checkpoint {
        println!("checkpoint saved to {}", path.display());
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let scene_size = (args.sizing.width * args.sizing.height) as u32;
    let spec = ForestSpec::with_threshold_percent(
        args.sizing.synapses,
        scene_size,
        args.sizing.threshold_percent,
    );
    let cfg = BenchConfig {
        neurons: args.sizing.neurons,
        scene_synapses: args.sizing.synapses,
        scene_threshold: spec.threshold,
        width: args.sizing.width,
        height: args.sizing.height,
        seed: args.sizing.seed,
        steps: args.steps,
        forecast_depth: args.forecast,
    };
    let records = run_bench(&cfg)?;

    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<44} {:>8} {:>12} {:>14} {:>16}",
        "label", "samples", "mean (ms)", "std dev (ms)", "synapses/s"
    )?;
    for r in &records {
        writeln!(
            out,
            "{:<44} {:>8} {:>12.4} {:>14.4} {:>16.3e}",
            r.label, r.samples, r.mean_ms, r.stddev_ms, r.synapses_per_sec
        )?;
    }
    writeln!(
        out,
        "statistics: arithmetic mean and population standard deviation per timed step; \
         the first {WARMUP_STEPS} steps are warm-up and excluded when at least {} steps run",
        WARMUP_STEPS + 2
    )?;

    if let Some(path) = &args.csv {
        let file = std::fs::File::create(path)
            .with_context(|| format!("could not create {}", path.display()))?;
        write_csv(&records, std::io::BufWriter::new(file))?;
        writeln!(out, "records written to {}", path.display())?;
    }
    Ok(())
}

fn cmd_inspect(checkpoint: PathBuf) -> Result<()> {
    let area = sc_persistence::load_area_from_path(&checkpoint)
        .with_context(|| format!("could not load {}", checkpoint.display()))?;
    inspect::print_summary(&area, &mut std::io::stdout().lock())
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and succeed; real
            // parse problems are usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Demo(args) => cmd_demo(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Inspect { checkpoint } => cmd_inspect(checkpoint),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn main() {
    std::process::exit(run());
}
