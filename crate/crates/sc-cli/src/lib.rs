//! Wiring for the command-line driver: the bouncing-ball demo pipeline,
//! image composition, and checkpoint inspection.
//!
//! The demo pipeline couples the model to the ball world exactly as the
//! binary does, and is exposed as a library so integration tests can drive
//! it step by step. Per time step:
//!
//! 1. advance the environment and rasterize the scene,
//! 2. `encode` over two forests — forest 0 observes the scene, forest 1
//!    observes the previous step's neuron states,
//! 3. `learn` on the neurons just activated,
//! 4. copy the fresh neuron states into the context vector for the next
//!    step,
//! 5. `forecast` a configured number of future frames through the context
//!    forest, accumulating the decoded frames into one union overlay.
//!
//! Frames are written as binary pixmaps with the observed ball in the green
//! channel and the forecast union in the blue channel.

pub mod inspect;
pub mod ppm;

use std::path::Path;

use anyhow::{bail, Context, Result};
use sc_core::{Area, Binding, ForestSpec, StimuliVector};
use sc_encoders::copy_neuron_states;
use sc_env_ball::{render_frame, BallEnv};

pub const SCENE_FOREST: usize = 0;
pub const CONTEXT_FOREST: usize = 1;

/// Sizing and seeding for one demo run.
#[derive(Debug, Clone)]
pub struct DemoConfig {
    pub neurons: usize,
    /// Synapses per dendrite in the scene forest (the context forest is
    /// fixed at one synapse per dendrite).
    pub scene_synapses: u32,
    /// Scene dendrite threshold as a percentage of its synapses, in
    /// (0, 100]; the absolute threshold rounds up.
    pub threshold_percent: f64,
    pub forecast_depth: usize,
    pub steps: usize,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            neurons: 50_000,
            scene_synapses: 50,
            threshold_percent: 25.0,
            forecast_depth: 20,
            steps: 500,
            seed: 42,
            width: 100,
            height: 100,
        }
    }
}

impl DemoConfig {
    fn validate(&self) -> Result<()> {
        if !(self.threshold_percent > 0.0 && self.threshold_percent <= 100.0) {
            bail!(
                "threshold percent must be in (0, 100], got {}",
                self.threshold_percent
            );
        }
        Ok(())
    }

    fn scene_size(&self) -> usize {
        self.width * self.height
    }
}

/// Builds the demo's two-forest area: a scene forest sized to the pixel
/// grid and a one-synapse context forest observing the neuron population
/// itself. Activation needs both dendrites (threshold 2), prediction only
/// the context dendrite (threshold 1).
pub fn build_area(cfg: &DemoConfig) -> Result<Area> {
    cfg.validate()?;
    let scene = ForestSpec::with_threshold_percent(
        cfg.scene_synapses,
        cfg.scene_size() as u32,
        cfg.threshold_percent,
    );
    let context = ForestSpec::new(1, cfg.neurons as u32, 1);
    Ok(Area::new(cfg.neurons, &[scene, context], 2, 1)?)
}

/// One step's observable outputs: the rasterized input frame and the union
/// of all decoded forecast frames (empty when forecast depth is 0).
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub scene: StimuliVector,
    pub forecast_union: StimuliVector,
}

/// The demo loop's moving parts, advanced one time step at a time.
pub struct DemoPipeline {
    cfg: DemoConfig,
    area: Area,
    env: BallEnv,
    scene: StimuliVector,
    context: StimuliVector,
}

impl DemoPipeline {
    /// Fresh area, fresh environment.
    pub fn new(cfg: &DemoConfig) -> Result<Self> {
        let area = build_area(cfg)?;
        let env = BallEnv::new(cfg.seed, cfg.width, cfg.height)?;
        Self::with_parts(cfg.clone(), area, env)
    }

    /// Resumes with an existing area (e.g. a loaded checkpoint) and an
    /// existing environment; the context vector starts empty because
    /// neuron states are per-step scratch and are not part of checkpoints.
    pub fn with_parts(cfg: DemoConfig, area: Area, env: BallEnv) -> Result<Self> {
        cfg.validate()?;
        if area.num_neurons() != cfg.neurons {
            bail!(
                "area has {} neurons, flags say {}",
                area.num_neurons(),
                cfg.neurons
            );
        }
        if area.forests().len() != 2 {
            bail!(
                "demo needs a scene forest and a context forest, area has {}",
                area.forests().len()
            );
        }
        let scene = &area.forests()[SCENE_FOREST];
        if scene.stimuli_size() as usize != cfg.scene_size() {
            bail!(
                "scene forest observes {} stimuli, {}x{} grid has {}",
                scene.stimuli_size(),
                cfg.width,
                cfg.height,
                cfg.scene_size()
            );
        }
        if scene.synapses_per_dendrite() != cfg.scene_synapses {
            bail!(
                "scene forest has {} synapses per dendrite, flags say {}",
                scene.synapses_per_dendrite(),
                cfg.scene_synapses
            );
        }
        let context = &area.forests()[CONTEXT_FOREST];
        if context.stimuli_size() as usize != cfg.neurons {
            bail!(
                "context forest observes {} stimuli, expected one per neuron ({})",
                context.stimuli_size(),
                cfg.neurons
            );
        }
        if env.width() != cfg.width || env.height() != cfg.height {
            bail!(
                "environment is {}x{}, flags say {}x{}",
                env.width(),
                env.height(),
                cfg.width,
                cfg.height
            );
        }
        let scene_stimuli = StimuliVector::new(cfg.scene_size());
        let context_stimuli = StimuliVector::new(cfg.neurons);
        Ok(DemoPipeline {
            cfg,
            area,
            env,
            scene: scene_stimuli,
            context: context_stimuli,
        })
    }

    pub fn area(&self) -> &Area {
        &self.area
    }

    pub fn env(&self) -> &BallEnv {
        &self.env
    }

    /// Advances environment and model by one time step.
    pub fn step(&mut self) -> Result<StepOutput> {
        self.env.step();
        render_frame(&self.env, &mut self.scene)?;
        let bindings = [
            Binding::new(SCENE_FOREST, &self.scene),
            Binding::new(CONTEXT_FOREST, &self.context),
        ];
        self.area.encode(&bindings)?;
        self.area.learn(&bindings)?;
        copy_neuron_states(&self.area, &mut self.context)?;

        let mut forecast_union = StimuliVector::new(self.scene.size());
        for frame in self.area.forecast(CONTEXT_FOREST, SCENE_FOREST, self.cfg.forecast_depth)? {
            forecast_union.or_assign(&frame);
        }
        Ok(StepOutput {
            scene: self.scene.clone(),
            forecast_union,
        })
    }
}

/// Runs the full demo: optional checkpoint resume, one image per step in
/// `out_dir`, optional checkpoint save at the end. Returns the number of
/// frames written.
pub fn run_demo(cfg: &DemoConfig, out_dir: &Path, checkpoint: Option<&Path>) -> Result<usize> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("could not create output directory {}", out_dir.display()))?;

    let area = match checkpoint {
        Some(path) if path.exists() => sc_persistence::load_area_from_path(path)
            .with_context(|| format!("could not load checkpoint {}", path.display()))?,
        _ => build_area(cfg)?,
    };
    let env = BallEnv::new(cfg.seed, cfg.width, cfg.height)?;
    let mut pipeline = DemoPipeline::with_parts(cfg.clone(), area, env)?;

    for step in 0..cfg.steps {
        let out = pipeline.step()?;
        let rgb = ppm::compose_rgb(&out.scene, &out.forecast_union)?;
        let path = ppm::frame_path(out_dir, step);
        ppm::write_p6(&path, cfg.width, cfg.height, &rgb)
            .with_context(|| format!("could not write {}", path.display()))?;
    }

    if let Some(path) = checkpoint {
        sc_persistence::save_area_to_path(pipeline.area(), path)
            .with_context(|| format!("could not save checkpoint {}", path.display()))?;
    }
    Ok(cfg.steps)
}
