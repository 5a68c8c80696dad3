//! Online, unsupervised sequence memory over binary patterns.
//!
//! The model is built from four pieces:
//!
//! - [`StimuliVector`]: a binary activity buffer; synapses address into it.
//! - [`Forest`]: per-neuron dendrites of permanence-weighted synapses, all
//!   observing one stimuli vector. Permanence zero means unconnected.
//! - [`Area`]: the neuron population. `encode` activates neurons that
//!   recognize the input or recruits the most-boosted one, `learn` adapts
//!   the active neurons' synapses, `predict`/`decode`/`forecast` read the
//!   memory back out without changing it.
//! - [`Binding`]: ties a forest to the stimuli vector it observes this step.
//!
//! All per-neuron state lives in flat buffers (`neuron * synapses_per_dendrite
//! + k`), so operations are cache-friendly and trivially data-parallel.
//!
//! # Feature flags
//!
//! - `parallel` (default): runs the neuron loops on rayon. The
//!   single-threaded path stays available through the `*_seq` methods and
//!   produces bit-identical buffers, which the test suite checks.

mod area;
mod bits;
mod error;
mod forest;
mod kernels;
mod stimuli;

pub use area::{Area, Binding};
pub use bits::BitVec;
pub use error::{Error, Result};
pub use forest::{Forest, ForestSpec, PERMANENCE_MAX};
pub use stimuli::StimuliVector;
