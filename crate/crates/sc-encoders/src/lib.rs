//! Adapters from raw observations into stimuli vectors, plus the feedback
//! path that exposes an area's neuron states as stimuli for another (or the
//! same) area's context forest.

use sc_core::{Area, Error, Result, StimuliVector};

/// Threshold encoder settings: values at or above `threshold` become active
/// stimuli.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEncoderConfig {
    pub threshold: f64,
}

impl ThresholdEncoderConfig {
    pub fn new(threshold: f64) -> Self {
        ThresholdEncoderConfig { threshold }
    }
}

/// Copies a boolean observation into `out` one bit per entry.
pub fn set_stimuli_binary(bits: &[bool], out: &mut StimuliVector) -> Result<()> {
    if bits.len() != out.size() {
        return Err(Error::LengthMismatch {
            expected: out.size(),
            actual: bits.len(),
        });
    }
    for (i, &b) in bits.iter().enumerate() {
        out.set(i, b);
    }
    Ok(())
}

/// Thresholds a scalar observation into `out`: entry `i` becomes active
/// exactly when `values[i] >= config.threshold`.
pub fn set_stimuli_threshold(
    values: &[f64],
    config: &ThresholdEncoderConfig,
    out: &mut StimuliVector,
) -> Result<()> {
    if values.len() != out.size() {
        return Err(Error::LengthMismatch {
            expected: out.size(),
            actual: values.len(),
        });
    }
    for (i, &v) in values.iter().enumerate() {
        out.set(i, v >= config.threshold);
    }
    Ok(())
}

/// Copies the area's neuron states into `out`, one stimulus per neuron.
/// This is the feedback edge a context forest observes on the next step.
pub fn copy_neuron_states(area: &Area, out: &mut StimuliVector) -> Result<()> {
    if area.num_neurons() != out.size() {
        return Err(Error::LengthMismatch {
            expected: area.num_neurons(),
            actual: out.size(),
        });
    }
    out.bits_mut().copy_from(area.states());
    Ok(())
}
