//! Forests: one dendrite per neuron, each with a fixed number of synapses,
//! all observing the same stimuli vector.
//!
//! Synapses live in flat buffers indexed `neuron * synapses_per_dendrite + k`.
//! A synapse with permanence zero is unconnected; its stored address is
//! meaningless until the learning pass moves it onto an active stimulus.

use crate::error::{Error, Result};

/// Largest permanence a synapse can reach.
pub const PERMANENCE_MAX: u8 = 99;

/// Construction parameters for one forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestSpec {
    /// Synapses on each neuron's dendrite.
    pub synapses_per_dendrite: u32,
    /// Number of stimulus addresses the forest observes.
    pub stimuli_size: u32,
    /// Connected-and-active synapse count at which a dendrite fires.
    pub threshold: u32,
}

impl ForestSpec {
    pub fn new(synapses_per_dendrite: u32, stimuli_size: u32, threshold: u32) -> Self {
        ForestSpec {
            synapses_per_dendrite,
            stimuli_size,
            threshold,
        }
    }

    /// Spec with the threshold given as a percentage of the dendrite's
    /// synapse count, rounded up: 25% of 50 synapses yields 13.
    pub fn with_threshold_percent(
        synapses_per_dendrite: u32,
        stimuli_size: u32,
        percent: f64,
    ) -> Self {
        let threshold = (synapses_per_dendrite as f64 * percent / 100.0).ceil() as u32;
        ForestSpec::new(synapses_per_dendrite, stimuli_size, threshold)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.synapses_per_dendrite == 0 {
            return Err(Error::ZeroSynapses);
        }
        if self.stimuli_size == 0 {
            return Err(Error::ZeroStimuli);
        }
        if self.threshold > self.synapses_per_dendrite {
            return Err(Error::DendriteThresholdTooLarge {
                threshold: self.threshold,
                synapses: self.synapses_per_dendrite,
            });
        }
        Ok(())
    }
}

/// Synapse storage for every neuron's dendrite onto one stimuli vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    synapses_per_dendrite: u32,
    stimuli_size: u32,
    threshold: u32,
    addrs: Vec<u32>,
    perms: Vec<u8>,
}

impl Forest {
    /// Fresh forest with every synapse unconnected (address 0, permanence 0).
    pub(crate) fn new(num_neurons: usize, spec: &ForestSpec) -> Self {
        let total = num_neurons * spec.synapses_per_dendrite as usize;
        Forest {
            synapses_per_dendrite: spec.synapses_per_dendrite,
            stimuli_size: spec.stimuli_size,
            threshold: spec.threshold,
            addrs: vec![0; total],
            perms: vec![0; total],
        }
    }

    /// Rebuilds a forest from raw buffers, enforcing every invariant:
    /// buffer lengths, permanence bounds, address bounds, and pairwise
    /// distinct addresses among each dendrite's connected synapses.
    pub fn from_parts(
        num_neurons: usize,
        spec: ForestSpec,
        addrs: Vec<u32>,
        perms: Vec<u8>,
    ) -> Result<Forest> {
        spec.validate()?;
        let total = num_neurons * spec.synapses_per_dendrite as usize;
        if addrs.len() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                actual: addrs.len(),
            });
        }
        if perms.len() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                actual: perms.len(),
            });
        }
        for &p in &perms {
            if p > PERMANENCE_MAX {
                return Err(Error::PermanenceOutOfRange { value: p });
            }
        }
        for &a in &addrs {
            if a >= spec.stimuli_size {
                return Err(Error::AddressOutOfRange {
                    address: a,
                    stimuli_size: spec.stimuli_size,
                });
            }
        }
        let syn = spec.synapses_per_dendrite as usize;
        for (da, dp) in addrs.chunks_exact(syn).zip(perms.chunks_exact(syn)) {
            for i in 0..syn {
                if dp[i] == 0 {
                    continue;
                }
                for j in i + 1..syn {
                    if dp[j] > 0 && da[j] == da[i] {
                        return Err(Error::DuplicateConnectedAddress { address: da[i] });
                    }
                }
            }
        }
        Ok(Forest {
            synapses_per_dendrite: spec.synapses_per_dendrite,
            stimuli_size: spec.stimuli_size,
            threshold: spec.threshold,
            addrs,
            perms,
        })
    }

    pub fn synapses_per_dendrite(&self) -> u32 {
        self.synapses_per_dendrite
    }

    pub fn stimuli_size(&self) -> u32 {
        self.stimuli_size
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// Flat synapse address buffer, `neuron * synapses_per_dendrite + k`.
    pub fn addrs(&self) -> &[u32] {
        &self.addrs
    }

    /// Flat synapse permanence buffer, same indexing as [`Forest::addrs`].
    pub fn perms(&self) -> &[u8] {
        &self.perms
    }

    /// Address and permanence slices for one neuron's dendrite.
    pub fn dendrite(&self, neuron: usize) -> (&[u32], &[u8]) {
        let syn = self.synapses_per_dendrite as usize;
        let lo = neuron * syn;
        (&self.addrs[lo..lo + syn], &self.perms[lo..lo + syn])
    }

    /// Number of connected synapses (permanence > 0) across the forest.
    pub fn connected_synapses(&self) -> usize {
        self.perms.iter().filter(|&&p| p > 0).count()
    }

    pub(crate) fn buffers_mut(&mut self) -> (&mut [u32], &mut [u8]) {
        (&mut self.addrs, &mut self.perms)
    }
}
