use thiserror::Error;

/// Failures raised by area construction and the per-step operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("area must have at least one neuron")]
    ZeroNeurons,
    #[error("neuron count {0} exceeds the 32-bit address space")]
    NeuronCountTooLarge(usize),
    #[error("dendrites must have at least one synapse")]
    ZeroSynapses,
    #[error("forests must observe at least one stimulus address")]
    ZeroStimuli,
    #[error("dendrite threshold {threshold} exceeds synapses per dendrite {synapses}")]
    DendriteThresholdTooLarge { threshold: u32, synapses: u32 },
    #[error("activation threshold {threshold} outside 1..={forests}")]
    ActivationThresholdOutOfRange { threshold: u32, forests: usize },
    #[error("prediction threshold {threshold} outside 1..={forests}")]
    PredictionThresholdOutOfRange { threshold: u32, forests: usize },
    #[error("forest index {index} out of range for {forests} forests")]
    ForestIndexOutOfRange { index: usize, forests: usize },
    #[error("forest {index} bound more than once")]
    DuplicateForestBinding { index: usize },
    #[error("stimuli vector holds {actual} addresses, expected {expected}")]
    StimuliSizeMismatch { expected: usize, actual: usize },
    #[error("context forest observes {stimuli_size} addresses, expected one per neuron ({neurons})")]
    ContextSizeMismatch { stimuli_size: u32, neurons: usize },
    #[error("buffer holds {actual} entries, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("permanence {value} exceeds maximum 99")]
    PermanenceOutOfRange { value: u8 },
    #[error("synapse address {address} outside stimuli size {stimuli_size}")]
    AddressOutOfRange { address: u32, stimuli_size: u32 },
    #[error("connected synapses share address {address} on one dendrite")]
    DuplicateConnectedAddress { address: u32 },
    #[error("boost {value} exceeds cap {cap}")]
    BoostOutOfRange { value: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
