//! Areas: a population of neurons, one dendrite per neuron in each forest,
//! competing through inhibition and recency boosting.
//!
//! A time step normally runs `encode` (recognize the input or recruit the
//! most-boosted neuron), `learn` (move and reweigh the active neurons'
//! synapses), and optionally `forecast` (chain `predict` and `decode`
//! through a feedback forest without touching learned state).

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::forest::{Forest, ForestSpec};
use crate::kernels::{self, Backend};
use crate::stimuli::StimuliVector;

/// Pairs a forest index with the stimuli vector it observes this step.
#[derive(Debug, Clone, Copy)]
pub struct Binding<'a> {
    pub forest: usize,
    pub stimuli: &'a StimuliVector,
}

impl<'a> Binding<'a> {
    pub fn new(forest: usize, stimuli: &'a StimuliVector) -> Self {
        Binding { forest, stimuli }
    }
}

/// Runs the given method with the backend selected at compile time.
macro_rules! dispatch {
    ($self:ident . $method:ident ( $($arg:expr),* )) => {{
        #[cfg(feature = "parallel")]
        { $self.$method::<kernels::Par>($($arg),*) }
        #[cfg(not(feature = "parallel"))]
        { $self.$method::<kernels::Seq>($($arg),*) }
    }};
}

/// Neuron population with per-forest dendrites, overlap counters, state
/// bits, and boost counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Area {
    forests: Vec<Forest>,
    overlaps: Vec<u32>,
    states: BitVec,
    boosts: Vec<u32>,
    activation_threshold: u32,
    prediction_threshold: u32,
    boost_cap: u32,
}

impl Area {
    /// Fresh area: every synapse unconnected, all counters zero.
    ///
    /// `activation_threshold` and `prediction_threshold` count active
    /// dendrites, so both must lie in `1..=specs.len()`.
    pub fn new(
        num_neurons: usize,
        specs: &[ForestSpec],
        activation_threshold: u32,
        prediction_threshold: u32,
    ) -> Result<Area> {
        if num_neurons == 0 {
            return Err(Error::ZeroNeurons);
        }
        if num_neurons > u32::MAX as usize {
            return Err(Error::NeuronCountTooLarge(num_neurons));
        }
        for spec in specs {
            spec.validate()?;
        }
        Self::validate_thresholds(activation_threshold, prediction_threshold, specs.len())?;
        let forests: Vec<Forest> = specs.iter().map(|s| Forest::new(num_neurons, s)).collect();
        let boost_cap = specs.iter().map(|s| s.stimuli_size).max().unwrap();
        Ok(Area {
            forests,
            overlaps: vec![0; num_neurons],
            states: BitVec::new(num_neurons),
            boosts: vec![0; num_neurons],
            activation_threshold,
            prediction_threshold,
            boost_cap,
        })
    }

    /// Rebuilds an area from validated forests plus a boost buffer.
    /// Overlap and state buffers start zeroed; they are per-step scratch.
    pub fn from_parts(
        num_neurons: usize,
        forests: Vec<Forest>,
        boosts: Vec<u32>,
        activation_threshold: u32,
        prediction_threshold: u32,
    ) -> Result<Area> {
        if num_neurons == 0 {
            return Err(Error::ZeroNeurons);
        }
        if num_neurons > u32::MAX as usize {
            return Err(Error::NeuronCountTooLarge(num_neurons));
        }
        Self::validate_thresholds(activation_threshold, prediction_threshold, forests.len())?;
        if boosts.len() != num_neurons {
            return Err(Error::LengthMismatch {
                expected: num_neurons,
                actual: boosts.len(),
            });
        }
        for f in &forests {
            let expected = num_neurons * f.synapses_per_dendrite() as usize;
            if f.addrs().len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    actual: f.addrs().len(),
                });
            }
        }
        let boost_cap = forests.iter().map(|f| f.stimuli_size()).max().unwrap();
        for &b in &boosts {
            if b > boost_cap {
                return Err(Error::BoostOutOfRange {
                    value: b,
                    cap: boost_cap,
                });
            }
        }
        Ok(Area {
            forests,
            overlaps: vec![0; num_neurons],
            states: BitVec::new(num_neurons),
            boosts,
            activation_threshold,
            prediction_threshold,
            boost_cap,
        })
    }

    fn validate_thresholds(activation: u32, prediction: u32, forests: usize) -> Result<()> {
        if activation == 0 || activation as usize > forests {
            return Err(Error::ActivationThresholdOutOfRange {
                threshold: activation,
                forests,
            });
        }
        if prediction == 0 || prediction as usize > forests {
            return Err(Error::PredictionThresholdOutOfRange {
                threshold: prediction,
                forests,
            });
        }
        Ok(())
    }

    pub fn num_neurons(&self) -> usize {
        self.boosts.len()
    }

    pub fn forests(&self) -> &[Forest] {
        &self.forests
    }

    /// Per-neuron count of dendrites that fired this step.
    pub fn overlaps(&self) -> &[u32] {
        &self.overlaps
    }

    /// Active (or, after `predict`, predicted) neuron bits.
    pub fn states(&self) -> &BitVec {
        &self.states
    }

    pub fn boosts(&self) -> &[u32] {
        &self.boosts
    }

    pub fn activation_threshold(&self) -> u32 {
        self.activation_threshold
    }

    pub fn prediction_threshold(&self) -> u32 {
        self.prediction_threshold
    }

    /// Boost counters saturate here: the largest stimuli size any forest
    /// observes.
    pub fn boost_cap(&self) -> u32 {
        self.boost_cap
    }

    /// Synapses across all forests.
    pub fn total_synapses(&self) -> u64 {
        self.forests
            .iter()
            .map(|f| self.num_neurons() as u64 * f.synapses_per_dendrite() as u64)
            .sum()
    }

    /// Indices of neurons whose state bit is set, ascending.
    pub fn active_neurons(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter_ones()
    }

    /// Bumps each neuron's overlap by one where the bound forest's dendrite
    /// has at least `threshold` connected synapses on active stimuli.
    ///
    /// Callers are responsible for zeroing `overlaps` first; `encode` and
    /// `predict` do so on entry. Rejected bindings leave the area untouched.
    pub fn overlap_synapses(&mut self, binding: &Binding<'_>) -> Result<()> {
        dispatch!(self.overlap_impl(binding))
    }

    /// Advances every boost counter (saturating at the cap), then activates
    /// each neuron whose overlap meets the activation threshold, zeroing its
    /// boost. Returns true when at least one neuron activated, which
    /// suppresses boost recruitment for the step.
    pub fn activate_neurons(&mut self) -> bool {
        dispatch!(self.activate_impl())
    }

    /// Activates exactly one neuron: the lowest index among maximal boosts.
    /// Its boost resets to zero. Returns the winner.
    pub fn boost_select(&mut self) -> usize {
        dispatch!(self.boost_select_impl())
    }

    /// One full activation step: zero the transients, overlap every binding,
    /// activate by threshold, and fall back to boost recruitment when no
    /// neuron recognized the input. At least one neuron is active afterward.
    pub fn encode(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        dispatch!(self.encode_impl(bindings))
    }

    /// `encode` forced onto the single-threaded backend.
    pub fn encode_seq(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.encode_impl::<kernels::Seq>(bindings)
    }

    /// Synapse update on every active neuron, one pass per binding:
    /// connected synapses grow toward active stimuli and shrink otherwise,
    /// then unconnected synapses move onto unclaimed active stimuli.
    /// Inactive neurons are never touched.
    pub fn learn(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        dispatch!(self.learn_impl(bindings))
    }

    /// `learn` forced onto the single-threaded backend.
    pub fn learn_seq(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.learn_impl::<kernels::Seq>(bindings)
    }

    /// Like `encode` without inhibition or boosting: zeroes the transients,
    /// overlaps every binding, then sets the state bit of each neuron whose
    /// overlap meets the prediction threshold. Zero predictions are legal.
    /// Boosts and synapses are untouched.
    pub fn predict(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        dispatch!(self.predict_impl(bindings))
    }

    /// `predict` forced onto the single-threaded backend.
    pub fn predict_seq(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.predict_impl::<kernels::Seq>(bindings)
    }

    /// Writes into `out` the union of connected synapse addresses over all
    /// state-set neurons' dendrites in the given forest. `out` is zeroed
    /// first and must match the forest's stimuli size.
    pub fn decode(&self, forest: usize, out: &mut StimuliVector) -> Result<()> {
        dispatch!(self.decode_impl(forest, out))
    }

    /// `decode` forced onto the single-threaded backend.
    pub fn decode_seq(&self, forest: usize, out: &mut StimuliVector) -> Result<()> {
        self.decode_impl::<kernels::Seq>(forest, out)
    }

    /// Multi-step lookahead: repeatedly copies the current neuron states
    /// into a context stimuli vector, predicts through `context_forest`, and
    /// decodes through `decode_forest`, recording each decoded frame.
    ///
    /// The context forest must observe one stimulus per neuron. Synapses and
    /// boosts are never mutated; only the transient overlap/state buffers
    /// advance, so a later `encode` resumes cleanly.
    pub fn forecast(
        &mut self,
        context_forest: usize,
        decode_forest: usize,
        steps: usize,
    ) -> Result<Vec<StimuliVector>> {
        self.check_forest_index(context_forest)?;
        self.check_forest_index(decode_forest)?;
        let ctx_size = self.forests[context_forest].stimuli_size();
        if ctx_size as usize != self.num_neurons() {
            return Err(Error::ContextSizeMismatch {
                stimuli_size: ctx_size,
                neurons: self.num_neurons(),
            });
        }
        let decode_size = self.forests[decode_forest].stimuli_size() as usize;
        let mut frames = Vec::with_capacity(steps);
        let mut context = StimuliVector::new(self.num_neurons());
        for _ in 0..steps {
            context.bits_mut().copy_from(&self.states);
            self.predict(&[Binding::new(context_forest, &context)])?;
            let mut frame = StimuliVector::new(decode_size);
            self.decode(decode_forest, &mut frame)?;
            frames.push(frame);
        }
        Ok(frames)
    }

    fn check_forest_index(&self, index: usize) -> Result<()> {
        if index >= self.forests.len() {
            return Err(Error::ForestIndexOutOfRange {
                index,
                forests: self.forests.len(),
            });
        }
        Ok(())
    }

    fn validate_binding(&self, binding: &Binding<'_>) -> Result<()> {
        self.check_forest_index(binding.forest)?;
        let expected = self.forests[binding.forest].stimuli_size() as usize;
        if binding.stimuli.size() != expected {
            return Err(Error::StimuliSizeMismatch {
                expected,
                actual: binding.stimuli.size(),
            });
        }
        Ok(())
    }

    fn validate_bindings(&self, bindings: &[Binding<'_>]) -> Result<()> {
        for (i, binding) in bindings.iter().enumerate() {
            self.validate_binding(binding)?;
            if bindings[..i].iter().any(|prev| prev.forest == binding.forest) {
                return Err(Error::DuplicateForestBinding {
                    index: binding.forest,
                });
            }
        }
        Ok(())
    }

    fn overlap_impl<B: Backend>(&mut self, binding: &Binding<'_>) -> Result<()> {
        self.validate_binding(binding)?;
        let f = &self.forests[binding.forest];
        B::overlap(
            &mut self.overlaps,
            f.addrs(),
            f.perms(),
            f.synapses_per_dendrite() as usize,
            f.threshold(),
            binding.stimuli.bits(),
        );
        Ok(())
    }

    fn activate_impl<B: Backend>(&mut self) -> bool {
        B::activate(
            &mut self.states,
            &mut self.boosts,
            &self.overlaps,
            self.activation_threshold,
            self.boost_cap,
        )
    }

    fn boost_select_impl<B: Backend>(&mut self) -> usize {
        let winner = B::boost_argmax(&self.boosts);
        self.states.set(winner, true);
        self.boosts[winner] = 0;
        winner
    }

    fn encode_impl<B: Backend>(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.validate_bindings(bindings)?;
        self.overlaps.fill(0);
        self.states.zero();
        for binding in bindings {
            let f = &self.forests[binding.forest];
            B::overlap(
                &mut self.overlaps,
                f.addrs(),
                f.perms(),
                f.synapses_per_dendrite() as usize,
                f.threshold(),
                binding.stimuli.bits(),
            );
        }
        let inhibited = self.activate_impl::<B>();
        if !inhibited {
            self.boost_select_impl::<B>();
        }
        Ok(())
    }

    fn learn_impl<B: Backend>(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.validate_bindings(bindings)?;
        for binding in bindings {
            let states = &self.states;
            let forest = &mut self.forests[binding.forest];
            let syn = forest.synapses_per_dendrite() as usize;
            let (addrs, perms) = forest.buffers_mut();
            B::learn(addrs, perms, syn, states, binding.stimuli.bits());
        }
        Ok(())
    }

    fn predict_impl<B: Backend>(&mut self, bindings: &[Binding<'_>]) -> Result<()> {
        self.validate_bindings(bindings)?;
        self.overlaps.fill(0);
        self.states.zero();
        for binding in bindings {
            let f = &self.forests[binding.forest];
            B::overlap(
                &mut self.overlaps,
                f.addrs(),
                f.perms(),
                f.synapses_per_dendrite() as usize,
                f.threshold(),
                binding.stimuli.bits(),
            );
        }
        B::predict(&mut self.states, &self.overlaps, self.prediction_threshold);
        Ok(())
    }

    fn decode_impl<B: Backend>(&self, forest: usize, out: &mut StimuliVector) -> Result<()> {
        self.check_forest_index(forest)?;
        let f = &self.forests[forest];
        if out.size() != f.stimuli_size() as usize {
            return Err(Error::StimuliSizeMismatch {
                expected: f.stimuli_size() as usize,
                actual: out.size(),
            });
        }
        out.zero();
        B::decode(
            out.bits_mut(),
            &self.states,
            f.addrs(),
            f.perms(),
            f.synapses_per_dendrite() as usize,
        );
        Ok(())
    }
}
