//! Stimuli vectors: the binary interface between environments, encoders,
//! and areas. A stimulus address is an index into one of these vectors.

use crate::bits::BitVec;

/// Binary activity buffer observed by synapses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimuliVector {
    bits: BitVec,
}

impl StimuliVector {
    /// All-inactive vector with `size` stimulus addresses.
    pub fn new(size: usize) -> Self {
        StimuliVector {
            bits: BitVec::new(size),
        }
    }

    pub fn size(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn get(&self, address: usize) -> bool {
        self.bits.get(address)
    }

    #[inline]
    pub fn set(&mut self, address: usize, active: bool) {
        self.bits.set(address, active);
    }

    /// Deactivates every stimulus.
    pub fn zero(&mut self) {
        self.bits.zero();
    }

    pub fn count_active(&self) -> usize {
        self.bits.count_ones()
    }

    /// Active addresses, ascending.
    pub fn iter_active(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// In-place union with another vector of the same size.
    pub fn or_assign(&mut self, other: &StimuliVector) {
        self.bits.or_assign(&other.bits);
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut BitVec {
        &mut self.bits
    }
}
