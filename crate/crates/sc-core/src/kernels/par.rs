//! Rayon backend: the neuron loop of every operation runs data-parallel.
//!
//! Writes stay within each neuron's own slice of the flat buffers (or its
//! own bit within a state word processed by one task), and reductions use
//! order-independent operators, so results match `Seq` bit for bit under
//! any thread schedule.

use rayon::prelude::*;

use super::{
    activate_chunk, decode_dendrite, dendrite_overlap, learn_dendrite, predict_chunk, Backend,
    WORD_BITS,
};
use crate::bits::BitVec;

pub(crate) struct Par;

impl Backend for Par {
    fn overlap(
        overlaps: &mut [u32],
        addrs: &[u32],
        perms: &[u8],
        syn: usize,
        threshold: u32,
        stimuli: &BitVec,
    ) {
        overlaps
            .par_iter_mut()
            .zip(addrs.par_chunks_exact(syn))
            .zip(perms.par_chunks_exact(syn))
            .for_each(|((o, da), dp)| {
                if dendrite_overlap(da, dp, stimuli) >= threshold {
                    *o += 1;
                }
            });
    }

    fn activate(
        states: &mut BitVec,
        boosts: &mut [u32],
        overlaps: &[u32],
        threshold: u32,
        cap: u32,
    ) -> bool {
        states
            .words_mut()
            .par_iter_mut()
            .zip(boosts.par_chunks_mut(WORD_BITS))
            .zip(overlaps.par_chunks(WORD_BITS))
            .map(|((word, bch), och)| {
                let (mask, any) = activate_chunk(bch, och, threshold, cap);
                *word |= mask;
                any
            })
            .reduce(|| false, |a, b| a | b)
    }

    fn boost_argmax(boosts: &[u32]) -> usize {
        boosts
            .par_iter()
            .enumerate()
            .map(|(i, &b)| (b, i))
            .reduce_with(super::better_boost)
            .expect("areas hold at least one neuron")
            .1
    }

    fn learn(addrs: &mut [u32], perms: &mut [u8], syn: usize, states: &BitVec, stimuli: &BitVec) {
        addrs
            .par_chunks_exact_mut(syn)
            .zip(perms.par_chunks_exact_mut(syn))
            .enumerate()
            .filter(|(n, _)| states.get(*n))
            .for_each(|(_, (da, dp))| learn_dendrite(da, dp, stimuli));
    }

    fn predict(states: &mut BitVec, overlaps: &[u32], threshold: u32) {
        states
            .words_mut()
            .par_iter_mut()
            .zip(overlaps.par_chunks(WORD_BITS))
            .for_each(|(word, och)| *word |= predict_chunk(och, threshold));
    }

    fn decode(out: &mut BitVec, states: &BitVec, addrs: &[u32], perms: &[u8], syn: usize) {
        let union = addrs
            .par_chunks_exact(syn)
            .zip(perms.par_chunks_exact(syn))
            .enumerate()
            .filter(|(n, _)| states.get(*n))
            .fold(
                || BitVec::new(out.len()),
                |mut acc, (_, (da, dp))| {
                    decode_dendrite(&mut acc, da, dp);
                    acc
                },
            )
            .reduce(|| BitVec::new(out.len()), |mut a, b| {
                a.or_assign(&b);
                a
            });
        out.or_assign(&union);
    }
}
