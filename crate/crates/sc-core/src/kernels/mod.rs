//! Execution backends for the per-neuron update rules.
//!
//! The per-dendrite logic lives in the shared helpers below; `Seq` and `Par`
//! only choose how the neuron loop is driven. Every result is bit-identical
//! across backends: neurons never touch each other's buffers, and the only
//! cross-neuron reductions (inhibition flag, boost winner, decode union) are
//! order-independent.

use crate::bits::BitVec;
use crate::forest::PERMANENCE_MAX;

#[cfg(feature = "parallel")]
pub(crate) mod par;
#[cfg(feature = "parallel")]
pub(crate) use par::Par;

pub(crate) const WORD_BITS: usize = 64;

pub(crate) trait Backend {
    /// Bumps each neuron's overlap by one where its dendrite fires.
    fn overlap(
        overlaps: &mut [u32],
        addrs: &[u32],
        perms: &[u8],
        syn: usize,
        threshold: u32,
        stimuli: &BitVec,
    );

    /// Boost advance plus threshold activation; true if anyone activated.
    fn activate(
        states: &mut BitVec,
        boosts: &mut [u32],
        overlaps: &[u32],
        threshold: u32,
        cap: u32,
    ) -> bool;

    /// Lowest index among maximal boosts.
    fn boost_argmax(boosts: &[u32]) -> usize;

    /// Runs the synapse update on every active neuron's dendrite.
    fn learn(addrs: &mut [u32], perms: &mut [u8], syn: usize, states: &BitVec, stimuli: &BitVec);

    /// Sets the state bit of each neuron whose overlap meets `threshold`.
    fn predict(states: &mut BitVec, overlaps: &[u32], threshold: u32);

    /// Unions every active neuron's connected addresses into `out`.
    fn decode(out: &mut BitVec, states: &BitVec, addrs: &[u32], perms: &[u8], syn: usize);
}

/// Connected synapses observing an active stimulus.
#[inline]
pub(crate) fn dendrite_overlap(addrs: &[u32], perms: &[u8], stimuli: &BitVec) -> u32 {
    let mut count = 0;
    for (&a, &p) in addrs.iter().zip(perms) {
        if p > 0 && stimuli.get(a as usize) {
            count += 1;
        }
    }
    count
}

/// Synapse update for one active neuron's dendrite.
///
/// First pass, connected synapses only: permanence grows by one (saturating
/// at the maximum) when the addressed stimulus is active, otherwise shrinks
/// by one. A synapse shrunk to zero disconnects and becomes movable in the
/// same call.
///
/// Second pass, unconnected synapses in slot order: each scans active
/// stimulus addresses ascending from a cursor (starting at zero) for the
/// first address not already held by a connected synapse of this dendrite,
/// reconnects there at permanence one, and advances the cursor past it.
/// When no eligible active address remains the synapse stays unconnected,
/// address untouched.
pub(crate) fn learn_dendrite(addrs: &mut [u32], perms: &mut [u8], stimuli: &BitVec) {
    for (a, p) in addrs.iter().zip(perms.iter_mut()) {
        if *p > 0 {
            if stimuli.get(*a as usize) {
                if *p < PERMANENCE_MAX {
                    *p += 1;
                }
            } else {
                *p -= 1;
            }
        }
    }

    let mut cursor = 0;
    'synapse: for k in 0..addrs.len() {
        if perms[k] > 0 {
            continue;
        }
        let mut from = cursor;
        while let Some(i) = stimuli.first_one_at_or_after(from) {
            let used = addrs
                .iter()
                .zip(perms.iter())
                .any(|(&a, &p)| p > 0 && a as usize == i);
            if used {
                from = i + 1;
                continue;
            }
            addrs[k] = i as u32;
            perms[k] = 1;
            cursor = i + 1;
            continue 'synapse;
        }
    }
}

/// Marks every connected synapse's address in `out`.
#[inline]
pub(crate) fn decode_dendrite(out: &mut BitVec, addrs: &[u32], perms: &[u8]) {
    for (&a, &p) in addrs.iter().zip(perms) {
        if p > 0 {
            out.set(a as usize, true);
        }
    }
}

/// Boost advance and activation for up to 64 neurons; returns the state
/// mask to OR in and whether anyone activated.
#[inline]
pub(crate) fn activate_chunk(
    boosts: &mut [u32],
    overlaps: &[u32],
    threshold: u32,
    cap: u32,
) -> (u64, bool) {
    let mut mask = 0u64;
    let mut any = false;
    for k in 0..boosts.len() {
        if boosts[k] < cap {
            boosts[k] += 1;
        }
        if overlaps[k] >= threshold {
            boosts[k] = 0;
            mask |= 1 << k;
            any = true;
        }
    }
    (mask, any)
}

/// State mask for up to 64 neurons whose overlap meets `threshold`.
#[inline]
pub(crate) fn predict_chunk(overlaps: &[u32], threshold: u32) -> u64 {
    let mut mask = 0u64;
    for (k, &o) in overlaps.iter().enumerate() {
        if o >= threshold {
            mask |= 1 << k;
        }
    }
    mask
}

/// Total order on (boost, neuron index): higher boost wins, ties go to the
/// lower index. Associative and commutative, so any reduction tree yields
/// the same winner.
#[inline]
pub(crate) fn better_boost(a: (u32, usize), b: (u32, usize)) -> (u32, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Single-threaded backend. Always compiled; the `parallel` feature only
/// changes which backend the public methods dispatch to.
pub(crate) struct Seq;

impl Backend for Seq {
    fn overlap(
        overlaps: &mut [u32],
        addrs: &[u32],
        perms: &[u8],
        syn: usize,
        threshold: u32,
        stimuli: &BitVec,
    ) {
        for ((o, da), dp) in overlaps
            .iter_mut()
            .zip(addrs.chunks_exact(syn))
            .zip(perms.chunks_exact(syn))
        {
            if dendrite_overlap(da, dp, stimuli) >= threshold {
                *o += 1;
            }
        }
    }

    fn activate(
        states: &mut BitVec,
        boosts: &mut [u32],
        overlaps: &[u32],
        threshold: u32,
        cap: u32,
    ) -> bool {
        let mut any = false;
        for ((word, bch), och) in states
            .words_mut()
            .iter_mut()
            .zip(boosts.chunks_mut(WORD_BITS))
            .zip(overlaps.chunks(WORD_BITS))
        {
            let (mask, chunk_any) = activate_chunk(bch, och, threshold, cap);
            *word |= mask;
            any |= chunk_any;
        }
        any
    }

    fn boost_argmax(boosts: &[u32]) -> usize {
        let mut best = (boosts[0], 0);
        for (i, &b) in boosts.iter().enumerate().skip(1) {
            best = better_boost(best, (b, i));
        }
        best.1
    }

    fn learn(addrs: &mut [u32], perms: &mut [u8], syn: usize, states: &BitVec, stimuli: &BitVec) {
        for (n, (da, dp)) in addrs
            .chunks_exact_mut(syn)
            .zip(perms.chunks_exact_mut(syn))
            .enumerate()
        {
            if states.get(n) {
                learn_dendrite(da, dp, stimuli);
            }
        }
    }

    fn predict(states: &mut BitVec, overlaps: &[u32], threshold: u32) {
        for (word, och) in states
            .words_mut()
            .iter_mut()
            .zip(overlaps.chunks(WORD_BITS))
        {
            *word |= predict_chunk(och, threshold);
        }
    }

    fn decode(out: &mut BitVec, states: &BitVec, addrs: &[u32], perms: &[u8], syn: usize) {
        for n in states.iter_ones() {
            let lo = n * syn;
            decode_dendrite(out, &addrs[lo..lo + syn], &perms[lo..lo + syn]);
        }
    }
}
