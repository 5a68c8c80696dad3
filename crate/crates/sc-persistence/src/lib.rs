//! Bit-exact checkpointing of a trained [`Area`] — the `.scx` format.
//!
//! Layout, all integers little-endian with no padding:
//!
//! ```text
//! magic "SCX1"
//! version                u32   (currently 1)
//! neuron count           u32
//! forest count           u32
//! activation threshold   u32
//! prediction threshold   u32
//! per forest:
//!   synapses/dendrite    u32
//!   stimuli size         u32
//!   dendrite threshold   u32
//!   addresses            u32 × (neurons × synapses/dendrite)
//!   permanences          u8  × (neurons × synapses/dendrite)
//! boosts                 u32 × neurons
//! ```
//!
//! Overlap counters and neuron states are per-step scratch and are not
//! stored; loading starts them at zero. Everything that learning touches —
//! synapse addresses, permanences, boost counters — roundtrips exactly, so
//! a loaded area continues a run bit-for-bit like the original.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use sc_core::{Area, Forest, ForestSpec};
use thiserror::Error;

/// First four bytes of every checkpoint.
pub const MAGIC: [u8; 4] = *b"SCX1";

/// Newest (and only) format version this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("not an area checkpoint (leading bytes {found:?})")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported checkpoint version {found}, this build reads {FORMAT_VERSION}")]
    UnsupportedVersion { found: u32 },
    #[error("checkpoint ends early at byte {offset}, {needed} more byte(s) expected")]
    Truncated { offset: u64, needed: usize },
    #[error("I/O failure after {bytes} byte(s)")]
    Io {
        bytes: u64,
        #[source]
        source: io::Error,
    },
    #[error("checkpoint holds an invalid area")]
    Invalid(#[from] sc_core::Error),
}

pub type Result<T> = std::result::Result<T, PersistError>;

struct CountingWriter<W: Write> {
    inner: W,
    bytes: u64,
}

impl<W: Write> CountingWriter<W> {
    fn put(&mut self, buf: &[u8]) -> Result<()> {
        match self.inner.write_all(buf) {
            Ok(()) => {
                self.bytes += buf.len() as u64;
                Ok(())
            }
            Err(source) => Err(PersistError::Io {
                bytes: self.bytes,
                source,
            }),
        }
    }

    fn put_u32(&mut self, v: u32) -> Result<()> {
        self.put(&v.to_le_bytes())
    }

    fn put_u32_slice(&mut self, vals: &[u32]) -> Result<()> {
        let mut buf = [0u8; 4 * 4096];
        for chunk in vals.chunks(4096) {
            for (slot, v) in buf.chunks_exact_mut(4).zip(chunk) {
                slot.copy_from_slice(&v.to_le_bytes());
            }
            self.put(&buf[..4 * chunk.len()])?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        self.inner.flush().map_err(|source| PersistError::Io {
            bytes: self.bytes,
            source,
        })
    }
}

struct CountingReader<R: Read> {
    inner: R,
    offset: u64,
}

impl<R: Read> CountingReader<R> {
    fn fill(&mut self, buf: &mut [u8]) -> Result<()> {
        let mut done = 0;
        while done < buf.len() {
            match self.inner.read(&mut buf[done..]) {
                Ok(0) => {
                    return Err(PersistError::Truncated {
                        offset: self.offset,
                        needed: buf.len() - done,
                    })
                }
                Ok(n) => {
                    done += n;
                    self.offset += n as u64;
                }
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(source) => {
                    return Err(PersistError::Io {
                        bytes: self.offset,
                        source,
                    })
                }
            }
        }
        Ok(())
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.fill(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    // Arrays stream in bounded chunks so a corrupt header claiming a huge
    // element count fails at the first missing byte instead of after a
    // giant allocation.
    fn u32_vec(&mut self, count: usize) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        let mut buf = [0u8; 4 * 4096];
        let mut remaining = count;
        while remaining > 0 {
            let take = remaining.min(4096);
            self.fill(&mut buf[..4 * take])?;
            out.reserve(take);
            out.extend(
                buf[..4 * take]
                    .chunks_exact(4)
                    .map(|b| u32::from_le_bytes(b.try_into().unwrap())),
            );
            remaining -= take;
        }
        Ok(out)
    }

    fn u8_vec(&mut self, count: usize) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut buf = [0u8; 16384];
        let mut remaining = count;
        while remaining > 0 {
            let take = remaining.min(buf.len());
            self.fill(&mut buf[..take])?;
            out.extend_from_slice(&buf[..take]);
            remaining -= take;
        }
        Ok(out)
    }
}

/// Serializes every persistent field of `area` into `sink`.
pub fn save_area<W: Write>(area: &Area, sink: W) -> Result<()> {
    let mut w = CountingWriter {
        inner: sink,
        bytes: 0,
    };
    w.put(&MAGIC)?;
    w.put_u32(FORMAT_VERSION)?;
    w.put_u32(area.num_neurons() as u32)?;
    w.put_u32(area.forests().len() as u32)?;
    w.put_u32(area.activation_threshold())?;
    w.put_u32(area.prediction_threshold())?;
    for f in area.forests() {
        w.put_u32(f.synapses_per_dendrite())?;
        w.put_u32(f.stimuli_size())?;
        w.put_u32(f.threshold())?;
        w.put_u32_slice(f.addrs())?;
        w.put(f.perms())?;
    }
    w.put_u32_slice(area.boosts())?;
    w.flush()
}

/// Reconstructs an area saved by [`save_area`], revalidating every model
/// invariant; overlap and state buffers start zeroed.
pub fn load_area<R: Read>(source: R) -> Result<Area> {
    let mut r = CountingReader {
        inner: source,
        offset: 0,
    };
    let mut magic = [0u8; 4];
    r.fill(&mut magic)?;
    if magic != MAGIC {
        return Err(PersistError::BadMagic { found: magic });
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(PersistError::UnsupportedVersion { found: version });
    }
    let num_neurons = r.u32()? as usize;
    let forest_count = r.u32()? as usize;
    let activation_threshold = r.u32()?;
    let prediction_threshold = r.u32()?;
    let mut forests = Vec::with_capacity(forest_count.min(1024));
    for _ in 0..forest_count {
        let synapses = r.u32()?;
        let stimuli_size = r.u32()?;
        let threshold = r.u32()?;
        let total = num_neurons * synapses as usize;
        let addrs = r.u32_vec(total)?;
        let perms = r.u8_vec(total)?;
        forests.push(Forest::from_parts(
            num_neurons,
            ForestSpec::new(synapses, stimuli_size, threshold),
            addrs,
            perms,
        )?);
    }
    let boosts = r.u32_vec(num_neurons)?;
    Ok(Area::from_parts(
        num_neurons,
        forests,
        boosts,
        activation_threshold,
        prediction_threshold,
    )?)
}

/// [`save_area`] into a buffered file created at `path`.
pub fn save_area_to_path<P: AsRef<Path>>(area: &Area, path: P) -> Result<()> {
    let file = File::create(path).map_err(|source| PersistError::Io { bytes: 0, source })?;
    save_area(area, BufWriter::new(file))
}

/// [`load_area`] from a buffered file at `path`.
pub fn load_area_from_path<P: AsRef<Path>>(path: P) -> Result<Area> {
    let file = File::open(path).map_err(|source| PersistError::Io { bytes: 0, source })?;
    load_area(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sc_core::{Binding, StimuliVector};

    fn tiny_area() -> Area {
        Area::new(1, &[ForestSpec::new(3, 5, 1)], 1, 1).unwrap()
    }

    fn save_to_vec(area: &Area) -> Vec<u8> {
        let mut bytes = Vec::new();
        save_area(area, &mut bytes).unwrap();
        bytes
    }

    // Layout oracle, summed by hand: 24-byte header, 12-byte forest
    // header, 3 addresses x 4 bytes, 3 permanences x 1 byte, 1 boost x 4
    // bytes = 55. A fresh area zeroes everything after the thresholds.
    #[test]
    fn fresh_single_forest_checkpoint_is_55_bytes() {
        let bytes = save_to_vec(&tiny_area());
        #[rustfmt::skip]
        let expected: Vec<u8> = vec![
            b'S', b'C', b'X', b'1',
            1, 0, 0, 0,             // version
            1, 0, 0, 0,             // neurons
            1, 0, 0, 0,             // forests
            1, 0, 0, 0,             // activation threshold
            1, 0, 0, 0,             // prediction threshold
            3, 0, 0, 0,             // synapses per dendrite
            5, 0, 0, 0,             // stimuli size
            1, 0, 0, 0,             // dendrite threshold
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, // addresses
            0, 0, 0,                // permanences
            0, 0, 0, 0,             // boosts
        ];
        assert_eq!(bytes.len(), 55);
        assert_eq!(bytes, expected);
    }

    fn trained_area() -> Area {
        let mut area = Area::new(8, &[ForestSpec::new(4, 16, 2)], 1, 1).unwrap();
        let mut stim = StimuliVector::new(16);
        for step in 0..20usize {
            stim.zero();
            stim.set(step % 16, true);
            stim.set((step * 3 + 1) % 16, true);
            stim.set((step * 7 + 2) % 16, true);
            area.encode(&[Binding::new(0, &stim)]).unwrap();
            area.learn(&[Binding::new(0, &stim)]).unwrap();
        }
        area
    }

    #[test]
    fn roundtrip_preserves_learned_state_and_zeroes_scratch() {
        let area = trained_area();
        let bytes = save_to_vec(&area);
        let loaded = load_area(bytes.as_slice()).unwrap();

        assert_eq!(loaded.num_neurons(), area.num_neurons());
        assert_eq!(loaded.boosts(), area.boosts());
        assert_eq!(loaded.activation_threshold(), area.activation_threshold());
        assert_eq!(loaded.prediction_threshold(), area.prediction_threshold());
        for (a, b) in area.forests().iter().zip(loaded.forests()) {
            assert_eq!(a.synapses_per_dendrite(), b.synapses_per_dendrite());
            assert_eq!(a.stimuli_size(), b.stimuli_size());
            assert_eq!(a.threshold(), b.threshold());
            assert_eq!(a.addrs(), b.addrs());
            assert_eq!(a.perms(), b.perms());
        }
        assert!(loaded.overlaps().iter().all(|&o| o == 0));
        assert_eq!(loaded.states().count_ones(), 0);
    }

    #[test]
    fn save_load_save_is_byte_idempotent() {
        let bytes = save_to_vec(&trained_area());
        let again = save_to_vec(&load_area(bytes.as_slice()).unwrap());
        assert_eq!(bytes, again);
    }

    #[test]
    fn loaded_area_continues_exactly_like_the_original() {
        let mut original = trained_area();
        let mut resumed = load_area(save_to_vec(&original).as_slice()).unwrap();
        let mut stim = StimuliVector::new(16);
        for step in 0..20usize {
            stim.zero();
            stim.set((step * 5) % 16, true);
            stim.set((step * 11 + 3) % 16, true);
            for area in [&mut original, &mut resumed] {
                area.encode(&[Binding::new(0, &stim)]).unwrap();
                area.learn(&[Binding::new(0, &stim)]).unwrap();
            }
            assert_eq!(original, resumed, "diverged at step {step}");
        }
    }

    #[test]
    fn corrupt_magic_is_rejected_before_anything_else() {
        let mut bytes = save_to_vec(&tiny_area());
        bytes[0] = b'Z';
        assert!(matches!(
            load_area(bytes.as_slice()),
            Err(PersistError::BadMagic { found }) if found == *b"ZCX1"
        ));
    }

    #[test]
    fn unknown_version_is_rejected() {
        let mut bytes = save_to_vec(&tiny_area());
        bytes[4..8].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            load_area(bytes.as_slice()),
            Err(PersistError::UnsupportedVersion { found: 7 })
        ));
    }

    #[test]
    fn truncation_is_reported_at_every_cut() {
        let bytes = save_to_vec(&tiny_area());
        for cut in 0..bytes.len() {
            assert!(
                matches!(
                    load_area(&bytes[..cut]),
                    Err(PersistError::Truncated { .. })
                ),
                "cut at {cut} not reported as truncation"
            );
        }
        assert!(load_area(bytes.as_slice()).is_ok());
    }

    // Byte 48 is the first permanence (24 header + 12 forest header + 12
    // addresses); byte 36 starts the first address.
    #[test]
    fn invariant_violations_are_rejected_as_invalid() {
        let mut bytes = save_to_vec(&tiny_area());
        bytes[48] = 100;
        assert!(matches!(
            load_area(bytes.as_slice()),
            Err(PersistError::Invalid(sc_core::Error::PermanenceOutOfRange { value: 100 }))
        ));

        let mut bytes = save_to_vec(&tiny_area());
        bytes[36..40].copy_from_slice(&9u32.to_le_bytes());
        assert!(matches!(
            load_area(bytes.as_slice()),
            Err(PersistError::Invalid(sc_core::Error::AddressOutOfRange {
                address: 9,
                stimuli_size: 5
            }))
        ));
    }
}
