//! Binary portable pixmap (P6) output: observed pixels on the green
//! channel, forecast pixels on the blue channel.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use sc_core::StimuliVector;

/// Interleaves two equally sized binary frames into RGB bytes: green 255
/// where `input` is set, blue 255 where `forecast` is set, red unused. A
/// pixel can carry both.
pub fn compose_rgb(input: &StimuliVector, forecast: &StimuliVector) -> Result<Vec<u8>> {
    if input.size() != forecast.size() {
        bail!(
            "input frame has {} pixels, forecast {}",
            input.size(),
            forecast.size()
        );
    }
    let mut rgb = vec![0u8; 3 * input.size()];
    for i in input.iter_active() {
        rgb[3 * i + 1] = 255;
    }
    for i in forecast.iter_active() {
        rgb[3 * i + 2] = 255;
    }
    Ok(rgb)
}

/// Writes one `width x height` RGB image as a binary pixmap: the ASCII
/// header `P6\n{width} {height}\n255\n` followed by raw RGB rows.
pub fn write_p6(path: &Path, width: usize, height: usize, rgb: &[u8]) -> Result<()> {
    if rgb.len() != 3 * width * height {
        bail!(
            "{} RGB bytes do not fill a {}x{} image ({} expected)",
            rgb.len(),
            width,
            height,
            3 * width * height
        );
    }
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P6\n{width} {height}\n255\n")?;
    out.write_all(rgb)?;
    out.flush()?;
    Ok(())
}

/// `frame_000042.ppm`-style path for step `step` under `dir`.
pub fn frame_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(format!("frame_{step:06}.ppm"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composes_green_input_and_blue_forecast() {
        let mut input = StimuliVector::new(4);
        let mut forecast = StimuliVector::new(4);
        input.set(0, true);
        input.set(2, true);
        forecast.set(2, true);
        forecast.set(3, true);
        let rgb = compose_rgb(&input, &forecast).unwrap();
        #[rustfmt::skip]
        assert_eq!(rgb, [
            0, 255, 0,    // pixel 0: input only
            0, 0, 0,      // pixel 1: dark
            0, 255, 255,  // pixel 2: both
            0, 0, 255,    // pixel 3: forecast only
        ]);
    }

    #[test]
    fn rejects_mismatched_frames() {
        assert!(compose_rgb(&StimuliVector::new(4), &StimuliVector::new(5)).is_err());
    }

    #[test]
    fn frame_paths_are_zero_padded(){
        let dir = Path::new("/tmp/frames");
        assert_eq!(
            frame_path(dir, 42),
            Path::new("/tmp/frames/frame_000042.ppm")
        );
    }
}
