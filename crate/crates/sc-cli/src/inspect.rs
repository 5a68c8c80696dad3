//! Human-readable summary of a checkpointed area.

use std::io::Write;

use anyhow::Result;
use sc_core::Area;

/// Prints header fields, per-forest synapse statistics, and a boost
/// summary for `area`.
pub fn print_summary<W: Write>(area: &Area, out: &mut W) -> Result<()> {
    writeln!(out, "neurons:              {}", area.num_neurons())?;
    writeln!(out, "forests:              {}", area.forests().len())?;
    writeln!(out, "activation threshold: {}", area.activation_threshold())?;
    writeln!(out, "prediction threshold: {}", area.prediction_threshold())?;
    writeln!(out, "boost cap:            {}", area.boost_cap())?;
    writeln!(out, "total synapses:       {}", area.total_synapses())?;
    for (i, f) in area.forests().iter().enumerate() {
        let total = f.addrs().len();
        let connected = f.connected_synapses();
        writeln!(
            out,
            "forest {i}: {} synapses/dendrite, {} stimuli, dendrite threshold {}, \
             connected {connected}/{total} ({:.2}%)",
            f.synapses_per_dendrite(),
            f.stimuli_size(),
            f.threshold(),
            100.0 * connected as f64 / total.max(1) as f64,
        )?;
    }
    let boosts = area.boosts();
    let min = boosts.iter().min().copied().unwrap_or(0);
    let max = boosts.iter().max().copied().unwrap_or(0);
    let mean = boosts.iter().map(|&b| b as f64).sum::<f64>() / boosts.len().max(1) as f64;
    let saturated = boosts.iter().filter(|&&b| b == area.boost_cap()).count();
    writeln!(
        out,
        "boosts: min {min}, max {max}, mean {mean:.2}, at cap {saturated}"
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use sc_core::ForestSpec;

    #[test]
    fn fresh_area_reports_zero_connected_synapses() {
        let area = Area::new(4, &[ForestSpec::new(3, 10, 1)], 1, 1).unwrap();
        let mut bytes = Vec::new();
        print_summary(&area, &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("neurons:              4"));
        assert!(text.contains("connected 0/12 (0.00%)"));
        assert!(text.contains("boosts: min 0, max 0, mean 0.00, at cap 0"));
    }
}
