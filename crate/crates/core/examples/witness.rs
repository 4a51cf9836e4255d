//! Lattice points of 4P that are not sums of four vertices.
//!
//! `cargo run --release --example witness`

use phylotope::normality::nonnormal_witness;

fn main() -> phylotope::Result<()> {
    for g in ["Z6", "Z8", "Z2xZ4", "Z2^3"] {
        let w = nonnormal_witness(&g.parse()?)?;
        let sets: Vec<Vec<String>> = w
            .presentation
            .multisets
            .iter()
            .map(|s| s.iter().map(|e| e.to_string()).collect())
            .collect();
        println!(
            "{g}: multisets {sets:?}, in 4P: {}, indecomposable: {} ({} states explored)",
            w.in_4p, w.indecomposable, w.explored
        );
    }
    Ok(())
}
