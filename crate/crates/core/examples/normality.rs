//! Brute-force decomposition and exhaustive normality sweeps.
//!
//! `cargo run --release --example normality`

use phylotope::kernel::HullBounds;
use phylotope::model::ModelPolytope;
use phylotope::normality::{check_claw_normality, decompose_brute, NormalityBounds};

fn main() -> phylotope::Result<()> {
    for (g, m) in [("Z2", 3), ("Z3", 3), ("Z2xZ2", 3)] {
        let report = check_claw_normality(
            &g.parse()?,
            m,
            3,
            HullBounds::default(),
            NormalityBounds::default(),
        )?;
        let counts: Vec<usize> = report.levels.iter().map(|l| l.points).collect();
        println!(
            "{g}, m = {m}: points per level {counts:?}, normal: {}",
            report.is_normal()
        );
    }

    let mut p = ModelPolytope::claw_polytope(&"Z3".parse()?, 3)?;
    p.ensure_facets(HullBounds::default())?;
    let x = vec![1, 1, 1, 1, 1, 1, 1, 1, 1];
    let r = decompose_brute(&x, 3, &p)?;
    println!("{x:?} = sum of {:?}", r.vertices());
    Ok(())
}
