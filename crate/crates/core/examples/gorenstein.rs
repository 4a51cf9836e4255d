//! Gorenstein indices of small claw polytopes.
//!
//! `cargo run --release --example gorenstein`

use phylotope::gorenstein::gorenstein_index;
use phylotope::kernel::HullBounds;
use phylotope::model::ModelPolytope;

fn main() -> phylotope::Result<()> {
    for (g, m) in [
        ("Z2", 3),
        ("Z2", 4),
        ("Z2", 5),
        ("Z3", 3),
        ("Z3", 4),
        ("Z2xZ2", 3),
        ("Z2xZ2", 4),
    ] {
        let mut p = ModelPolytope::claw_polytope(&g.parse()?, m)?;
        p.ensure_facets(HullBounds::default())?;
        let r = gorenstein_index(&p, None)?;
        println!(
            "{g}, m = {m}: first interior points at k = {} ({}), {:?}",
            r.minimal_k, r.interior_count, r.verdict
        );
    }
    Ok(())
}
