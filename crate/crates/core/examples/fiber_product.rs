//! Gluing tripods into larger trees and checking that the Gorenstein index
//! survives.
//!
//! `cargo run --release --example fiber_product`

use phylotope::fiber::{
    fiber_facet_candidates, fiber_product, verify_fibgor, FibGorOptions, SimplexProjection,
};
use phylotope::kernel::HullBounds;
use phylotope::model::ModelPolytope;

fn main() -> phylotope::Result<()> {
    let (last, first) = (SimplexProjection { edge: 2 }, SimplexProjection { edge: 0 });
    for g in ["Z2", "Z3", "Z2xZ2"] {
        let mut t = ModelPolytope::claw_polytope(&g.parse()?, 3)?;
        t.ensure_facets(HullBounds::default())?;
        let fp = fiber_product(&t, last, &t, first)?;
        let lifted = fiber_facet_candidates(&fp)?;
        println!(
            "{g}: glued tree {:?}, {} vertices, {} lifted candidates, {} facets",
            fp.glued.tree.edges(),
            fp.product.vertices().len(),
            lifted.candidates,
            lifted.facets.len()
        );
        let r = verify_fibgor(&t, last, &t, first, FibGorOptions::default())?;
        println!(
            "  index {} -> product {:?}, cross-check {:?}",
            r.index, r.product.verdict, r.cross_check
        );
    }
    Ok(())
}
