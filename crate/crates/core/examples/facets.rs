//! Exact facet enumeration, closed-form Z3 and Kimura facets, and the
//! comparison between them.
//!
//! `cargo run --release --example facets`

use phylotope::fiber::same_hyperplanes;
use phylotope::gorenstein::kimura_facets;
use phylotope::kernel::{enumerate_facets, verify_facet, HullBounds};
use phylotope::model::ModelPolytope;
use phylotope::z3::z3_facet_list;

fn main() -> phylotope::Result<()> {
    for m in 3..=4 {
        let p = ModelPolytope::claw_polytope(&"Z3".parse()?, m)?;
        let brute = enumerate_facets(p.vertices(), p.lattice(), HullBounds::default())?;
        let closed = z3_facet_list(m, 1)?;
        println!(
            "Z3, m = {m}: {} enumerated, {} closed form ({} non-negativity, {} A-facets), equal: {}",
            brute.len(),
            closed.facet_count(),
            closed.nonnegativity.len(),
            closed.a_facets.len(),
            same_hyperplanes(p.vertices(), &brute, &closed.inequalities()),
        );
    }

    let (a, f) = &z3_facet_list(3, 2)?.a_facets[0];
    println!(
        "an A-facet of 2P: a = {:?} ({:?}), {:?} >= {}",
        a.entries, a.family, f.functional, f.rhs
    );

    let p = ModelPolytope::claw_polytope(&"Z2xZ2".parse()?, 3)?;
    let kimura = kimura_facets(3, 1)?;
    let certified = kimura
        .iter()
        .filter(|f| verify_facet(p.vertices(), p.lattice(), &f.functional, f.rhs).is_ok())
        .count();
    println!(
        "Kimura tripod: {certified} of {} closed-form facets certified",
        kimura.len()
    );
    Ok(())
}
