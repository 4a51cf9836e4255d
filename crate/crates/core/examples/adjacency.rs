//! Neighbours of the zero vertex with edge certificates.
//!
//! `cargo run --release --example adjacency`

use phylotope::kernel::{adjacent_vertices, HullBounds};
use phylotope::model::ModelPolytope;

fn main() -> phylotope::Result<()> {
    let mut p = ModelPolytope::claw_polytope(&"Z3".parse()?, 4)?;
    p.ensure_facets(HullBounds::default())?;
    let zero = p
        .vertex_index(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0])
        .expect("vertex");
    let certs = adjacent_vertices(p.vertices(), p.facets().expect("computed"), zero);
    println!("v(0) has {} neighbours", certs.len());
    for c in certs.iter().take(4) {
        println!(
            "  {:?}: functional {:?} attains {} only at both ends",
            p.labeling(c.neighbor),
            c.functional,
            c.value
        );
    }
    Ok(())
}
