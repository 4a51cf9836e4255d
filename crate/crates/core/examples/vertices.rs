//! Vertices and lattice of claw and tree polytopes.
//!
//! `cargo run --example vertices`

use phylotope::group::GroupSpec;
use phylotope::model::{GPresentation, LatticePoint, ModelPolytope, Tree};

fn main() -> phylotope::Result<()> {
    let z2: GroupSpec = "Z2".parse()?;
    let tripod = ModelPolytope::claw_polytope(&z2, 3)?;
    println!("Z2 tripod, dim {}:", tripod.dim());
    for (i, v) in tripod.vertices().iter().enumerate() {
        println!("  labels {:?} -> {v:?}", tripod.labeling(i));
    }

    for (name, m) in [("Z3", 4), ("Z2xZ2", 3), ("Z6", 3), ("Z8", 3)] {
        let p = ModelPolytope::claw_polytope(&name.parse()?, m)?;
        println!(
            "{name}, m = {m}: {} vertices, dim {}",
            p.vertices().len(),
            p.dim()
        );
    }

    let caterpillar = Tree::caterpillar(4)?;
    let p = ModelPolytope::tree_polytope(&z2, &caterpillar)?;
    println!(
        "Z2 on the 4-leaf tree {:?}: {} vertices",
        caterpillar.edges(),
        p.vertices().len()
    );

    // lattice membership of a point of 2P
    let x = vec![1, 1, 1, 1, 2, 0];
    println!("{x:?} in lattice: {}", tripod.lattice_membership(&x)?);
    let pres = GPresentation::from_point(&LatticePoint::new(x, 2)?, &z2)?;
    println!("as multisets: {:?}", pres.multisets);
    Ok(())
}
