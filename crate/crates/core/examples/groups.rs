//! Group arithmetic, element order and automorphisms.
//!
//! `cargo run --example groups`

use phylotope::group::{enumerate_automorphisms, enumerate_elements, CayleyTable, GroupSpec};

fn main() -> phylotope::Result<()> {
    for name in ["Z6", "Z2xZ2", "Z2xZ4", "Z2^3"] {
        let g: GroupSpec = name.parse()?;
        let elements = enumerate_elements(&g);
        let orders: Vec<usize> = elements.iter().map(|e| g.element_order(e)).collect();
        let auts = enumerate_automorphisms(&g)?;
        println!(
            "{g}: order {}, element orders {orders:?}, |Aut| = {}",
            g.order(),
            auts.len()
        );
    }

    let g: GroupSpec = "Z2xZ4".parse()?;
    let a = g.element(&[1, 3])?;
    let b = g.element(&[1, 2])?;
    println!("{a} + {b} = {}", g.op(&a, &b)?);
    println!("-{a} = {}", g.neg(&a)?);

    let t = CayleyTable::new(&g);
    let (i, j) = (g.index_of(&a)?, g.index_of(&b)?);
    println!("by index: {i} + {j} = {}", t.add(i, j));
    Ok(())
}
