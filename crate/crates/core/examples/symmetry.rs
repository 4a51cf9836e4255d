//! Translations, edge permutations and automorphisms acting on points.
//!
//! `cargo run --example symmetry`

use phylotope::model::{apply_all, undo_all, ModelPolytope, SymmetryAction};

fn main() -> phylotope::Result<()> {
    let p = ModelPolytope::claw_polytope(&"Z3".parse()?, 3)?;
    let x = vec![2, 1, 0, 0, 2, 1, 1, 1, 1];
    let actions = vec![
        SymmetryAction::Translate { h: vec![1, 2, 0] },
        SymmetryAction::PermuteEdges {
            sigma: vec![2, 0, 1],
        },
        SymmetryAction::Automorphism {
            images: vec![0, 2, 1],
        },
    ];
    for a in &actions {
        p.validate_action(a)?;
        println!("{a:?}: {:?}", p.apply_action(a, &x)?);
    }
    let y = apply_all(&actions, &x, p.table())?;
    println!(
        "all three: {y:?}, in lattice: {}",
        p.lattice_membership(&y)?
    );
    println!("undone: {:?}", undo_all(&actions, &y, p.table())?);
    println!(
        "as JSON: {}",
        serde_json::to_string(&actions[0]).expect("serializable")
    );
    Ok(())
}
