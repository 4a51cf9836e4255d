//! Constructive decomposition for Z3 claws, with its normalization trace.
//!
//! `cargo run --release --example z3_decompose`

use phylotope::z3::Z3Claw;

fn main() -> phylotope::Result<()> {
    let claw = Z3Claw::new(4)?;
    let k = 4;
    let points = claw.polytope().dilation_points(k, false)?;
    let mut failures = 0;
    for x in &points {
        if claw.decompose(x, k).is_err() {
            failures += 1;
        }
    }
    println!(
        "m = 4, k = {k}: {} points, {failures} failures",
        points.len()
    );

    let x = &points[points.len() / 2];
    let d = claw.decompose(x, k)?;
    println!("point {x:?}");
    println!("trace {:?}", d.trace);
    for level in &d.levels {
        println!("  {level:?}");
    }
    for v in &d.vertices {
        println!("  + {v:?}");
    }
    Ok(())
}
