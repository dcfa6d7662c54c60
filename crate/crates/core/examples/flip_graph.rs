//! Flip-graph component of the regular tiling, at orbit level.

use cubetorus::flips::{apply_flip, explore_component, flip_moves};
use cubetorus::{canonical_form, regular_tiling, LabelCodes};

fn main() -> cubetorus::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("dimension"));
    let r = regular_tiling(d)?;
    let moves = flip_moves(&r)?;
    println!("regular tiling: {} cubes, {} flip moves", r.len(), moves.len());
    let flipped = apply_flip(&r, moves[0])?;
    println!("one flip gives {}", canonical_form(&flipped));

    let ex = explore_component(&r, 100_000)?;
    let comp = ex.component();
    println!("component: {} tiling orbits, {} orbit edges", comp.keys.len(), comp.edges.len());
    if comp.keys.len() <= 20 {
        for (i, k) in comp.keys.iter().enumerate() {
            println!("  {i}: {k}");
        }
        for (a, b) in &comp.edges {
            println!("  {a} -- {b}");
        }
    }
    Ok(())
}
