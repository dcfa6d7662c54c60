//! Induced layers, layer deficits, holes, and completion of small-deficit packings.

use cubetorus::analysis::{hole_cells, induced_layer, layer_deficits};
use cubetorus::enumeration::complete_to_tiling;
use cubetorus::packing::sparse_packing_3d;
use cubetorus::{lift, regular_tiling, LabelCodes};

fn main() -> cubetorus::Result<()> {
    let p = sparse_packing_3d();
    for j in 0..4 {
        println!("layer x_0 in {{{j},{}}}: {:?}", (j + 1) % 4, induced_layer(&p, 0, j)?.labels());
    }
    for i in 0..3 {
        println!("deficits along {i}: {:?}", layer_deficits(&p, i)?.deficits);
    }
    println!("hole cells: {}", hole_cells(&p).len());
    println!("completes to a tiling: {}", complete_to_tiling(&p).is_some());

    let l = lift(&p, &regular_tiling(3)?)?;
    println!("lift: {} cubes, deficits along the new axis {:?}", l.len(), layer_deficits(&l, 3)?.deficits);

    // remove three cubes from a tiling and put them back
    let t = regular_tiling(4)?;
    let mut q = t.clone();
    for &c in &t.codes()[..3] {
        q = q.without_code(c);
    }
    let back = complete_to_tiling(&q).expect("deficit 3 always completes");
    println!("deficit-3 packing completed to {} cubes", back.len());
    Ok(())
}
