//! Products and lifts of non-extendible packings.

use cubetorus::flips::{apply_flip, flip_moves};
use cubetorus::packing::{free_codes, is_nonextendible, sparse_packing_3d};
use cubetorus::{canonical_form, lift, product_packing, regular_tiling, LabelCodes};

fn main() -> cubetorus::Result<()> {
    let s = sparse_packing_3d();
    println!("d=3 packing: {:?}", s.labels());
    let prod = product_packing(&s, &s)?;
    println!(
        "product: d={} with {} cubes, free labels {}",
        prod.dim(),
        prod.len(),
        free_codes(prod.dim(), prod.codes()).len()
    );
    let r = regular_tiling(3)?;
    let flipped = apply_flip(&r, flip_moves(&r)?[0])?;
    for t in [r, flipped] {
        let l = lift(&s, &t)?;
        println!("lift: {} cubes, non-extendible {}, key {}", l.len(), is_nonextendible(&l), canonical_form(&l));
    }
    Ok(())
}
