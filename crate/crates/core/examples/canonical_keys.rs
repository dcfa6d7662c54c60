//! Canonical keys, isomorphism tests and stabilisers.

use cubetorus::canon::canonizer;
use cubetorus::packing::{brick_tiling_2d, sparse_packing_3d};
use cubetorus::symmetry::group_order;
use cubetorus::{are_isomorphic, canonical_form, invariant_fingerprint, regular_tiling, LabelCodes, Symmetry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cubetorus::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r2 = regular_tiling(2)?;
    let b2 = brick_tiling_2d();
    println!("regular {} vs brick {}", canonical_form(&r2), canonical_form(&b2));
    println!("fingerprints {:?} / {:?}", invariant_fingerprint(&r2), invariant_fingerprint(&b2));
    println!("isomorphic: {}", are_isomorphic(&r2, &b2)?);

    let p = sparse_packing_3d();
    let g = Symmetry::random(3, &mut rng);
    let q = g.apply(&p)?;
    println!("{:?} -> {:?}", p.labels(), q.labels());
    println!("same key: {}", canonical_form(&p) == canonical_form(&q));

    for (name, s) in [("regular d=3", regular_tiling(3)?), ("sparse d=3", p)] {
        let stab = canonizer(3).stabilizer_order(s.codes());
        println!("{name}: stabiliser {stab}, orbit size {}", group_order(3) / stab as u128);
    }
    Ok(())
}
