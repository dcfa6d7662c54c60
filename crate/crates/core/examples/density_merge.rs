//! Density functions and the merge operators that drive them to the regular tiling.

use cubetorus::analysis::density::{merge, merge_all, random_tiling, DensityFunction};
use cubetorus::analysis::key_inequality_check;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cubetorus::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = 3;
    let t = random_tiling(d, &mut rng)?;
    let f = DensityFunction::from_tiling(&t)?;
    println!("random tiling second moment: {}", f.second_moment());

    let g = DensityFunction::random(d, &mut rng)?;
    println!("random density in the space: {}", g.is_member());
    let mut h = g.clone();
    println!("second moment {}", h.second_moment());
    for i in (0..d).rev() {
        h = merge(&h, i)?;
        println!("after merging along {i}: {}", h.second_moment());
    }
    let regular = DensityFunction::from_tiling(&cubetorus::regular_tiling(d)?)?;
    println!("all merges give the regular tiling: {}", merge_all(&g)? == regular);

    let q = |n: i64, m: i64| BigRational::new(BigInt::from(n), BigInt::from(m));
    println!("inequality at (1,2,3,4)/5: {}", key_inequality_check(&[q(1, 5), q(2, 5), q(3, 5), q(4, 5)])?);
    Ok(())
}
