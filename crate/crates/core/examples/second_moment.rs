//! Window counts, exact moments and the second-moment lower bound.

use cubetorus::analysis::{m2_lower_bound, moments, window_pair_stats, MomentReport};
use cubetorus::packing::{brick_tiling_2d, sparse_packing_3d};
use cubetorus::regular_tiling;
use cubetorus::stochastic::{random_packing, SearchConfig};

fn main() -> cubetorus::Result<()> {
    println!("{}", MomentReport::header());
    for d in 1..=6 {
        println!("{}", moments(&regular_tiling(d)?).to_row());
    }
    println!("{}", moments(&brick_tiling_2d()).to_row());
    println!("{}", moments(&sparse_packing_3d()).to_row());
    for seed in 0..5 {
        let p = random_packing(5, &SearchConfig { seed, ..Default::default() })?;
        println!("{}", moments(&p).to_row());
    }
    println!("bound for d=2, N=4: {}", m2_lower_bound(2, 4));

    let stats = window_pair_stats(&sparse_packing_3d());
    for p in &stats.pairs {
        println!("pair {}-{}: mu={} t={} (counted {})", p.a, p.b, p.mu, p.t_formula, p.t_brute);
    }
    for c in &stats.columns {
        println!("column {}: R={} >= {}", c.coord, c.r, c.bound);
    }
    Ok(())
}
