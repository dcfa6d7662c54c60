//! Smallest blocking sets in dimensions 2 and 3, and the dimension-4 witnesses.

use cubetorus::analysis::blocking::{blocking_set_4d, blocking_sets_3d, quoted_blocking_set_4d};
use cubetorus::analysis::{h_recurrence, is_blocking, min_blocking_search};
use cubetorus::label::decode;
use cubetorus::packing::free_codes;
use cubetorus::LabelCodes;

fn main() -> cubetorus::Result<()> {
    for (d, k) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        let found = min_blocking_search(d, k, 1_000_000)?;
        println!("d={d} k={k}: {} orbits", found.len());
        for key in found {
            println!("  {:?}", key.to_set().labels());
        }
    }
    for s in blocking_sets_3d() {
        println!("listed d=3 set {:?} blocks: {}", s.labels(), is_blocking(&s));
    }
    let quoted = quoted_blocking_set_4d();
    let missed: Vec<Vec<u8>> = free_codes(4, quoted.codes()).iter().map(|&c| decode(4, c)).collect();
    println!("quoted d=4 set blocks: {} (misses {missed:?})", is_blocking(&quoted));
    println!("repaired d=4 set blocks: {}", is_blocking(&blocking_set_4d()));
    println!("lower bounds from h(4)=7: {:?}", h_recurrence(7, 3)?);
    Ok(())
}
