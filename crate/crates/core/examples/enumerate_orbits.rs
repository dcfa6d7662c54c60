//! Orbit counts of packings by size: `cargo run --release --example enumerate_orbits -- 3`
//! (d=4 takes a couple of minutes).

use cubetorus::enumeration::{enumerate_levels, EnumerationOptions};

fn main() -> cubetorus::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("dimension"));
    let table = enumerate_levels(d, 1 << d, &EnumerationOptions::default(), |level, flags| {
        let maximal = flags.iter().filter(|&&f| f).count();
        eprintln!("N={:>2}: {:>7} orbits, {maximal} non-extendible", level.size(), level.len());
        Ok(())
    })?;
    print!("{table}");
    println!("tiling orbits: {}", table.tilings());
    Ok(())
}
