//! Text and JSON records, and an on-disk orbit database.

use cubetorus::enumeration::{enumerate_levels, EnumerationOptions};
use cubetorus::io::{parse_records, OrbitDatabase, PackingRecord};
use cubetorus::packing::sparse_packing_3d;

fn main() -> cubetorus::Result<()> {
    let rec = PackingRecord::described(&sparse_packing_3d());
    print!("{}", rec.to_text());
    println!("{}", rec.to_json_line());
    assert_eq!(parse_records(&rec.to_text(), false)?, vec![rec.clone()]);

    let dir = std::env::temp_dir().join("cubetorus-example-db");
    let _ = std::fs::remove_dir_all(&dir);
    let db = OrbitDatabase::open(&dir)?;
    enumerate_levels(3, 8, &EnumerationOptions::default(), |level, flags| {
        db.append_level(level, flags, true).map(|_| ())
    })?;
    for m in db.manifests()? {
        println!("d={} N={:>2}: {:>3} orbits, {} non-extendible", m.d, m.n, m.count, m.nonextendible);
    }
    println!("database in {}", dir.display());
    Ok(())
}
