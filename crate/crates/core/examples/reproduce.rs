//! Re-derives the reference results; `-- 3` limits the run to the quick checks.

use cubetorus::checks::{run_checks, Catalogs};

fn main() {
    let max_dim: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("dimension"));
    let reports = run_checks(max_dim, &Catalogs::new(), |r| println!("{r}"));
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed}/{} passed", reports.len());
}
