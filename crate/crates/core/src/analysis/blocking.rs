//! Blocking sets: label sets (overlaps allowed) that every cube meets.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::canon::{canonizer, CanonicalKey};
use crate::error::{Error, Result};
use crate::label::{check_dim, label_count, Code};
use crate::packing::{free_codes, LabelCodes, LabelSet};

/// True iff every label overlaps some member of `s`.
pub fn is_blocking<S: LabelCodes + ?Sized>(s: &S) -> bool {
    free_codes(s.dim(), s.codes()).is_empty()
}

/// Orbits of blocking sets with exactly `k` members, by canonical key.
///
/// Builds all orbits of `j`-subsets for `j = 1..=k` by one-label extension
/// and fails once a level holds more than `max_orbits` orbits.
pub fn min_blocking_search(d: usize, k: usize, max_orbits: usize) -> Result<Vec<CanonicalKey>> {
    check_dim(d)?;
    if k > label_count(d) {
        return Ok(Vec::new());
    }
    let canon = canonizer(d);
    let mut level: Vec<CanonicalKey> = vec![canon.key(&[])];
    for size in 1..=k {
        let next: HashSet<CanonicalKey> = level
            .par_iter()
            .fold(HashSet::new, |mut acc, key| {
                let mut codes: Vec<Code> = key.codes().to_vec();
                codes.push(0);
                for y in 0..label_count(d) as Code {
                    if key.codes().binary_search(&y).is_ok() {
                        continue;
                    }
                    *codes.last_mut().unwrap() = y;
                    acc.insert(canon.key(&codes));
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        if next.len() > max_orbits {
            return Err(Error::ResourceLimit(format!(
                "{} orbits of {size}-sets in dimension {d} exceed the cap of {max_orbits}",
                next.len()
            )));
        }
        level = next.into_iter().collect();
    }
    let mut out: Vec<CanonicalKey> = level.into_iter().filter(|key| is_blocking(&key.to_set())).collect();
    out.sort_unstable();
    Ok(out)
}

/// Iterates `h ↦ ⌊(4h − 1)/3⌋ + 1`, the lower bound on the blocking number one
/// dimension up.
pub fn h_recurrence(h: u64, steps: usize) -> Result<Vec<u64>> {
    if h == 0 {
        return Err(Error::invalid("blocking number must be at least 1"));
    }
    let mut out = Vec::with_capacity(steps);
    let mut cur = h;
    for _ in 0..steps {
        cur = (4 * cur - 1) / 3 + 1;
        out.push(cur);
    }
    Ok(out)
}

/// The three size-4 blocking sets of dimension 3, one per orbit.
pub fn blocking_sets_3d() -> [LabelSet; 3] {
    let s = |c: [[u8; 3]; 4]| LabelSet::from_coords(3, &c).unwrap();
    [
        s([[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]]),
        s([[0, 0, 0], [1, 1, 1], [2, 2, 3], [3, 3, 2]]),
        s([[0, 0, 0], [3, 2, 3], [2, 1, 1], [1, 3, 2]]),
    ]
}

/// The seven-label set usually quoted as a dimension-4 blocking set. It is
/// not blocking: `(2,3,0,1)`, `(2,3,1,0)`, `(3,2,0,1)` and `(3,2,1,0)` meet
/// none of its cubes. See [`blocking_set_4d`] for a repaired version.
pub fn quoted_blocking_set_4d() -> LabelSet {
    LabelSet::from_coords(
        4,
        &[[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3], [0, 0, 1, 1], [1, 1, 2, 2], [2, 2, 3, 3]],
    )
    .unwrap()
}

/// A seven-element blocking set in dimension 4: the quoted set with
/// `(2,2,3,3)` replaced by `(2,2,0,0)`.
pub fn blocking_set_4d() -> LabelSet {
    LabelSet::from_coords(
        4,
        &[[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3], [0, 0, 1, 1], [1, 1, 2, 2], [2, 2, 0, 0]],
    )
    .unwrap()
}
