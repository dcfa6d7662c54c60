//! Induced layers, their deficits, and the hole of a packing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{digit, label_count, lane_shift, Code, UnitCell};
use crate::packing::{LabelCodes, Packing};

fn check_coord(p: &Packing, i: usize) -> Result<()> {
    if p.dim() < 2 {
        return Err(Error::invalid("induced layers need dimension at least 2"));
    }
    if i >= p.dim() {
        return Err(Error::invalid(format!("coordinate {i} out of range for dimension {}", p.dim())));
    }
    Ok(())
}

fn drop_lane(d: usize, x: Code, i: usize) -> Code {
    let s = lane_shift(d, i);
    let low = x & ((1 << s) - 1);
    let high = (x >> (s + 2)) << s;
    high | low
}

/// Cubes with `x_i ∈ {j, j+1}` (mod 4), with coordinate `i` deleted: the
/// packing cut out by the hyperplane `x_i = j + 1`.
pub fn induced_layer(p: &Packing, i: usize, j: u8) -> Result<Packing> {
    check_coord(p, i)?;
    let d = p.dim();
    let j = j & 3;
    let mut codes: Vec<Code> = p
        .codes()
        .iter()
        .filter(|&&x| {
            let v = digit(d, x, i);
            v == j || v == (j + 1) & 3
        })
        .map(|&x| drop_lane(d, x, i))
        .collect();
    codes.sort_unstable();
    Packing::from_codes(d - 1, codes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerDeficits {
    pub coord: usize,
    /// `2^(d−1) − |layer j|` for `j = 0..4`.
    pub deficits: [i64; 4],
}

impl LayerDeficits {
    pub fn alternating_sum(&self) -> i64 {
        let [a, b, c, d] = self.deficits;
        a - b + c - d
    }

    pub fn total(&self) -> i64 {
        self.deficits.iter().sum()
    }
}

pub fn layer_deficits(p: &Packing, i: usize) -> Result<LayerDeficits> {
    check_coord(p, i)?;
    let full = 1i64 << (p.dim() - 1);
    let mut deficits = [0; 4];
    for (j, slot) in deficits.iter_mut().enumerate() {
        *slot = full - induced_layer(p, i, j as u8)?.len() as i64;
    }
    Ok(LayerDeficits { coord: i, deficits })
}

/// Unit cells covered by no cube; there are `δ · 2^d` of them.
pub fn hole_cells(p: &Packing) -> Vec<UnitCell> {
    let d = p.dim();
    let mut covered = vec![false; label_count(d)];
    for &x in p.codes() {
        for u in 0..1u32 << d {
            let offset = (0..d).fold(0u32, |acc, i| acc | ((u >> i) & 1) << lane_shift(d, i));
            covered[crate::label::add_codes(d, x, offset as Code) as usize] = true;
        }
    }
    (0..label_count(d))
        .filter(|&c| !covered[c])
        .map(|c| UnitCell::from_code(d, c as Code).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{lift, regular_tiling, sparse_packing_3d};

    #[test]
    fn layers_of_regular_tiling() {
        for d in 2..=4 {
            let r = regular_tiling(d).unwrap();
            for i in 0..d {
                assert_eq!(induced_layer(&r, i, 0).unwrap(), regular_tiling(d - 1).unwrap());
                assert_eq!(layer_deficits(&r, i).unwrap().deficits, [0; 4]);
            }
        }
        assert!(induced_layer(&regular_tiling(1).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn sparse_packing_layers() {
        let p = sparse_packing_3d();
        let l = induced_layer(&p, 0, 0).unwrap();
        assert_eq!(l, Packing::from_coords(2, &[[0, 0], [3, 2]]).unwrap());
        for i in 0..3 {
            let dl = layer_deficits(&p, i).unwrap();
            assert_eq!(dl.total(), 8);
            assert_eq!(dl.alternating_sum(), 0);
            assert!(dl.deficits.iter().all(|&x| x <= p.deficit() as i64));
        }
    }

    #[test]
    fn lifted_packing_deficits() {
        let p = lift(&sparse_packing_3d(), &regular_tiling(3).unwrap()).unwrap();
        let dl = layer_deficits(&p, 3).unwrap();
        // the tiling sits on layers 1 and 2, the sparse packing on 3 and 0
        assert_eq!(dl.deficits, [4, 0, 0, 4]);
        assert_eq!(dl.alternating_sum(), 0);
        assert_eq!(dl.total(), 2 * p.deficit() as i64);
    }

    #[test]
    fn hole_sizes() {
        assert!(hole_cells(&regular_tiling(3).unwrap()).is_empty());
        assert_eq!(hole_cells(&sparse_packing_3d()).len(), 32);
        assert_eq!(hole_cells(&Packing::from_coords(2, &[[0, 0]]).unwrap()).len(), 12);
    }
}
