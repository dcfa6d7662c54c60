//! The symmetry group of the compatibility graph: coordinate permutations
//! composed with the affine maps `t ↦ ±t + b` of ℤ/4 on each coordinate.
//!
//! Those eight maps are exactly the bijections of ℤ/4 that preserve
//! "difference ≡ 2", so the group has order `d! · 8^d`.

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::label::{self, check_dim, Code, CubeLabel};
use crate::packing::{LabelCodes, LabelSet, Packing};

/// `t ↦ scale·t + shift (mod 4)` with `scale ∈ {1, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordMap {
    scale: u8,
    shift: u8,
}

impl CoordMap {
    pub const IDENTITY: CoordMap = CoordMap { scale: 1, shift: 0 };

    pub fn new(scale: u8, shift: u8) -> Result<Self> {
        if !(scale == 1 || scale == 3) || shift > 3 {
            return Err(Error::invalid(format!("t -> {scale}t + {shift} is not a symmetry of Z4")));
        }
        Ok(CoordMap { scale, shift })
    }

    pub fn scale(&self) -> u8 {
        self.scale
    }

    pub fn shift(&self) -> u8 {
        self.shift
    }

    #[inline]
    pub fn eval(&self, t: u8) -> u8 {
        (self.scale * t + self.shift) & 3
    }

    /// All eight maps, ordered by (scale, shift).
    pub fn all() -> impl Iterator<Item = CoordMap> {
        [1u8, 3].into_iter().flat_map(|a| (0..4).map(move |b| CoordMap { scale: a, shift: b }))
    }
}

/// A group element: `x ↦ y` with `y[perm[i]] = maps[i](x[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry {
    perm: Vec<u8>,
    maps: Vec<CoordMap>,
}

/// `d! · 8^d`.
pub fn group_order(d: usize) -> u128 {
    (1..=d as u128).product::<u128>() * 8u128.pow(d as u32)
}

impl Symmetry {
    pub fn identity(d: usize) -> Self {
        Symmetry { perm: (0..d as u8).collect(), maps: vec![CoordMap::IDENTITY; d] }
    }

    pub fn new(perm: Vec<u8>, maps: Vec<CoordMap>) -> Result<Self> {
        let d = perm.len();
        check_dim(d)?;
        Error::check_dim(d, maps.len())?;
        let mut seen = vec![false; d];
        for &p in &perm {
            if p as usize >= d || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::invalid(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Symmetry { perm, maps })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn maps(&self) -> &[CoordMap] {
        &self.maps
    }

    /// Swaps coordinates `i` and `j`.
    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut g = Self::identity(d);
        g.perm.swap(i, j);
        g
    }

    /// `t ↦ t + 1` on coordinate `i`.
    pub fn translation(d: usize, i: usize) -> Self {
        let mut g = Self::identity(d);
        g.maps[i] = CoordMap { scale: 1, shift: 1 };
        g
    }

    /// `t ↦ -t` on coordinate `i`.
    pub fn reflection(d: usize, i: usize) -> Self {
        let mut g = Self::identity(d);
        g.maps[i] = CoordMap { scale: 3, shift: 0 };
        g
    }

    #[inline]
    pub fn apply_code(&self, x: Code) -> Code {
        let d = self.dim();
        let mut y = 0u32;
        for i in 0..d {
            let v = self.maps[i].eval(label::digit(d, x, i)) as u32;
            y |= v << label::lane_shift(d, self.perm[i] as usize);
        }
        y as Code
    }

    pub fn apply_label(&self, x: CubeLabel) -> Result<CubeLabel> {
        Error::check_dim(self.dim(), x.dim())?;
        CubeLabel::from_code(self.dim(), self.apply_code(x.code()))
    }

    fn image_codes(&self, codes: &[Code]) -> Vec<Code> {
        let mut out: Vec<Code> = codes.iter().map(|&c| self.apply_code(c)).collect();
        out.sort_unstable();
        out
    }

    /// Image of a packing; packings map to packings.
    pub fn apply(&self, p: &Packing) -> Result<Packing> {
        Error::check_dim(self.dim(), p.dim())?;
        Ok(Packing::from_sorted_unchecked(p.dim(), self.image_codes(p.codes())))
    }

    pub fn apply_set(&self, s: &LabelSet) -> Result<LabelSet> {
        Error::check_dim(self.dim(), s.dim())?;
        Ok(LabelSet::from_sorted_unchecked(s.dim(), self.image_codes(s.codes())))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        let d = self.dim();
        assert_eq!(d, other.dim(), "composing symmetries of different dimensions");
        let mut perm = vec![0u8; d];
        let mut maps = vec![CoordMap::IDENTITY; d];
        for i in 0..d {
            let j = other.perm[i] as usize;
            let (g, h) = (self.maps[j], other.maps[i]);
            perm[i] = self.perm[j];
            maps[i] = CoordMap { scale: (g.scale * h.scale) & 3, shift: (g.scale * h.shift + g.shift) & 3 };
        }
        Symmetry { perm, maps }
    }

    pub fn inverse(&self) -> Symmetry {
        let d = self.dim();
        let mut perm = vec![0u8; d];
        let mut maps = vec![CoordMap::IDENTITY; d];
        for i in 0..d {
            let j = self.perm[i] as usize;
            let m = self.maps[i];
            // scale is its own inverse mod 4
            perm[j] = i as u8;
            maps[j] = CoordMap { scale: m.scale, shift: (4 - (m.scale * m.shift) % 4) & 3 };
        }
        Symmetry { perm, maps }
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Symmetry {
        let mut perm: Vec<u8> = (0..d as u8).collect();
        for i in (1..d).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let maps = (0..d)
            .map(|_| CoordMap { scale: if rng.gen() { 1 } else { 3 }, shift: rng.gen_range(0..4) })
            .collect();
        Symmetry { perm, maps }
    }

    /// Every group element, permutations in lexicographic order.
    pub fn all(d: usize) -> impl Iterator<Item = Symmetry> {
        (0..d as u8).permutations(d).flat_map(move |perm| {
            (0..d)
                .map(|_| CoordMap::all().collect::<Vec<_>>())
                .multi_cartesian_product()
                .map(move |maps| Symmetry { perm: perm.clone(), maps })
        })
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::label::{disjoint_codes, label_count};
    use crate::packing::{free_codes, is_tiling, regular_tiling};

    #[test]
    fn group_orders() {
        assert_eq!(group_order(1), 8);
        assert_eq!(group_order(2), 128);
        assert_eq!(group_order(3), 3072);
        assert_eq!(group_order(4), 98304);
        for d in 1..=3 {
            let all: HashSet<Symmetry> = Symmetry::all(d).collect();
            assert_eq!(all.len() as u128, group_order(d));
        }
    }

    #[test]
    fn elements_act_as_distinct_bijections() {
        let d = 2;
        let mut images = HashSet::new();
        for g in Symmetry::all(d) {
            let img: Vec<Code> = (0..label_count(d) as Code).map(|c| g.apply_code(c)).collect();
            let set: HashSet<_> = img.iter().collect();
            assert_eq!(set.len(), label_count(d));
            images.insert(img);
        }
        assert_eq!(images.len() as u128, group_order(d));
    }

    #[test]
    fn d1_reflection_shift_example() {
        let g = Symmetry::new(vec![0], vec![CoordMap::new(3, 3).unwrap()]).unwrap();
        let img = g.apply(&regular_tiling(1).unwrap()).unwrap();
        assert_eq!(img.codes(), &[1, 3]);
        assert!(is_tiling(&img));
        assert!(CoordMap::new(2, 0).is_err());
    }

    #[test]
    fn composition_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=5 {
            for _ in 0..200 {
                let g = Symmetry::random(d, &mut rng);
                let h = Symmetry::random(d, &mut rng);
                let gh = g.compose(&h);
                let x = rng.gen_range(0..label_count(d)) as Code;
                assert_eq!(gh.apply_code(x), g.apply_code(h.apply_code(x)));
                assert_eq!(g.inverse().apply_code(g.apply_code(x)), x);
                assert_eq!(g.compose(&g.inverse()), Symmetry::identity(d));
                let k = Symmetry::random(d, &mut rng);
                assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
            }
        }
    }

    #[test]
    fn generators_produce_the_whole_group() {
        let d = 2;
        let gens: Vec<Symmetry> = vec![
            Symmetry::transposition(d, 0, 1),
            Symmetry::translation(d, 0),
            Symmetry::reflection(d, 0),
        ];
        let mut seen: HashSet<Symmetry> = HashSet::from([Symmetry::identity(d)]);
        let mut frontier = vec![Symmetry::identity(d)];
        while let Some(g) = frontier.pop() {
            for s in &gens {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        assert_eq!(seen.len() as u128, group_order(d));
    }

    #[test]
    fn action_preserves_disjointness_and_free_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 4;
        for _ in 0..2000 {
            let g = Symmetry::random(d, &mut rng);
            let x = rng.gen_range(0..label_count(d)) as Code;
            let y = rng.gen_range(0..label_count(d)) as Code;
            assert_eq!(disjoint_codes(x, y), disjoint_codes(g.apply_code(x), g.apply_code(y)));
        }
        let p = crate::packing::sparse_packing_3d();
        for _ in 0..50 {
            let g = Symmetry::random(3, &mut rng);
            let q = g.apply(&p).unwrap();
            let mut mapped: Vec<Code> = free_codes(3, &[0, 21]).iter().map(|&c| g.apply_code(c)).collect();
            mapped.sort_unstable();
            let img: Vec<Code> = [0, 21].iter().map(|&c| g.apply_code(c)).collect();
            assert_eq!(mapped, free_codes(3, &img));
            assert_eq!(q.len(), p.len());
        }
    }
}
