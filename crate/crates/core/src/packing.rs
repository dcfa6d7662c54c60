//! Packings, free labels and the explicit constructions.

use std::fmt;

use crate::bits::LabelBits;
use crate::error::{Error, Result};
use crate::label::{self, check_dim, disjoint_codes, label_count, Code, CubeLabel};

/// Anything that is a set of labels of one dimension, stored as sorted codes.
pub trait LabelCodes {
    fn dim(&self) -> usize;
    fn codes(&self) -> &[Code];

    fn len(&self) -> usize {
        self.codes().len()
    }

    fn is_empty(&self) -> bool {
        self.codes().is_empty()
    }

    fn labels(&self) -> Vec<CubeLabel> {
        let d = self.dim();
        self.codes().iter().map(|&c| CubeLabel::from_code(d, c).unwrap()).collect()
    }

    fn contains_code(&self, c: Code) -> bool {
        self.codes().binary_search(&c).is_ok()
    }
}

fn sorted_distinct(dim: usize, mut codes: Vec<Code>) -> Result<Vec<Code>> {
    check_dim(dim)?;
    let n = label_count(dim);
    if let Some(&c) = codes.iter().find(|&&c| c as usize >= n) {
        return Err(Error::Validation(format!("code {c} outside [0, 4^{dim})")));
    }
    codes.sort_unstable();
    let before = codes.len();
    codes.dedup();
    if codes.len() != before {
        return Err(Error::Validation("duplicate labels".into()));
    }
    Ok(codes)
}

fn codes_of(dim: usize, labels: impl IntoIterator<Item = CubeLabel>) -> Result<Vec<Code>> {
    labels
        .into_iter()
        .map(|l| Error::check_dim(dim, l.dim()).map(|_| l.code()))
        .collect()
}

/// An arbitrary set of labels; members may overlap (blocking sets, say).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet {
    dim: usize,
    codes: Vec<Code>,
}

impl LabelSet {
    pub fn from_codes(dim: usize, codes: Vec<Code>) -> Result<Self> {
        Ok(LabelSet { dim, codes: sorted_distinct(dim, codes)? })
    }

    pub fn new(dim: usize, labels: impl IntoIterator<Item = CubeLabel>) -> Result<Self> {
        Self::from_codes(dim, codes_of(dim, labels)?)
    }

    pub fn from_coords<C: AsRef<[u8]>>(dim: usize, coords: &[C]) -> Result<Self> {
        let labels = coords
            .iter()
            .map(|c| CubeLabel::new(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, labels)
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, codes: Vec<Code>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        LabelSet { dim, codes }
    }

    pub fn into_codes(self) -> Vec<Code> {
        self.codes
    }
}

impl LabelCodes for LabelSet {
    fn dim(&self) -> usize {
        self.dim
    }
    fn codes(&self) -> &[Code] {
        &self.codes
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet(d={}, {:?})", self.dim, self.labels())
    }
}

/// A set of pairwise disjoint cubes on the torus.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Packing {
    dim: usize,
    codes: Vec<Code>,
}

impl Packing {
    pub fn empty(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Packing { dim, codes: Vec::new() })
    }

    /// Validates distinctness and pairwise disjointness.
    pub fn from_codes(dim: usize, codes: Vec<Code>) -> Result<Self> {
        let codes = sorted_distinct(dim, codes)?;
        if let Some((a, b)) = first_overlap(&codes) {
            return Err(Error::Validation(format!(
                "labels {} and {} overlap",
                CubeLabel::from_code(dim, a)?,
                CubeLabel::from_code(dim, b)?
            )));
        }
        Ok(Packing { dim, codes })
    }

    pub fn new(dim: usize, labels: impl IntoIterator<Item = CubeLabel>) -> Result<Self> {
        Self::from_codes(dim, codes_of(dim, labels)?)
    }

    pub fn from_coords<C: AsRef<[u8]>>(dim: usize, coords: &[C]) -> Result<Self> {
        let set = LabelSet::from_coords(dim, coords)?;
        Self::from_codes(dim, set.codes)
    }

    pub fn try_from_set(set: LabelSet) -> Result<Self> {
        Self::from_codes(set.dim, set.codes)
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, codes: Vec<Code>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(first_overlap(&codes).is_none());
        Packing { dim, codes }
    }

    pub fn as_set(&self) -> LabelSet {
        LabelSet { dim: self.dim, codes: self.codes.clone() }
    }

    pub fn into_codes(self) -> Vec<Code> {
        self.codes
    }

    /// `2^d - N`, the hole volume in cube units.
    pub fn deficit(&self) -> usize {
        (1usize << self.dim) - self.codes.len()
    }

    /// Adds a label, failing if it overlaps a member or is already present.
    pub fn with_label(&self, x: CubeLabel) -> Result<Packing> {
        Error::check_dim(self.dim, x.dim())?;
        if !self.codes.iter().all(|&c| disjoint_codes(c, x.code())) {
            return Err(Error::Validation(format!("{x} overlaps the packing")));
        }
        Ok(self.with_code_unchecked(x.code()))
    }

    pub(crate) fn with_code_unchecked(&self, c: Code) -> Packing {
        let mut codes = self.codes.clone();
        let pos = codes.binary_search(&c).unwrap_err();
        codes.insert(pos, c);
        Packing { dim: self.dim, codes }
    }

    pub fn without_code(&self, c: Code) -> Packing {
        Packing { dim: self.dim, codes: self.codes.iter().copied().filter(|&x| x != c).collect() }
    }
}

impl LabelCodes for Packing {
    fn dim(&self) -> usize {
        self.dim
    }
    fn codes(&self) -> &[Code] {
        &self.codes
    }
}

impl fmt::Debug for Packing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Packing(d={}, {:?})", self.dim, self.labels())
    }
}

fn first_overlap(codes: &[Code]) -> Option<(Code, Code)> {
    for (i, &a) in codes.iter().enumerate() {
        for &b in &codes[i + 1..] {
            if !disjoint_codes(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Whether distinct labels are pairwise disjoint. Repeated labels are an error.
pub fn is_packing(d: usize, labels: &[CubeLabel]) -> Result<bool> {
    let codes = sorted_distinct(d, codes_of(d, labels.iter().copied())?)?;
    Ok(first_overlap(&codes).is_none())
}

pub fn is_tiling(p: &Packing) -> bool {
    p.len() == 1 << p.dim
}

/// Labels disjoint from every cube of `p`, in code order.
pub fn free_labels(p: &Packing) -> Vec<CubeLabel> {
    free_codes(p.dim, p.codes())
        .into_iter()
        .map(|c| CubeLabel::from_code(p.dim, c).unwrap())
        .collect()
}

/// Labels disjoint from every code in `codes` (scan over all `4^d` labels).
pub fn free_codes(d: usize, codes: &[Code]) -> Vec<Code> {
    (0..label_count(d) as Code)
        .filter(|&y| codes.iter().all(|&x| disjoint_codes(x, y)))
        .collect()
}

pub fn is_nonextendible(p: &Packing) -> bool {
    let d = p.dim;
    (0..label_count(d) as Code).all(|y| p.codes.iter().any(|&x| !disjoint_codes(x, y)))
}

/// The tiling by cubes with corners in `{0,2}^d`.
pub fn regular_tiling(d: usize) -> Result<Packing> {
    check_dim(d)?;
    let codes = (0..label_count(d) as Code)
        .filter(|&c| (0..d).all(|i| label::digit(d, c, i).is_multiple_of(2)))
        .collect();
    Ok(Packing { dim: d, codes })
}

/// Concatenation `(a, b)` of every `a ∈ p`, `b ∈ q`.
pub fn product_packing(p: &Packing, q: &Packing) -> Result<Packing> {
    let d = p.dim + q.dim;
    check_dim(d)?;
    let mut codes: Vec<Code> = p
        .codes
        .iter()
        .flat_map(|&a| q.codes.iter().map(move |&b| ((a as u32) << (2 * q.dim) | b as u32) as Code))
        .collect();
    codes.sort_unstable();
    Ok(Packing { dim: d, codes })
}

/// `{(x, 0) : x ∈ p} ∪ {(y, 2) : y ∈ t}` for a tiling `t`.
pub fn lift(p: &Packing, t: &Packing) -> Result<Packing> {
    Error::check_dim(p.dim, t.dim)?;
    if !is_tiling(t) {
        return Err(Error::invalid("lift requires a tiling as the added layer"));
    }
    let d = p.dim + 1;
    check_dim(d)?;
    let mut codes: Vec<Code> = p
        .codes
        .iter()
        .map(|&x| x << 2)
        .chain(t.codes.iter().map(|&y| (y << 2) | 2))
        .collect();
    codes.sort_unstable();
    Ok(Packing { dim: d, codes })
}

/// The non-extendible packing of four cubes in dimension 3.
pub fn sparse_packing_3d() -> Packing {
    Packing::from_coords(3, &[[0, 0, 0], [3, 2, 3], [2, 1, 1], [1, 3, 2]]).unwrap()
}

/// The non-regular tiling type in dimension 2.
pub fn brick_tiling_2d() -> Packing {
    Packing::from_coords(2, &[[0, 0], [0, 2], [2, 1], [2, 3]]).unwrap()
}

/// Compatibility graph: `row(x)` is the set of labels disjoint from `x`.
///
/// Rows are materialised up front when `d` is at most the threshold and
/// computed on request otherwise.
#[derive(Clone, Debug)]
pub struct CompatGraph {
    dim: usize,
    rows: Option<Vec<LabelBits>>,
}

/// Default largest dimension with a precomputed adjacency matrix.
pub const DEFAULT_DENSE_THRESHOLD: usize = 5;

impl CompatGraph {
    pub fn new(d: usize) -> Result<Self> {
        Self::with_threshold(d, DEFAULT_DENSE_THRESHOLD)
    }

    pub fn with_threshold(d: usize, dense_up_to: usize) -> Result<Self> {
        check_dim(d)?;
        let rows = (d <= dense_up_to)
            .then(|| (0..label_count(d) as Code).map(|x| Self::compute_row(d, x)).collect());
        Ok(CompatGraph { dim: d, rows })
    }

    fn compute_row(d: usize, x: Code) -> LabelBits {
        let mut row = LabelBits::empty(label_count(d));
        for y in 0..label_count(d) as Code {
            if disjoint_codes(x, y) {
                row.insert(y);
            }
        }
        row
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_dense(&self) -> bool {
        self.rows.is_some()
    }

    /// Calls `f` with the row of `x`.
    pub fn with_row<R>(&self, x: Code, f: impl FnOnce(&LabelBits) -> R) -> R {
        match &self.rows {
            Some(rows) => f(&rows[x as usize]),
            None => f(&Self::compute_row(self.dim, x)),
        }
    }

    /// Restricts `free` to labels disjoint from `x`.
    pub fn restrict(&self, free: &mut LabelBits, x: Code) {
        match &self.rows {
            Some(rows) => free.intersect_with(&rows[x as usize]),
            None => {
                let mut hits = Vec::new();
                for y in free.ones() {
                    if !disjoint_codes(x, y) {
                        hits.push(y);
                    }
                }
                for y in hits {
                    free.remove(y);
                }
            }
        }
    }

    /// Number of labels of `free` that placing `x` would eliminate.
    pub fn eliminated(&self, free: &LabelBits, x: Code) -> usize {
        match &self.rows {
            Some(rows) => free.count() - free.intersection_count(&rows[x as usize]),
            None => free.ones().filter(|&y| !disjoint_codes(x, y)).count(),
        }
    }

    pub fn free_set(&self, codes: &[Code]) -> LabelBits {
        let mut free = LabelBits::full(label_count(self.dim));
        for &x in codes {
            self.restrict(&mut free, x);
        }
        free
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(c: &[u8]) -> CubeLabel {
        CubeLabel::new(c).unwrap()
    }

    #[test]
    fn is_packing_examples() {
        let fig = sparse_packing_3d().labels();
        assert!(is_packing(3, &fig).unwrap());
        assert!(!is_packing(1, &[l(&[0]), l(&[1])]).unwrap());
        let brick = [l(&[0, 0]), l(&[0, 2]), l(&[2, 1]), l(&[2, 3])];
        assert!(is_packing(2, &brick).unwrap());
        assert!(is_packing(2, &[l(&[0, 0]), l(&[0, 0])]).is_err());
    }

    #[test]
    fn free_label_examples() {
        assert!(free_labels(&sparse_packing_3d()).is_empty());
        let p = Packing::from_coords(1, &[[0]]).unwrap();
        assert_eq!(free_labels(&p), vec![l(&[2])]);
        let p = Packing::from_coords(2, &[[0, 0], [0, 2]]).unwrap();
        let expected: Vec<_> = (0..4).map(|c| l(&[2, c])).collect();
        assert_eq!(free_labels(&p), expected);
    }

    #[test]
    fn empty_packing_blocks_nothing() {
        for d in 1..=4 {
            assert_eq!(free_labels(&Packing::empty(d).unwrap()).len(), label_count(d));
        }
    }

    #[test]
    fn tiling_examples() {
        for d in 1..=6 {
            assert!(is_tiling(&regular_tiling(d).unwrap()));
        }
        assert!(!is_tiling(&sparse_packing_3d()));
        assert!(is_tiling(&brick_tiling_2d()));
        assert_eq!(regular_tiling(1).unwrap().codes(), &[0, 2]);
        let want = Packing::from_coords(2, &[[0, 0], [0, 2], [2, 0], [2, 2]]).unwrap();
        assert_eq!(regular_tiling(2).unwrap(), want);
    }

    #[test]
    fn overlapping_packing_rejected() {
        assert!(Packing::from_coords(2, &[[0, 0], [1, 1]]).is_err());
        let p = Packing::from_coords(1, &[[0]]).unwrap();
        assert!(p.with_label(l(&[1])).is_err());
        assert_eq!(p.with_label(l(&[2])).unwrap().len(), 2);
    }

    #[test]
    fn product_of_sparse_packings() {
        let p = sparse_packing_3d();
        let prod = product_packing(&p, &p).unwrap();
        assert_eq!(prod.dim(), 6);
        assert_eq!(prod.len(), 16);
        assert!(free_labels(&prod).is_empty());
        let r1 = regular_tiling(1).unwrap();
        assert_eq!(product_packing(&r1, &r1).unwrap(), regular_tiling(2).unwrap());
    }

    #[test]
    fn lift_examples() {
        let p = sparse_packing_3d();
        let lifted = lift(&p, &regular_tiling(3).unwrap()).unwrap();
        assert_eq!(lifted.len(), 12);
        assert!(free_labels(&lifted).is_empty());
        for d in 1..=4 {
            let r = regular_tiling(d).unwrap();
            assert!(is_tiling(&lift(&r, &r).unwrap()));
        }
        assert!(lift(&p, &p).is_err());
    }

    #[test]
    fn compat_graph_matches_scan() {
        let g = CompatGraph::new(3).unwrap();
        let sparse = CompatGraph::with_threshold(3, 2).unwrap();
        assert!(g.is_dense() && !sparse.is_dense());
        let p = Packing::from_coords(3, &[[0, 0, 0], [2, 1, 1]]).unwrap();
        let want = free_codes(3, p.codes());
        assert_eq!(g.free_set(p.codes()).ones().collect::<Vec<_>>(), want);
        assert_eq!(sparse.free_set(p.codes()).ones().collect::<Vec<_>>(), want);
        let free = g.free_set(&[0]);
        assert_eq!(g.eliminated(&free, 42), sparse.eliminated(&free, 42));
    }
}
