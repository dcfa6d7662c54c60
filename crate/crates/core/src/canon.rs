//! Canonical forms of label sets under the symmetry group.
//!
//! Every group element can be written `x ↦ L(x − pivot)` with `L` a signed
//! coordinate permutation. The canonical key of a set is the least sorted image
//! over the *admissible* elements: the pivot is a member whose multiset of pair
//! relations to the other members is least, and `L` must leave the image with
//! columns ordered by their digit statistics and with no more 3s than 1s in any
//! column. Admissibility is a property of the image and of isomorphism
//! invariants only, so the admissible images of `S` and of `g(S)` coincide and
//! the key is a complete orbit invariant.
//!
//! Images are scored as bitsets in which code `c` carries weight
//! `2^(W·64 − 1 − c)`; for sets of equal size a larger score is exactly a
//! lexicographically smaller sorted list.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::label::{self, check_dim, label_count, sub_codes, Code, MAX_DIM};
use crate::packing::{LabelCodes, LabelSet, Packing};
use crate::symmetry::{CoordMap, Symmetry};

/// Canonical image of a label set; equal keys ⇔ same orbit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    dim: u8,
    codes: SmallVec<[Code; 16]>,
}

impl CanonicalKey {
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// The key read back as a label set (it is a member of its own orbit).
    pub fn to_set(&self) -> LabelSet {
        LabelSet::from_sorted_unchecked(self.dim(), self.codes.to_vec())
    }

    /// The key as a packing, if the orbit consists of packings.
    pub fn to_packing(&self) -> Result<Packing> {
        Packing::from_codes(self.dim(), self.codes.to_vec())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self.codes.iter().join(","))
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse { line: 1, message: format!("canonical key {s:?}: {m}") };
        let (d, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let dim: usize = d.parse().map_err(|_| bad("bad dimension"))?;
        check_dim(dim)?;
        let codes: Vec<Code> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|c| c.parse().map_err(|_| bad("bad code"))).collect::<Result<_>>()?
        };
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("codes not strictly increasing"));
        }
        if codes.iter().any(|&c| c as usize >= label_count(dim)) {
            return Err(bad("code out of range"));
        }
        Ok(CanonicalKey { dim: dim as u8, codes: codes.into() })
    }
}

/// A signed coordinate permutation: `y[perm[i]] = ±x[i]`.
#[derive(Clone, Debug)]
struct Linear {
    perm: Vec<u8>,
    negate: u32,
}

/// One element of the candidate family `x ↦ L(x − pivot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Candidate {
    pivot: Code,
    linear: u32,
}

/// Precomputed action tables for one dimension.
pub struct Canonizer {
    dim: usize,
    linears: Vec<Linear>,
    // contrib[(t * d + i) * 4 + v]: contribution of digit v at coordinate i
    contrib: Vec<u32>,
    // full[t * 4^d + δ], only for small dimensions
    full: Option<Vec<Code>>,
}

const FULL_TABLE_MAX_DIM: usize = 5;

impl Canonizer {
    pub fn new(d: usize) -> Result<Self> {
        check_dim(d)?;
        let linears: Vec<Linear> = (0..d as u8)
            .permutations(d)
            .flat_map(|perm| (0..1u32 << d).map(move |negate| Linear { perm: perm.clone(), negate }))
            .collect();
        let mut contrib = vec![0u32; linears.len() * d * 4];
        for (t, lin) in linears.iter().enumerate() {
            for i in 0..d {
                for v in 0..4u32 {
                    let w = if lin.negate >> i & 1 == 1 { (4 - v) & 3 } else { v };
                    contrib[(t * d + i) * 4 + v as usize] = w << label::lane_shift(d, lin.perm[i] as usize);
                }
            }
        }
        let mut c = Canonizer { dim: d, linears, contrib, full: None };
        if d <= FULL_TABLE_MAX_DIM {
            let n = label_count(d);
            let mut full = Vec::with_capacity(c.linears.len() * n);
            for t in 0..c.linears.len() {
                full.extend((0..n as Code).map(|x| c.linear_slow(t, x)));
            }
            c.full = Some(full);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn linear_slow(&self, t: usize, x: Code) -> Code {
        let d = self.dim;
        let base = t * d * 4;
        (0..d)
            .map(|i| self.contrib[base + i * 4 + label::digit(d, x, i) as usize])
            .fold(0, |a, b| a | b) as Code
    }

    #[inline]
    fn linear(&self, t: usize, x: Code) -> Code {
        match &self.full {
            Some(full) => full[(t << (2 * self.dim)) + x as usize],
            None => self.linear_slow(t, x),
        }
    }

    #[inline]
    pub(crate) fn map(&self, g: Candidate, x: Code) -> Code {
        self.linear(g.linear as usize, sub_codes(self.dim, x, g.pivot))
    }

    /// The candidate as an explicit group element.
    pub(crate) fn to_symmetry(&self, g: Candidate) -> Symmetry {
        let d = self.dim;
        let lin = &self.linears[g.linear as usize];
        let maps = (0..d)
            .map(|i| {
                let p = label::digit(d, g.pivot, i);
                if lin.negate >> i & 1 == 1 {
                    CoordMap::new(3, p & 3).unwrap()
                } else {
                    CoordMap::new(1, (4 - p) & 3).unwrap()
                }
            })
            .collect();
        Symmetry::new(lin.perm.clone(), maps).unwrap()
    }

    /// Signed permutations (by table index) that send the differences `diffs`
    /// to an admissible image: output columns ordered by their digit classes,
    /// and in each column at least as many 1s as 3s.
    fn admissible_linears(&self, diffs: &[Code], out: &mut Vec<u32>) {
        let d = self.dim;
        // per input coordinate: (zeros, ones, threes)
        let mut stats = [(0u16, 0u16, 0u16); MAX_DIM];
        for &x in diffs {
            for (i, st) in stats.iter_mut().enumerate().take(d) {
                match label::digit(d, x, i) {
                    0 => st.0 += 1,
                    1 => st.1 += 1,
                    3 => st.2 += 1,
                    _ => {}
                }
            }
        }
        // columns with more zeros first, then more odd digits
        let col_key = |i: usize| (std::cmp::Reverse(stats[i].0), std::cmp::Reverse(stats[i].1 + stats[i].2));
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&i| col_key(i));
        let mut forced = 0u32;
        let mut free = 0u32;
        for (i, st) in stats.iter().enumerate().take(d) {
            match st.1.cmp(&st.2) {
                std::cmp::Ordering::Less => forced |= 1 << i,
                std::cmp::Ordering::Equal => free |= 1 << i,
                std::cmp::Ordering::Greater => {}
            }
        }
        // blocks of tied columns may be arranged arbitrarily
        let mut blocks: Vec<&[usize]> = Vec::new();
        let mut rest = order.as_slice();
        while !rest.is_empty() {
            let k = rest.iter().take_while(|&&i| col_key(i) == col_key(rest[0])).count();
            blocks.push(&rest[..k]);
            rest = &rest[k..];
        }
        let mut perm = [0u8; MAX_DIM];
        let mut arrangements: Vec<Vec<usize>> = vec![Vec::new()];
        for b in &blocks {
            let mut next = Vec::new();
            for prefix in &arrangements {
                for p in b.iter().copied().permutations(b.len()) {
                    let mut v = prefix.clone();
                    v.extend(p);
                    next.push(v);
                }
            }
            arrangements = next;
        }
        for arr in &arrangements {
            for (pos, &i) in arr.iter().enumerate() {
                perm[i] = pos as u8;
            }
            let rank = perm_rank(&perm[..d]);
            // iterate over all subsets of the free sign mask
            let mut sub = free;
            loop {
                out.push(((rank as u32) << d) | forced | sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }

    /// Pivots whose multiset of pair relations to the rest of the set is least.
    fn admissible_pivots(&self, codes: &[Code]) -> Vec<Code> {
        let d = self.dim;
        let sigs: Vec<SmallVec<[u8; 16]>> = codes
            .iter()
            .map(|&x| {
                let mut v: SmallVec<[u8; 16]> =
                    codes.iter().filter(|&&y| y != x).map(|&y| relation_class(d, x, y)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let best = sigs.iter().min().cloned().unwrap_or_default();
        codes.iter().zip(&sigs).filter(|(_, s)| **s == best).map(|(&c, _)| c).collect()
    }

    /// Candidates scanned by the canonical search.
    pub(crate) fn candidates(&self, codes: &[Code]) -> Vec<Candidate> {
        let mut out = Vec::new();
        let mut lin = Vec::new();
        let mut diffs = Vec::with_capacity(codes.len());
        for pivot in self.admissible_pivots(codes) {
            diffs.clear();
            diffs.extend(codes.iter().map(|&x| sub_codes(self.dim, x, pivot)));
            lin.clear();
            self.admissible_linears(&diffs, &mut lin);
            out.extend(lin.iter().map(|&t| Candidate { pivot, linear: t }));
        }
        out
    }

    /// Every element mapping a member to the origin.
    pub(crate) fn all_candidates(&self, codes: &[Code]) -> Vec<Candidate> {
        codes
            .iter()
            .flat_map(|&pivot| (0..self.linears.len() as u32).map(move |t| Candidate { pivot, linear: t }))
            .collect()
    }

    fn search_bits<const W: usize>(
        &self,
        codes: &[Code],
        cands: &[Candidate],
        mut minimisers: Option<&mut Vec<Candidate>>,
    ) -> Vec<Code> {
        let mut best = [0u64; W];
        for &g in cands {
            let mut w = [0u64; W];
            for &x in codes {
                let c = self.map(g, x) as usize;
                w[c >> 6] |= 1u64 << (63 - (c & 63));
            }
            match w.cmp(&best) {
                std::cmp::Ordering::Greater => {
                    best = w;
                    if let Some(m) = minimisers.as_deref_mut() {
                        m.clear();
                        m.push(g);
                    }
                }
                std::cmp::Ordering::Equal => {
                    if let Some(m) = minimisers.as_deref_mut() {
                        m.push(g);
                    }
                }
                std::cmp::Ordering::Less => {}
            }
        }
        let mut out = Vec::with_capacity(codes.len());
        for (wi, &word) in best.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let lz = word.leading_zeros() as usize;
                out.push((wi * 64 + lz) as Code);
                word &= !(1u64 << (63 - lz));
            }
        }
        out
    }

    fn search_sorted(&self, codes: &[Code], cands: &[Candidate], mut minimisers: Option<&mut Vec<Candidate>>) -> Vec<Code> {
        let mut best: Option<Vec<Code>> = None;
        let mut img = Vec::with_capacity(codes.len());
        for &g in cands {
            img.clear();
            img.extend(codes.iter().map(|&x| self.map(g, x)));
            img.sort_unstable();
            let ord = best.as_ref().map_or(std::cmp::Ordering::Less, |b| img.as_slice().cmp(b));
            match ord {
                std::cmp::Ordering::Less => {
                    best = Some(img.clone());
                    if let Some(m) = minimisers.as_deref_mut() {
                        m.clear();
                        m.push(g);
                    }
                }
                std::cmp::Ordering::Equal => {
                    if let Some(m) = minimisers.as_deref_mut() {
                        m.push(g);
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        best.unwrap_or_default()
    }

    /// Least sorted image over `cands`, optionally collecting every candidate
    /// that attains it.
    pub(crate) fn least_image(
        &self,
        codes: &[Code],
        cands: &[Candidate],
        minimisers: Option<&mut Vec<Candidate>>,
    ) -> Vec<Code> {
        if codes.is_empty() {
            return Vec::new();
        }
        match self.dim {
            1..=3 => self.search_bits::<1>(codes, cands, minimisers),
            4 => self.search_bits::<4>(codes, cands, minimisers),
            5 => self.search_bits::<16>(codes, cands, minimisers),
            6 => self.search_bits::<64>(codes, cands, minimisers),
            _ => self.search_sorted(codes, cands, minimisers),
        }
    }

    pub(crate) fn search(&self, codes: &[Code], minimisers: Option<&mut Vec<Candidate>>) -> Vec<Code> {
        let cands = self.candidates(codes);
        self.least_image(codes, &cands, minimisers)
    }

    /// Least image over the whole group, ignoring the admissibility filter.
    /// Slower; a different (but equally complete) orbit invariant.
    pub fn lex_least_image(&self, codes: &[Code]) -> Vec<Code> {
        let cands = self.all_candidates(codes);
        self.least_image(codes, &cands, None)
    }

    fn key_from(&self, codes: Vec<Code>) -> CanonicalKey {
        CanonicalKey { dim: self.dim as u8, codes: codes.into() }
    }

    /// Canonical key of a set of distinct codes.
    pub fn key(&self, codes: &[Code]) -> CanonicalKey {
        self.key_from(self.search(codes, None))
    }

    /// Canonical key plus every group element realising it.
    pub fn key_with_transporters(&self, codes: &[Code]) -> (CanonicalKey, Vec<Symmetry>) {
        let mut mins = Vec::new();
        let key = self.key_from(self.search(codes, Some(&mut mins)));
        let gs = mins.into_iter().map(|g| self.to_symmetry(g)).collect();
        (key, gs)
    }

    pub(crate) fn key_with_candidates(&self, codes: &[Code]) -> (CanonicalKey, Vec<Candidate>) {
        let mut mins = Vec::new();
        let key = self.key_from(self.search(codes, Some(&mut mins)));
        (key, mins)
    }

    /// Order of the set stabiliser: the number of minimisers.
    pub fn stabilizer_order(&self, codes: &[Code]) -> usize {
        if codes.is_empty() {
            return symmetry_group_len(self.dim);
        }
        let mut mins = Vec::new();
        self.search(codes, Some(&mut mins));
        mins.len()
    }
}

/// Relation of `y` to `x`: how many coordinates differ by 0 and by 2.
#[inline]
fn relation_class(d: usize, x: Code, y: Code) -> u8 {
    let t = sub_codes(d, y, x) as u32;
    let mask = ((1u64 << (2 * d)) - 1) as u32 & 0x5555_5555;
    let (lo, hi) = (t & mask, (t >> 1) & mask);
    let zeros = (!(lo | hi) & mask).count_ones();
    let twos = (hi & !lo).count_ones();
    (zeros * (MAX_DIM as u32 + 1) + twos) as u8
}

/// Lexicographic rank of a permutation of `0..n`.
fn perm_rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&p| p < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

fn symmetry_group_len(d: usize) -> usize {
    crate::symmetry::group_order(d) as usize
}

/// Shared, lazily built canonizer for dimension `d`.
pub fn canonizer(d: usize) -> &'static Canonizer {
    static CACHE: [OnceLock<Canonizer>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    CACHE[d].get_or_init(|| Canonizer::new(d).expect("dimension checked by caller"))
}

pub fn canonical_form<S: LabelCodes + ?Sized>(s: &S) -> CanonicalKey {
    canonizer(s.dim()).key(s.codes())
}

/// Cheap orbit invariant: dimension, size and the histogram of the number of
/// equal coordinates over all pairs. Different fingerprints prove
/// non-isomorphism; equal ones prove nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub dim: usize,
    pub size: usize,
    pub equal_coordinate_pairs: Vec<u64>,
}

#[inline]
pub fn equal_coordinates(d: usize, x: Code, y: Code) -> u32 {
    let t = (x ^ y) as u32;
    let mask = ((1u64 << (2 * d)) - 1) as u32 & 0x5555_5555;
    (!(t | t >> 1) & mask).count_ones()
}

pub fn invariant_fingerprint<S: LabelCodes + ?Sized>(s: &S) -> Fingerprint {
    let d = s.dim();
    let mut hist = vec![0u64; d + 1];
    let codes = s.codes();
    for (i, &a) in codes.iter().enumerate() {
        for &b in &codes[i + 1..] {
            hist[equal_coordinates(d, a, b) as usize] += 1;
        }
    }
    Fingerprint { dim: d, size: codes.len(), equal_coordinate_pairs: hist }
}

pub fn are_isomorphic<S: LabelCodes + ?Sized>(p: &S, q: &S) -> Result<bool> {
    Error::check_dim(p.dim(), q.dim())?;
    if p.len() != q.len() || invariant_fingerprint(p) != invariant_fingerprint(q) {
        return Ok(false);
    }
    Ok(canonical_form(p) == canonical_form(q))
}
