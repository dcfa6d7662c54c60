//! Level-wise enumeration of packings up to symmetry.
//!
//! Level `N+1` is obtained from level `N` by adding every free label to every
//! representative and reducing by canonical key. Representatives are stored as
//! their keys: a canonical key is itself a member of its orbit.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::LabelBits;
use crate::canon::{canonizer, CanonicalKey, Canonizer};
use crate::error::{Error, Result};
use crate::label::{add_codes, check_dim, label_count, Code};
use crate::packing::{CompatGraph, LabelCodes, Packing};

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Try one free label per orbit of the representative's stabiliser
    /// instead of every free label. Same output, less work.
    pub stabilizer_pruning: bool,
    /// Abort when a level holds more orbits than this.
    pub max_orbits: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { stabilizer_pruning: true, max_orbits: 50_000_000 }
    }
}

/// All orbits of packings of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitLevel {
    dim: usize,
    size: usize,
    keys: Vec<CanonicalKey>,
}

impl OrbitLevel {
    /// The level holding only the empty packing.
    pub fn root(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(OrbitLevel { dim, size: 0, keys: vec![canonizer(dim).key(&[])] })
    }

    /// Builds a level from keys, which must all have the given size.
    pub fn from_keys(dim: usize, size: usize, mut keys: Vec<CanonicalKey>) -> Result<Self> {
        check_dim(dim)?;
        if let Some(k) = keys.iter().find(|k| k.dim() != dim || k.len() != size) {
            return Err(Error::Validation(format!("key {k} does not belong to level d={dim} N={size}")));
        }
        keys.sort_unstable();
        keys.dedup();
        Ok(OrbitLevel { dim, size, keys })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = Packing> + '_ {
        self.keys.iter().map(|k| Packing::from_sorted_unchecked(self.dim, k.codes().to_vec()))
    }
}

/// Per-representative result of one extension step.
struct Expansion {
    nonextendible: bool,
    children: Vec<CanonicalKey>,
}

fn expand(canon: &Canonizer, graph: &CompatGraph, key: &CanonicalKey, prune: bool) -> Expansion {
    let codes = key.codes();
    let free = graph.free_set(codes);
    if free.is_clear() {
        return Expansion { nonextendible: true, children: Vec::new() };
    }
    let autos = if prune && !codes.is_empty() { canon.key_with_candidates(codes).1 } else { Vec::new() };
    let mut child = Vec::with_capacity(codes.len() + 1);
    let mut seen = HashSet::new();
    let mut children = Vec::new();
    for y in free.ones() {
        if codes.is_empty() && prune {
            // the group is transitive on labels
            if y != 0 {
                continue;
            }
        } else if autos.len() > 1 && autos.iter().any(|&g| canon.map(g, y) < y) {
            continue;
        }
        child.clear();
        child.extend_from_slice(codes);
        let pos = child.binary_search(&y).unwrap_err();
        child.insert(pos, y);
        let k = canon.key(&child);
        if seen.insert(k.clone()) {
            children.push(k);
        }
    }
    Expansion { nonextendible: false, children }
}

/// Outcome of extending a level: the next level and which inputs were maximal.
pub struct Extension {
    pub next: OrbitLevel,
    /// Parallel to the input level's keys.
    pub nonextendible: Vec<bool>,
}

pub fn extend_level_with(level: &OrbitLevel, opts: &EnumerationOptions) -> Result<Extension> {
    let canon = canonizer(level.dim);
    let graph = CompatGraph::new(level.dim)?;
    let expansions: Vec<Expansion> = level
        .keys
        .par_iter()
        .map(|k| expand(canon, &graph, k, opts.stabilizer_pruning))
        .collect();
    let mut next: HashSet<CanonicalKey> = HashSet::new();
    let mut nonextendible = Vec::with_capacity(expansions.len());
    for e in expansions {
        nonextendible.push(e.nonextendible);
        next.extend(e.children);
        if next.len() > opts.max_orbits {
            return Err(Error::ResourceLimit(format!(
                "level d={} N={} exceeds {} orbits",
                level.dim,
                level.size + 1,
                opts.max_orbits
            )));
        }
    }
    let mut keys: Vec<CanonicalKey> = next.into_iter().collect();
    keys.sort_unstable();
    Ok(Extension { next: OrbitLevel { dim: level.dim, size: level.size + 1, keys }, nonextendible })
}

/// Orbits of packings of size `N + 1`.
pub fn extend_level(level: &OrbitLevel) -> Result<OrbitLevel> {
    Ok(extend_level_with(level, &EnumerationOptions::default())?.next)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub size: usize,
    pub orbits: usize,
    pub nonextendible: usize,
}

/// Orbit counts per packing size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub dim: usize,
    pub rows: BTreeMap<usize, CountRow>,
}

impl CountTable {
    pub fn nonextendible(&self, size: usize) -> usize {
        self.rows.get(&size).map_or(0, |r| r.nonextendible)
    }

    pub fn orbits(&self, size: usize) -> usize {
        self.rows.get(&size).map_or(0, |r| r.orbits)
    }

    /// Tiling orbits: every orbit at `N = 2^d`.
    pub fn tilings(&self) -> usize {
        self.orbits(1 << self.dim)
    }

    /// One JSON object per row.
    pub fn to_json_lines(&self) -> String {
        self.rows
            .values()
            .map(|r| {
                serde_json::json!({"d": self.dim, "n": r.size, "orbits": r.orbits, "nonextendible": r.nonextendible})
                    .to_string()
                    + "\n"
            })
            .collect()
    }
}

impl fmt::Display for CountTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4} {:>12} {:>14}", "N", "orbits", "nonextendible")?;
        for r in self.rows.values() {
            writeln!(f, "{:>4} {:>12} {:>14}", r.size, r.orbits, r.nonextendible)?;
        }
        Ok(())
    }
}

/// Level-wise enumeration from the empty packing up to `max_size`, calling
/// `visit` once per level with its maximality flags.
pub fn enumerate_levels(
    d: usize,
    max_size: usize,
    opts: &EnumerationOptions,
    mut visit: impl FnMut(&OrbitLevel, &[bool]) -> Result<()>,
) -> Result<CountTable> {
    let max_size = max_size.min(1 << d);
    let mut table = CountTable { dim: d, rows: BTreeMap::new() };
    let mut level = OrbitLevel::root(d)?;
    loop {
        let (next, flags) = if level.size < max_size {
            let ext = extend_level_with(&level, opts)?;
            (Some(ext.next), ext.nonextendible)
        } else {
            // no need to extend: maximality is just an empty free set
            let graph = CompatGraph::new(d)?;
            let flags = level.keys.par_iter().map(|k| graph.free_set(k.codes()).is_clear()).collect();
            (None, flags)
        };
        let nonext = flags.iter().filter(|&&b| b).count();
        table.rows.insert(level.size, CountRow { size: level.size, orbits: level.len(), nonextendible: nonext });
        visit(&level, &flags)?;
        match next {
            Some(n) if !n.is_empty() => level = n,
            _ => break,
        }
    }
    Ok(table)
}

/// Orbit counts of all packings of dimension `d` with at most `max_size` cubes.
pub fn enumerate_all(d: usize, max_size: usize) -> Result<CountTable> {
    enumerate_levels(d, max_size, &EnumerationOptions::default(), |_, _| Ok(()))
}

/// A full enumeration kept in memory: every level with maximality flags.
#[derive(Clone, Debug)]
pub struct OrbitCatalog {
    pub table: CountTable,
    pub levels: Vec<(OrbitLevel, Vec<bool>)>,
}

impl OrbitCatalog {
    pub fn build(d: usize, opts: &EnumerationOptions) -> Result<Self> {
        let mut levels = Vec::new();
        let table = enumerate_levels(d, 1 << d, opts, |lvl, flags| {
            levels.push((lvl.clone(), flags.to_vec()));
            Ok(())
        })?;
        Ok(OrbitCatalog { table, levels })
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn level(&self, size: usize) -> Option<&OrbitLevel> {
        self.levels.get(size).map(|(l, _)| l)
    }

    /// Every stored representative with its maximality flag.
    pub fn entries(&self) -> impl Iterator<Item = (Packing, bool)> + '_ {
        self.levels.iter().flat_map(|(l, f)| l.representatives().zip(f.iter().copied()))
    }

    pub fn tilings(&self) -> &[CanonicalKey] {
        self.level(1 << self.dim()).map_or(&[], |l| l.keys())
    }
}

/// Exact-cover search for a tiling containing `p`.
///
/// Branches on the uncovered cell with the fewest candidate cubes (ties to the
/// smallest cell code), trying candidates in code order. Returns `None` when
/// the search space is exhausted.
pub fn complete_to_tiling(p: &Packing) -> Option<Packing> {
    let d = p.dim();
    let graph = CompatGraph::new(d).ok()?;
    let n = label_count(d);
    let units: Vec<Code> = (0..n as Code).filter(|&u| (0..d).all(|i| crate::label::digit(d, u, i) <= 1)).collect();
    let mut covered = LabelBits::empty(n);
    for &x in p.codes() {
        for &u in &units {
            covered.insert(add_codes(d, x, u));
        }
    }
    let free = graph.free_set(p.codes());
    let mut chosen = p.codes().to_vec();
    if search_cover(d, &graph, &units, &mut covered, free, &mut chosen) {
        chosen.sort_unstable();
        Some(Packing::from_sorted_unchecked(d, chosen))
    } else {
        None
    }
}

fn search_cover(
    d: usize,
    graph: &CompatGraph,
    units: &[Code],
    covered: &mut LabelBits,
    free: LabelBits,
    chosen: &mut Vec<Code>,
) -> bool {
    if chosen.len() == 1 << d {
        return true;
    }
    let n = label_count(d);
    // cube x covers cell c iff c - x ∈ {0,1}^d
    let mut best: Option<(usize, Code)> = None;
    for c in 0..n as Code {
        if covered.contains(c) {
            continue;
        }
        let options = units.iter().filter(|&&u| free.contains(crate::label::sub_codes(d, c, u))).count();
        if best.is_none_or(|(k, _)| options < k) {
            best = Some((options, c));
            if options == 0 {
                return false;
            }
        }
    }
    let Some((_, cell)) = best else { return false };
    let mut options: Vec<Code> = units
        .iter()
        .map(|&u| crate::label::sub_codes(d, cell, u))
        .filter(|&x| free.contains(x))
        .collect();
    options.sort_unstable();
    for x in options {
        let mut next_free = free.clone();
        graph.restrict(&mut next_free, x);
        for &u in units {
            covered.insert(add_codes(d, x, u));
        }
        chosen.push(x);
        if search_cover(d, graph, units, covered, next_free, chosen) {
            return true;
        }
        chosen.pop();
        for &u in units {
            covered.remove(add_codes(d, x, u));
        }
    }
    false
}
