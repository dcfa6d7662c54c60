//! Flips of tilings and the orbit-level flip graph.
//!
//! A flip takes two cubes `x` and `x + 2e_i` of a tiling, whose union is a
//! full column around the torus in direction `i`, and shifts both by `e_i`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::canon::{canonizer, CanonicalKey};
use crate::error::{Error, Result};
use crate::label::{add_codes, digit, lane_shift, Code, CubeLabel};
use crate::packing::{is_tiling, LabelCodes, Packing};

/// The pair `{x, x + 2e_i}`, stored with `x_i ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlipMove {
    pub label: CubeLabel,
    pub coord: usize,
}

fn unit(d: usize, i: usize, k: u32) -> Code {
    ((k & 3) << lane_shift(d, i)) as Code
}

fn require_tiling(t: &Packing) -> Result<()> {
    if is_tiling(t) {
        Ok(())
    } else {
        Err(Error::invalid(format!("expected a tiling, got {} cubes in dimension {}", t.len(), t.dim())))
    }
}

pub fn flip_moves(t: &Packing) -> Result<Vec<FlipMove>> {
    require_tiling(t)?;
    Ok(flip_moves_unchecked(t))
}

fn flip_moves_unchecked(t: &Packing) -> Vec<FlipMove> {
    let d = t.dim();
    let mut out = Vec::new();
    for &x in t.codes() {
        for i in 0..d {
            if digit(d, x, i) <= 1 && t.contains_code(add_codes(d, x, unit(d, i, 2))) {
                out.push(FlipMove { label: CubeLabel::from_code(d, x).unwrap(), coord: i });
            }
        }
    }
    out
}

/// Replaces `{x, x + 2e_i}` by `{x + e_i, x + 3e_i}`. Either member of the pair
/// may name the move.
pub fn apply_flip(t: &Packing, m: FlipMove) -> Result<Packing> {
    require_tiling(t)?;
    let d = t.dim();
    Error::check_dim(d, m.label.dim())?;
    if m.coord >= d {
        return Err(Error::invalid(format!("coordinate {} out of range", m.coord)));
    }
    let x = m.label.code();
    let partner = add_codes(d, x, unit(d, m.coord, 2));
    if !t.contains_code(x) || !t.contains_code(partner) {
        return Err(Error::invalid(format!("{} and its partner along {} are not both in the tiling", m.label, m.coord)));
    }
    Ok(flip_unchecked(t, x, m.coord))
}

fn flip_unchecked(t: &Packing, x: Code, i: usize) -> Packing {
    let d = t.dim();
    let partner = add_codes(d, x, unit(d, i, 2));
    let mut codes: Vec<Code> = t.codes().iter().copied().filter(|&c| c != x && c != partner).collect();
    codes.push(add_codes(d, x, unit(d, i, 1)));
    codes.push(add_codes(d, x, unit(d, i, 3)));
    codes.sort_unstable();
    Packing::from_sorted_unchecked(d, codes)
}

/// The explored part of the flip graph: orbit keys and undirected orbit edges
/// (no multiplicities, no self-loops).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipComponent {
    pub keys: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

/// Resumable breadth-first exploration of the flip graph at orbit level.
#[derive(Clone, Debug)]
pub struct FlipExplorer {
    dim: usize,
    index: HashMap<CanonicalKey, usize>,
    keys: Vec<CanonicalKey>,
    edges: BTreeSet<(usize, usize)>,
    queue: VecDeque<usize>,
}

impl FlipExplorer {
    pub fn new(start: &Packing) -> Result<Self> {
        require_tiling(start)?;
        let key = canonizer(start.dim()).key(start.codes());
        Ok(FlipExplorer {
            dim: start.dim(),
            index: HashMap::from([(key.clone(), 0)]),
            keys: vec![key],
            edges: BTreeSet::new(),
            queue: VecDeque::from([0]),
        })
    }

    /// Restores an explorer from its discovered keys, edges and pending frontier.
    pub fn resume(keys: Vec<CanonicalKey>, edges: Vec<(usize, usize)>, frontier: Vec<usize>) -> Result<Self> {
        let dim = keys.first().ok_or_else(|| Error::invalid("no keys to resume from"))?.dim();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(FlipExplorer { dim, index, keys, edges: edges.into_iter().collect(), queue: frontier.into() })
    }

    pub fn is_done(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn frontier(&self) -> Vec<usize> {
        self.queue.iter().copied().collect()
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Expands up to `budget` queued orbits; returns how many were expanded.
    pub fn run(&mut self, budget: usize) -> usize {
        let canon = canonizer(self.dim);
        let mut done = 0;
        while done < budget {
            let Some(i) = self.queue.pop_front() else { break };
            let t = Packing::from_sorted_unchecked(self.dim, self.keys[i].codes().to_vec());
            let mut targets = HashSet::new();
            for m in flip_moves_unchecked(&t) {
                let key = canon.key(flip_unchecked(&t, m.label.code(), m.coord).codes());
                targets.insert(key);
            }
            let mut targets: Vec<CanonicalKey> = targets.into_iter().collect();
            targets.sort_unstable();
            for key in targets {
                let j = match self.index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = self.keys.len();
                        self.index.insert(key.clone(), j);
                        self.keys.push(key);
                        self.queue.push_back(j);
                        j
                    }
                };
                if j != i {
                    self.edges.insert((i.min(j), i.max(j)));
                }
            }
            done += 1;
        }
        done
    }

    pub fn component(&self) -> FlipComponent {
        FlipComponent { keys: self.keys.iter().map(|k| k.to_string()).collect(), edges: self.edges.iter().copied().collect() }
    }
}

/// Orbit keys reachable from `start` by flips, with the orbit edges.
/// Fails with a resource error once more than `max_orbits` orbits are known.
pub fn explore_component(start: &Packing, max_orbits: usize) -> Result<FlipExplorer> {
    let mut ex = FlipExplorer::new(start)?;
    while !ex.is_done() {
        ex.run(1);
        if ex.keys.len() > max_orbits {
            return Err(Error::ResourceLimit(format!(
                "flip exploration passed {max_orbits} orbits with {} pending",
                ex.queue.len()
            )));
        }
    }
    Ok(ex)
}

/// Breadth-first search over raw tilings (no symmetry reduction); for
/// validating the orbit-level search in small dimensions.
pub fn explore_raw(start: &Packing, max_states: usize) -> Result<HashSet<Packing>> {
    require_tiling(start)?;
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(t) = queue.pop_front() {
        for m in flip_moves_unchecked(&t) {
            let n = flip_unchecked(&t, m.label.code(), m.coord);
            if seen.insert(n.clone()) {
                if seen.len() > max_states {
                    return Err(Error::ResourceLimit(format!("raw flip search passed {max_states} tilings")));
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}
