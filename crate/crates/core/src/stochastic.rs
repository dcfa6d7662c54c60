//! Randomised generators of non-extendible packings.
//!
//! All randomness comes from ChaCha8 seeded with `SearchConfig::seed`. Parallel
//! or repeated runs use child streams of the same seed (`ChaCha8Rng::set_stream`
//! with the run index), so results never depend on scheduling.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonizer, CanonicalKey};
use crate::error::{Error, Result};
use crate::label::{check_dim, disjoint_codes, label_count, Code};
use crate::packing::{is_nonextendible, CompatGraph, LabelCodes, Packing};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Look for packings with few cubes.
    #[default]
    Minimize,
    /// Look for packings with many cubes.
    Maximize,
}

impl Objective {
    /// Strict improvement of `new` over `old`.
    pub fn improves(self, new: usize, old: usize) -> bool {
        match self {
            Objective::Minimize => new < old,
            Objective::Maximize => new > old,
        }
    }

    /// `new` is no worse than `bound`.
    pub fn within(self, new: usize, bound: usize) -> bool {
        match self {
            Objective::Minimize => new <= bound,
            Objective::Maximize => new >= bound,
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Objective::Minimize),
            "max" | "maximize" => Ok(Objective::Maximize),
            _ => Err(Error::invalid(format!("unknown objective {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Consecutive rejected samples before switching to the exhaustive stage;
    /// `None` means `50·d`.
    pub rejection_threshold: Option<usize>,
    /// Candidates drawn per greedy step.
    pub greedy_samples: usize,
    /// Cubes removed per Metropolis step.
    pub metropolis_remove: usize,
    /// Proposals at most this size (minimising) are kept even if not better.
    pub metropolis_bound: usize,
    pub objective: Objective,
    pub max_iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            rejection_threshold: None,
            greedy_samples: 20,
            metropolis_remove: 3,
            metropolis_bound: 0,
            objective: Objective::Minimize,
            max_iterations: 1000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rejection_threshold == Some(0) {
            return Err(Error::invalid("rejection threshold must be positive"));
        }
        if self.greedy_samples == 0 {
            return Err(Error::invalid("greedy sample count must be positive"));
        }
        Ok(())
    }

    pub fn threshold(&self, d: usize) -> usize {
        self.rejection_threshold.unwrap_or(50 * d)
    }

    /// The generator for run `run` of this configuration.
    pub fn rng(&self, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run);
        rng
    }
}

/// Draws labels uniformly from `free` until it is empty.
fn exhaust_free<R: Rng>(graph: &CompatGraph, codes: &mut Vec<Code>, rng: &mut R) {
    let mut free = graph.free_set(codes);
    loop {
        let n = free.count();
        if n == 0 {
            break;
        }
        let y = free.nth_one(rng.gen_range(0..n)).unwrap();
        codes.push(y);
        graph.restrict(&mut free, y);
    }
}

/// Two-stage random completion of `codes` to a non-extendible packing.
///
/// Stage one samples labels uniformly and keeps the compatible ones; after
/// `threshold` consecutive rejections the free set is materialised once and
/// drawn from until exhausted.
pub fn random_completion<R: Rng>(graph: &CompatGraph, start: &[Code], threshold: usize, rng: &mut R) -> Packing {
    let d = graph.dim();
    let n = label_count(d);
    let mut codes = start.to_vec();
    let mut misses = 0;
    while misses < threshold {
        let y = rng.gen_range(0..n) as Code;
        if codes.iter().all(|&x| disjoint_codes(x, y)) {
            codes.push(y);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    exhaust_free(graph, &mut codes, rng);
    codes.sort_unstable();
    Packing::from_sorted_unchecked(d, codes)
}

pub fn random_packing(d: usize, cfg: &SearchConfig) -> Result<Packing> {
    check_dim(d)?;
    cfg.validate()?;
    let graph = CompatGraph::new(d)?;
    Ok(random_completion(&graph, &[], cfg.threshold(d), &mut cfg.rng(0)))
}

/// Greedy completion: each step draws `samples` free labels and places the one
/// eliminating the most free labels (minimising) or the fewest (maximising).
pub fn greedy_completion<R: Rng>(
    graph: &CompatGraph,
    start: &[Code],
    samples: usize,
    objective: Objective,
    rng: &mut R,
) -> Packing {
    let mut codes = start.to_vec();
    let mut free = graph.free_set(&codes);
    loop {
        let n = free.count();
        if n == 0 {
            break;
        }
        let mut best: Option<(usize, Code)> = None;
        for _ in 0..samples {
            let y = free.nth_one(rng.gen_range(0..n)).unwrap();
            let score = graph.eliminated(&free, y);
            let better = match (best, objective) {
                (None, _) => true,
                (Some((s, _)), Objective::Minimize) => score > s,
                (Some((s, _)), Objective::Maximize) => score < s,
            };
            if better {
                best = Some((score, y));
            }
        }
        let (_, y) = best.unwrap();
        codes.push(y);
        graph.restrict(&mut free, y);
    }
    codes.sort_unstable();
    Packing::from_sorted_unchecked(graph.dim(), codes)
}

pub fn greedy_packing(d: usize, cfg: &SearchConfig) -> Result<Packing> {
    check_dim(d)?;
    cfg.validate()?;
    let graph = CompatGraph::new(d)?;
    Ok(greedy_completion(&graph, &[], cfg.greedy_samples, cfg.objective, &mut cfg.rng(0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub size: usize,
    pub best: usize,
}

#[derive(Clone, Debug)]
pub struct WalkResult {
    pub best: Packing,
    pub current: Packing,
    pub accepted: usize,
    /// One entry per accepted move.
    pub trace: Vec<TraceEntry>,
}

/// Metropolis-style walk over non-extendible packings; `visit` sees every proposal.
pub fn metropolis_walk_with<R: Rng>(
    graph: &CompatGraph,
    start: &Packing,
    cfg: &SearchConfig,
    rng: &mut R,
    mut visit: impl FnMut(&Packing),
) -> Result<WalkResult> {
    Error::check_dim(graph.dim(), start.dim())?;
    if !is_nonextendible(start) {
        return Err(Error::invalid("metropolis walk must start from a non-extendible packing"));
    }
    let mut current = start.clone();
    let mut best = start.clone();
    let mut trace = Vec::new();
    let mut accepted = 0;
    for it in 0..cfg.max_iterations {
        let k = cfg.metropolis_remove.min(current.len());
        if k == 0 {
            break;
        }
        let drop: Vec<usize> = sample(rng, current.len(), k).into_vec();
        let kept: Vec<Code> =
            current.codes().iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &c)| c).collect();
        let proposal = random_completion(graph, &kept, 0, rng);
        visit(&proposal);
        let (n, old) = (proposal.len(), current.len());
        if cfg.objective.improves(n, old) || cfg.objective.within(n, cfg.metropolis_bound) {
            current = proposal;
            accepted += 1;
            if cfg.objective.improves(current.len(), best.len()) {
                best = current.clone();
            }
            trace.push(TraceEntry { iteration: it, size: current.len(), best: best.len() });
        }
    }
    Ok(WalkResult { best, current, accepted, trace })
}

pub fn metropolis_walk(start: &Packing, cfg: &SearchConfig) -> Result<WalkResult> {
    cfg.validate()?;
    let graph = CompatGraph::new(start.dim())?;
    metropolis_walk_with(&graph, start, cfg, &mut cfg.rng(0), |_| {})
}

/// Independent restarts `0..runs`, each on its own child stream; results in run order.
pub fn restarts<T: Send>(cfg: &SearchConfig, runs: u64, job: impl Fn(u64, &mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    (0..runs).into_par_iter().map(|r| job(r, &mut cfg.rng(r))).collect()
}

/// Distinct orbits among a stream of packings of one dimension.
#[derive(Clone, Debug, Default)]
pub struct OrbitCensus {
    dim: usize,
    counts: HashMap<CanonicalKey, u64>,
    seen: u64,
}

impl OrbitCensus {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(OrbitCensus { dim, counts: HashMap::new(), seen: 0 })
    }

    /// Restores a census from earlier `(key, multiplicity)` pairs.
    pub fn resume(dim: usize, entries: impl IntoIterator<Item = (CanonicalKey, u64)>) -> Result<Self> {
        let mut c = Self::new(dim)?;
        for (k, n) in entries {
            Error::check_dim(dim, k.dim())?;
            *c.counts.entry(k).or_default() += n;
            c.seen += n;
        }
        Ok(c)
    }

    /// Records one packing; true if its orbit is new.
    pub fn add<S: LabelCodes + ?Sized>(&mut self, p: &S) -> Result<bool> {
        Error::check_dim(self.dim, p.dim())?;
        self.seen += 1;
        let key = canonizer(self.dim).key(p.codes());
        let e = self.counts.entry(key).or_default();
        *e += 1;
        Ok(*e == 1)
    }

    pub fn merge(&mut self, other: &OrbitCensus) -> Result<()> {
        Error::check_dim(self.dim, other.dim)?;
        for (k, &n) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += n;
        }
        self.seen += other.seen;
        Ok(())
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    /// Orbits sorted by key with their multiplicities.
    pub fn entries(&self) -> Vec<(CanonicalKey, u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|(k, &n)| (k.clone(), n)).collect();
        v.sort_unstable();
        v
    }

    /// Distinct orbits per packing size.
    pub fn by_size(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut m = std::collections::BTreeMap::new();
        for k in self.counts.keys() {
            *m.entry(k.len()).or_default() += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::packing::{free_labels, is_tiling, sparse_packing_3d};
    use crate::symmetry::Symmetry;

    fn cfg(seed: u64) -> SearchConfig {
        SearchConfig { seed, ..Default::default() }
    }

    #[test]
    fn one_dimensional_runs_are_tilings() {
        for seed in 0..20 {
            let p = random_packing(1, &cfg(seed)).unwrap();
            assert!(is_tiling(&p));
            let (a, b) = (p.codes()[0], p.codes()[1]);
            assert_eq!(b - a, 2);
            assert!(is_tiling(&greedy_packing(1, &cfg(seed)).unwrap()));
        }
    }

    #[test]
    fn two_dimensional_runs_are_tilings() {
        for seed in 0..50 {
            assert_eq!(random_packing(2, &cfg(seed)).unwrap().len(), 4);
            assert_eq!(greedy_packing(2, &cfg(seed)).unwrap().len(), 4);
        }
    }

    #[test]
    fn three_dimensional_sizes() {
        let fig = canonical_form(&sparse_packing_3d());
        let mut small = 0;
        for seed in 0..300 {
            for p in [random_packing(3, &cfg(seed)).unwrap(), greedy_packing(3, &cfg(seed)).unwrap()] {
                assert!(free_labels(&p).is_empty());
                assert!(p.len() == 4 || p.len() == 8, "size {}", p.len());
                if p.len() == 4 {
                    small += 1;
                    assert_eq!(canonical_form(&p), fig);
                }
            }
        }
        assert!(small > 0, "greedy minimisation never found the four-cube packing");
    }

    #[test]
    fn runs_are_reproducible() {
        for d in 3..=5 {
            assert_eq!(random_packing(d, &cfg(9)).unwrap(), random_packing(d, &cfg(9)).unwrap());
            assert_eq!(greedy_packing(d, &cfg(9)).unwrap(), greedy_packing(d, &cfg(9)).unwrap());
        }
        let a = restarts(&cfg(1), 4, |_, rng| rng.gen::<u64>());
        let b = restarts(&cfg(1), 4, |_, rng| rng.gen::<u64>());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn metropolis_without_removal_stays_put() {
        let start = greedy_packing(4, &cfg(3)).unwrap();
        let c = SearchConfig { metropolis_remove: 0, max_iterations: 50, ..cfg(3) };
        let r = metropolis_walk(&start, &c).unwrap();
        assert_eq!(r.best, start);
        assert_eq!(r.current, start);
    }

    #[test]
    fn metropolis_from_sparse_packing_keeps_four() {
        let start = sparse_packing_3d();
        let c = SearchConfig { metropolis_remove: 2, metropolis_bound: 8, max_iterations: 300, ..cfg(5) };
        let graph = CompatGraph::new(3).unwrap();
        let mut sizes = Vec::new();
        let r = metropolis_walk_with(&graph, &start, &c, &mut c.rng(0), |p| {
            assert!(free_labels(p).is_empty());
            sizes.push(p.len());
        })
        .unwrap();
        assert_eq!(r.best.len(), 4);
        assert!(sizes.iter().all(|&s| s == 4 || s == 8));
    }

    #[test]
    fn metropolis_rejects_extendible_start() {
        let p = Packing::from_coords(3, &[[0, 0, 0]]).unwrap();
        assert!(metropolis_walk(&p, &cfg(0)).is_err());
    }

    #[test]
    fn census_counts_orbits() {
        let mut census = OrbitCensus::new(3).unwrap();
        let mut rng = cfg(2).rng(0);
        let p = sparse_packing_3d();
        for _ in 0..1000 {
            census.add(&Symmetry::random(3, &mut rng).apply(&p).unwrap()).unwrap();
        }
        assert_eq!(census.distinct(), 1);
        assert_eq!(census.seen(), 1000);

        let mut two = OrbitCensus::new(2).unwrap();
        for t in [crate::packing::regular_tiling(2).unwrap(), crate::packing::brick_tiling_2d()] {
            for _ in 0..5 {
                two.add(&Symmetry::random(2, &mut rng).apply(&t).unwrap()).unwrap();
            }
        }
        assert_eq!(two.distinct(), 2);
        let resumed = OrbitCensus::resume(2, two.entries()).unwrap();
        assert_eq!(resumed.entries(), two.entries());
        assert!(census.add(&crate::packing::regular_tiling(2).unwrap()).is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let c = SearchConfig { greedy_samples: 0, ..Default::default() };
        assert!(random_packing(3, &c).is_err());
        let c = SearchConfig { rejection_threshold: Some(0), ..Default::default() };
        assert!(greedy_packing(3, &c).is_err());
    }
}
