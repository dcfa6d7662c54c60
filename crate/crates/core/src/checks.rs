//! Reproduction checks: each function re-derives one known result from
//! scratch and reports whether it came out as stated.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::Rng;
use rayon::prelude::*;

use crate::analysis::blocking::{blocking_set_4d, blocking_sets_3d, quoted_blocking_set_4d};
use crate::analysis::density::{merge, merge_all, DensityFunction};
use crate::analysis::{
    h_recurrence, is_blocking, key_inequality_check, layer_deficits, min_blocking_search, moments, window_pair_stats,
};
use crate::canon::{canonical_form, CanonicalKey};
use crate::enumeration::{complete_to_tiling, EnumerationOptions, OrbitCatalog};
use crate::error::Result;
use crate::flips::explore_component;
use crate::label::decode;
use crate::packing::{
    free_codes, is_nonextendible, is_tiling, lift, product_packing, regular_tiling, sparse_packing_3d, CompatGraph,
    LabelCodes, Packing,
};
use crate::stochastic::{
    greedy_completion, metropolis_walk_with, random_completion, restarts, Objective, OrbitCensus, SearchConfig,
};

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Set when the check fails in a known, analysed way.
    pub known_deviation: Option<String>,
    pub details: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {:>2}. {} ({:.1?}): {}", self.id, self.title, self.elapsed, self.details)?;
        if let Some(k) = &self.known_deviation {
            write!(f, " [known: {k}]")?;
        }
        Ok(())
    }
}

/// Lazily built full enumerations shared between checks.
#[derive(Default)]
pub struct Catalogs {
    slots: [OnceLock<OrbitCatalog>; 5],
}

impl Catalogs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, d: usize) -> Result<&OrbitCatalog> {
        assert!((1..=4).contains(&d), "catalogs are kept for d <= 4 only");
        if let Some(c) = self.slots[d].get() {
            return Ok(c);
        }
        let c = OrbitCatalog::build(d, &EnumerationOptions::default())?;
        Ok(self.slots[d].get_or_init(|| c))
    }
}

pub struct Check {
    pub id: u8,
    pub title: &'static str,
    /// Largest dimension whose full enumeration or search the check needs.
    pub tier: usize,
    run: fn(&Catalogs) -> Result<Outcome>,
}

struct Outcome {
    passed: bool,
    details: String,
    known: Option<String>,
}

fn outcome(passed: bool, details: String) -> Result<Outcome> {
    Ok(Outcome { passed, details, known: None })
}

impl Check {
    pub fn run(&self, cats: &Catalogs) -> CheckReport {
        let t = Instant::now();
        let out = (self.run)(cats).unwrap_or_else(|e| Outcome { passed: false, details: format!("error: {e}"), known: None });
        CheckReport {
            id: self.id,
            title: self.title,
            passed: out.passed,
            known_deviation: out.known,
            details: out.details,
            elapsed: t.elapsed(),
        }
    }
}

pub fn all_checks() -> Vec<Check> {
    vec![
        Check { id: 1, title: "d=2 enumeration", tier: 2, run: enumeration_d2 },
        Check { id: 2, title: "d=3 enumeration", tier: 3, run: enumeration_d3 },
        Check { id: 3, title: "d=4 non-extendible counts", tier: 4, run: enumeration_d4 },
        Check { id: 4, title: "flip connectivity", tier: 4, run: flip_connectivity },
        Check { id: 5, title: "blocking sets", tier: 4, run: blocking },
        Check { id: 6, title: "blocking-number recurrence", tier: 1, run: recurrence },
        Check { id: 7, title: "first and second moments", tier: 4, run: moment_values },
        Check { id: 8, title: "second-moment lower bound", tier: 5, run: second_moment_bound },
        Check { id: 9, title: "small-deficit extension", tier: 4, run: extension },
        Check { id: 10, title: "product and lift constructions", tier: 4, run: constructions },
        Check { id: 11, title: "stochastic d=5 search", tier: 5, run: stochastic_d5 },
        Check { id: 12, title: "merge monotonicity", tier: 3, run: merge_monotonicity },
        Check { id: 13, title: "invariant suite", tier: 5, run: invariant_suite },
    ]
}

/// Runs every check of tier at most `max_dim`, in order.
pub fn run_checks(max_dim: usize, cats: &Catalogs, mut report: impl FnMut(&CheckReport)) -> Vec<CheckReport> {
    all_checks()
        .into_iter()
        .filter(|c| c.tier <= max_dim)
        .map(|c| {
            let r = c.run(cats);
            report(&r);
            r
        })
        .collect()
}

fn enumeration_d2(c: &Catalogs) -> Result<Outcome> {
    let t = &c.get(2)?.table;
    let small: usize = (0..4).map(|n| t.nonextendible(n)).sum();
    outcome(t.tilings() == 2 && small == 0, format!("{} tiling orbits, {small} non-extendible below 4", t.tilings()))
}

fn enumeration_d3(c: &Catalogs) -> Result<Outcome> {
    let cat = c.get(3)?;
    let t = &cat.table;
    let fig = canonical_form(&sparse_packing_3d());
    let (l4, f4) = &cat.levels[4];
    let four: Vec<&CanonicalKey> = l4.keys().iter().zip(f4).filter(|(_, &f)| f).map(|(k, _)| k).collect();
    let mid: Vec<usize> = (5..8).map(|n| t.nonextendible(n)).collect();
    let ok = four == [&fig] && mid.iter().all(|&m| m == 0) && t.tilings() == 9;
    outcome(
        ok,
        format!(
            "N=4 non-extendible orbits {} (matches sparse packing: {}), N=5..7 {:?}, {} tiling orbits",
            four.len(),
            four == [&fig],
            mid,
            t.tilings()
        ),
    )
}

const D4_NONEXTENDIBLE: [(usize, usize); 9] =
    [(8, 38), (9, 6), (10, 24), (11, 0), (12, 71), (13, 0), (14, 0), (15, 0), (16, 744)];

fn enumeration_d4(c: &Catalogs) -> Result<Outcome> {
    let t = &c.get(4)?.table;
    let below: usize = (0..8).map(|n| t.nonextendible(n)).sum();
    let got: Vec<(usize, usize)> = D4_NONEXTENDIBLE.iter().map(|&(n, _)| (n, t.nonextendible(n))).collect();
    outcome(got == D4_NONEXTENDIBLE && below == 0, format!("non-extendible by N: {got:?}, below 8: {below}"))
}

fn flip_connectivity(c: &Catalogs) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=4 {
        let ex = explore_component(&regular_tiling(d)?, 10_000)?;
        let reached: BTreeSet<&CanonicalKey> = ex.keys().iter().collect();
        let listed: BTreeSet<&CanonicalKey> = c.get(d)?.tilings().iter().collect();
        ok &= reached == listed;
        parts.push(format!("d={d}: {} reached / {} enumerated", reached.len(), listed.len()));
    }
    outcome(ok, parts.join(", "))
}

fn blocking(_: &Catalogs) -> Result<Outcome> {
    let three = blocking_sets_3d().iter().all(is_blocking);
    let quoted = quoted_blocking_set_4d();
    let quoted_free = free_codes(4, quoted.codes());
    let repaired = is_blocking(&blocking_set_4d());
    let h2 = min_blocking_search(2, 3, 1_000)?;
    let h3 = min_blocking_search(3, 4, 100_000)?;
    let none3 = min_blocking_search(3, 3, 100_000)?;
    let listed: BTreeSet<CanonicalKey> = blocking_sets_3d().iter().map(canonical_form).collect();
    let found3: BTreeSet<CanonicalKey> = h3.iter().cloned().collect();
    let rest = three && repaired && h2.len() == 2 && found3 == listed && none3.is_empty();
    let details = format!(
        "3d sets block: {three}; quoted 4d set blocks: {} ({} free labels); repaired 4d set blocks: {repaired}; \
         orbits: d=2 k=3 {}, d=3 k=4 {} (= listed: {}), d=3 k=3 {}",
        quoted_free.is_empty(),
        quoted_free.len(),
        h2.len(),
        h3.len(),
        found3 == listed,
        none3.len()
    );
    let free: Vec<Vec<u8>> = quoted_free.iter().map(|&c| decode(4, c)).collect();
    let known = (rest && free == [[2, 3, 0, 1], [2, 3, 1, 0], [3, 2, 0, 1], [3, 2, 1, 0]]).then(|| {
        "the quoted 7-set leaves (2,3,0,1),(2,3,1,0),(3,2,0,1),(3,2,1,0) unblocked; \
         replacing (2,2,3,3) by (2,2,0,0) gives a blocking 7-set"
            .to_string()
    });
    Ok(Outcome { passed: rest && quoted_free.is_empty(), details, known })
}

fn recurrence(_: &Catalogs) -> Result<Outcome> {
    let seq = h_recurrence(7, 2)?;
    outcome(seq == [10, 14], format!("from h(4)=7: {seq:?}"))
}

fn moment_values(c: &Catalogs) -> Result<Outcome> {
    let regular_ok = (1..=6).all(|d| {
        let m = moments(&regular_tiling(d).unwrap()).m2;
        m == Rational64::new(5i64.pow(d as u32), 2i64.pow(d as u32))
    });
    let mut checked = 0usize;
    let mut bad = 0usize;
    for d in 1..=4 {
        let (n, b) = c
            .get(d)?
            .levels
            .par_iter()
            .map(|(level, _)| {
                let b = level
                    .representatives()
                    .filter(|p| moments(p).m1 != Rational64::new(3i64.pow(d as u32) * p.len() as i64, 4i64.pow(d as u32)))
                    .count();
                (level.len(), b)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        checked += n;
        bad += b;
    }
    outcome(regular_ok && bad == 0, format!("m2(regular) = (5/2)^d for d=1..6: {regular_ok}; m1 exact on {checked} packings, {bad} mismatches"))
}

fn second_moment_bound(c: &Catalogs) -> Result<Outcome> {
    let mut checked = 0usize;
    let mut bad = 0usize;
    for d in 1..=4 {
        let (n, b) = c
            .get(d)?
            .levels
            .par_iter()
            .map(|(level, _)| (level.len(), level.representatives().filter(|p| !moments(p).satisfies_bound()).count()))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        checked += n;
        bad += b;
    }
    let cfg = SearchConfig { seed: 5, ..Default::default() };
    let graph = CompatGraph::new(5)?;
    let random_bad = restarts(&cfg, 10_000, |_, rng| {
        let p = random_completion(&graph, &[], cfg.threshold(5), rng);
        !moments(&p).satisfies_bound()
    })
    .into_iter()
    .filter(|&b| b)
    .count();
    let mut pair_bad = 0;
    let mut pairs = 0;
    for d in 2..=4 {
        let g = CompatGraph::new(d)?;
        let cfg = SearchConfig { seed: 6 + d as u64, ..Default::default() };
        for s in restarts(&cfg, 100, |_, rng| window_pair_stats(&random_completion(&g, &[], cfg.threshold(d), rng))) {
            pairs += s.pairs.len();
            pair_bad += s.pairs.iter().filter(|p| p.t_formula != p.t_brute).count();
            pair_bad += (!s.columns_bounded()) as usize;
        }
    }
    outcome(
        bad == 0 && random_bad == 0 && pair_bad == 0,
        format!(
            "bound violations: {bad} of {checked} catalogued, {random_bad} of 10000 random d=5; \
             pair-window formula mismatches: {pair_bad} over {pairs} pairs"
        ),
    )
}

fn extension(c: &Catalogs) -> Result<Outcome> {
    let cat = c.get(4)?;
    let mut total = 0;
    let mut failed = 0;
    for n in 13..=15 {
        let level = cat.level(n).expect("d=4 levels up to 16");
        total += level.len();
        failed += level
            .keys()
            .par_iter()
            .filter(|k| {
                let p = k.to_packing().unwrap();
                match complete_to_tiling(&p) {
                    Some(t) => !(is_tiling(&t) && p.codes().iter().all(|&x| t.contains_code(x))),
                    None => true,
                }
            })
            .count();
    }
    let sparse = complete_to_tiling(&sparse_packing_3d()).is_none();
    outcome(failed == 0 && sparse, format!("{total} packings with N=13..15, {failed} not completed; sparse d=3 packing blocked: {sparse}"))
}

fn constructions(c: &Catalogs) -> Result<Outcome> {
    let s = sparse_packing_3d();
    let prod = product_packing(&s, &s)?;
    let prod_ok = prod.dim() == 6 && prod.len() == 16 && free_codes(6, prod.codes()).is_empty();
    let lifted = lift(&s, &regular_tiling(3)?)?;
    let key = canonical_form(&lifted);
    let cat = c.get(4)?;
    let (l12, f12) = &cat.levels[12];
    let listed = l12.keys().binary_search(&key).map(|i| f12[i]).unwrap_or(false);
    let lift_ok = lifted.len() == 12 && is_nonextendible(&lifted) && listed;
    outcome(
        prod_ok && lift_ok,
        format!(
            "product: d={} N={} non-extendible {}; lift: N={} non-extendible {} listed among N=12 orbits {}",
            prod.dim(),
            prod.len(),
            prod_ok,
            lifted.len(),
            is_nonextendible(&lifted),
            listed
        ),
    )
}

/// Configuration of the d=5 Metropolis campaign: 20 runs of 10^5 steps.
pub fn stochastic_campaign() -> (SearchConfig, u64) {
    let cfg = SearchConfig {
        seed: 1,
        metropolis_remove: 3,
        metropolis_bound: 13,
        objective: Objective::Minimize,
        max_iterations: 100_000,
        ..Default::default()
    };
    (cfg, 20)
}

/// Reference number of orbits of 12-cube non-extendible packings in dimension 5.
pub const D5_TWELVE_ORBITS: usize = 203;

fn stochastic_d5(_: &Catalogs) -> Result<Outcome> {
    let (cfg, runs) = stochastic_campaign();
    let graph = CompatGraph::new(5)?;
    let results = restarts(&cfg, runs, |_, rng| -> Result<(usize, OrbitCensus)> {
        let start = greedy_completion(&graph, &[], cfg.greedy_samples, cfg.objective, rng);
        let mut census = OrbitCensus::new(5)?;
        let mut err = None;
        let walk = metropolis_walk_with(&graph, &start, &cfg, rng, |p| {
            if p.len() == 12 {
                if let Err(e) = census.add(p) {
                    err = Some(e);
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok((walk.best.len(), census))
    });
    let mut census = OrbitCensus::new(5)?;
    let mut bests = Vec::new();
    for r in results {
        let (b, c) = r?;
        bests.push(b);
        census.merge(&c)?;
    }
    let best = *bests.iter().min().unwrap();
    let hits = bests.iter().filter(|&&b| b <= 12).count();
    let distinct = census.distinct();
    let mut details = format!(
        "best {best}, {hits}/{runs} runs reach <= 12; {} size-12 finds in {distinct} orbits (reference: {D5_TWELVE_ORBITS})",
        census.seen()
    );
    if distinct > D5_TWELVE_ORBITS {
        details.push_str(" -- FALSIFICATION: more orbits than the reference count");
    }
    outcome(best <= 12 && distinct <= D5_TWELVE_ORBITS, details)
}

fn merge_monotonicity(_: &Catalogs) -> Result<Outcome> {
    let cfg = SearchConfig { seed: 12, ..Default::default() };
    let mut failures = 0;
    for d in 1..=3 {
        let regular = DensityFunction::from_tiling(&regular_tiling(d)?)?;
        failures += restarts(&cfg, 1000, |r, rng| {
            let _ = r;
            let f = DensityFunction::random(d, rng).unwrap();
            let m = f.second_moment();
            let mono = (0..d).all(|i| {
                let g = merge(&f, i).unwrap();
                g.is_member() && g.second_moment() >= m
            });
            !(mono && merge_all(&f).unwrap() == regular)
        })
        .into_iter()
        .filter(|&b| b)
        .count();
    }
    outcome(failures == 0, format!("{failures} failures over 3000 random densities (d=1,2,3)"))
}

fn invariant_suite(c: &Catalogs) -> Result<Outcome> {
    // generator outputs
    let mut gen_bad = 0;
    let mut generated = 0;
    for d in 1..=5 {
        let g = CompatGraph::new(d)?;
        let cfg = SearchConfig { seed: 13, max_iterations: 200, metropolis_bound: 1 << d, ..Default::default() };
        let outs = restarts(&cfg, 50, |_, rng| {
            let mut ps = vec![
                random_completion(&g, &[], cfg.threshold(d), rng),
                greedy_completion(&g, &[], cfg.greedy_samples, Objective::Minimize, rng),
                greedy_completion(&g, &[], cfg.greedy_samples, Objective::Maximize, rng),
            ];
            let start = ps[1].clone();
            let walk = metropolis_walk_with(&g, &start, &cfg, rng, |p| ps.push(p.clone())).unwrap();
            ps.push(walk.best);
            ps
        });
        for p in outs.into_iter().flatten() {
            generated += 1;
            let valid = crate::packing::is_packing(d, &p.labels()).unwrap_or(false);
            if !valid || !is_nonextendible(&p) {
                gen_bad += 1;
            }
        }
    }
    // deficit lemma on every catalogued packing
    let mut layer_bad = 0;
    let mut layered = 0;
    for d in 2..=4 {
        let (n, b) = c
            .get(d)?
            .levels
            .par_iter()
            .map(|(level, _)| {
                let bad = level.representatives().filter(|p| !deficit_lemma_holds(p)).count();
                (level.len(), bad)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        layered += n;
        layer_bad += b;
    }
    // key inequality fuzz
    let cfg = SearchConfig { seed: 14, ..Default::default() };
    let ineq_bad = restarts(&cfg, 100, |_, rng| {
        (0..1000)
            .filter(|_| {
                let x = [(); 4].map(|_| {
                    BigRational::new(BigInt::from(rng.gen_range(0..1000i64)), BigInt::from(rng.gen_range(1..1000i64)))
                });
                !key_inequality_check(&x).unwrap()
            })
            .count()
    })
    .into_iter()
    .sum::<usize>();
    outcome(
        gen_bad == 0 && layer_bad == 0 && ineq_bad == 0,
        format!(
            "{gen_bad} of {generated} generator outputs invalid; deficit lemma fails on {layer_bad} of {layered} \
             catalogued packings; key inequality fails on {ineq_bad} of 100000 quadruples"
        ),
    )
}

/// Every induced layer loses at most `δ` cubes, the deficits sum to `2δ` and
/// their alternating sum vanishes.
pub fn deficit_lemma_holds(p: &Packing) -> bool {
    let delta = p.deficit() as i64;
    (0..p.dim()).all(|i| {
        let l = layer_deficits(p, i).unwrap();
        l.alternating_sum() == 0 && l.total() == 2 * delta && l.deficits.iter().all(|&x| (0..=delta).contains(&x))
    })
}
