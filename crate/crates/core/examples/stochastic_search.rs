//! Random, greedy and Metropolis search for small non-extendible packings in
//! dimension 5, with an orbit census of the 12-cube finds.

use cubetorus::packing::CompatGraph;
use cubetorus::stochastic::{
    greedy_completion, metropolis_walk_with, random_completion, restarts, Objective, OrbitCensus, SearchConfig,
};
use cubetorus::LabelCodes;

fn main() -> cubetorus::Result<()> {
    let d = 5;
    let graph = CompatGraph::new(d)?;
    let cfg = SearchConfig {
        seed: 2024,
        metropolis_remove: 3,
        metropolis_bound: 13,
        max_iterations: 100_000,
        ..Default::default()
    };

    let sizes = |ps: Vec<usize>| {
        let mut h = std::collections::BTreeMap::new();
        for s in ps {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    };
    let random = restarts(&cfg, 200, |_, rng| random_completion(&graph, &[], cfg.threshold(d), rng).len());
    let greedy =
        restarts(&cfg, 200, |_, rng| greedy_completion(&graph, &[], cfg.greedy_samples, Objective::Minimize, rng).len());
    println!("random sizes: {:?}", sizes(random));
    println!("greedy sizes: {:?}", sizes(greedy));

    let walks = restarts(&cfg, 8, |_, rng| {
        let start = greedy_completion(&graph, &[], cfg.greedy_samples, Objective::Minimize, rng);
        let mut census = OrbitCensus::new(d).unwrap();
        let w = metropolis_walk_with(&graph, &start, &cfg, rng, |p| {
            if p.len() == 12 {
                census.add(p).unwrap();
            }
        })
        .unwrap();
        (start.len(), w, census)
    });
    let mut all = OrbitCensus::new(d)?;
    for (run, (start, w, census)) in walks.iter().enumerate() {
        println!("walk {run}: start {start}, best {}, {} accepted moves", w.best.len(), w.accepted);
        all.merge(census)?;
    }
    println!("12-cube finds: {} in {} orbits", all.seen(), all.distinct());
    Ok(())
}
