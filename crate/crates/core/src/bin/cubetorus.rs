use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cubetorus::analysis::{hole_cells, is_blocking, layer_deficits, min_blocking_search, moments, MomentReport};
use cubetorus::checks::{run_checks, Catalogs};
use cubetorus::enumeration::{enumerate_levels, EnumerationOptions};
use cubetorus::flips::explore_component;
use cubetorus::io::{read_records, OrbitDatabase, PackingRecord, RecordMeta};
use cubetorus::packing::CompatGraph;
use cubetorus::stochastic::{greedy_completion, metropolis_walk_with, random_completion, restarts, Objective, SearchConfig};
use cubetorus::{canonical_form, regular_tiling, Error, LabelCodes, Packing, Result};

#[derive(Parser)]
#[command(name = "cubetorus", version, about = "Periodic cube packings on the 4-torus")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on orbits held by enumeration, flip and blocking searches.
    #[arg(long, global = true)]
    limit: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    /// Independent runs, each on its own random stream.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long)]
    rejection_threshold: Option<usize>,
    #[arg(long, default_value_t = 20)]
    greedy_samples: usize,
    #[arg(long, default_value_t = 3)]
    remove: usize,
    /// Keep proposals up to this size (default: 2^d, i.e. accept everything).
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value = "min")]
    objective: String,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    /// Metropolis only: start every run from this packing.
    #[arg(long)]
    start: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orbit counts of packings by size.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_size: Option<usize>,
        /// Write the orbit database to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flip-graph component of the regular tiling (or of `--start`).
    Flips {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        start: Option<PathBuf>,
    },
    Random(GenArgs),
    Greedy(GenArgs),
    Metropolis(GenArgs),
    /// Moments, layer deficits and holes of stored packings.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        moments: bool,
        #[arg(long)]
        deficits: bool,
        #[arg(long)]
        holes: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Blocking-set orbits of a given size, or a verdict for `--verify`.
    Blocking {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Re-derive the reference results and report each check.
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        dim: usize,
    },
    /// Canonical key of each stored set.
    Canon {
        file: PathBuf,
        /// Accept overlapping label sets.
        #[arg(long)]
        raw: bool,
    },
}

fn emit(rec: &PackingRecord, format: Format) {
    match format {
        Format::Text => print!("{}", rec.to_text()),
        Format::Json => println!("{}", rec.to_json_line()),
    }
}

fn generate(kind: &str, a: &GenArgs, seed: u64) -> Result<()> {
    let d = a.dim;
    let cfg = SearchConfig {
        seed,
        rejection_threshold: a.rejection_threshold,
        greedy_samples: a.greedy_samples,
        metropolis_remove: a.remove,
        metropolis_bound: a.bound.unwrap_or(1 << d),
        objective: a.objective.parse::<Objective>()?,
        max_iterations: a.iterations,
    };
    cfg.validate()?;
    let graph = CompatGraph::new(d)?;
    let start = match &a.start {
        Some(path) => Some(first_packing(path)?),
        None => None,
    };
    let outs = restarts(&cfg, a.runs, |_, rng| -> Result<Packing> {
        match kind {
            "random" => Ok(random_completion(&graph, &[], cfg.threshold(d), rng)),
            "greedy" => Ok(greedy_completion(&graph, &[], cfg.greedy_samples, cfg.objective, rng)),
            _ => {
                let s = match &start {
                    Some(s) => s.clone(),
                    None => greedy_completion(&graph, &[], cfg.greedy_samples, cfg.objective, rng),
                };
                Ok(metropolis_walk_with(&graph, &s, &cfg, rng, |_| {})?.best)
            }
        }
    });
    for (run, p) in outs.into_iter().enumerate() {
        let mut rec = PackingRecord::described(&p?);
        let meta = rec.meta.get_or_insert_with(RecordMeta::default);
        meta.seed = Some(seed);
        meta.generator = Some(format!("{kind}#{run}"));
        emit(&rec, a.format);
    }
    Ok(())
}

fn first_packing(path: &std::path::Path) -> Result<Packing> {
    read_records(path, false)?
        .first()
        .ok_or_else(|| Error::Validation(format!("{} holds no records", path.display())))?
        .to_packing()
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let limit = cli.limit;
    match &cli.cmd {
        Cmd::Enumerate { dim, max_size, out } => {
            let mut opts = EnumerationOptions::default();
            if let Some(l) = limit {
                opts.max_orbits = l;
            }
            let db = out.as_ref().map(OrbitDatabase::open).transpose()?;
            let table = enumerate_levels(*dim, max_size.unwrap_or(1 << dim), &opts, |level, flags| {
                if let Some(db) = &db {
                    db.append_level(level, flags, true)?;
                }
                Ok(())
            })?;
            print!("{table}");
        }
        Cmd::Flips { dim, start } => {
            let t = match start {
                Some(p) => first_packing(p)?,
                None => regular_tiling(*dim)?,
            };
            let ex = explore_component(&t, limit.unwrap_or(1_000_000))?;
            let comp = ex.component();
            println!("orbits {} edges {}", comp.keys.len(), comp.edges.len());
            for (i, k) in comp.keys.iter().enumerate() {
                println!("{i} {k}");
            }
            for (a, b) in &comp.edges {
                println!("{a} -- {b}");
            }
        }
        Cmd::Random(a) => generate("random", a, cli.seed)?,
        Cmd::Greedy(a) => generate("greedy", a, cli.seed)?,
        Cmd::Metropolis(a) => generate("metropolis", a, cli.seed)?,
        Cmd::Analyze { file, moments: m, deficits, holes, format } => {
            let all = !(*m || *deficits || *holes);
            if matches!(format, Format::Text) && (all || *m) {
                println!("{}", MomentReport::header());
            }
            for rec in read_records(file, false)? {
                let p = rec.to_packing()?;
                if all || *m {
                    let r = moments(&p);
                    match format {
                        Format::Text => println!("{}", r.to_row()),
                        Format::Json => println!("{}", r.to_json()),
                    }
                }
                if *deficits || (all && p.dim() >= 2) {
                    for i in 0..p.dim() {
                        let l = layer_deficits(&p, i)?;
                        println!("deficits coord={i} {:?}", l.deficits);
                    }
                }
                if all || *holes {
                    println!("holes {}", hole_cells(&p).len());
                }
            }
        }
        Cmd::Blocking { dim, size, verify } => match (verify, size) {
            (Some(path), _) => {
                let mut ok = true;
                for rec in read_records(path, true)? {
                    let s = rec.to_set()?;
                    let b = is_blocking(&s);
                    ok &= b;
                    println!("{} blocking={b}", canonical_form(&s));
                }
                return Ok(ok);
            }
            (None, Some(k)) => {
                let found = min_blocking_search(*dim, *k, limit.unwrap_or(5_000_000))?;
                println!("{} orbits of blocking sets of size {k} in dimension {dim}", found.len());
                for key in found {
                    emit(&PackingRecord::from_set(&key.to_set()), Format::Text);
                }
            }
            (None, None) => return Err(Error::InvalidArgument("give --size or --verify".into())),
        },
        Cmd::VerifyPaper { dim } => {
            let cats = Catalogs::new();
            let reports = run_checks(*dim, &cats, |r| println!("{r}"));
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} checks passed", reports.len());
            return Ok(passed == reports.len());
        }
        Cmd::Canon { file, raw } => {
            for rec in read_records(file, *raw)? {
                println!("{}", canonical_form(&rec.to_set()?));
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit(_) => 3,
                Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}
