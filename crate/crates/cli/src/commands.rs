//! Subcommand implementations. Output files are staged with `.tmp`
//! suffixes and renamed only after every write succeeds, so error paths
//! never leave partial outputs behind.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use linebal::baselines::{brute_force_optimum, hill_climb, random_search};
use linebal::engine::{run, EncodingKind, EngineConfig, RunReport};
use linebal::{
    generate_case, AssignmentChromosome, CouplingClass, Instance, OperatorConfig,
    PermutationChromosome,
};

use crate::svg;

fn write_outputs(files: &[(PathBuf, String)]) -> Result<()> {
    let staged: Vec<PathBuf> = files
        .iter()
        .map(|(path, content)| -> Result<PathBuf> {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            Ok(tmp)
        })
        .collect::<Result<_>>()?;
    for (tmp, (path, _)) in staged.iter().zip(files) {
        fs::rename(tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Coupling class: tight | loose | none
    #[arg(long)]
    pub class: String,
    /// Number of tasks
    #[arg(long)]
    pub n: usize,
    /// Station duration bound K
    #[arg(long)]
    pub k: u32,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-inclusion probability for the loose class
    #[arg(long, default_value_t = linebal::instance::DEFAULT_EDGE_DENSITY)]
    pub density: f64,
    /// Output instance file
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let class: CouplingClass = args.class.parse().map_err(|e: String| anyhow!(e))?;
    if !(0.0..=1.0).contains(&args.density) {
        bail!("--density must lie in [0, 1]");
    }
    let inst = generate_case(class, args.n, args.k, args.seed, args.density)?;
    write_outputs(&[(args.out.clone(), inst.serialize())])
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file to solve
    #[arg(long)]
    pub instance: PathBuf,
    /// Chromosome encoding: task | station
    #[arg(long, default_value = "task")]
    pub encoding: String,
    /// Population size
    #[arg(long = "pop", default_value_t = 50)]
    pub population: usize,
    /// Number of generations
    #[arg(long = "gens", default_value_t = 500)]
    pub generations: usize,
    /// Parent pairs selected per generation
    #[arg(long = "parents", default_value_t = 10)]
    pub parents: usize,
    /// Mutation probability per child
    #[arg(long = "mut", default_value_t = 0.1)]
    pub mutation: f64,
    /// Elite protection: on | off
    #[arg(long, default_value = "on")]
    pub elitism: String,
    /// Run seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (report.csv, plan.txt, fitness.svg)
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

fn parse_on_off(value: &str) -> Result<bool> {
    match value {
        "on" => Ok(true),
        "off" => Ok(false),
        other => bail!("expected on|off, got `{other}`"),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let encoding: EncodingKind = args.encoding.parse().map_err(|e: String| anyhow!(e))?;
    let elitism = parse_on_off(&args.elitism)?;
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let inst = Instance::parse(&text)?;
    let engine_cfg = EngineConfig {
        population_size: args.population,
        generations: args.generations,
        candidate_parents: args.parents,
        elitism,
        seed: args.seed,
    };
    let operator_cfg = OperatorConfig {
        mutation_probability: args.mutation,
        ..OperatorConfig::default()
    };

    let comments = vec![
        "linebal solve report".to_string(),
        format!("instance={}", args.instance.display()),
        format!(
            "encoding={} pop={} gens={} parents={} mut={} elitism={} seed={}",
            args.encoding,
            args.population,
            args.generations,
            args.parents,
            args.mutation,
            args.elitism,
            args.seed
        ),
    ];

    let (csv, plan_text, chart) = match encoding {
        EncodingKind::Task => {
            let report: RunReport<AssignmentChromosome> =
                run(&inst, &engine_cfg, &operator_cfg)?;
            render_solve_outputs(&report, &inst, &comments, args)
        }
        EncodingKind::Station => {
            let report: RunReport<PermutationChromosome> =
                run(&inst, &engine_cfg, &operator_cfg)?;
            render_solve_outputs(&report, &inst, &comments, args)
        }
    };

    write_outputs(&[
        (args.out.join("report.csv"), csv),
        (args.out.join("plan.txt"), plan_text),
        (args.out.join("fitness.svg"), chart),
    ])
}

fn render_solve_outputs<G>(
    report: &RunReport<G>,
    inst: &Instance,
    comments: &[String],
    args: &SolveArgs,
) -> (String, String, String) {
    let csv = report.to_csv(inst, comments);
    let mut plan_text = format!("# best_cost={}\n", report.best_breakdown.total);
    plan_text.push_str(&report.best_plan.render(inst));
    let title = format!(
        "{} ({} encoding, seed {})",
        args.instance.display(),
        args.encoding,
        args.seed
    );
    let chart = svg::fitness_chart(&report.rows, &title);
    (csv, plan_text, chart)
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory of instance files
    #[arg(long)]
    pub instances: PathBuf,
    /// Comma-separated methods: ga, hill, random, oracle
    #[arg(long, default_value = "ga,hill,random,oracle")]
    pub methods: String,
    /// Number of seeds per stochastic method
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    /// Output comparison CSV
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Method {
    Ga,
    Hill,
    Random,
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Ga => "ga",
            Method::Hill => "hill",
            Method::Random => "random",
            Method::Oracle => "oracle",
        }
    }
}

const HILL_MAX_STEPS: usize = 1000;
const HILL_RESTARTS: usize = 3;

pub fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let mut methods = Vec::new();
    for token in args.methods.split(',') {
        let method = match token.trim() {
            "ga" => Method::Ga,
            "hill" => Method::Hill,
            "random" => Method::Random,
            "oracle" => Method::Oracle,
            other => bail!("unknown method `{other}` (expected ga|hill|random|oracle)"),
        };
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    methods.sort();
    if methods.is_empty() {
        bail!("no methods given");
    }
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }

    let mut paths: Vec<PathBuf> = fs::read_dir(&args.instances)
        .with_context(|| format!("reading {}", args.instances.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no instance files in {}", args.instances.display());
    }

    let engine_cfg = EngineConfig::default();
    let operator_cfg = OperatorConfig::default();
    let budget = engine_cfg.evaluation_budget();

    let mut rows = Vec::new();
    let mut matches: Vec<(Method, usize, usize)> = Vec::new();
    for path in &paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let inst = Instance::parse(&text).with_context(|| format!("parsing {name}"))?;
        let optimum = if methods.contains(&Method::Oracle) {
            Some(brute_force_optimum(&inst)?.cost())
        } else {
            None
        };
        for &method in &methods {
            let runs: Vec<(u64, linebal::Cost, usize)> = match method {
                Method::Oracle => {
                    vec![(0, optimum.unwrap(), 0)]
                }
                Method::Ga => (0..args.seeds)
                    .map(|seed| {
                        let cfg = EngineConfig { seed, ..engine_cfg };
                        let report: RunReport<AssignmentChromosome> =
                            run(&inst, &cfg, &operator_cfg).expect("valid config");
                        (seed, report.best.cost, budget)
                    })
                    .collect(),
                Method::Random => (0..args.seeds)
                    .map(|seed| (seed, random_search(&inst, budget, seed).cost(), budget))
                    .collect(),
                Method::Hill => (0..args.seeds)
                    .map(|seed| {
                        let sol = hill_climb(&inst, HILL_MAX_STEPS, HILL_RESTARTS, seed);
                        (seed, sol.cost(), HILL_MAX_STEPS * HILL_RESTARTS)
                    })
                    .collect(),
            };
            let mut matched_count = 0usize;
            let total = runs.len();
            for (_, cost, evaluations) in runs {
                let (optimum_cell, matched_cell) = match optimum {
                    Some(opt) => {
                        let matched = cost == opt;
                        if matched {
                            matched_count += 1;
                        }
                        (opt.to_string(), if matched { "1" } else { "0" }.to_string())
                    }
                    None => (String::new(), String::new()),
                };
                rows.push(format!(
                    "{name},{},{cost},{optimum_cell},{matched_cell},{evaluations}",
                    method.name()
                ));
            }
            if optimum.is_some() {
                if let Some(slot) = matches.iter_mut().find(|(m, _, _)| *m == method) {
                    slot.1 += matched_count;
                    slot.2 += total;
                } else {
                    matches.push((method, matched_count, total));
                }
            }
        }
    }

    let mut csv = String::from("instance,method,best_cost,optimum,matched,evaluations\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    write_outputs(&[(args.out.clone(), csv)])?;

    if !matches.is_empty() {
        println!("match rates vs oracle:");
        for (method, matched, total) in matches {
            println!("  {}: {matched}/{total}", method.name());
        }
    }
    Ok(())
}
