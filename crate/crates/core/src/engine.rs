//! The generational loop: roulette selection, reproduction, random
//! replacement, optional elitism, and per-generation statistics.
//!
//! Each generation selects `candidate_parents` parent pairs by fitness-
//! proportional roulette, produces children through the encoding's
//! crossover and mutation, appends them to the population, then culls
//! uniformly random members (the elite excepted, when elitism is on) until
//! the population is back to its configured size.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::cost::Cost;
use crate::encoding::{AssignmentChromosome, PermutationChromosome, StationPlan};
use crate::fitness::{fitness_from_cost, total_cost, CostBreakdown};
use crate::instance::Instance;
use crate::operators::{
    crossover_assignment, crossover_permutation, mutate_assignment, mutate_permutation,
    OperatorConfig, OperatorStats,
};
use crate::rng::Stream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("population size must be at least 2")]
    PopulationTooSmall,
    #[error("candidate parent count must be at least 1")]
    NoCandidateParents,
}

/// Which chromosome representation the engine evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    /// Genes are station numbers indexed by task.
    Task,
    /// Genes are an ordering of task ids, decoded by first-fit packing.
    Station,
}

impl FromStr for EncodingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "task" => Ok(EncodingKind::Task),
            "station" => Ok(EncodingKind::Station),
            other => Err(format!("unknown encoding `{other}` (expected task|station)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Number of parent pairs selected per generation; the population
    /// grows by up to twice this before culling.
    pub candidate_parents: usize,
    /// Protect the single fittest member from random culling.
    pub elitism: bool,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            population_size: 50,
            generations: 500,
            candidate_parents: 10,
            elitism: true,
            seed: 0,
        }
    }
}

impl EngineConfig {
    fn validate(&self) -> Result<(), EngineError> {
        if self.population_size < 2 {
            return Err(EngineError::PopulationTooSmall);
        }
        if self.candidate_parents == 0 {
            return Err(EngineError::NoCandidateParents);
        }
        Ok(())
    }

    /// Fitness evaluations consumed by a full run: the initial population
    /// plus every child bred across all generations.
    pub fn evaluation_budget(&self) -> usize {
        self.population_size + 2 * self.candidate_parents * self.generations
    }
}

/// A chromosome representation the engine can evolve.
pub trait Genome: Clone {
    fn random(inst: &Instance, rng: &mut Stream) -> Self;
    fn crossover(
        a: &Self,
        b: &Self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Vec<Self>;
    fn mutate(
        &self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Self;
    fn plan(&self, inst: &Instance) -> StationPlan;
    fn is_valid(&self, inst: &Instance) -> bool;
}

impl Genome for AssignmentChromosome {
    fn random(inst: &Instance, rng: &mut Stream) -> Self {
        AssignmentChromosome::random_valid(inst, rng)
    }

    fn crossover(
        a: &Self,
        b: &Self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Vec<Self> {
        let (c1, c2) = crossover_assignment(a, b, inst, rng, cfg, &mut stats.crossover);
        vec![c1, c2]
    }

    fn mutate(
        &self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Self {
        mutate_assignment(self, inst, rng, cfg, &mut stats.mutation)
    }

    fn plan(&self, inst: &Instance) -> StationPlan {
        self.plan(inst).expect("engine members are valid")
    }

    fn is_valid(&self, inst: &Instance) -> bool {
        AssignmentChromosome::is_valid(self, inst).unwrap_or(false)
    }
}

impl Genome for PermutationChromosome {
    fn random(inst: &Instance, rng: &mut Stream) -> Self {
        PermutationChromosome::random_valid(inst, rng)
    }

    fn crossover(
        a: &Self,
        b: &Self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Vec<Self> {
        crossover_permutation(a, b, inst, rng, cfg, &mut stats.crossover)
    }

    fn mutate(
        &self,
        inst: &Instance,
        rng: &mut Stream,
        cfg: &OperatorConfig,
        stats: &mut OperatorStats,
    ) -> Self {
        mutate_permutation(self, inst, rng, cfg, &mut stats.mutation)
    }

    fn plan(&self, inst: &Instance) -> StationPlan {
        self.decode(inst).expect("engine members are valid")
    }

    fn is_valid(&self, inst: &Instance) -> bool {
        PermutationChromosome::is_valid(self, inst).unwrap_or(false)
    }
}

/// An evaluated individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Member<G> {
    pub genome: G,
    pub cost: Cost,
    pub fitness: f64,
}

impl<G: Genome> Member<G> {
    fn evaluate(genome: G, inst: &Instance) -> Member<G> {
        let plan = genome.plan(inst);
        let cost = total_cost(&plan, inst).expect("valid members yield non-empty plans").total;
        Member { genome, cost, fitness: fitness_from_cost(cost) }
    }
}

/// A fixed-size generation of evaluated members.
#[derive(Debug, Clone)]
pub struct Population<G> {
    pub members: Vec<Member<G>>,
    pub generation: usize,
}

/// One statistics row of the run report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRow {
    pub generation: usize,
    pub avg_fitness: f64,
    pub min_fitness: f64,
    pub max_fitness: f64,
    pub best_cost: Cost,
}

/// Full outcome of a GA run.
#[derive(Debug, Clone)]
pub struct RunReport<G> {
    pub rows: Vec<GenerationRow>,
    pub best: Member<G>,
    pub best_plan: StationPlan,
    pub best_breakdown: CostBreakdown,
    pub operator_stats: OperatorStats,
}

/// Formats with ten significant digits, e.g. `2.272727273e-2`.
pub fn fmt_sig10(x: f64) -> String {
    format!("{x:.9e}")
}

impl<G> RunReport<G> {
    /// Renders the CSV report: `#` comment header lines, one row per
    /// generation, then a `#`-prefixed summary block.
    pub fn to_csv(&self, inst: &Instance, header_comments: &[String]) -> String {
        let mut out = String::new();
        for comment in header_comments {
            let _ = writeln!(out, "# {comment}");
        }
        out.push_str("generation,avg_fitness,min_fitness,max_fitness,best_cost\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.generation,
                fmt_sig10(row.avg_fitness),
                fmt_sig10(row.min_fitness),
                fmt_sig10(row.max_fitness),
                row.best_cost,
            );
        }
        let _ = writeln!(out, "# best_cost={}", self.best_breakdown.total);
        for line in self.best_plan.render(inst).lines() {
            let _ = writeln!(out, "# station {line}");
        }
        let xo = &self.operator_stats.crossover;
        let mu = &self.operator_stats.mutation;
        let _ = writeln!(
            out,
            "# crossover_retries mean={} max={}",
            fmt_sig10(xo.mean_retries()),
            xo.max_retries
        );
        let _ = writeln!(
            out,
            "# mutation_retries mean={} max={}",
            fmt_sig10(mu.mean_retries()),
            mu.max_retries
        );
        out
    }
}

/// Fitness-proportional selection by cumulative proportions. The final
/// cumulative value is pinned to exactly 1, and intervals are half-open
/// `[c_{i-1}, c_i)`, so every `u` in `[0, 1)` selects exactly one index.
pub fn roulette_select(fitnesses: &[f64], u: f64) -> usize {
    assert!(!fitnesses.is_empty(), "cannot select from an empty population");
    assert!((0.0..1.0).contains(&u), "u must lie in [0, 1)");
    let total: f64 = fitnesses.iter().sum();
    let mut cumulative = 0.0;
    for (i, f) in fitnesses.iter().enumerate() {
        cumulative += f / total;
        if i + 1 == fitnesses.len() {
            cumulative = 1.0;
        }
        if u < cumulative {
            return i;
        }
    }
    fitnesses.len() - 1
}

fn stats_row<G>(members: &[Member<G>], generation: usize) -> GenerationRow {
    let n = members.len() as f64;
    let avg_fitness = members.iter().map(|m| m.fitness).sum::<f64>() / n;
    let min_fitness = members.iter().map(|m| m.fitness).fold(f64::INFINITY, f64::min);
    let max_fitness = members.iter().map(|m| m.fitness).fold(f64::NEG_INFINITY, f64::max);
    let best_cost = members.iter().map(|m| m.cost).min().unwrap();
    GenerationRow { generation, avg_fitness, min_fitness, max_fitness, best_cost }
}

/// Runs one selection / reproduction / replacement cycle.
pub fn evolve_generation<G: Genome>(
    mut pop: Population<G>,
    inst: &Instance,
    engine_cfg: &EngineConfig,
    operator_cfg: &OperatorConfig,
    rng: &mut Stream,
    stats: &mut OperatorStats,
) -> Population<G> {
    let quota = 2 * engine_cfg.candidate_parents;
    let max_attempts = engine_cfg.candidate_parents
        + (operator_cfg.max_retries as usize).saturating_mul(quota);
    let fitnesses: Vec<f64> = pop.members.iter().map(|m| m.fitness).collect();

    let mut children: Vec<Member<G>> = Vec::with_capacity(quota);
    let mut attempts = 0usize;
    // Permutation crossover may reject both children; re-select parents
    // until the quota is met, bounded, then proceed short.
    while children.len() < quota && attempts < max_attempts {
        attempts += 1;
        let first = roulette_select(&fitnesses, rng.gen::<f64>());
        let second = roulette_select(&fitnesses, rng.gen::<f64>());
        let offspring = G::crossover(
            &pop.members[first].genome,
            &pop.members[second].genome,
            inst,
            rng,
            operator_cfg,
            stats,
        );
        for child in offspring {
            if children.len() == quota {
                break;
            }
            let mutated = child.mutate(inst, rng, operator_cfg, stats);
            children.push(Member::evaluate(mutated, inst));
        }
    }
    pop.members.extend(children);

    let mut elite: Option<usize> = engine_cfg.elitism.then(|| {
        pop.members
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.fitness.total_cmp(&b.fitness))
            .map(|(i, _)| i)
            .unwrap()
    });
    while pop.members.len() > engine_cfg.population_size {
        let idx = rng.gen_range(0..pop.members.len());
        if elite == Some(idx) {
            continue;
        }
        pop.members.remove(idx);
        if let Some(e) = elite.as_mut() {
            if *e > idx {
                *e -= 1;
            }
        }
    }

    debug_assert!(pop.members.iter().all(|m| m.genome.is_valid(inst)));
    pop.generation += 1;
    pop
}

/// Runs the full GA and collects the report. Deterministic for a fixed
/// seed: stream 0 of the seed initializes the population, stream 1 drives
/// the evolution loop.
pub fn run<G: Genome>(
    inst: &Instance,
    engine_cfg: &EngineConfig,
    operator_cfg: &OperatorConfig,
) -> Result<RunReport<G>, EngineError> {
    engine_cfg.validate()?;
    let mut init_rng = crate::rng::stream(engine_cfg.seed, 0);
    let mut evo_rng = crate::rng::stream(engine_cfg.seed, 1);
    let mut stats = OperatorStats::default();

    let members: Vec<Member<G>> = (0..engine_cfg.population_size)
        .map(|_| Member::evaluate(G::random(inst, &mut init_rng), inst))
        .collect();
    let mut pop = Population { members, generation: 0 };

    let mut rows = Vec::with_capacity(engine_cfg.generations + 1);
    rows.push(stats_row(&pop.members, 0));
    let mut best = pop
        .members
        .iter()
        .min_by_key(|m| m.cost)
        .cloned()
        .expect("population is non-empty");

    for _ in 0..engine_cfg.generations {
        pop = evolve_generation(pop, inst, engine_cfg, operator_cfg, &mut evo_rng, &mut stats);
        rows.push(stats_row(&pop.members, pop.generation));
        if let Some(gen_best) = pop.members.iter().min_by_key(|m| m.cost) {
            if gen_best.cost < best.cost {
                best = gen_best.clone();
            }
        }
    }

    let best_plan = best.genome.plan(inst);
    let best_breakdown =
        total_cost(&best_plan, inst).expect("best member has a non-empty plan");
    Ok(RunReport { rows, best, best_plan, best_breakdown, operator_stats: stats })
}
