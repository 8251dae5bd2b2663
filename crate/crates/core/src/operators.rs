//! Crossover and mutation for both encodings.
//!
//! All operators follow the same contract: candidates are built blindly,
//! checked for validity, and rejected on failure. Assignment operators
//! redraw until a valid result appears or the retry budget runs out, then
//! fall back to the untouched parent. Permutation crossover discards
//! invalid children outright and may return fewer than two.

use rand::Rng;

use crate::encoding::{AssignmentChromosome, PermutationChromosome};
use crate::instance::Instance;
use crate::rng::Stream;

#[derive(Debug, Clone, Copy)]
pub struct OperatorConfig {
    /// Probability that a child is mutated at all.
    pub mutation_probability: f64,
    /// Redraw budget before an operator gives up and returns its input.
    /// The retry count needed for a valid child is unbounded in the worst
    /// case (a tight chain may admit no alternative), so the loop is capped.
    pub max_retries: u32,
    /// Probability that a selected permutation pair is actually crossed;
    /// uncrossed pairs pass through as copies of the parents.
    pub crossover_rate: f64,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig { mutation_probability: 0.1, max_retries: 1000, crossover_rate: 1.0 }
    }
}

/// Retry counters for one operator kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RetryStats {
    pub invocations: u64,
    pub total_retries: u64,
    pub max_retries: u64,
}

impl RetryStats {
    pub fn record(&mut self, retries: u64) {
        self.invocations += 1;
        self.total_retries += retries;
        self.max_retries = self.max_retries.max(retries);
    }

    pub fn mean_retries(&self) -> f64 {
        if self.invocations == 0 {
            0.0
        } else {
            self.total_retries as f64 / self.invocations as f64
        }
    }

    pub fn merge(&mut self, other: &RetryStats) {
        self.invocations += other.invocations;
        self.total_retries += other.total_retries;
        self.max_retries = self.max_retries.max(other.max_retries);
    }
}

/// Retry counters for crossover and mutation over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorStats {
    pub crossover: RetryStats,
    pub mutation: RetryStats,
}

fn spliced_child(prefix: &[usize], suffix: &[usize], cut: usize) -> Vec<usize> {
    let mut genes = prefix[..cut].to_vec();
    genes.extend_from_slice(&suffix[cut..]);
    genes
}

/// Single-point crossover on station-number genes. The cut point is drawn
/// from `[1, N-1]`, so a child always mixes both parents; invalid children
/// trigger a redraw, and an exhausted budget yields a copy of the
/// corresponding parent. Both results are valid.
pub fn crossover_assignment(
    a: &AssignmentChromosome,
    b: &AssignmentChromosome,
    inst: &Instance,
    rng: &mut Stream,
    cfg: &OperatorConfig,
    stats: &mut RetryStats,
) -> (AssignmentChromosome, AssignmentChromosome) {
    let n = inst.task_count();
    if n < 2 {
        stats.record(0);
        return (a.clone(), b.clone());
    }
    let mut make_child = |first: &AssignmentChromosome, second: &AssignmentChromosome| {
        let mut retries = 0u64;
        for _ in 0..cfg.max_retries {
            let cut = rng.gen_range(1..n);
            let child = AssignmentChromosome::new(spliced_child(first.genes(), second.genes(), cut));
            if child.is_valid(inst).unwrap_or(false) {
                stats.record(retries);
                return child;
            }
            retries += 1;
        }
        stats.record(retries);
        first.clone()
    };
    let child1 = make_child(a, b);
    let child2 = make_child(b, a);
    (child1, child2)
}

pub(crate) fn tail_swap_permutation(
    a: &PermutationChromosome,
    b: &PermutationChromosome,
    cut: usize,
) -> (PermutationChromosome, PermutationChromosome) {
    (
        PermutationChromosome::new(spliced_child(a.order(), b.order(), cut)),
        PermutationChromosome::new(spliced_child(b.order(), a.order(), cut)),
    )
}

/// Tail-swap crossover on task orderings. Children that fail the validity
/// check (duplicated or missing tasks, broken precedence) are discarded,
/// not repaired, so the result holds 0, 1, or 2 chromosomes.
pub fn crossover_permutation(
    a: &PermutationChromosome,
    b: &PermutationChromosome,
    inst: &Instance,
    rng: &mut Stream,
    cfg: &OperatorConfig,
    stats: &mut RetryStats,
) -> Vec<PermutationChromosome> {
    let n = inst.task_count();
    if n < 2 || !rng.gen_bool(cfg.crossover_rate) {
        stats.record(0);
        return vec![a.clone(), b.clone()];
    }
    let cut = rng.gen_range(1..n);
    let (child1, child2) = tail_swap_permutation(a, b, cut);
    let survivors: Vec<PermutationChromosome> = [child1, child2]
        .into_iter()
        .filter(|c| c.is_valid(inst).unwrap_or(false))
        .collect();
    stats.record((2 - survivors.len()) as u64);
    survivors
}

/// Swaps the stations of two random tasks, with probability
/// `mutation_probability`. Invalid swaps are redrawn; an exhausted budget
/// returns the input unchanged. The result is always valid.
pub fn mutate_assignment(
    c: &AssignmentChromosome,
    inst: &Instance,
    rng: &mut Stream,
    cfg: &OperatorConfig,
    stats: &mut RetryStats,
) -> AssignmentChromosome {
    let n = inst.task_count();
    if n < 2 || !rng.gen_bool(cfg.mutation_probability) {
        return c.clone();
    }
    let mut retries = 0u64;
    for _ in 0..cfg.max_retries {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut genes = c.genes().to_vec();
        genes.swap(i, j);
        let mutated = AssignmentChromosome::new(genes);
        if mutated.is_valid(inst).unwrap_or(false) {
            stats.record(retries);
            return mutated;
        }
        retries += 1;
    }
    stats.record(retries);
    c.clone()
}

/// Swaps two random positions in the ordering, with probability
/// `mutation_probability`, rejecting and redrawing invalid results.
pub fn mutate_permutation(
    p: &PermutationChromosome,
    inst: &Instance,
    rng: &mut Stream,
    cfg: &OperatorConfig,
    stats: &mut RetryStats,
) -> PermutationChromosome {
    let n = inst.task_count();
    if n < 2 || !rng.gen_bool(cfg.mutation_probability) {
        return p.clone();
    }
    let mut retries = 0u64;
    for _ in 0..cfg.max_retries {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut order = p.order().to_vec();
        order.swap(i, j);
        let mutated = PermutationChromosome::new(order);
        if mutated.is_valid(inst).unwrap_or(false) {
            stats.record(retries);
            return mutated;
        }
        retries += 1;
    }
    stats.record(retries);
    p.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_case, CouplingClass};

    fn always_mutate() -> OperatorConfig {
        OperatorConfig { mutation_probability: 1.0, ..OperatorConfig::default() }
    }

    #[test]
    fn identical_parents_cross_to_themselves() {
        let inst = generate_case(CouplingClass::Loose, 6, 8, 1, 0.3).unwrap();
        let mut rng = crate::rng::stream(1, 0);
        let cfg = OperatorConfig::default();
        let mut stats = RetryStats::default();
        let a = AssignmentChromosome::random_valid(&inst, &mut rng);
        let (c1, c2) = crossover_assignment(&a, &a, &inst, &mut rng, &cfg, &mut stats);
        assert_eq!(c1, a);
        assert_eq!(c2, a);
        let p = PermutationChromosome::random_valid(&inst, &mut rng);
        let kids = crossover_permutation(&p, &p, &inst, &mut rng, &cfg, &mut stats);
        assert_eq!(kids, vec![p.clone(), p]);
    }

    #[test]
    fn unconstrained_crossover_needs_no_retries() {
        // Unit durations with K = N: no constraint can bind.
        let inst = crate::testutil::make_instance(&[1; 6], 6, &[]);
        let mut rng = crate::rng::stream(2, 0);
        let cfg = OperatorConfig::default();
        let mut stats = RetryStats::default();
        for _ in 0..200 {
            let a = AssignmentChromosome::random_valid(&inst, &mut rng);
            let b = AssignmentChromosome::random_valid(&inst, &mut rng);
            crossover_assignment(&a, &b, &inst, &mut rng, &cfg, &mut stats);
        }
        assert_eq!(stats.total_retries, 0);
    }

    #[test]
    fn tight_chain_crossover_outputs_are_valid() {
        let inst = generate_case(CouplingClass::Tight, 6, 8, 3, 0.0).unwrap();
        let mut rng = crate::rng::stream(3, 0);
        let cfg = OperatorConfig::default();
        let mut stats = RetryStats::default();
        for _ in 0..1000 {
            let a = AssignmentChromosome::random_valid(&inst, &mut rng);
            let b = AssignmentChromosome::random_valid(&inst, &mut rng);
            let (c1, c2) = crossover_assignment(&a, &b, &inst, &mut rng, &cfg, &mut stats);
            assert_eq!(c1.is_valid(&inst), Ok(true));
            assert_eq!(c2.is_valid(&inst), Ok(true));
        }
    }

    #[test]
    fn tail_swap_duplicates_are_both_rejected() {
        let inst = crate::testutil::make_instance(&[1, 1, 1], 3, &[]);
        let a = PermutationChromosome::new(vec![0, 1, 2]);
        let b = PermutationChromosome::new(vec![2, 1, 0]);
        let (c1, c2) = tail_swap_permutation(&a, &b, 1);
        assert_eq!(c1.order(), &[0, 1, 0]);
        assert_eq!(c2.order(), &[2, 1, 2]);
        assert_eq!(c1.is_valid(&inst), Ok(false));
        assert_eq!(c2.is_valid(&inst), Ok(false));
    }

    #[test]
    fn permutation_survivors_are_valid() {
        let inst = generate_case(CouplingClass::None, 8, 10, 4, 0.0).unwrap();
        let mut rng = crate::rng::stream(4, 0);
        let cfg = OperatorConfig::default();
        let mut stats = RetryStats::default();
        let mut survivors = 0usize;
        for _ in 0..1000 {
            let a = PermutationChromosome::random_valid(&inst, &mut rng);
            let b = PermutationChromosome::random_valid(&inst, &mut rng);
            for child in crossover_permutation(&a, &b, &inst, &mut rng, &cfg, &mut stats) {
                assert_eq!(child.is_valid(&inst), Ok(true));
                survivors += 1;
            }
        }
        assert!(survivors > 0);
    }

    #[test]
    fn mutation_swap_within_a_station_is_identity() {
        let inst = crate::testutil::make_instance(&[1, 1], 4, &[]);
        let c = AssignmentChromosome::new(vec![1, 1]);
        let mut rng = crate::rng::stream(5, 0);
        let mut stats = RetryStats::default();
        let out = mutate_assignment(&c, &inst, &mut rng, &always_mutate(), &mut stats);
        assert_eq!(out, c);
        assert_eq!(stats.total_retries, 0);
    }

    #[test]
    fn symmetric_unconstrained_mutation_always_succeeds() {
        let inst = crate::testutil::make_instance(&[2; 6], 4, &[]);
        let mut rng = crate::rng::stream(6, 0);
        let mut stats = RetryStats::default();
        for _ in 0..500 {
            let c = AssignmentChromosome::random_valid(&inst, &mut rng);
            let out = mutate_assignment(&c, &inst, &mut rng, &always_mutate(), &mut stats);
            assert_eq!(out.is_valid(&inst), Ok(true));
        }
        assert_eq!(stats.total_retries, 0);
    }

    #[test]
    fn tight_chain_mutations_never_escape_invalid() {
        let inst = generate_case(CouplingClass::Tight, 6, 8, 5, 0.0).unwrap();
        let mut rng = crate::rng::stream(7, 0);
        let mut stats = RetryStats::default();
        for _ in 0..2000 {
            let c = AssignmentChromosome::random_valid(&inst, &mut rng);
            let out = mutate_assignment(&c, &inst, &mut rng, &always_mutate(), &mut stats);
            assert_eq!(out.is_valid(&inst), Ok(true));
        }
    }

    #[test]
    fn tight_permutation_mutation_returns_input() {
        // Unique topological order: every position swap is invalid, so the
        // retry budget exhausts and the input comes back unchanged.
        let inst = generate_case(CouplingClass::Tight, 5, 8, 6, 0.0).unwrap();
        let p = PermutationChromosome::new(vec![0, 1, 2, 3, 4]);
        let mut rng = crate::rng::stream(8, 0);
        let mut stats = RetryStats::default();
        let cfg = OperatorConfig { max_retries: 50, ..always_mutate() };
        let out = mutate_permutation(&p, &inst, &mut rng, &cfg, &mut stats);
        assert_eq!(out, p);
        assert!(stats.max_retries > 0);
    }

    #[test]
    fn loose_permutation_mutation_outputs_are_valid() {
        let inst = generate_case(CouplingClass::Loose, 8, 8, 9, 0.2).unwrap();
        let mut rng = crate::rng::stream(9, 0);
        let mut stats = RetryStats::default();
        for _ in 0..2000 {
            let p = PermutationChromosome::random_valid(&inst, &mut rng);
            let out = mutate_permutation(&p, &inst, &mut rng, &always_mutate(), &mut stats);
            assert_eq!(out.is_valid(&inst), Ok(true));
        }
    }

    #[test]
    fn operators_are_deterministic_per_seed() {
        let inst = generate_case(CouplingClass::Loose, 8, 8, 10, 0.2).unwrap();
        let cfg = OperatorConfig::default();
        let run = || {
            let mut rng = crate::rng::stream(11, 0);
            let mut stats = RetryStats::default();
            let a = AssignmentChromosome::random_valid(&inst, &mut rng);
            let b = AssignmentChromosome::random_valid(&inst, &mut rng);
            let (c1, c2) = crossover_assignment(&a, &b, &inst, &mut rng, &cfg, &mut stats);
            let m = mutate_assignment(&c1, &inst, &mut rng, &cfg, &mut stats);
            (c1, c2, m, stats)
        };
        assert_eq!(run(), run());
    }
}
