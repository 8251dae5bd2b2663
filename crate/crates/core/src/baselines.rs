//! Exact oracle and comparison methods: exhaustive enumeration, uniform
//! random search, and steepest-descent hill climbing.

use thiserror::Error;

use crate::cost::Cost;
use crate::encoding::{AssignmentChromosome, StationPlan};
use crate::fitness::{total_cost, CostBreakdown};
use crate::instance::Instance;

/// Default task-count cap for exhaustive enumeration; 8^8 gene vectors is
/// the largest space worth enumerating here.
pub const DEFAULT_ORACLE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error("instance has {n} tasks, above the enumeration cap of {cap}")]
    AboveCap { n: usize, cap: usize },
}

/// A solution found by a baseline method.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub genes: AssignmentChromosome,
    pub plan: StationPlan,
    pub breakdown: CostBreakdown,
}

impl Solution {
    fn from_genes(genes: AssignmentChromosome, inst: &Instance) -> Solution {
        let plan = genes.plan(inst).expect("baseline solutions are valid");
        let breakdown = total_cost(&plan, inst).expect("non-empty plan");
        Solution { genes, plan, breakdown }
    }

    pub fn cost(&self) -> Cost {
        self.breakdown.total
    }
}

/// Enumerates every gene vector in `[0, N-1]^N`, depth-first in
/// lexicographic order with capacity and precedence pruning, and returns
/// the cheapest valid assignment. Strict improvement comparison keeps the
/// lexicographically smallest gene vector among ties.
pub fn brute_force_optimum(inst: &Instance) -> Result<Solution, BaselineError> {
    brute_force_optimum_capped(inst, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_optimum_capped(
    inst: &Instance,
    cap: usize,
) -> Result<Solution, BaselineError> {
    let n = inst.task_count();
    if n > cap {
        return Err(BaselineError::AboveCap { n, cap });
    }
    // Edges split by which endpoint is assigned later in task-id order,
    // so partial vectors can be pruned as soon as a constraint is decided.
    let mut earlier_preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut earlier_succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in inst.precedence().edges() {
        if i < j {
            earlier_preds[j].push(i);
        } else {
            earlier_succs[i].push(j);
        }
    }

    struct Search<'a> {
        inst: &'a Instance,
        earlier_preds: &'a [Vec<usize>],
        earlier_succs: &'a [Vec<usize>],
        genes: Vec<usize>,
        load: Vec<u64>,
        best: Option<(Cost, Vec<usize>)>,
    }

    impl Search<'_> {
        fn descend(&mut self, task: usize) {
            let n = self.inst.task_count();
            if task == n {
                let cost = assignment_cost(&self.genes, self.inst);
                if self.best.as_ref().map_or(true, |(b, _)| cost < *b) {
                    self.best = Some((cost, self.genes.clone()));
                }
                return;
            }
            let duration = u64::from(self.inst.duration(task));
            for station in 0..n {
                if self.load[station] + duration > u64::from(self.inst.bound()) {
                    continue;
                }
                if self.earlier_preds[task].iter().any(|&p| self.genes[p] > station) {
                    continue;
                }
                if self.earlier_succs[task].iter().any(|&s| station > self.genes[s]) {
                    continue;
                }
                self.genes[task] = station;
                self.load[station] += duration;
                self.descend(task + 1);
                self.load[station] -= duration;
            }
        }
    }

    let mut search = Search {
        inst,
        earlier_preds: &earlier_preds,
        earlier_succs: &earlier_succs,
        genes: vec![0; n],
        load: vec![0; n],
        best: None,
    };
    search.descend(0);
    let (_, genes) = search.best.expect("singleton assignments are always feasible");
    Ok(Solution::from_genes(AssignmentChromosome::new(genes), inst))
}

/// Total cost straight from the gene vector, without building a plan.
fn assignment_cost(genes: &[usize], inst: &Instance) -> Cost {
    let n = inst.task_count();
    let mut station_max: Vec<Option<Cost>> = vec![None; n];
    for (task, &station) in genes.iter().enumerate() {
        let c = inst.unit_cost(task);
        let slot = &mut station_max[station];
        if slot.map_or(true, |m| c > m) {
            *slot = Some(c);
        }
    }
    station_max
        .into_iter()
        .flatten()
        .map(|m| m.scale_by(inst.bound()))
        .sum()
}

/// Best of `evaluations` independent uniform draws of valid assignments.
pub fn random_search(inst: &Instance, evaluations: usize, seed: u64) -> Solution {
    let mut rng = crate::rng::stream(seed, 0);
    let mut best: Option<(Cost, AssignmentChromosome)> = None;
    for _ in 0..evaluations.max(1) {
        let genes = AssignmentChromosome::random_valid(inst, &mut rng);
        let cost = assignment_cost(genes.genes(), inst);
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, genes));
        }
    }
    Solution::from_genes(best.unwrap().1, inst)
}

/// Steepest-descent hill climbing over valid assignments. The neighborhood
/// is all single-pair station swaps plus all single-gene reassignments;
/// every accepted move strictly decreases cost. Runs `restarts` climbs
/// from independent random starts and keeps the overall best.
pub fn hill_climb(
    inst: &Instance,
    max_steps: usize,
    restarts: usize,
    seed: u64,
) -> Solution {
    let mut best: Option<(Cost, AssignmentChromosome)> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = crate::rng::stream(seed, restart as u64);
        let mut current = AssignmentChromosome::random_valid(inst, &mut rng);
        let mut current_cost = assignment_cost(current.genes(), inst);
        for _ in 0..max_steps {
            match best_neighbor(&current, current_cost, inst) {
                Some((cost, genes)) => {
                    debug_assert!(cost < current_cost);
                    current = genes;
                    current_cost = cost;
                }
                None => break,
            }
        }
        if best.as_ref().map_or(true, |(b, _)| current_cost < *b) {
            best = Some((current_cost, current));
        }
    }
    Solution::from_genes(best.unwrap().1, inst)
}

/// The strictly improving neighbor of lowest cost, if any.
fn best_neighbor(
    current: &AssignmentChromosome,
    current_cost: Cost,
    inst: &Instance,
) -> Option<(Cost, AssignmentChromosome)> {
    let n = inst.task_count();
    let mut best: Option<(Cost, AssignmentChromosome)> = None;
    let mut consider = |genes: Vec<usize>| {
        let candidate = AssignmentChromosome::new(genes);
        if !candidate.is_valid(inst).unwrap_or(false) {
            return;
        }
        let cost = assignment_cost(candidate.genes(), inst);
        if cost < current_cost && best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, candidate));
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            if current.genes()[i] != current.genes()[j] {
                let mut genes = current.genes().to_vec();
                genes.swap(i, j);
                consider(genes);
            }
        }
        for station in 0..n {
            if station != current.genes()[i] {
                let mut genes = current.genes().to_vec();
                genes[i] = station;
                consider(genes);
            }
        }
    }
    best
}

/// True iff no neighbor of `genes` has strictly lower cost.
pub fn is_local_optimum(genes: &AssignmentChromosome, inst: &Instance) -> bool {
    best_neighbor(genes, assignment_cost(genes.genes(), inst), inst).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::instance::{generate_case, CouplingClass, Instance, PrecedenceGraph, Task};

    fn make_instance(specs: &[(u32, i64)], k: u32, edges: &[(usize, usize)]) -> Instance {
        let tasks: Vec<Task> = specs
            .iter()
            .enumerate()
            .map(|(id, &(d, centi))| Task { id, duration: d, unit_cost: Cost::from_centi(centi) })
            .collect();
        let graph = PrecedenceGraph::new(specs.len(), edges.iter().copied().collect()).unwrap();
        Instance::new(tasks, graph, k).unwrap()
    }

    #[test]
    fn single_task_optimum() {
        let inst = make_instance(&[(1, 300)], 5, &[]);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.cost(), Cost::from_int(15));
        assert_eq!(opt.plan.station_count(), 1);
    }

    #[test]
    fn two_tasks_prefer_sharing() {
        let inst = make_instance(&[(3, 100), (3, 200)], 6, &[]);
        let opt = brute_force_optimum(&inst).unwrap();
        // Together: 6*2 = 12; apart: 6*1 + 6*2 = 18.
        assert_eq!(opt.cost(), Cost::from_int(12));
        assert_eq!(opt.plan.station_count(), 1);
    }

    #[test]
    fn three_task_optimum_is_44() {
        let inst = make_instance(&[(2, 100), (2, 1000), (2, 100)], 4, &[]);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.cost(), Cost::from_int(44));
        // Several plans reach 44; lexicographic tie-break picks [0,0,1].
        assert_eq!(opt.genes.genes(), &[0, 0, 1]);
        assert_eq!(opt.plan.station_count(), 2);
    }

    #[test]
    fn oracle_respects_the_cap() {
        let inst = generate_case(CouplingClass::None, 9, 8, 1, 0.0).unwrap();
        assert_eq!(
            brute_force_optimum(&inst).err(),
            Some(BaselineError::AboveCap { n: 9, cap: 8 })
        );
    }

    #[test]
    fn oracle_ties_break_lexicographically() {
        // Equal costs everywhere: all-zero genes is the lexicographic minimum.
        let inst = make_instance(&[(1, 100), (1, 100)], 2, &[]);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.genes.genes(), &[0, 0]);
    }

    #[test]
    fn oracle_dominates_other_methods() {
        for seed in 0..5 {
            let inst = generate_case(CouplingClass::Loose, 6, 8, seed, 0.2).unwrap();
            let opt = brute_force_optimum(&inst).unwrap().cost();
            assert!(random_search(&inst, 50, seed).cost() >= opt);
            assert!(hill_climb(&inst, 100, 1, seed).cost() >= opt);
        }
    }

    #[test]
    fn oracle_is_invariant_under_task_relabeling() {
        let inst = generate_case(CouplingClass::Loose, 6, 8, 11, 0.25).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().cost();
        // Relabel task ids by the reversal permutation.
        let n = inst.task_count();
        let relabel = |t: usize| n - 1 - t;
        let tasks: Vec<Task> = inst
            .tasks()
            .iter()
            .map(|t| Task { id: relabel(t.id), ..t.clone() })
            .collect();
        let edges = inst
            .precedence()
            .edges()
            .iter()
            .map(|&(i, j)| (relabel(i), relabel(j)))
            .collect();
        let graph = PrecedenceGraph::new(n, edges).unwrap();
        let relabeled = Instance::new(tasks, graph, inst.bound()).unwrap();
        assert_eq!(brute_force_optimum(&relabeled).unwrap().cost(), opt);
    }

    #[test]
    fn random_search_converges_to_optimum_on_small_instances() {
        let inst = generate_case(CouplingClass::None, 5, 8, 21, 0.0).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().cost();
        assert_eq!(random_search(&inst, 20_000, 1).cost(), opt);
    }

    #[test]
    fn random_search_is_deterministic_per_seed() {
        let inst = generate_case(CouplingClass::Loose, 7, 8, 31, 0.2).unwrap();
        assert_eq!(random_search(&inst, 100, 9), random_search(&inst, 100, 9));
    }

    #[test]
    fn hill_climb_single_task() {
        let inst = make_instance(&[(2, 250)], 4, &[]);
        let sol = hill_climb(&inst, 100, 1, 0);
        assert_eq!(sol.cost(), Cost::from_int(10));
    }

    #[test]
    fn hill_climb_terminates_at_a_local_optimum() {
        let inst = generate_case(CouplingClass::Loose, 7, 8, 41, 0.2).unwrap();
        let sol = hill_climb(&inst, 10_000, 3, 5);
        assert!(is_local_optimum(&sol.genes, &inst));
    }
}
