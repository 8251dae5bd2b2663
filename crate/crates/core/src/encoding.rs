//! Chromosome representations, validity predicates, and decoding.
//!
//! Two encodings are supported:
//! - task-based [`AssignmentChromosome`]: gene `i` is the station number of
//!   task `i`; a prerequisite's station must not exceed its dependent's, and
//!   no station's duration sum may exceed K.
//! - station-based [`PermutationChromosome`]: an ordering of all task ids,
//!   decoded by greedy first-fit packing under K.
//!
//! Validity is checked, never assumed: invalid candidates arise from the
//! genetic operators and are rejected there.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::instance::Instance;
use crate::rng::Stream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("chromosome length {got} does not match task count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("chromosome is not valid for this instance")]
    Invalid,
}

/// Task-based genome: `genes[i]` is the station assigned to task `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignmentChromosome {
    genes: Vec<usize>,
}

impl AssignmentChromosome {
    pub fn new(genes: Vec<usize>) -> Self {
        AssignmentChromosome { genes }
    }

    pub fn genes(&self) -> &[usize] {
        &self.genes
    }

    /// True iff every station's duration sum is within K and every direct
    /// edge `(i, j)` satisfies `genes[i] <= genes[j]`. Runs in O(N + E);
    /// N stations always suffice since singleton assignments are feasible,
    /// so gene values are additionally required to lie in `[0, N-1]`.
    pub fn is_valid(&self, inst: &Instance) -> Result<bool, EncodingError> {
        let n = inst.task_count();
        if self.genes.len() != n {
            return Err(EncodingError::LengthMismatch { got: self.genes.len(), expected: n });
        }
        if self.genes.iter().any(|&s| s >= n) {
            return Ok(false);
        }
        let mut load = vec![0u64; n];
        for (task, &station) in self.genes.iter().enumerate() {
            load[station] += u64::from(inst.duration(task));
            if load[station] > u64::from(inst.bound()) {
                return Ok(false);
            }
        }
        // Direct edges suffice: station order is transitive.
        for &(i, j) in inst.precedence().edges() {
            if self.genes[i] > self.genes[j] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonicalizes the genes into a [`StationPlan`]: groups tasks by gene
    /// value, drops empty station indices, and renumbers the rest
    /// consecutively preserving order.
    pub fn plan(&self, inst: &Instance) -> Result<StationPlan, EncodingError> {
        if !self.is_valid(inst)? {
            return Err(EncodingError::Invalid);
        }
        let n = inst.task_count();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (task, &station) in self.genes.iter().enumerate() {
            groups[station].push(task);
        }
        let stations: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
        Ok(StationPlan::from_stations(stations, n))
    }

    /// Draws a uniformly-seeded valid chromosome: tasks are visited in a
    /// random topological order and each is assigned a random station that
    /// respects capacity and the stations of its prerequisites. If a task
    /// ever has no candidate station the whole draw restarts; the singleton
    /// assignment along a topological order always exists, so the
    /// deterministic fallback after `MAX_RESTARTS` cannot fail.
    pub fn random_valid(inst: &Instance, rng: &mut Stream) -> AssignmentChromosome {
        const MAX_RESTARTS: usize = 100;
        let n = inst.task_count();
        'restart: for _ in 0..MAX_RESTARTS {
            let order = inst.precedence().random_topological_order(rng);
            let mut genes = vec![usize::MAX; n];
            let mut load = vec![0u64; n];
            for &task in &order {
                let min_station = inst
                    .precedence()
                    .preds(task)
                    .iter()
                    .map(|&p| genes[p])
                    .max()
                    .unwrap_or(0);
                let duration = u64::from(inst.duration(task));
                let candidates: Vec<usize> = (min_station..n)
                    .filter(|&s| load[s] + duration <= u64::from(inst.bound()))
                    .collect();
                if candidates.is_empty() {
                    continue 'restart;
                }
                let station = candidates[rng.gen_range(0..candidates.len())];
                genes[task] = station;
                load[station] += duration;
            }
            return AssignmentChromosome { genes };
        }
        // Singletons along a topological order: always valid.
        let order = inst.precedence().random_topological_order(rng);
        let mut genes = vec![0; n];
        for (station, &task) in order.iter().enumerate() {
            genes[task] = station;
        }
        AssignmentChromosome { genes }
    }
}

/// Station-based genome: an ordering of all task ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationChromosome {
    order: Vec<usize>,
}

impl PermutationChromosome {
    pub fn new(order: Vec<usize>) -> Self {
        PermutationChromosome { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The three-part validity check: every task id present, no task
    /// duplicated, and no prerequisite placed after its dependent.
    pub fn is_valid(&self, inst: &Instance) -> Result<bool, EncodingError> {
        let n = inst.task_count();
        if self.order.len() != n {
            return Err(EncodingError::LengthMismatch { got: self.order.len(), expected: n });
        }
        let mut position = vec![usize::MAX; n];
        for (slot, &task) in self.order.iter().enumerate() {
            if task >= n || position[task] != usize::MAX {
                return Ok(false);
            }
            position[task] = slot;
        }
        for &(i, j) in inst.precedence().edges() {
            if position[i] >= position[j] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Greedy first-fit decoding: walk the permutation keeping one open
    /// station; a task that would overflow K closes it and opens the next.
    pub fn decode(&self, inst: &Instance) -> Result<StationPlan, EncodingError> {
        if !self.is_valid(inst)? {
            return Err(EncodingError::Invalid);
        }
        let mut stations: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        let mut load = 0u64;
        for &task in &self.order {
            let duration = u64::from(inst.duration(task));
            if !current.is_empty() && load + duration > u64::from(inst.bound()) {
                stations.push(std::mem::take(&mut current));
                load = 0;
            }
            current.push(task);
            load += duration;
        }
        if !current.is_empty() {
            stations.push(current);
        }
        Ok(StationPlan::from_stations(stations, inst.task_count()))
    }

    /// A random topological order; valid by construction.
    pub fn random_valid(inst: &Instance, rng: &mut Stream) -> PermutationChromosome {
        PermutationChromosome { order: inst.precedence().random_topological_order(rng) }
    }
}

/// A decoded solution: non-empty stations in line order, plus the inverse
/// task-to-station map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationPlan {
    stations: Vec<Vec<usize>>,
    station_of: Vec<usize>,
}

impl StationPlan {
    fn from_stations(stations: Vec<Vec<usize>>, n: usize) -> StationPlan {
        let mut station_of = vec![usize::MAX; n];
        let mut stations = stations;
        for (idx, tasks) in stations.iter_mut().enumerate() {
            // Intra-station order is immaterial to cost; ascending id for reporting.
            tasks.sort_unstable();
            for &t in tasks.iter() {
                station_of[t] = idx;
            }
        }
        StationPlan { stations, station_of }
    }

    pub fn stations(&self) -> &[Vec<usize>] {
        &self.stations
    }

    pub fn station_of(&self, task: usize) -> usize {
        self.station_of[task]
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    /// The task-based genes equivalent to this plan.
    pub fn to_assignment(&self) -> AssignmentChromosome {
        AssignmentChromosome::new(self.station_of.clone())
    }

    /// One line per station: `s: id id id | load=<sum> | maxcost=<value>`.
    pub fn render(&self, inst: &Instance) -> String {
        let mut out = String::new();
        for (idx, tasks) in self.stations.iter().enumerate() {
            let load: u64 = tasks.iter().map(|&t| u64::from(inst.duration(t))).sum();
            let max_cost = tasks.iter().map(|&t| inst.unit_cost(t)).max().unwrap();
            let ids: Vec<String> = tasks.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "{idx}: {} | load={load} | maxcost={max_cost}", ids.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_case, CouplingClass};
    use crate::testutil::make_instance;

    #[test]
    fn assignment_validity_on_chain() {
        let inst = make_instance(&[2, 2, 2], 4, &[(0, 1), (1, 2)]);
        let valid = AssignmentChromosome::new(vec![0, 0, 1]);
        assert_eq!(valid.is_valid(&inst), Ok(true));
        let precedence_broken = AssignmentChromosome::new(vec![1, 0, 2]);
        assert_eq!(precedence_broken.is_valid(&inst), Ok(false));
    }

    #[test]
    fn assignment_capacity_violation() {
        let inst = make_instance(&[3, 3], 5, &[]);
        let overfull = AssignmentChromosome::new(vec![0, 0]);
        assert_eq!(overfull.is_valid(&inst), Ok(false));
    }

    #[test]
    fn assignment_length_mismatch_is_an_error() {
        let inst = make_instance(&[1, 1], 2, &[]);
        let short = AssignmentChromosome::new(vec![0]);
        assert!(matches!(short.is_valid(&inst), Err(EncodingError::LengthMismatch { .. })));
    }

    #[test]
    fn permutation_validity_checks() {
        let inst = make_instance(&[1, 1, 1], 3, &[(0, 1), (1, 2)]);
        assert_eq!(PermutationChromosome::new(vec![0, 1, 2]).is_valid(&inst), Ok(true));
        assert_eq!(PermutationChromosome::new(vec![0, 0, 2]).is_valid(&inst), Ok(false));
        assert_eq!(PermutationChromosome::new(vec![1, 0, 2]).is_valid(&inst), Ok(false));
    }

    #[test]
    fn decode_greedy_first_fit() {
        let inst = make_instance(&[2, 3, 4], 5, &[]);
        let plan = PermutationChromosome::new(vec![0, 1, 2]).decode(&inst).unwrap();
        assert_eq!(plan.stations(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn decode_full_stations() {
        let inst = make_instance(&[5, 5], 5, &[]);
        let plan = PermutationChromosome::new(vec![0, 1]).decode(&inst).unwrap();
        assert_eq!(plan.stations(), &[vec![0], vec![1]]);
    }

    #[test]
    fn decode_exact_pairs() {
        let inst = make_instance(&[2, 2, 2, 2], 4, &[]);
        let plan = PermutationChromosome::new(vec![0, 1, 2, 3]).decode(&inst).unwrap();
        assert_eq!(plan.stations(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn plan_collapses_station_gaps() {
        let inst = make_instance(&[1, 1, 1], 4, &[]);
        let plan = AssignmentChromosome::new(vec![0, 0, 2]).plan(&inst).unwrap();
        assert_eq!(plan.stations(), &[vec![0, 1], vec![2]]);
        assert_eq!(plan.station_of(2), 1);
    }

    #[test]
    fn plan_single_group_and_singletons() {
        let inst = make_instance(&[1, 1, 1], 4, &[]);
        let one = AssignmentChromosome::new(vec![2, 2, 2]).plan(&inst).unwrap();
        assert_eq!(one.stations(), &[vec![0, 1, 2]]);
        let three = AssignmentChromosome::new(vec![0, 1, 2]).plan(&inst).unwrap();
        assert_eq!(three.stations(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn random_assignment_single_task() {
        let inst = make_instance(&[3], 5, &[]);
        let mut rng = crate::rng::stream(1, 0);
        let c = AssignmentChromosome::random_valid(&inst, &mut rng);
        assert_eq!(c.genes(), &[0]);
        assert_eq!(c.is_valid(&inst), Ok(true));
    }

    #[test]
    fn random_chromosomes_are_always_valid_on_loose_case() {
        let inst = generate_case(CouplingClass::Loose, 10, 8, 11, 0.2).unwrap();
        let mut rng = crate::rng::stream(2, 0);
        for _ in 0..2000 {
            let a = AssignmentChromosome::random_valid(&inst, &mut rng);
            assert_eq!(a.is_valid(&inst), Ok(true));
            let p = PermutationChromosome::random_valid(&inst, &mut rng);
            assert_eq!(p.is_valid(&inst), Ok(true));
        }
    }

    #[test]
    fn direct_edge_check_agrees_with_closure_check() {
        let inst = generate_case(CouplingClass::Loose, 8, 6, 21, 0.25).unwrap();
        let closure = inst.precedence().transitive_closure();
        let mut rng = crate::rng::stream(3, 0);
        for _ in 0..10_000 {
            let genes: Vec<usize> =
                (0..inst.task_count()).map(|_| rng.gen_range(0..inst.task_count())).collect();
            let direct_ok = inst.precedence().edges().iter().all(|&(i, j)| genes[i] <= genes[j]);
            let closure_ok = closure.iter().all(|&(i, j)| genes[i] <= genes[j]);
            assert_eq!(direct_ok, closure_ok);
        }
    }

    #[test]
    fn decoded_permutation_converts_to_valid_assignment() {
        let inst = generate_case(CouplingClass::Loose, 9, 7, 31, 0.2).unwrap();
        let mut rng = crate::rng::stream(4, 0);
        for _ in 0..500 {
            let p = PermutationChromosome::random_valid(&inst, &mut rng);
            let plan = p.decode(&inst).unwrap();
            assert_eq!(plan.to_assignment().is_valid(&inst), Ok(true));
        }
    }

    #[test]
    fn plan_preserves_co_membership() {
        let inst = make_instance(&[1, 1, 1, 1], 4, &[]);
        let c = AssignmentChromosome::new(vec![1, 3, 1, 0]);
        let plan = c.plan(&inst).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(
                    c.genes()[a] == c.genes()[b],
                    plan.station_of(a) == plan.station_of(b)
                );
            }
        }
    }

    #[test]
    fn render_format() {
        let inst = make_instance(&[2, 3], 5, &[]);
        let plan = AssignmentChromosome::new(vec![0, 0]).plan(&inst).unwrap();
        assert_eq!(plan.render(&inst), "0: 0 1 | load=5 | maxcost=1.0\n");
    }
}
