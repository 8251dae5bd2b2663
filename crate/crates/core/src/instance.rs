//! Problem data model: tasks, the precedence DAG, the duration bound,
//! the instance text format, and generators for the three coupling classes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::cost::Cost;
use crate::rng::Stream;

/// One processing step on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: usize,
    /// Execution time in hours, at least 1.
    pub duration: u32,
    /// Execution cost per hour, strictly positive.
    pub unit_cost: Cost,
}

/// Direct prerequisite edges over tasks `0..n`. Edge `(i, j)` means task `i`
/// must not be placed on a later station than task `j` would allow; the full
/// relation is the transitive closure, which is computed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("task {id}: duration must be at least 1")]
    NonPositiveDuration { id: usize },
    #[error("task {id}: unit cost must be positive")]
    NonPositiveCost { id: usize },
    #[error("task {id}: duration {duration} exceeds the bound K={bound}")]
    TaskExceedsBound { id: usize, duration: u32, bound: u32 },
    #[error("edge ({from}, {to}) references a task outside 0..{n}")]
    DanglingTask { from: usize, to: usize, n: usize },
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfEdge(usize),
    #[error("precedence graph contains a cycle")]
    Cycle,
    #[error("task ids must cover 0..{n} exactly once; id {id} is duplicated or out of range")]
    BadTaskId { id: usize, n: usize },
    #[error("duration bound K must be at least 1")]
    NonPositiveBound,
}

impl PrecedenceGraph {
    pub fn new(n: usize, edges: BTreeSet<(usize, usize)>) -> Result<Self, InstanceError> {
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for &(i, j) in &edges {
            if i >= n || j >= n {
                return Err(InstanceError::DanglingTask { from: i, to: j, n });
            }
            if i == j {
                return Err(InstanceError::SelfEdge(i));
            }
            preds[j].push(i);
            succs[i].push(j);
        }
        let g = PrecedenceGraph { n, edges, preds, succs };
        if g.topological_order().is_none() {
            return Err(InstanceError::Cycle);
        }
        Ok(g)
    }

    pub fn task_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Direct prerequisites of `task`.
    pub fn preds(&self, task: usize) -> &[usize] {
        &self.preds[task]
    }

    pub fn succs(&self, task: usize) -> &[usize] {
        &self.succs[task]
    }

    /// Kahn's algorithm; `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        self.topo_with(|ready| ready.len() - 1)
    }

    /// A topological order with uniformly random tie-breaking among ready tasks.
    pub fn random_topological_order(&self, rng: &mut Stream) -> Vec<usize> {
        self.topo_with(|ready| rng.gen_range(0..ready.len()))
            .expect("graph validated acyclic at construction")
    }

    fn topo_with(&self, mut pick: impl FnMut(&[usize]) -> usize) -> Option<Vec<usize>> {
        let mut indegree: Vec<usize> = (0..self.n).map(|t| self.preds[t].len()).collect();
        let mut ready: Vec<usize> = (0..self.n).filter(|&t| indegree[t] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while !ready.is_empty() {
            let slot = pick(&ready);
            let task = ready.swap_remove(slot);
            order.push(task);
            for &next in &self.succs[task] {
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.push(next);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Full transitive closure of the direct edges.
    pub fn transitive_closure(&self) -> BTreeSet<(usize, usize)> {
        let mut closure = BTreeSet::new();
        for start in 0..self.n {
            // DFS from each task; the graph is acyclic so this terminates.
            let mut stack: Vec<usize> = self.succs[start].to_vec();
            let mut seen = vec![false; self.n];
            while let Some(t) = stack.pop() {
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                closure.insert((start, t));
                stack.extend_from_slice(&self.succs[t]);
            }
        }
        closure
    }
}

/// A full problem instance: tasks, precedence, and the station bound K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    tasks: Vec<Task>,
    precedence: PrecedenceGraph,
    bound: u32,
}

impl Instance {
    pub fn new(
        tasks: Vec<Task>,
        precedence: PrecedenceGraph,
        bound: u32,
    ) -> Result<Self, InstanceError> {
        if bound == 0 {
            return Err(InstanceError::NonPositiveBound);
        }
        let n = tasks.len();
        let mut seen = vec![false; n];
        for task in &tasks {
            if task.id >= n || seen[task.id] {
                return Err(InstanceError::BadTaskId { id: task.id, n });
            }
            seen[task.id] = true;
            if task.duration == 0 {
                return Err(InstanceError::NonPositiveDuration { id: task.id });
            }
            if !task.unit_cost.is_positive() {
                return Err(InstanceError::NonPositiveCost { id: task.id });
            }
            if task.duration > bound {
                return Err(InstanceError::TaskExceedsBound {
                    id: task.id,
                    duration: task.duration,
                    bound,
                });
            }
        }
        assert_eq!(precedence.task_count(), n, "precedence graph size mismatch");
        let mut tasks = tasks;
        tasks.sort_by_key(|t| t.id);
        Ok(Instance { tasks, precedence, bound })
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn task(&self, id: usize) -> &Task {
        &self.tasks[id]
    }

    pub fn duration(&self, id: usize) -> u32 {
        self.tasks[id].duration
    }

    pub fn unit_cost(&self, id: usize) -> Cost {
        self.tasks[id].unit_cost
    }

    pub fn precedence(&self) -> &PrecedenceGraph {
        &self.precedence
    }

    /// The per-station duration bound K.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Parses the line-oriented text format described in [`Instance::serialize`].
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let syntax = |line: usize, msg: &str| InstanceError::Syntax { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, raw)| (idx + 1, raw.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines.next().ok_or_else(|| syntax(1, "missing `N K` header"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(line_no, "expected task count N"))?;
        let k: u32 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(line_no, "expected duration bound K"))?;
        if parts.next().is_some() {
            return Err(syntax(line_no, "trailing tokens after `N K`"));
        }

        let mut tasks = Vec::with_capacity(n);
        for _ in 0..n {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| syntax(0, "unexpected end of input in task section"))?;
            let mut parts = line.split_whitespace();
            let id: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(line_no, "expected task id"))?;
            let duration: u32 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(line_no, "expected task duration"))?;
            let unit_cost = parts
                .next()
                .and_then(|t| Cost::from_str(t).ok())
                .ok_or_else(|| syntax(line_no, "expected task unit cost"))?;
            if parts.next().is_some() {
                return Err(syntax(line_no, "trailing tokens on task line"));
            }
            tasks.push(Task { id, duration, unit_cost });
        }

        let mut edges = BTreeSet::new();
        for (line_no, line) in lines {
            let mut parts = line.split_whitespace();
            let from: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(line_no, "expected edge source task id"))?;
            let to: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(line_no, "expected edge target task id"))?;
            if parts.next().is_some() {
                return Err(syntax(line_no, "trailing tokens on edge line"));
            }
            edges.insert((from, to));
        }

        let graph = PrecedenceGraph::new(n, edges)?;
        Instance::new(tasks, graph, k)
    }

    /// Serializes to the canonical text format:
    /// a `N K` header, one `id duration unit_cost` line per task in id
    /// order, then one `i j` line per direct edge in lexicographic order.
    /// `#` starts a comment line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.task_count(), self.bound);
        for task in &self.tasks {
            let _ = writeln!(out, "{} {} {}", task.id, task.duration, task.unit_cost);
        }
        for (i, j) in self.precedence.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }
}

/// The three precedence structures used for benchmarking: a single chain,
/// a sparse random DAG, and no precedence at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingClass {
    Tight,
    Loose,
    None,
}

impl FromStr for CouplingClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tight" => Ok(CouplingClass::Tight),
            "loose" => Ok(CouplingClass::Loose),
            "none" => Ok(CouplingClass::None),
            other => Err(format!("unknown coupling class `{other}` (expected tight|loose|none)")),
        }
    }
}

/// Default edge-inclusion probability for loosely coupled instances.
pub const DEFAULT_EDGE_DENSITY: f64 = 0.15;

/// Generates a random instance of the given coupling class. Durations are
/// uniform in `[1, k]`; unit costs are uniform in `[0.50, 10.00]` with two
/// decimal places. Deterministic for a fixed seed.
pub fn generate_case(
    class: CouplingClass,
    n: usize,
    k: u32,
    seed: u64,
    edge_density: f64,
) -> Result<Instance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::BadTaskId { id: 0, n: 0 });
    }
    let mut rng = crate::rng::stream(seed, 0);
    let tasks: Vec<Task> = (0..n)
        .map(|id| Task {
            id,
            duration: rng.gen_range(1..=k),
            unit_cost: Cost::from_centi(rng.gen_range(50..=1000)),
        })
        .collect();
    let mut edges = BTreeSet::new();
    match class {
        CouplingClass::Tight => {
            for i in 0..n.saturating_sub(1) {
                edges.insert((i, i + 1));
            }
        }
        CouplingClass::Loose => {
            // Forward edges only, so the result is acyclic by construction.
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(edge_density) {
                        edges.insert((i, j));
                    }
                }
            }
        }
        CouplingClass::None => {}
    }
    let graph = PrecedenceGraph::new(n, edges)?;
    Instance::new(tasks, graph, k)
}
