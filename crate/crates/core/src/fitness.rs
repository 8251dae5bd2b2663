//! The cost model and fitness.
//!
//! A station is billed for the full bound K at the highest unit cost among
//! its tasks, regardless of its actual load: `cost(S) = K * max unit cost`.
//! Idle station time is billed at the max rate; this is the economically
//! surprising part of the model and it is intentional. Fitness is the
//! reciprocal of total cost, so lower cost means higher fitness.

use thiserror::Error;

use crate::cost::Cost;
use crate::encoding::StationPlan;
use crate::instance::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitnessError {
    #[error("cannot cost an empty plan")]
    EmptyPlan,
}

/// Per-station costs and their total, in exact fixed-point arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostBreakdown {
    /// `(station index, max unit cost, station cost)` per station.
    pub per_station: Vec<(usize, Cost, Cost)>,
    pub total: Cost,
}

/// Costs a plan: each station contributes `K * max unit cost`.
pub fn total_cost(plan: &StationPlan, inst: &Instance) -> Result<CostBreakdown, FitnessError> {
    if plan.station_count() == 0 {
        return Err(FitnessError::EmptyPlan);
    }
    let k = inst.bound();
    let per_station: Vec<(usize, Cost, Cost)> = plan
        .stations()
        .iter()
        .enumerate()
        .map(|(idx, tasks)| {
            let max_cost = tasks.iter().map(|&t| inst.unit_cost(t)).max().unwrap();
            (idx, max_cost, max_cost.scale_by(k))
        })
        .collect();
    let total = per_station.iter().map(|&(_, _, c)| c).sum();
    Ok(CostBreakdown { per_station, total })
}

/// Reciprocal-cost fitness; strictly decreasing in total cost.
pub fn fitness_of(plan: &StationPlan, inst: &Instance) -> Result<f64, FitnessError> {
    Ok(fitness_from_cost(total_cost(plan, inst)?.total))
}

pub fn fitness_from_cost(total: Cost) -> f64 {
    1.0 / total.to_f64()
}
