//! Cost-optimal assignment of precedence-constrained serial tasks to
//! duration-bounded stations.
//!
//! A production line runs `N` tasks, each with an integer duration and a
//! per-hour unit cost, subject to a precedence DAG. Tasks are grouped onto
//! stations whose total duration may not exceed a bound `K`; a station is
//! billed `K * max unit cost` of its tasks, and the objective is to
//! minimize the summed station cost.
//!
//! The crate provides:
//! - the problem model, a text instance format, and generators for three
//!   precedence classes ([`instance`]);
//! - two genome encodings with validity checking and decoding ([`encoding`]);
//! - the exact cost model and reciprocal-cost fitness ([`fitness`]);
//! - reject-and-retry crossover and mutation for both encodings
//!   ([`operators`]);
//! - a generational GA with roulette selection, random replacement, and
//!   optional elitism ([`engine`]);
//! - an exhaustive oracle, random search, and hill climbing for
//!   verification and comparison ([`baselines`]).
//!
//! All randomness flows from 64-bit seeds through ChaCha8 streams
//! ([`rng`]), so every run is reproducible.

pub mod baselines;
pub mod cost;
pub mod encoding;
pub mod engine;
pub mod fitness;
pub mod instance;
pub mod operators;
pub mod rng;


pub use cost::Cost;
pub use encoding::{AssignmentChromosome, PermutationChromosome, StationPlan};
pub use engine::{EncodingKind, EngineConfig, RunReport};
pub use fitness::CostBreakdown;
pub use instance::{generate_case, CouplingClass, Instance, PrecedenceGraph, Task};
pub use operators::OperatorConfig;
