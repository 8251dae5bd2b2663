//! CLI surface for the linebal solver: instance generation, GA runs with
//! CSV/plan/SVG reports, and a method-comparison harness.

pub mod commands;
pub mod svg;
