//! Synthetic problems, reference solutions, experiment configs, trace
//! output and the command-line front end.

pub mod cli;
pub mod config;
pub mod generate;
pub mod output;
pub mod reference;

pub use cli::{certify_experiment, run_cli, run_experiment};
pub use config::{ExperimentConfig, OutputFormat, ScheduleKind};
pub use generate::{generate, generate_problem, GeneratedProblem, GeneratorSpec, LossKind, RegularizerKind};
pub use output::{trace_csv, trace_json, TraceDocument, TraceHeader, CSV_HEADER};
pub use reference::{reference_solution, ReferenceMethod, ReferenceSolution};
