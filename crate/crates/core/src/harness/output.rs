use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, RunResult, StepSchedule, Termination};
use crate::certificates::GeometryConstants;
use crate::error::{Error, Result};
use crate::problem::TraceRecord;

use super::config::{ExperimentConfig, OutputFormat};

pub const CSV_HEADER: &str = "t,rho,primal,dual,gap,avg_primal,dual_subopt,bregman_ref";

/// Header object of a JSON trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub config: ExperimentConfig,
    pub geometry: GeometryConstants,
    pub algorithm: Algorithm,
    pub schedule: StepSchedule,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub header: TraceHeader,
    pub records: Vec<TraceRecord>,
}

fn num(out: &mut String, v: f64) {
    // 17 significant digits
    write!(out, "{v:.16e}").expect("write to string");
}

pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 + trace.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in trace {
        write!(out, "{}", r.t).expect("write to string");
        for v in [r.rho, r.primal_value, r.dual_value, r.gap, r.avg_primal_value] {
            out.push(',');
            num(&mut out, v);
        }
        for v in [r.dual_suboptimality, r.bregman_to_ref] {
            out.push(',');
            if let Some(v) = v {
                num(&mut out, v);
            }
        }
        out.push('\n');
    }
    out
}

/// JSON trace; non-finite numbers are written as `null`.
pub fn trace_json(
    result: &RunResult,
    config: &ExperimentConfig,
    geometry: &GeometryConstants,
) -> String {
    let doc = TraceDocument {
        header: TraceHeader {
            config: config.clone(),
            geometry: *geometry,
            algorithm: result.algorithm,
            schedule: result.schedule,
            termination: result.termination,
        },
        records: result.trace.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("trace serializes")
}

pub fn render_trace(
    result: &RunResult,
    config: &ExperimentConfig,
    geometry: &GeometryConstants,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Csv => trace_csv(&result.trace),
        OutputFormat::Json => trace_json(result, config, geometry),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
