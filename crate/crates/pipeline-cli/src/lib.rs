//! Orchestration of the certification workflow: configuration, a
//! content-addressed certificate store, the coarse-fine pipeline and reports.

pub mod config;
pub mod error;
pub mod json;
pub mod pipeline;
pub mod record;
pub mod store;
pub mod tables;

pub use config::PipelineConfig;
pub use error::PipelineError;
pub use pipeline::{
    run_pipeline, Attempt, ExpansionRow, FineRow, PipelineSummary, Target, WindowRow,
};
pub use record::Record;
pub use store::{CertKey, CertificateStore, CODE_VERSION};
pub use tables::{emit_tables, text_report};

/// Parse an index list such as `1,3,5-8`.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (
                    a.trim().parse().map_err(|_| part.to_string())?,
                    b.trim().parse().map_err(|_| part.to_string())?,
                );
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| part.to_string())?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}
