//! Trajectory parsing, synthetic point clouds and the plaintext counting
//! oracle every protocol result is checked against.

mod oracle;
mod parse;
mod synthetic;

pub use oracle::{oracle_count, PlainHistogram};
pub use parse::{parse_csv, parse_geolife, write_csv, ParseIssue, ParseOutput, TrajectoryRecord};
pub use synthetic::{gaussian_clusters, uniform_points};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read input: {0}")]
    IoFailure(#[from] std::io::Error),
}
