//! File formats, seeded graph generators, and the exhaustive oracle backing
//! the command line tool and the test suite.

mod brute;
mod gen;
mod metis;

pub use brute::{brute_force_partition, MAX_BRUTE_NODES};
pub use gen::{gen_planted, gen_rgg, planted_labels, rgg_radius};
pub use metis::{
    read_metis, read_metis_str, read_partition, read_partition_str, write_metis,
    write_metis_string, write_partition, write_partition_string,
};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum IoError {
    /// Malformed input, pinned to a 1-based line of the offending file.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{n} nodes exceed the exhaustive search limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("no assignment satisfies the balance bound")]
    Infeasible,
}

impl IoError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> IoError {
        IoError::Parse {
            line,
            msg: msg.into(),
        }
    }
}
