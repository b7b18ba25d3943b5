//! SMT-LIB 2.6 string solver client: query serialization, interactive
//! subprocess sessions, model parsing and benchmark dumping.

mod config;
mod dump;
mod model;
mod script;
mod serialize;
mod server;
mod session;
mod teacher;

use std::time::Duration;

use thiserror::Error;

pub use config::{SessionMode, SolverConfig};
pub use dump::QueryDumper;
pub use model::{parse_model, parse_model_word};
pub use script::{evaluate, parse_query_script, Constraint, QueryScript};
pub use serialize::{kind_name, serialize_regex, serialize_regex_over, sigma_star, ClauseQuery};
pub use server::serve;
pub use session::{run_script, Model, SatStatus, Session};
pub use teacher::ExternalTeacher;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SmtError {
    #[error("cannot start solver {command:?}: {reason}")]
    SpawnFailure { command: String, reason: String },
    #[error("solver handshake failed: {0}")]
    HandshakeFailure(String),
    #[error("solver did not answer within {0:?}")]
    SolverTimeout(Duration),
    #[error("solver error: {0}")]
    SolverError(String),
    #[error("cannot read model: {0}")]
    ModelParseFailure(String),
    #[error("solver returned unknown for clause {0}")]
    Inconclusive(usize),
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("session is dead after a failed restart")]
    SessionDead,
    #[error("unsupported query: {0}")]
    Unsupported(String),
}
