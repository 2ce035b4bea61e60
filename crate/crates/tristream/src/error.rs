use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the stream, generator, oracle, and estimator layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("self-loop {v} {v} at stream position {pos}")]
    SelfLoop { v: u32, pos: usize },

    #[error("duplicate edge {u} {v} at stream positions {first} and {second}")]
    DuplicateEdge {
        u: u32,
        v: u32,
        first: usize,
        second: usize,
    },

    #[error("empty stream (at least one edge required)")]
    EmptyStream,

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("consumer {index} failed at update {t}: {source}")]
    Consumer {
        index: usize,
        t: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Parameter/validation errors are the caller's fault; everything else is
    /// a runtime failure. The CLI maps the former to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::SelfLoop { .. }
                | Error::DuplicateEdge { .. }
                | Error::EmptyStream
                | Error::Param(_)
        )
    }
}
