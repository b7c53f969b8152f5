use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("functionals have rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] projconst::Error),
}

impl CliError {
    /// 1 for failed certificates and found counterexamples, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(projconst::Error::CertificateFailure { .. } | projconst::Error::ViolationFound { .. }) => 1,
            _ => 2,
        }
    }
}
