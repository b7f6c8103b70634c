use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] sharphardy::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 1 for computational failures.
    pub fn exit_code(&self) -> i32 {
        use sharphardy::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::Inadmissible(_)
                | E::Unsupported(_)
                | E::InvalidInput(_)
                | E::SupportViolation(_)
                | E::EmptyInput(_)
                | E::SingularParams { .. } => 2,
                _ => 1,
            },
        }
    }
}
