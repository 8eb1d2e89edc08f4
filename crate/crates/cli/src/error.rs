use thiserror::Error;

use crate::config::Diagnostic;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("{source}{}", guidance(source))]
    Core {
        #[from]
        source: dynet_core::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

fn guidance(err: &dynet_core::Error) -> &'static str {
    match err {
        dynet_core::Error::ResourceCap { .. } => {
            "; lower n, or raise the cap with DYNET_MAX_N if the machine has the memory"
        }
        _ => "",
    }
}

impl CliError {
    /// Process exit status: 2 for usage errors, 3 for runtime failures.
    /// (1 is reserved for failed checks.)
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => 2,
            CliError::Core {
                source: dynet_core::Error::InvalidParameter { .. },
            } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
