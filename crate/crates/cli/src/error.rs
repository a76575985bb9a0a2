use infolattice::Schema;

/// Failure of a run, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Domain(_) => 4,
        }
    }

    /// Wraps a library error raised while interpreting file contents.
    pub fn parse(context: impl std::fmt::Display, err: infolattice::Error) -> Self {
        CliError::Parse(format!("{context}: {err}"))
    }

    /// Wraps a library error from a computation, spelling out any state in
    /// terms of variable names.
    pub fn domain(err: infolattice::Error, schema: &Schema) -> Self {
        use infolattice::Error as E;
        let msg = match &err {
            E::SupportViolation { state } => {
                format!("support violation at {}: a log ratio is infinite or undefined", describe_state(schema, state))
            }
            E::UndefinedApproximation { state } => format!(
                "approximation undefined at {}: a marginal in the denominator vanishes",
                describe_state(schema, state)
            ),
            E::IndexOutOfRange { index, .. } => match schema.variables().get(*index) {
                Some(v) => format!("{err} (variable `{}`)", v.name),
                None => err.to_string(),
            },
            _ => err.to_string(),
        };
        CliError::Domain(msg)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `X=0, Y=1` style rendering of a state.
pub fn describe_state(schema: &Schema, state: &[usize]) -> String {
    schema
        .variables()
        .iter()
        .zip(state)
        .map(|(v, x)| format!("{}={x}", v.name))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
