use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    /// Command line could not be parsed.
    Usage(String),
    /// Unreadable or invalid input file or argument value.
    Input(String),
    Core(qpmid::Error),
    /// Results could not be written.
    Output(String),
}

impl From<qpmid::Error> for CliError {
    fn from(e: qpmid::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) | CliError::Output(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        use qpmid::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Output(_) => "output",
            CliError::Core(e) => match e {
                E::InvalidParameter(_) => "invalid_parameter",
                E::Domain(_) => "domain",
                E::NonConvergence { .. } => "non_convergence",
                E::BoundaryZero { .. } => "boundary_zero",
                E::PhaseJump { .. } => "phase_jump",
                E::Overflow { .. } => "overflow",
                E::Precondition(_) => "precondition",
                E::Unsupported(_) => "unsupported",
                E::BeyondOrder { .. } => "beyond_order",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Output(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn diagnostic(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.message(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
