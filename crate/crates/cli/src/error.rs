use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const PRECONDITION: i32 = 4;
    pub const FAIL: i32 = 5;
}

/// An error carrying the exit code the process should end with.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(exit::INPUT, message)
    }

    pub fn io(err: std::io::Error, what: &str) -> Self {
        Self::new(exit::INPUT, format!("cannot write {what}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<cheeger_core::Error> for CliError {
    fn from(err: cheeger_core::Error) -> Self {
        use cheeger_core::Error as E;
        let code = match err {
            E::InvalidPolygon(_) | E::InvalidRegion(_) | E::InvalidArgument(_) | E::NotConvex => {
                exit::INPUT
            }
            E::Corner { .. } => exit::PRECONDITION,
            E::Solver { .. } | E::PerturbationTooLarge { .. } | E::Perturbed { .. } => exit::SOLVER,
        };
        Self::new(code, err.to_string())
    }
}
