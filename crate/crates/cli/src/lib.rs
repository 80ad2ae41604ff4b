//! Library backing the `nakarate` binary: config schema, the command
//! implementations, and the exit-code contract.

// domain checks use `!(v > 0.0)` deliberately: unlike `v <= 0.0` it also
// rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

/// Errors with a stable exit-code mapping: config problems exit 2,
/// numerical evaluation failures exit 3, I/O problems exit 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical evaluation failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
        assert_eq!(
            CliError::Io(std::io::Error::other("x")).exit_code(),
            1
        );
    }
}
