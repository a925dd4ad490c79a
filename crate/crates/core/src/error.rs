use thiserror::Error;

/// Errors raised by the analytic, optimization and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special function was evaluated outside its domain.
    #[error("domain error in {function}: argument {value} is outside the domain")]
    Domain { function: &'static str, value: f64 },

    /// A scenario parameter violates one of its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An argument to an operation is out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Adaptive quadrature ran out of budget before reaching the requested tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate}, error bound {error_bound} exceeds tolerance {tolerance}"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    /// An on-off hop waited longer than the slot cap for a usable channel.
    #[error("slot cap of {cap} exceeded in trial {trial}, hop {hop}: beta_t is implausibly large for this SNR")]
    SlotCap { trial: u64, hop: usize, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
