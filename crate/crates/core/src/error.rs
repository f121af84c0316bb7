use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A quantity that diverges at the requested argument (e.g. `K(1)`).
    Infinite(&'static str),
    /// The travelling-wave reduction is singular (`v² = 1` for the HSM).
    SingularReduction,
    /// The analytic solution has already blown up at the requested time.
    BlowUp { blowup_time: f64 },
    /// The simulation configuration is unusable.
    Config(String),
    /// Adaptive quadrature did not reach the requested tolerance.
    Quadrature { estimate: f64, error: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Infinite(what) => write!(f, "{what} is infinite"),
            Error::SingularReduction => write!(f, "travelling-wave reduction is singular at v^2 = 1"),
            Error::BlowUp { blowup_time } => {
                write!(f, "solution has blown up (blow-up time {blowup_time})")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature failed to converge (estimate {estimate}, error {error})"
            ),
        }
    }
}

impl core::error::Error for Error {}
