use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// `sh(ωt) = 0` with `ωt ≠ 0`: the kernel and the deformation matrix
    /// have a pole there.
    #[error("pole: sh(omega*t) vanishes at omega*t = {omega_t_re} + {omega_t_im}i")]
    Pole { omega_t_re: f64, omega_t_im: f64 },

    /// Argument outside the operation's domain of validity.
    #[error("domain: {0}")]
    Domain(String),

    /// Invalid configuration or measure data.
    #[error("config: {0}")]
    Config(String),

    /// The preflight cost estimate exceeds the configured cap.
    #[error("cost cap exceeded: estimated {estimate} evaluation points > cap {cap}")]
    CostExceeded { estimate: u128, cap: u128 },

    /// A truncation parameter hit its ceiling before the requested
    /// tolerance was met.
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
