use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e} > {tolerance:.1e})")]
    NonHermitianInput { deviation: f64, tolerance: f64 },

    /// The windowed Magnus average came out with an anti-Hermitian residual,
    /// which only happens when the quadrature is badly under-resolved.
    #[error("effective Hamiltonian has anti-Hermitian residual {residual:.3e}")]
    NonHermitianResult { residual: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("|detuning|·tau = {value:.3e} is too small for the dispersive closed form; use the resonant pathway")]
    DetuningSingularity { value: f64 },

    #[error("drive amplitude {amplitude} reaches the off-diagonal Bloch-Siegert pole at 2ω = {pole}")]
    AmplitudePole { amplitude: f64, pole: f64 },

    #[error("Stark shift is undefined at zero detuning")]
    ResonantStark,

    #[error("operation requires zero detuning, got {detuning}")]
    NotResonant { detuning: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
