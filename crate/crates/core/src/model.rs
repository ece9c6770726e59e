//! Driven two-level Hamiltonians in the lab, interaction and bar frames.
//!
//! H = H0 + H1(t) with H0 = −(ε/2)σ3 and H1 = 𝒲 cos(ωt) σ1, split into the
//! corotating part H_RW = (𝒲/2)e^{iωt}σ+ + h.c. and the counterrotating part
//! H_CR = (𝒲/2)e^{−iωt}σ+ + h.c. In the interaction picture
//! σ+ → e^{−iεt}σ+, so H̃_RW oscillates at the detuning δ = ε − ω and H̃_CR at
//! ε + ω.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pauli::{conjugate, expm_pauli, PauliCoeffs};
use crate::shifts::bloch_siegert_shift;

/// Physical drive parameters (angular frequencies, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    epsilon: f64,
    omega: f64,
    amplitude: f64,
}

impl DriveParams {
    pub fn new(epsilon: f64, omega: f64, amplitude: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid("epsilon", format!("must be finite and > 0, got {epsilon}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(invalid(
                "amplitude",
                format!("must be finite and >= 0, got {amplitude}"),
            ));
        }
        Ok(Self {
            epsilon,
            omega,
            amplitude,
        })
    }

    /// Parameters given as ratios to ω.
    pub fn from_ratios(omega: f64, epsilon_over_omega: f64, amplitude_over_omega: f64) -> Result<Self> {
        Self::new(epsilon_over_omega * omega, omega, amplitude_over_omega * omega)
    }

    /// Level splitting ε.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Drive frequency ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Drive strength 𝒲.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// δ = ε − ω.
    pub fn detuning(&self) -> f64 {
        self.epsilon - self.omega
    }

    /// ε + ω, the counterrotating frequency in the interaction picture.
    pub fn sum_frequency(&self) -> f64 {
        self.epsilon + self.omega
    }

    /// Drive period 2π/ω.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// True when |δ| is below 1e−12·ω.
    pub fn is_resonant(&self) -> bool {
        self.detuning().abs() < 1e-12 * self.omega
    }

    /// Same physics with every frequency multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.epsilon * lambda, self.omega * lambda, self.amplitude * lambda)
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        Self::new(self.epsilon, self.omega, amplitude)
    }
}

/// Reference frame of a propagator. All frames coincide at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lab,
    Interaction,
    /// Rotating frame U_x(t) = e^{−iH0 t} e^{−iKt}, K = (𝒲/2)σ1.
    Bar,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Lab => "lab",
            Frame::Interaction => "interaction",
            Frame::Bar => "bar",
        })
    }
}

impl FromStr for Frame {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lab" => Ok(Frame::Lab),
            "interaction" => Ok(Frame::Interaction),
            "bar" => Ok(Frame::Bar),
            other => Err(format!("unknown frame `{other}` (expected lab, interaction or bar)")),
        }
    }
}

/// A Hamiltonian as a function of time. Implementations must be safe to
/// evaluate concurrently.
pub trait Hamiltonian: Sync {
    fn at(&self, t: f64) -> PauliCoeffs;

    /// Time-independent Hamiltonians let propagation skip the time stepping.
    fn is_static(&self) -> bool {
        false
    }
}

impl<F> Hamiltonian for F
where
    F: Fn(f64) -> PauliCoeffs + Sync,
{
    fn at(&self, t: f64) -> PauliCoeffs {
        self(t)
    }
}

impl Hamiltonian for PauliCoeffs {
    fn at(&self, _t: f64) -> PauliCoeffs {
        *self
    }

    fn is_static(&self) -> bool {
        true
    }
}

/// H0 = −(ε/2)σ3.
pub fn h0(p: &DriveParams) -> PauliCoeffs {
    PauliCoeffs::sigma3(-0.5 * p.epsilon)
}

/// H1(t) = 𝒲 cos(ωt) σ1.
pub fn h_drive(t: f64, p: &DriveParams) -> PauliCoeffs {
    PauliCoeffs::sigma1(p.amplitude * (p.omega * t).cos())
}

/// H0 + H1(t).
pub fn h_lab(t: f64, p: &DriveParams) -> PauliCoeffs {
    h0(p) + h_drive(t, p)
}

/// e^{iH0t} H_RW(t) e^{−iH0t} = (𝒲/2)e^{−iδt}σ+ + h.c.
pub fn h_rw_interaction(t: f64, p: &DriveParams) -> PauliCoeffs {
    PauliCoeffs::from_raising(Complex64::from_polar(0.5 * p.amplitude, -p.detuning() * t))
}

/// e^{iH0t} H_CR(t) e^{−iH0t} = (𝒲/2)e^{−i(ε+ω)t}σ+ + h.c.
pub fn h_cr_interaction(t: f64, p: &DriveParams) -> PauliCoeffs {
    PauliCoeffs::from_raising(Complex64::from_polar(0.5 * p.amplitude, -p.sum_frequency() * t))
}

/// H̃(t) = e^{iH0t} H1(t) e^{−iH0t}.
pub fn h_interaction(t: f64, p: &DriveParams) -> PauliCoeffs {
    h_rw_interaction(t, p) + h_cr_interaction(t, p)
}

/// Static generator K = H̃_RW(0) = (𝒲/2)σ1 of the bar frame.
pub fn bar_generator(p: &DriveParams) -> PauliCoeffs {
    h_rw_interaction(0.0, p)
}

/// Bar-frame Hamiltonian e^{iKt} H̃(t) e^{−iKt} − K.
///
/// At resonance H̃_RW = K, so this is e^{iKt} H̃_CR(t) e^{−iKt}. Off
/// resonance the leftover corotating part is kept, so the frame stays exact
/// for any detuning.
pub fn h_bar(t: f64, p: &DriveParams) -> PauliCoeffs {
    let k = bar_generator(p);
    let into_bar = expm_pauli(&k, -t);
    conjugate(&into_bar, &h_interaction(t, p)) - k
}

/// Static corotating Hamiltonian (𝒲/2)σ1 of the resonant interaction
/// picture.
pub fn h_rwa(p: &DriveParams) -> PauliCoeffs {
    bar_generator(p)
}

/// (𝒲/2)σ1 − (S_BS/2)σ3.
pub fn h_rwa_plus_bs(p: &DriveParams) -> PauliCoeffs {
    h_rwa(p) + PauliCoeffs::sigma3(-0.5 * bloch_siegert_shift(p))
}
