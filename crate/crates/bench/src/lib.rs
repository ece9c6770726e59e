//! Shared fixtures for the kernel benchmarks.

use magnus_core::DriveParams;

/// Off-resonant scenario: ε = 4ω, 𝒲 = 0.5ω.
pub fn dispersive() -> DriveParams {
    DriveParams::new(4.0, 1.0, 0.5).expect("valid fixture")
}

/// Resonant scenario: ε = ω, 𝒲 = 0.5ω.
pub fn resonant() -> DriveParams {
    DriveParams::new(1.0, 1.0, 0.5).expect("valid fixture")
}
