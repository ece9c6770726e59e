//! Stark and Bloch-Siegert shifts, the effective Hamiltonians built from
//! them, and validity checks for the coarse-graining window.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DriveParams;
use crate::pauli::PauliCoeffs;

/// Default threshold for "≫": a ratio passes when it is at least this large.
pub const DEFAULT_KAPPA: f64 = 5.0;

/// Stark shift S_RW = 𝒲²/(2δ); `None` at resonance.
pub fn stark_shift(p: &DriveParams) -> Option<f64> {
    if p.is_resonant() {
        None
    } else {
        Some(p.amplitude() * p.amplitude() / (2.0 * p.detuning()))
    }
}

/// Diagonal Bloch-Siegert shift S_BS = 𝒲²/(2(2ω + δ)); equals 𝒲²/(4ω) at
/// resonance.
pub fn bloch_siegert_shift(p: &DriveParams) -> f64 {
    p.amplitude() * p.amplitude() / (2.0 * (2.0 * p.omega() + p.detuning()))
}

/// Off-diagonal Bloch-Siegert shift S′_BS = 𝒲³/(16ω²[1 − (𝒲/2ω)²]).
pub fn off_diagonal_bloch_siegert_shift(p: &DriveParams) -> Result<f64> {
    let w = p.amplitude();
    let om = p.omega();
    if w >= 2.0 * om {
        return Err(Error::AmplitudePole {
            amplitude: w,
            pole: 2.0 * om,
        });
    }
    let x = w / (2.0 * om);
    Ok(w * w * w / (16.0 * om * om * (1.0 - x * x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shifts {
    /// `None` when the detuning vanishes.
    pub s_rw: Option<f64>,
    pub s_bs: f64,
    pub s_bs_prime: f64,
}

pub fn compute_shifts(p: &DriveParams) -> Result<Shifts> {
    Ok(Shifts {
        s_rw: stark_shift(p),
        s_bs: bloch_siegert_shift(p),
        s_bs_prime: off_diagonal_bloch_siegert_shift(p)?,
    })
}

/// −(S_RW + S_BS)/2 · σ3, the large-detuning limit of the second-order
/// Magnus term.
pub fn h_eff_dispersive(p: &DriveParams) -> Result<PauliCoeffs> {
    let s_rw = stark_shift(p).ok_or(Error::ResonantStark)?;
    Ok(PauliCoeffs::sigma3(-0.5 * (s_rw + bloch_siegert_shift(p))))
}

fn require_resonance(p: &DriveParams) -> Result<()> {
    if p.is_resonant() {
        Ok(())
    } else {
        Err(Error::NotResonant { detuning: p.detuning() })
    }
}

/// Second-order coarse-grained Hamiltonian in the bar frame at resonance:
///
///   −(S′_BS/2)σ1 − (S_BS/2)·R·[e^{i𝒲t}|+⟩⟨−| + h.c.],
///   R = (1 − (𝒲/2√2ω)²)/(1 − (𝒲/2ω)²),
///
/// with |±⟩ the σ1 eigenstates. In Pauli form the bracket is
/// cos(𝒲t)σ3 + sin(𝒲t)σ2, i.e. e^{iKt}σ3e^{−iKt} for K = (𝒲/2)σ1.
pub fn h_eff_resonant_bar(t: f64, p: &DriveParams) -> Result<PauliCoeffs> {
    require_resonance(p)?;
    let s_prime = off_diagonal_bloch_siegert_shift(p)?;
    let s_bs = bloch_siegert_shift(p);
    let w = p.amplitude();
    let om = p.omega();
    let ratio = (1.0 - w * w / (8.0 * om * om)) / (1.0 - w * w / (4.0 * om * om));
    let rot = -0.5 * s_bs * ratio;
    Ok(PauliCoeffs::new(
        0.0,
        -0.5 * s_prime,
        rot * (w * t).sin(),
        rot * (w * t).cos(),
    ))
}

/// −(S_BS/2)σ3 + ((𝒲 − S′_BS)/2)σ1: the resonant interaction-picture
/// Hamiltonian with the renormalized drive amplitude.
pub fn h_eff_resonant_interaction(p: &DriveParams) -> Result<PauliCoeffs> {
    require_resonance(p)?;
    let s_prime = off_diagonal_bloch_siegert_shift(p)?;
    Ok(PauliCoeffs::new(
        0.0,
        0.5 * (p.amplitude() - s_prime),
        0.0,
        -0.5 * bloch_siegert_shift(p),
    ))
}

/// Eigenvalue gap √(S_BS² + (𝒲 − S′_BS)²) of [`h_eff_resonant_interaction`].
pub fn resonant_splitting(p: &DriveParams) -> Result<f64> {
    let s_prime = off_diagonal_bloch_siegert_shift(p)?;
    Ok(bloch_siegert_shift(p).hypot(p.amplitude() - s_prime))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeCase {
    Dispersive,
    Resonant,
}

impl RegimeCase {
    pub fn for_params(p: &DriveParams) -> Self {
        if p.is_resonant() {
            RegimeCase::Resonant
        } else {
            RegimeCase::Dispersive
        }
    }
}

impl fmt::Display for RegimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeCase::Dispersive => "dispersive",
            RegimeCase::Resonant => "resonant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioStatus {
    Pass,
    Warn,
}

impl fmt::Display for RatioStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioStatus::Pass => "pass",
            RatioStatus::Warn => "warn",
        })
    }
}

/// How a ratio depends on τ.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Scaling {
    /// value = k·τ
    Linear(f64),
    /// value = k/τ
    Inverse(f64),
    Constant(f64),
}

impl Scaling {
    fn at(self, tau: f64) -> f64 {
        match self {
            Scaling::Linear(k) => k * tau,
            Scaling::Inverse(k) => k / tau,
            Scaling::Constant(c) => c,
        }
    }
}

struct RatioDef {
    name: &'static str,
    condition: &'static str,
    scaling: Scaling,
}

fn ratio_defs(p: &DriveParams, case: RegimeCase) -> Vec<RatioDef> {
    let om = p.omega();
    let eps = p.epsilon();
    let w = p.amplitude();
    match case {
        RegimeCase::Dispersive => {
            let s_rw = stark_shift(p).map(f64::abs).unwrap_or(f64::INFINITY);
            vec![
                RatioDef {
                    name: "tau_omega_over_pi",
                    condition: "tau >> pi/omega",
                    scaling: Scaling::Linear(om / PI),
                },
                RatioDef {
                    name: "tau_sum_over_2pi",
                    condition: "tau >> 2pi/(omega+epsilon)",
                    scaling: Scaling::Linear((om + eps) / (2.0 * PI)),
                },
                RatioDef {
                    name: "detuning_tau_over_2pi",
                    condition: "|delta| tau >> 2pi",
                    scaling: Scaling::Linear(p.detuning().abs() / (2.0 * PI)),
                },
                RatioDef {
                    name: "two_pi_over_stark_tau",
                    condition: "tau << 2pi/S_RW",
                    scaling: Scaling::Inverse(2.0 * PI / s_rw),
                },
            ]
        }
        RegimeCase::Resonant => {
            let s_prime = off_diagonal_bloch_siegert_shift(p).unwrap_or(f64::NAN);
            vec![
                RatioDef {
                    name: "two_pi_over_amplitude_tau",
                    condition: "tau << 2pi/W",
                    scaling: Scaling::Inverse(2.0 * PI / w),
                },
                RatioDef {
                    name: "tau_gap_over_2pi",
                    condition: "tau >> 2pi/(2 omega - W)",
                    scaling: Scaling::Linear((2.0 * om - w) / (2.0 * PI)),
                },
                RatioDef {
                    name: "two_pi_over_offdiag_bs_tau",
                    condition: "tau << 2pi/S'_BS",
                    scaling: Scaling::Inverse(2.0 * PI / s_prime),
                },
                RatioDef {
                    name: "amplitude_consistency",
                    condition: "W/omega >> 32^(-1/3)",
                    scaling: Scaling::Constant(w / om * 32f64.cbrt()),
                },
            ]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRatio {
    pub name: String,
    pub condition: String,
    pub value: f64,
    pub status: RatioStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub case: RegimeCase,
    pub tau: f64,
    pub kappa: f64,
    pub ratios: Vec<RegimeRatio>,
    pub verdict: RatioStatus,
}

impl RegimeReport {
    pub fn passes(&self) -> bool {
        self.verdict == RatioStatus::Pass
    }

    pub fn ratio(&self, name: &str) -> Option<&RegimeRatio> {
        self.ratios.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "regime: {}  tau = {:.6e}  kappa = {}",
            self.case, self.tau, self.kappa
        )?;
        writeln!(f, "{:<30} {:<28} {:>14}  status", "ratio", "condition", "value")?;
        for r in &self.ratios {
            writeln!(f, "{:<30} {:<28} {:>14.6e}  {}", r.name, r.condition, r.value, r.status)?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

/// Turn each "≫"/"≪" validity condition into a ratio and flag it as passing
/// when it is at least `kappa`. Never fails; invalid inputs show up as warn.
pub fn validate_regime(p: &DriveParams, tau: f64, case: RegimeCase, kappa: f64) -> RegimeReport {
    let ratios: Vec<RegimeRatio> = ratio_defs(p, case)
        .into_iter()
        .map(|d| {
            let value = d.scaling.at(tau);
            // NaN compares false, so it lands on warn
            let status = if value >= kappa {
                RatioStatus::Pass
            } else {
                RatioStatus::Warn
            };
            RegimeRatio {
                name: d.name.to_string(),
                condition: d.condition.to_string(),
                value,
                status,
            }
        })
        .collect();
    let verdict = if ratios.iter().all(|r| r.status == RatioStatus::Pass) {
        RatioStatus::Pass
    } else {
        RatioStatus::Warn
    };
    RegimeReport {
        case,
        tau,
        kappa,
        ratios,
        verdict,
    }
}

/// Closed interval of τ for which every ratio passes, if any.
///
/// Each ratio is linear in τ, inverse in τ or constant, so the feasible set
/// is an interval bounded by the tightest constraint on each side.
pub fn feasible_tau_band(p: &DriveParams, case: RegimeCase, kappa: f64) -> Option<(f64, f64)> {
    let mut lo: f64 = 0.0;
    let mut hi = f64::INFINITY;
    for d in ratio_defs(p, case) {
        match d.scaling {
            Scaling::Linear(k) if k > 0.0 => lo = lo.max(kappa / k),
            Scaling::Inverse(k) if k > 0.0 => hi = hi.min(k / kappa),
            Scaling::Constant(c) if c >= kappa => {}
            _ => return None,
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// τ that balances the tightest lower and upper bounds (their geometric
/// mean). It maximizes the smallest τ-dependent ratio and lies inside
/// [`feasible_tau_band`] whenever that band exists. `None` if either side is
/// unbounded or degenerate.
pub fn balanced_tau(p: &DriveParams, case: RegimeCase) -> Option<f64> {
    let mut lo: f64 = 0.0;
    let mut hi = f64::INFINITY;
    for d in ratio_defs(p, case) {
        match d.scaling {
            Scaling::Linear(k) => lo = lo.max(1.0 / k),
            Scaling::Inverse(k) => hi = hi.min(k),
            Scaling::Constant(_) => {}
        }
    }
    let tau = (lo * hi).sqrt();
    (tau.is_finite() && tau > 0.0).then_some(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(eps: f64, w: f64) -> DriveParams {
        DriveParams::new(eps, 1.0, w).unwrap()
    }

    #[test]
    fn dispersive_spot_values() {
        let s = compute_shifts(&params(4.0, 0.5)).unwrap();
        assert_relative_eq!(s.s_rw.unwrap(), 1.0 / 24.0, max_relative = 1e-15);
        assert_relative_eq!(s.s_bs, 1.0 / 40.0, max_relative = 1e-15);
    }

    #[test]
    fn resonant_spot_values() {
        let p = params(1.0, 0.5);
        let s = compute_shifts(&p).unwrap();
        assert!(s.s_rw.is_none());
        assert_relative_eq!(s.s_bs, 0.0625, max_relative = 1e-15);
        assert_relative_eq!(s.s_bs_prime, 0.125 / (16.0 * 0.9375), max_relative = 1e-15);
        assert!(matches!(h_eff_dispersive(&p), Err(Error::ResonantStark)));
    }

    #[test]
    fn zero_drive_has_no_shifts() {
        for eps in [1.0, 4.0] {
            let p = params(eps, 0.0);
            let s = compute_shifts(&p).unwrap();
            assert_eq!(s.s_bs, 0.0);
            assert_eq!(s.s_bs_prime, 0.0);
            assert!(s.s_rw.map_or(true, |v| v == 0.0));
        }
        assert_eq!(h_eff_dispersive(&params(4.0, 0.0)).unwrap().max_abs(), 0.0);
        assert_eq!(h_eff_resonant_interaction(&params(1.0, 0.0)).unwrap().max_abs(), 0.0);
        assert_eq!(h_eff_resonant_bar(1.0, &params(1.0, 0.0)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn amplitude_pole() {
        let p = params(1.0, 2.0);
        assert!(matches!(compute_shifts(&p), Err(Error::AmplitudePole { .. })));
        assert!(matches!(
            h_eff_resonant_interaction(&p),
            Err(Error::AmplitudePole { .. })
        ));
    }

    #[test]
    fn resonant_forms_require_resonance() {
        let p = params(4.0, 0.5);
        assert!(matches!(h_eff_resonant_interaction(&p), Err(Error::NotResonant { .. })));
        assert!(matches!(h_eff_resonant_bar(0.0, &p), Err(Error::NotResonant { .. })));
    }

    #[test]
    fn positivity_above_resonance() {
        let s = compute_shifts(&params(1.7, 0.3)).unwrap();
        assert!(s.s_rw.unwrap() > 0.0 && s.s_bs > 0.0 && s.s_bs_prime > 0.0);
    }

    #[test]
    fn dispersive_hamiltonian_fig1a() {
        let h = h_eff_dispersive(&params(4.0, 0.5)).unwrap();
        assert_relative_eq!(h.c3, -1.0 / 30.0, max_relative = 1e-15);
        assert_eq!((h.c0, h.c1, h.c2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn resonant_interaction_hamiltonian() {
        let h = h_eff_resonant_interaction(&params(1.0, 0.5)).unwrap();
        assert_relative_eq!(h.c1, 0.5 * (0.5 - 1.0 / 120.0), max_relative = 1e-15);
        assert_relative_eq!(h.c3, -0.03125, max_relative = 1e-15);
    }

    #[test]
    fn resonant_bar_is_beat_periodic() {
        let p = params(1.0, 0.5);
        let period = 2.0 * PI / 0.5;
        for t in [0.0, 0.7, 3.3] {
            let a = h_eff_resonant_bar(t, &p).unwrap();
            let b = h_eff_resonant_bar(t + period, &p).unwrap();
            assert!((a - b).max_abs() < 1e-15);
        }
        let h0 = h_eff_resonant_bar(0.0, &p).unwrap();
        assert_relative_eq!(h0.c1, -0.5 / 120.0, max_relative = 1e-14);
        assert_eq!(h0.c2, 0.0);
    }

    #[test]
    fn regime_fig1a() {
        let p = params(4.0, 0.5);
        let r = validate_regime(&p, 10.0 * PI, RegimeCase::Dispersive, DEFAULT_KAPPA);
        let get = |n: &str| r.ratio(n).unwrap();
        assert_relative_eq!(get("tau_omega_over_pi").value, 10.0, max_relative = 1e-14);
        assert_eq!(get("tau_omega_over_pi").status, RatioStatus::Pass);
        assert_relative_eq!(get("detuning_tau_over_2pi").value, 15.0, max_relative = 1e-14);
        assert_eq!(get("detuning_tau_over_2pi").status, RatioStatus::Pass);
        assert_relative_eq!(get("two_pi_over_stark_tau").value, 4.8, max_relative = 1e-14);
        assert_eq!(get("two_pi_over_stark_tau").status, RatioStatus::Warn);
        assert_eq!(r.verdict, RatioStatus::Warn);
    }

    #[test]
    fn regime_tiny_tau_fails_lower_bounds() {
        let p = params(4.0, 0.5);
        let r = validate_regime(&p, 1e-9, RegimeCase::Dispersive, DEFAULT_KAPPA);
        for name in ["tau_omega_over_pi", "tau_sum_over_2pi", "detuning_tau_over_2pi"] {
            assert_eq!(r.ratio(name).unwrap().status, RatioStatus::Warn);
        }
    }

    #[test]
    fn regime_resonant_consistency() {
        let r = validate_regime(&params(1.0, 0.5), 7.0, RegimeCase::Resonant, DEFAULT_KAPPA);
        let c = r.ratio("amplitude_consistency").unwrap();
        assert_relative_eq!(c.value, 0.5 * 32f64.cbrt(), max_relative = 1e-15);
        assert!((c.value - 1.587).abs() < 1e-3);
        assert_eq!(c.status, RatioStatus::Warn);
    }

    #[test]
    fn feasible_band_bounds() {
        let p = params(4.0, 0.5);
        let (lo, hi) = feasible_tau_band(&p, RegimeCase::Dispersive, 2.0).unwrap();
        for tau in [lo * 1.0001, (lo * hi).sqrt(), hi * 0.9999] {
            assert!(validate_regime(&p, tau, RegimeCase::Dispersive, 2.0).passes());
        }
        assert!(!validate_regime(&p, lo * 0.99, RegimeCase::Dispersive, 2.0).passes());
        assert!(!validate_regime(&p, hi * 1.01, RegimeCase::Dispersive, 2.0).passes());
        // at κ = 5 the band runs from τω/π = 5 up to 2π/(S_RW τ) = 5
        let (lo, hi) = feasible_tau_band(&p, RegimeCase::Dispersive, DEFAULT_KAPPA).unwrap();
        assert_relative_eq!(lo, 5.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(hi, 48.0 * PI / 5.0, max_relative = 1e-14);
        // the resonant consistency ratio can never pass at 𝒲 = 0.5ω
        assert!(feasible_tau_band(&params(1.0, 0.5), RegimeCase::Resonant, DEFAULT_KAPPA).is_none());
    }

    #[test]
    fn balanced_tau_sits_in_band() {
        let p = params(4.0, 0.5);
        let (lo, hi) = feasible_tau_band(&p, RegimeCase::Dispersive, DEFAULT_KAPPA).unwrap();
        let tau = balanced_tau(&p, RegimeCase::Dispersive).unwrap();
        assert_relative_eq!(tau, (lo * hi).sqrt(), max_relative = 1e-14);
        assert!(balanced_tau(&params(4.0, 0.0), RegimeCase::Dispersive).is_none());
    }
}
