//! First- and second-order Magnus terms over a coarse-graining window.
//!
//! Over the window [t − τ/2, t + τ/2]
//!
//!   F1 = ∫ H(s) ds,   F2 = −(i/2) ∫ds1 ∫_{s2<s1}ds2 [H(s1), H(s2)],
//!
//! and the coarse-grained Hamiltonian is H_eff(t) = (F1 + F2)/τ. The numeric
//! path works for any [`Hamiltonian`]; the closed forms are the exact window
//! averages for the interaction-picture drive and are checked against it.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{DriveParams, Hamiltonian};
use crate::pauli::{commutator, compose, decompose_unchecked, hermiticity_deviation, Mat2, PauliCoeffs, C64};

/// Anti-Hermitian residual above which [`h_eff_window`] reports a quadrature
/// failure.
pub const HERMITIAN_RESIDUAL_TOL: f64 = 1e-8;

/// Smallest |δ|·τ accepted by [`h_eff2_analytic`].
pub const MIN_DETUNING_TAU: f64 = 1e-6;

/// Coarse-graining window [center − τ/2, center + τ/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    center: f64,
    tau: f64,
}

impl Window {
    pub fn new(center: f64, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(invalid(
                "tau",
                format!("window width must be finite and > 0, got {tau}"),
            ));
        }
        if !center.is_finite() {
            return Err(invalid("center", "must be finite"));
        }
        Ok(Self { center, tau })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn start(&self) -> f64 {
        self.center - 0.5 * self.tau
    }

    pub fn end(&self) -> f64 {
        self.center + 0.5 * self.tau
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    GaussLegendre,
    /// Composite Simpson; `points` counts subintervals and must be even.
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    rule: QuadratureRule,
    points: usize,
}

impl QuadratureSpec {
    pub fn new(rule: QuadratureRule, points: usize) -> Result<Self> {
        if points < 4 {
            return Err(invalid(
                "points",
                format!("need at least 4 points per window, got {points}"),
            ));
        }
        if rule == QuadratureRule::Simpson && points % 2 != 0 {
            return Err(invalid("points", format!("Simpson needs an even count, got {points}")));
        }
        Ok(Self { rule, points })
    }

    pub fn gauss_legendre(points: usize) -> Result<Self> {
        Self::new(QuadratureRule::GaussLegendre, points)
    }

    pub fn simpson(points: usize) -> Result<Self> {
        Self::new(QuadratureRule::Simpson, points)
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Nodes and weights on [0, 1].
    fn unit_rule(&self) -> Vec<(f64, f64)> {
        match self.rule {
            QuadratureRule::GaussLegendre => {
                let n = NonZeroUsize::new(self.points).expect("validated point count");
                GaussLegendre::new(n)
                    .as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                    .collect()
            }
            QuadratureRule::Simpson => {
                let n = self.points;
                let h = 1.0 / n as f64;
                (0..=n)
                    .map(|k| {
                        let c = if k == 0 || k == n {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        (k as f64 * h, c * h / 3.0)
                    })
                    .collect()
            }
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::GaussLegendre,
            points: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagnusOrder {
    First,
    Second,
}

impl TryFrom<u8> for MagnusOrder {
    type Error = Error;
    fn try_from(order: u8) -> Result<Self> {
        match order {
            1 => Ok(MagnusOrder::First),
            2 => Ok(MagnusOrder::Second),
            _ => Err(invalid(
                "order",
                format!("only Magnus orders 1 and 2 are supported, got {order}"),
            )),
        }
    }
}

/// ∫_{a}^{b} H(s) ds in Pauli form.
fn integrate_pauli<H: Hamiltonian + ?Sized>(h: &H, unit: &[(f64, f64)], a: f64, b: f64) -> PauliCoeffs {
    let len = b - a;
    unit.iter()
        .fold(PauliCoeffs::ZERO, |acc, &(x, w)| acc + h.at(a + x * len) * (w * len))
}

/// Quadrature of F1 over the window.
pub fn f1_numeric<H: Hamiltonian + ?Sized>(h: &H, w: &Window, q: &QuadratureSpec) -> Mat2 {
    let unit = q.unit_rule();
    compose(&integrate_pauli(h, &unit, w.start(), w.end()))
}

/// Nested quadrature of F2 over the window.
///
/// The inner integral G(s1) = ∫_{a}^{s1} H(s2) ds2 is taken with the same
/// rule mapped onto [a, s1], so F2 = −(i/2) Σ w1 [H(s1), G(s1)].
pub fn f2_numeric<H: Hamiltonian + ?Sized>(h: &H, w: &Window, q: &QuadratureSpec) -> Mat2 {
    let unit = q.unit_rule();
    let a = w.start();
    let len = w.tau();
    let mut acc = Mat2::zeros();
    for &(x, wt) in &unit {
        let s1 = a + x * len;
        let inner = integrate_pauli(h, &unit, a, s1);
        let c = commutator(&compose(&h.at(s1)), &compose(&inner));
        acc += c * C64::new(wt * len, 0.0);
    }
    acc * C64::new(0.0, -0.5)
}

/// H_eff = (F1 [+ F2])/τ from quadrature.
pub fn h_eff_window<H: Hamiltonian + ?Sized>(
    h: &H,
    w: &Window,
    order: MagnusOrder,
    q: &QuadratureSpec,
) -> Result<PauliCoeffs> {
    let mut f = f1_numeric(h, w, q);
    if order == MagnusOrder::Second {
        f += f2_numeric(h, w, q);
    }
    let m = f / C64::new(w.tau(), 0.0);
    let residual = hermiticity_deviation(&m);
    if residual > HERMITIAN_RESIDUAL_TOL {
        return Err(Error::NonHermitianResult { residual });
    }
    Ok(decompose_unchecked(&m))
}

/// sin(x)/x with sinc(0) = 1.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Window average of the interaction-picture drive:
/// (𝒲/2)(e^{−iδt} sinc(δτ/2) + e^{−i(ε+ω)t} sinc((ε+ω)τ/2)) σ+ + h.c.
pub fn h_eff1_analytic(t: f64, p: &DriveParams, tau: f64) -> PauliCoeffs {
    let d = p.detuning();
    let s = p.sum_frequency();
    let a = Complex64::from_polar(sinc(0.5 * d * tau), -d * t) + Complex64::from_polar(sinc(0.5 * s * tau), -s * t);
    PauliCoeffs::from_raising(a * (0.5 * p.amplitude()))
}

/// σ3 coefficient of the second-order window average, split into its
/// t-independent part and the part oscillating as e^{±2iωt}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderTerm {
    pub static_part: f64,
    pub oscillating: f64,
}

impl SecondOrderTerm {
    pub fn total(&self) -> f64 {
        self.static_part + self.oscillating
    }

    pub fn to_pauli(&self) -> PauliCoeffs {
        PauliCoeffs::sigma3(self.total())
    }
}

/// (1/τ)∫∫_{x2<x1} e^{−i a x1 + i b x2} over the centered window, for b ≠ 0.
fn ordered_phase_average(a: f64, b: f64, tau: f64) -> C64 {
    let num = C64::new(sinc(0.5 * (b - a) * tau), 0.0) - C64::from_polar(sinc(0.5 * a * tau), -0.5 * b * tau);
    num / C64::new(0.0, b)
}

/// Closed-form second-order term.
///
/// Static part −(𝒲²/4)[(1 − sinc δτ)/δ + (1 − sinc (ε+ω)τ)/(ε+ω)];
/// oscillating part (𝒲²/4)·Im[e^{2iωt}J₁ + e^{−2iωt}J₂] with
/// J₁ = [sinc ωτ − e^{−i(ε+ω)τ/2} sinc(δτ/2)]/(i(ε+ω)) and
/// J₂ = [sinc ωτ − e^{−iδτ/2} sinc((ε+ω)τ/2)]/(iδ).
pub fn h_eff2_terms(t: f64, p: &DriveParams, tau: f64) -> Result<SecondOrderTerm> {
    let d = p.detuning();
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid("tau", format!("must be finite and > 0, got {tau}")));
    }
    if (d * tau).abs() < MIN_DETUNING_TAU {
        return Err(Error::DetuningSingularity { value: (d * tau).abs() });
    }
    let s = p.sum_frequency();
    let w = p.omega();
    let scale = 0.25 * p.amplitude() * p.amplitude();

    let static_part = -scale * ((1.0 - sinc(d * tau)) / d + (1.0 - sinc(s * tau)) / s);

    let j1 = ordered_phase_average(d, s, tau);
    let j2 = ordered_phase_average(s, d, tau);
    let osc = C64::from_polar(1.0, 2.0 * w * t) * j1 + C64::from_polar(1.0, -2.0 * w * t) * j2;

    Ok(SecondOrderTerm {
        static_part,
        oscillating: scale * osc.im,
    })
}

/// Second-order window average as a σ3 Hamiltonian.
pub fn h_eff2_analytic(t: f64, p: &DriveParams, tau: f64) -> Result<PauliCoeffs> {
    h_eff2_terms(t, p, tau).map(|term| term.to_pauli())
}
