//! Worst-case state fidelity between two propagators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{DriveParams, Frame, Hamiltonian};
use crate::pauli::{Mat2, Unitary2, C64};
use crate::propagation::{frame_transform, propagator_series};

/// min over pure states of |⟨ψ|U†U_eff|ψ⟩|².
///
/// For a 2×2 unitary V with eigenphases a, b the minimum sits at an equal
/// superposition of eigenvectors, giving |Tr V|²/4.
pub fn min_fidelity(u: &Unitary2, u_eff: &Unitary2) -> f64 {
    let t = trace_overlap(u, u_eff);
    (t * t).min(1.0)
}

/// [`min_fidelity`] for raw matrices; both must pass the unitarity check.
pub fn min_fidelity_checked(u: Mat2, u_eff: Mat2) -> Result<f64> {
    Ok(min_fidelity(&Unitary2::new(u)?, &Unitary2::new(u_eff)?))
}

/// |Tr(U†U_eff)|/2, the square root of [`min_fidelity`].
pub fn trace_overlap(u: &Unitary2, u_eff: &Unitary2) -> f64 {
    let v = u.matrix().adjoint() * u_eff.matrix();
    ((v[(0, 0)] + v[(1, 1)]).norm() * 0.5).min(1.0)
}

/// Minimum of |⟨ψ|V|ψ⟩|² over a grid_n × grid_n Bloch-sphere grid
/// (θ from 0 to π inclusive, φ over [0, 2π)). Never below [`min_fidelity`]
/// beyond rounding; used as an independent check.
pub fn min_fidelity_bruteforce(u: &Unitary2, u_eff: &Unitary2, grid_n: usize) -> Result<f64> {
    if grid_n < 16 {
        return Err(invalid("grid_n", format!("must be at least 16, got {grid_n}")));
    }
    let v = u.matrix().adjoint() * u_eff.matrix();
    let mut best = f64::INFINITY;
    for i in 0..grid_n {
        let theta = PI * i as f64 / (grid_n - 1) as f64;
        let (s, c) = (0.5 * theta).sin_cos();
        for j in 0..grid_n {
            let phi = 2.0 * PI * j as f64 / grid_n as f64;
            let a = C64::new(c, 0.0);
            let b = C64::from_polar(s, phi);
            let va = v[(0, 0)] * a + v[(0, 1)] * b;
            let vb = v[(1, 0)] * a + v[(1, 1)] * b;
            let amp = a.conj() * va + b.conj() * vb;
            best = best.min(amp.norm_sqr());
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelitySample {
    pub t: f64,
    pub value: f64,
}

/// Pointwise [`min_fidelity`] between two propagator series sampled at the
/// same times and expressed in the same frame.
pub fn compare_series(times: &[f64], exact: &[Unitary2], model: &[Unitary2]) -> Result<Vec<FidelitySample>> {
    if exact.len() != times.len() || model.len() != times.len() {
        return Err(invalid(
            "series",
            format!(
                "length mismatch: {} times, {} exact, {} model",
                times.len(),
                exact.len(),
                model.len()
            ),
        ));
    }
    Ok(times
        .iter()
        .zip(exact.iter().zip(model))
        .map(|(&t, (u, v))| FidelitySample {
            t,
            value: min_fidelity(u, v),
        })
        .collect())
}

/// Frames of the two Hamiltonians handed to [`fidelity_series`], the frame
/// the propagators are compared in, and the largest step used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub exact_frame: Frame,
    pub model_frame: Frame,
    pub compare_in: Frame,
    pub max_dt: f64,
}

impl SeriesSpec {
    /// Both Hamiltonians in the interaction picture, compared there.
    pub fn interaction(max_dt: f64) -> Self {
        SeriesSpec {
            exact_frame: Frame::Interaction,
            model_frame: Frame::Interaction,
            compare_in: Frame::Interaction,
            max_dt,
        }
    }
}

/// Propagate both Hamiltonians from 0 to each t in `times`, bring them into
/// a common frame and evaluate [`min_fidelity`].
pub fn fidelity_series<A, B>(
    h_exact: &A,
    h_model: &B,
    times: &[f64],
    p: &DriveParams,
    spec: &SeriesSpec,
) -> Result<Vec<FidelitySample>>
where
    A: Hamiltonian + ?Sized,
    B: Hamiltonian + ?Sized,
{
    let exact = propagator_series(h_exact, 0.0, times, spec.max_dt)?;
    let model = propagator_series(h_model, 0.0, times, spec.max_dt)?;
    let align = |us: Vec<Unitary2>, from: Frame| -> Vec<Unitary2> {
        us.iter()
            .zip(times)
            .map(|(u, &t)| frame_transform(u, from, spec.compare_in, t, p))
            .collect()
    };
    compare_series(times, &align(exact, spec.exact_frame), &align(model, spec.model_frame))
}
