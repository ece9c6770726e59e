//! Time-ordered propagation, frame changes and Floquet quasienergies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{bar_generator, h0, DriveParams, Frame, Hamiltonian};
use crate::pauli::{expm_pauli, Unitary2};

/// Steps per shortest drive period used when the caller does not say.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 200;

/// Eigenphase gaps below this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepMethod {
    /// Product of exp(−iH(t_k + dt/2)dt) factors; second order in dt.
    #[default]
    MidpointExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationSpec {
    t0: f64,
    t1: f64,
    steps: usize,
    method: StepMethod,
}

impl PropagationSpec {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(invalid("t", format!("endpoints must be finite, got [{t0}, {t1}]")));
        }
        if t1 < t0 {
            return Err(invalid("t", format!("end {t1} precedes start {t0}")));
        }
        if steps == 0 {
            return Err(invalid("steps", "must be at least 1"));
        }
        Ok(PropagationSpec {
            t0,
            t1,
            steps,
            method: StepMethod::MidpointExponential,
        })
    }

    /// Step count chosen from the drive: `steps_per_period` steps per
    /// shortest period 2π/(ε+ω) of the interaction-picture drive.
    pub fn for_drive(p: &DriveParams, t0: f64, t1: f64, steps_per_period: usize) -> Result<Self> {
        if steps_per_period == 0 {
            return Err(invalid("steps_per_period", "must be at least 1"));
        }
        Self::new(t0, t1, steps_for_interval(p, t1 - t0, steps_per_period))
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn method(&self) -> StepMethod {
        self.method
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }
}

/// Shortest period among the frequencies in the drive, min(2π/ω, 2π/(ε+ω)).
pub fn shortest_period(p: &DriveParams) -> f64 {
    (2.0 * PI / p.omega()).min(2.0 * PI / p.sum_frequency())
}

/// Number of steps covering an interval of length `span` at the given
/// resolution; at least one.
pub fn steps_for_interval(p: &DriveParams, span: f64, steps_per_period: usize) -> usize {
    let n = (span.abs() / shortest_period(p) * steps_per_period as f64).ceil();
    (n as usize).max(1)
}

/// U(t1, t0) for i dU/dt = H(t)U.
///
/// Static Hamiltonians are exponentiated in one shot.
pub fn propagate<H: Hamiltonian + ?Sized>(h: &H, spec: &PropagationSpec) -> Unitary2 {
    if h.is_static() {
        return expm_pauli(&h.at(spec.t0), spec.t1 - spec.t0);
    }
    let dt = spec.dt();
    let mut u = Unitary2::identity();
    for k in 0..spec.steps {
        let tm = spec.t0 + (k as f64 + 0.5) * dt;
        u = expm_pauli(&h.at(tm), dt) * u;
    }
    u
}

/// Coarse-grained propagator; the same product rule as [`propagate`], named
/// separately for effective Hamiltonians, which are often static.
pub fn propagate_coarse<H: Hamiltonian + ?Sized>(h_eff: &H, spec: &PropagationSpec) -> Unitary2 {
    propagate(h_eff, spec)
}

/// Propagators U(t_k, t0) for an ascending list of times, each built on the
/// previous one so the whole series costs a single pass.
///
/// Each interval gets ⌈Δt/max_dt⌉ midpoint steps.
pub fn propagator_series<H: Hamiltonian + ?Sized>(h: &H, t0: f64, times: &[f64], max_dt: f64) -> Result<Vec<Unitary2>> {
    if !(max_dt.is_finite() && max_dt > 0.0) {
        return Err(invalid("max_dt", format!("must be finite and > 0, got {max_dt}")));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut u = Unitary2::identity();
    let mut prev = t0;
    for &t in times {
        if t.is_nan() || t < prev {
            return Err(invalid(
                "times",
                format!("must be ascending from t0 = {t0}, got {t} after {prev}"),
            ));
        }
        if t > prev {
            let steps = ((t - prev) / max_dt).ceil().max(1.0) as usize;
            u = propagate(h, &PropagationSpec::new(prev, t, steps)?) * u;
        }
        out.push(u);
        prev = t;
    }
    Ok(out)
}

/// W(t) with U_lab(t, t0) = W(t) · U_frame(t, t0) · W(t0)†.
///
/// Lab: 𝟙. Interaction: e^{−iH0t}. Bar: e^{−iH0t} e^{−iKt}.
pub fn frame_unitary(frame: Frame, t: f64, p: &DriveParams) -> Unitary2 {
    match frame {
        Frame::Lab => Unitary2::identity(),
        Frame::Interaction => expm_pauli(&h0(p), t),
        Frame::Bar => expm_pauli(&h0(p), t) * expm_pauli(&bar_generator(p), t),
    }
}

/// Re-express a propagator U(t1, t0) given in frame `from` in frame `to`.
pub fn frame_transform_between(u: &Unitary2, from: Frame, to: Frame, t0: f64, t1: f64, p: &DriveParams) -> Unitary2 {
    if from == to {
        return *u;
    }
    let lab = frame_unitary(from, t1, p) * *u * frame_unitary(from, t0, p).adjoint();
    frame_unitary(to, t1, p).adjoint() * lab * frame_unitary(to, t0, p)
}

/// [`frame_transform_between`] for a propagator starting at t = 0.
pub fn frame_transform(u: &Unitary2, from: Frame, to: Frame, t: f64, p: &DriveParams) -> Unitary2 {
    frame_transform_between(u, from, to, 0.0, t, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetSplitting {
    /// Quasienergy difference folded into [0, ω/2].
    pub value: f64,
    /// True when the two quasienergies coincide to within [`DEGENERACY_TOL`].
    pub degenerate: bool,
}

/// Quasienergy splitting of the lab Hamiltonian from the one-period
/// propagator U(t0 + T, t0), T = 2π/ω.
pub fn floquet_splitting_from(p: &DriveParams, t0: f64, steps_per_period: usize) -> Result<FloquetSplitting> {
    let period = p.period();
    let h = |t: f64| crate::model::h_lab(t, p);
    let spec = PropagationSpec::for_drive(p, t0, t0 + period, steps_per_period)?;
    let u = propagate(&h, &spec);
    let (a, b) = u.eigenphases();
    let gap = (a - b).abs().rem_euclid(2.0 * PI);
    let gap = gap.min(2.0 * PI - gap);
    Ok(FloquetSplitting {
        value: gap / period,
        degenerate: gap < DEGENERACY_TOL,
    })
}

/// [`floquet_splitting_from`] with t0 = 0.
pub fn floquet_splitting(p: &DriveParams, steps_per_period: usize) -> Result<FloquetSplitting> {
    floquet_splitting_from(p, 0.0, steps_per_period)
}
