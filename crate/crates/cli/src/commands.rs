//! The four subcommands, as functions returning their output text.

use std::fmt::Write as _;
use std::path::Path;

use magnus_core::fidelity::compare_series;
use magnus_core::model::{h_interaction, h_rw_interaction, DriveParams, Frame, Hamiltonian};
use magnus_core::pauli::Unitary2;
use magnus_core::propagation::{floquet_splitting, frame_transform, propagator_series, shortest_period};
use magnus_core::shifts::{
    balanced_tau, bloch_siegert_shift, feasible_tau_band, h_eff_dispersive, h_eff_resonant_interaction,
    off_diagonal_bloch_siegert_shift, resonant_splitting, stark_shift, validate_regime, RegimeCase, RegimeReport,
};
use magnus_core::PauliCoeffs;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Model, ScenarioConfig};
use crate::error::CliError;
use crate::output::{fmt_sci, Table};

/// Interaction-picture Hamiltonian of a model.
fn hamiltonian<'a>(model: Model, p: &'a DriveParams) -> Result<Box<dyn Hamiltonian + 'a>, CliError> {
    Ok(match model {
        Model::Exact => Box::new(move |t: f64| h_interaction(t, p)),
        Model::Magnus2 => Box::new(h_eff_dispersive(p)?),
        Model::Rwa => Box::new(move |t: f64| h_rw_interaction(t, p)),
        Model::RwaBs => {
            let bs = PauliCoeffs::sigma3(-0.5 * bloch_siegert_shift(p));
            Box::new(move |t: f64| h_rw_interaction(t, p) + bs)
        }
        Model::ResonantMagnus => Box::new(h_eff_resonant_interaction(p)?),
    })
}

/// Evenly spaced sample times, in drive periods and in absolute time.
fn time_grid(cfg: &ScenarioConfig, p: &DriveParams) -> (Vec<f64>, Vec<f64>) {
    let n = cfg.samples;
    let periods: Vec<f64> = (0..n).map(|k| cfg.t_max * k as f64 / (n - 1) as f64).collect();
    let times = periods.iter().map(|x| x * p.period()).collect();
    (periods, times)
}

/// Minimum fidelity of every compared model against exact propagation.
/// Columns are named `<model>_fidelity`, in config order.
pub fn simulate_table(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let p = cfg.validate()?;
    let (periods, times) = time_grid(cfg, &p);
    let max_dt = shortest_period(&p) / cfg.steps_per_period as f64;

    let mut models = vec![Model::Exact];
    models.extend(cfg.compared_models());
    let series: Vec<Vec<Unitary2>> = models
        .par_iter()
        .map(|&m| {
            let h = hamiltonian(m, &p)?;
            let us = propagator_series(h.as_ref(), 0.0, &times, max_dt)?;
            Ok(us
                .iter()
                .zip(&times)
                .map(|(u, &t)| frame_transform(u, Frame::Interaction, cfg.frame, t, &p))
                .collect())
        })
        .collect::<Result<_, CliError>>()?;

    let exact = &series[0];
    let columns = models[1..]
        .iter()
        .zip(&series[1..])
        .map(|(m, us)| {
            let f = compare_series(&times, exact, us)?;
            Ok((format!("{m}_fidelity"), f.into_iter().map(|s| s.value).collect()))
        })
        .collect::<Result<_, CliError>>()?;

    Ok(Table {
        key: "t_over_period".to_string(),
        keys: periods,
        columns,
    })
}

/// Regime check result plus how τ was chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeOutput {
    pub report: RegimeReport,
    /// `config` when τ came from the scenario, `balanced` otherwise.
    pub tau_source: &'static str,
    /// Range of τω over which every ratio passes, when τ was not given.
    pub feasible_band: Option<[f64; 2]>,
    /// False when τ was omitted and no feasible band exists.
    pub band_exists: bool,
}

impl RegimeOutput {
    pub fn passes(&self) -> bool {
        self.report.passes() && self.band_exists
    }
}

pub fn regime(cfg: &ScenarioConfig) -> Result<RegimeOutput, CliError> {
    let p = cfg.validate()?;
    let case = RegimeCase::for_params(&p);
    let om = p.omega();
    match cfg.tau {
        Some(tau) => Ok(RegimeOutput {
            report: validate_regime(&p, tau / om, case, cfg.kappa),
            tau_source: "config",
            feasible_band: None,
            band_exists: true,
        }),
        None => {
            let band = feasible_tau_band(&p, case, cfg.kappa);
            // with no usable balance point fall back to ten drive half-periods
            let tau = balanced_tau(&p, case).unwrap_or(10.0 * std::f64::consts::PI / om);
            Ok(RegimeOutput {
                report: validate_regime(&p, tau, case, cfg.kappa),
                tau_source: "balanced",
                feasible_band: band.map(|(lo, hi)| [lo * om, hi * om]),
                band_exists: band.is_some(),
            })
        }
    }
}

/// Text table followed by the same record as JSON.
pub fn render_regime(out: &RegimeOutput) -> Result<String, CliError> {
    let mut s = format!("{}\n", out.report);
    let om_tau = |x: f64| format!("{} (tau*omega/pi = {:.6})", fmt_sci(x), x / std::f64::consts::PI);
    match (out.tau_source, out.feasible_band) {
        ("config", _) => {}
        (_, Some([lo, hi])) => {
            let _ = writeln!(
                s,
                "tau not given; feasible band for tau*omega: [{}, {}]",
                om_tau(lo),
                om_tau(hi)
            );
            let _ = writeln!(s, "report above is evaluated at the balanced tau");
        }
        (_, None) => {
            let _ = writeln!(
                s,
                "tau not given; no tau satisfies every condition at kappa = {}",
                out.report.kappa
            );
            let _ = writeln!(s, "report above is evaluated at the balanced tau");
        }
    }
    s.push('\n');
    s.push_str(&serde_json::to_string_pretty(out).map_err(|e| CliError::Io(e.into()))?);
    s.push('\n');
    Ok(s)
}

/// Shift table and the resonant splitting next to its Floquet value.
pub fn shifts(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let p = cfg.validate()?;
    let om = p.omega();
    let mut s = String::new();
    let row = |s: &mut String, name: &str, v: Option<f64>, note: &str| {
        let _ = match v {
            Some(v) => writeln!(s, "{name:<26} {:>20} {:>20}  {note}", fmt_sci(v), fmt_sci(v / om)),
            None => writeln!(s, "{name:<26} {:>20} {:>20}  {note}", "-", "-"),
        };
    };
    let _ = writeln!(
        s,
        "epsilon/omega = {}  amplitude/omega = {}  detuning/omega = {}",
        p.epsilon() / om,
        p.amplitude() / om,
        p.detuning() / om
    );
    let _ = writeln!(s, "{:<26} {:>20} {:>20}", "quantity", "value", "value/omega");
    row(
        &mut s,
        "S_RW",
        stark_shift(&p),
        if p.is_resonant() {
            "undefined at zero detuning"
        } else {
            ""
        },
    );
    row(&mut s, "S_BS", Some(bloch_siegert_shift(&p)), "");
    let s_prime = off_diagonal_bloch_siegert_shift(&p);
    let pole_note = match &s_prime {
        Ok(_) => String::new(),
        Err(e) => e.to_string(),
    };
    row(&mut s, "S'_BS", s_prime.as_ref().ok().copied(), &pole_note);
    // quasienergies are defined modulo ω, so the off-resonant prediction
    // ε + S_RW + S_BS is folded into [0, ω/2] like the Floquet value
    let (predicted, how) = if p.is_resonant() {
        (resonant_splitting(&p).ok(), "sqrt(S_BS^2 + (W - S'_BS)^2)")
    } else {
        let gap = p.epsilon() + stark_shift(&p).unwrap_or(0.0) + bloch_siegert_shift(&p);
        let folded = gap.rem_euclid(om);
        (Some(folded.min(om - folded)), "eps + S_RW + S_BS, folded mod omega")
    };
    row(&mut s, "predicted splitting", predicted, how);
    let fl = floquet_splitting(&p, cfg.steps_per_period)?;
    row(
        &mut s,
        "Floquet splitting",
        Some(fl.value),
        if fl.degenerate { "degenerate" } else { "" },
    );
    if let Some(pred) = predicted {
        row(&mut s, "|Floquet - predicted|", Some((fl.value - pred).abs()), "");
    }
    Ok(s)
}

/// External (t_over_period, fidelity) curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalCurve {
    pub t: Vec<f64>,
    pub fidelity: Vec<f64>,
}

impl ExternalCurve {
    pub fn from_reader<R: std::io::Read>(rdr: R) -> Result<Self, CliError> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(rdr);
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::External(format!("missing column `{name}`")))
        };
        let (it, iff) = (col("t_over_period")?, col("fidelity")?);
        let (mut t, mut fidelity) = (Vec::new(), Vec::new());
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let get = |i: usize| -> Result<f64, CliError> {
                rec.get(i)
                    .unwrap_or("")
                    .parse()
                    .map_err(|e| CliError::External(format!("row {}: {e}", row + 1)))
            };
            t.push(get(it)?);
            fidelity.push(get(iff)?);
        }
        if t.len() < 2 {
            return Err(CliError::External("need at least two rows".into()));
        }
        if t.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
            return Err(CliError::External("t_over_period must be strictly increasing".into()));
        }
        Ok(ExternalCurve { t, fidelity })
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let f = std::fs::File::open(path)
            .map_err(|e| CliError::External(format!("cannot open {}: {e}", path.display())))?;
        Self::from_reader(f)
    }

    /// Linear interpolation onto `grid`, which must lie inside the curve's
    /// range.
    pub fn resample(&self, grid: &[f64]) -> Result<Vec<f64>, CliError> {
        let (first, last) = (self.t[0], self.t[self.t.len() - 1]);
        let slack = |x: f64| 1e-9 * x.abs().max(1.0);
        grid.iter()
            .map(|&x| {
                if x < first - slack(first) || x > last + slack(last) {
                    return Err(CliError::External(format!(
                        "external grid [{first}, {last}] does not cover t_over_period = {x}"
                    )));
                }
                let x = x.clamp(first, last);
                let i = self.t.partition_point(|&t| t <= x).clamp(1, self.t.len() - 1);
                let (t0, t1) = (self.t[i - 1], self.t[i]);
                let (f0, f1) = (self.fidelity[i - 1], self.fidelity[i]);
                let w = (x - t0) / (t1 - t0);
                Ok(if w == 0.0 {
                    f0
                } else if w == 1.0 {
                    f1
                } else {
                    f0 + w * (f1 - f0)
                })
            })
            .collect()
    }
}

/// Simulation table with an interpolated `external_fidelity` column.
pub fn compare_external(cfg: &ScenarioConfig, external: &ExternalCurve) -> Result<Table, CliError> {
    cfg.validate()?;
    // coverage is checked before the run so a bad file fails fast
    let (periods, _) = time_grid(cfg, &cfg.drive()?);
    let ext = external.resample(&periods)?;
    let mut table = simulate_table(cfg)?;
    table.columns.push(("external_fidelity".to_string(), ext));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(cfg: &mut ScenarioConfig) {
        cfg.t_max = 2.0;
        cfg.samples = 9;
    }

    #[test]
    fn simulate_columns_follow_models() {
        let mut c = ScenarioConfig::default();
        small(&mut c);
        c.models = vec![Model::Rwa, Model::Exact, Model::Magnus2];
        let t = simulate_table(&c).unwrap();
        let names: Vec<&str> = t.columns.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["rwa_fidelity", "magnus2_fidelity"]);
        assert_eq!(t.keys.len(), 9);
        assert_eq!(t.keys[8], 2.0);
        for (_, col) in &t.columns {
            assert_eq!(col[0], 1.0);
            assert!(col.iter().all(|&f| (0.0..=1.0).contains(&f)));
        }
    }

    #[test]
    fn frame_choice_does_not_change_fidelity() {
        let mut c = ScenarioConfig::default();
        small(&mut c);
        let a = simulate_table(&c).unwrap();
        c.frame = Frame::Lab;
        let b = simulate_table(&c).unwrap();
        for ((_, x), (_, y)) in a.columns.iter().zip(&b.columns) {
            for (u, v) in x.iter().zip(y) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn regime_with_and_without_tau() {
        let mut c = ScenarioConfig {
            tau: Some(10.0 * std::f64::consts::PI),
            ..Default::default()
        };
        let r = regime(&c).unwrap();
        let d = r.report.ratio("detuning_tau_over_2pi").unwrap();
        assert!((d.value - 15.0).abs() < 1e-12);
        assert!(!r.passes());

        c.tau = None;
        let r = regime(&c).unwrap();
        let [lo, hi] = r.feasible_band.unwrap();
        assert!(lo < r.report.tau && r.report.tau < hi);
        assert!(r.passes());
        let text = render_regime(&r).unwrap();
        assert!(text.contains("feasible band"));
        assert!(text.contains("\"verdict\": \"pass\""));
    }

    #[test]
    fn resonant_regime_warns_on_consistency() {
        let c = ScenarioConfig::parse("epsilon = 1\namplitude = 0.1\nmodels = resonant_magnus\ntau = 20").unwrap();
        let r = regime(&c).unwrap();
        let ratio = r.report.ratio("amplitude_consistency").unwrap();
        assert!((ratio.value - 0.317).abs() < 1e-3);
        assert_eq!(ratio.status, magnus_core::RatioStatus::Warn);
    }

    #[test]
    fn shifts_table() {
        let s = shifts(&ScenarioConfig::default()).unwrap();
        assert!(s.contains("4.166666666667e-02"));
        assert!(s.contains("2.500000000000e-02"));
        let zero = shifts(&ScenarioConfig::parse("amplitude = 0").unwrap()).unwrap();
        assert!(zero.contains("S_BS                         0.000000000000e+00"));
        let pole = shifts(&ScenarioConfig::parse("epsilon = 1\namplitude = 2\nmodels = rwa").unwrap()).unwrap();
        assert!(pole.contains("pole"));
    }

    #[test]
    fn interpolation() {
        let e = ExternalCurve {
            t: vec![0.0, 1.0, 3.0],
            fidelity: vec![1.0, 0.5, 0.7],
        };
        let v = e.resample(&[0.0, 0.5, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.75, 0.5, 0.6, 0.7]);
        assert!(matches!(e.resample(&[3.5]), Err(CliError::External(_))));
    }

    #[test]
    fn external_parsing() {
        let text = "# made elsewhere\nt_over_period, fidelity\n0, 1\n2, 0.9\n";
        let e = ExternalCurve::from_reader(text.as_bytes()).unwrap();
        assert_eq!(e.fidelity, vec![1.0, 0.9]);
        assert!(ExternalCurve::from_reader("t,fidelity\n0,1\n1,1\n".as_bytes()).is_err());
        assert!(ExternalCurve::from_reader("t_over_period,fidelity\n1,1\n0,1\n".as_bytes()).is_err());
    }
}
