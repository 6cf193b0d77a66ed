//! Config-driven batch runs: build a source state, apply an amplifier, sample
//! the diagnostics on a uniform time grid and optionally shadow every sample
//! with the truncated-Fock oracle.

mod config;
mod report;

pub use config::{
    parse_config, parse_value, set_param, Amplifier, Format, OracleConfig, OutputConfig, Scenario,
    Source,
};
pub use report::{
    sidecar_path, write_json, write_outputs, ColumnDeviations, DeviationReport, CSV_COLUMNS,
    ORACLE_COLUMNS,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    self, evolve_lindblad, evolve_unitary, lindblad_rate_bound, pq_hamiltonian, pure_density,
    tmsv_state, FockInput, FockSpace, HamiltonianForm, OperatorMatrix, CONVERGENCE_STEP,
};
use crate::gaussian::{GaussianState, UNCERTAINTY_TOL, VACUUM_VARIANCE};
use crate::metrology::{self, Observable};
use crate::{pq, raman};

/// Engine diagnostics at one sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    pub n1: f64,
    pub n2: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub suppression: f64,
    pub spectrum_q: f64,
    pub spectrum_p: f64,
    pub oracle: Option<OracleRow>,
}

/// Oracle values at truncation `dim`, with the change seen at `dim + 5`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub n1: f64,
    pub n2: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub epsilon: f64,
    pub rows: Vec<Row>,
    /// Engine state at every sample, in row order.
    pub states: Vec<GaussianState>,
}

fn diagnostics(t: f64, s: &GaussianState, eps: f64) -> Result<Row> {
    let m = s.epr_moments(eps)?;
    Ok(Row {
        t,
        n1: s.mean_photon_number(0)?,
        n2: s.mean_photon_number(1)?,
        var_q: m.var_q,
        var_p: m.var_p,
        suppression: metrology::epr_suppression(s, eps)?.level,
        spectrum_q: metrology::zero_frequency_spectrum(s, Observable::Q { epsilon: eps })?.level,
        spectrum_p: metrology::zero_frequency_spectrum(s, Observable::P { epsilon: eps })?.level,
        oracle: None,
    })
}

fn check_row(index: usize, row: &Row, state: &GaussianState) -> Result<()> {
    let values = [row.n1, row.n2, row.var_q, row.var_p, row.suppression];
    let last_good = match index {
        0 => "none".to_string(),
        i => (i - 1).to_string(),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericOverflow(format!(
            "non-finite diagnostics at row {index} (t = {}); last good row: {last_good}",
            row.t
        )));
    }
    let nu = state.min_symplectic_eigenvalue();
    if nu < VACUUM_VARIANCE - UNCERTAINTY_TOL {
        return Err(Error::NumericOverflow(format!(
            "row {index} (t = {}) violates the uncertainty bound (symplectic eigenvalue {nu}); last good row: {last_good}",
            row.t
        )));
    }
    Ok(())
}

/// Runs the engine, and the oracle if enabled, over the scenario's time grid.
pub fn run_scenario(s: &Scenario) -> Result<TimeSeries> {
    let eps = s.diagnostics_epsilon();
    let grid = s.time_grid();
    let initial = s.initial_state()?;
    let mut states = Vec::with_capacity(grid.len());
    match s.amplifier {
        Amplifier::None => states.push(initial),
        Amplifier::Pq { .. } => {
            let p = s.pq_params()?;
            for &t in &grid {
                states.push(pq::evolve(&initial, &p.with_time(t)?)?);
            }
        }
        Amplifier::Raman {
            steps_per_sample, ..
        } => {
            let p = s.raman_params()?;
            let mut cur = initial;
            for (i, &t) in grid.iter().enumerate() {
                if i > 0 {
                    cur = raman::evolve_moments(&cur, &p, t - grid[i - 1], steps_per_sample)
                        .map_err(|e| {
                            Error::NumericOverflow(format!(
                                "{e} while advancing to row {i}; last good row: {}",
                                i - 1
                            ))
                        })?;
                }
                states.push(cur.clone());
            }
        }
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (i, (&t, st)) in grid.iter().zip(&states).enumerate() {
        let row = diagnostics(t, st, eps)?;
        check_row(i, &row, st)?;
        rows.push(row);
    }
    if s.oracle.enabled {
        let oracle = run_oracle(s, &grid, eps)?;
        for (row, o) in rows.iter_mut().zip(oracle) {
            row.oracle = Some(o);
        }
    }
    Ok(TimeSeries {
        epsilon: eps,
        rows,
        states,
    })
}

/// Runs the scenario with the oracle and summarizes engine/oracle deviations.
pub fn compare_oracle(s: &Scenario) -> Result<(TimeSeries, DeviationReport)> {
    if !s.oracle.enabled {
        return Err(Error::Config {
            path: "oracle.enabled".into(),
            message: "compare needs the oracle enabled".into(),
        });
    }
    let series = run_scenario(s)?;
    let report = DeviationReport::from_series(&series, &s.oracle);
    Ok((series, report))
}

enum FockState {
    Pure(nalgebra::DVector<Complex64>),
    Mixed(OperatorMatrix),
}

fn at_dim(dim: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Oracle {
        dim,
        source: Box::new(e),
    }
}

fn oracle_trajectory(s: &Scenario, space: &FockSpace, grid: &[f64], eps: f64) -> Result<Vec<[f64; 4]>> {
    let psi = match &s.source {
        Source::Vacuum => fock::number_state(space, &[0, 0])?,
        Source::Coherent { alpha } => {
            let a: Vec<Complex64> = alpha.iter().map(|z| Complex64::new(z[0], z[1])).collect();
            fock::coherent_state(space, &a)?.0
        }
        // The squeezer is the same physical operation for either sign of ε.
        Source::Opo { r, .. } => tmsv_state(space, *r)?.vector,
    };
    let mut state = match s.amplifier {
        Amplifier::Raman { .. } => FockState::Mixed(pure_density(space, &psi)?),
        _ => FockState::Pure(psi),
    };
    let g = match s.amplifier {
        Amplifier::Raman { g, .. } => g,
        _ => 1.0,
    };
    let h = match s.amplifier {
        Amplifier::Pq { k, epsilon, .. } => Some(pq_hamiltonian(space, k, epsilon, HamiltonianForm::Pq)?),
        _ => None,
    };
    let raman = match s.amplifier {
        Amplifier::Raman {
            steps_per_sample, ..
        } => {
            let p = s.raman_params()?;
            // Step count is set from the larger space so both truncations share it.
            let refined = space.with_dim(s.oracle.dim + CONVERGENCE_STEP)?;
            Some((p, steps_per_sample, lindblad_rate_bound(&p, &refined)?))
        }
        _ => None,
    };

    let mut out = Vec::with_capacity(grid.len());
    for (i, &t) in grid.iter().enumerate() {
        if i > 0 {
            let dt = t - grid[i - 1];
            state = match state {
                FockState::Pure(v) => match &h {
                    Some(h) => FockState::Pure(evolve_unitary(&v, h, dt)?),
                    None => FockState::Pure(v),
                },
                FockState::Mixed(rho) => {
                    let (p, steps, bound) = raman.as_ref().expect("mixed state only for raman");
                    let n = (*steps).max((bound * dt).ceil() as usize);
                    FockState::Mixed(evolve_lindblad(&rho, p, space, dt, n)?)
                }
            };
        }
        let e = match &state {
            FockState::Pure(v) => fock::expectations(FockInput::Pure(v), space, eps, g)?,
            FockState::Mixed(rho) => fock::expectations(FockInput::Mixed(rho), space, eps, g)?,
        };
        out.push([e.n1, e.n2, e.var_q, e.var_p]);
    }
    Ok(out)
}

fn run_oracle(s: &Scenario, grid: &[f64], eps: f64) -> Result<Vec<OracleRow>> {
    let o = &s.oracle;
    let space = FockSpace::with_caps(2, o.dim, o.vector_cap, o.density_cap)
        .map_err(at_dim(o.dim))?;
    let refined = space
        .with_dim(o.dim + CONVERGENCE_STEP)
        .map_err(at_dim(o.dim + CONVERGENCE_STEP))?;
    let coarse = oracle_trajectory(s, &space, grid, eps).map_err(at_dim(o.dim))?;
    let fine = oracle_trajectory(s, &refined, grid, eps).map_err(at_dim(o.dim + CONVERGENCE_STEP))?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| OracleRow {
            n1: a[0],
            n2: a[1],
            var_q: a[2],
            var_p: a[3],
            delta: a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        })
        .collect())
}
