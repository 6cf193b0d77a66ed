//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use epr_amp::fock::{
    self, evolve_lindblad, evolve_unitary, lindblad_rate_bound, pq_hamiltonian, pure_density,
    tmsv_state, Converged, FockInput, FockSpace, HamiltonianForm,
};
use epr_amp::metrology::{self, Observable};
use epr_amp::scenario::{self, parse_config};
use epr_amp::{pq, raman, GaussianState, PqAmpParams, RamanParams};
use nalgebra::{DMatrix, DVector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn tmsv(r: f64) -> GaussianState {
    GaussianState::vacuum(2).unwrap().two_mode_squeeze(r, 1.0).unwrap()
}

fn conserved(s: &GaussianState, eps: f64) -> [f64; 4] {
    let m = s.epr_moments(eps).unwrap();
    [m.var_q, m.var_p, m.mean_q, m.mean_p]
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Oracle columns `[var_q, var_p, mean_q, mean_p, n1, n2]` per μ for a TMSV
/// input `r` under `kPQ` with `k = 1`.
fn pq_oracle(r: f64, eps: f64, mus: &[f64], dim: usize, cap: usize) -> Result<Converged<Vec<f64>>, String> {
    let space = ok(FockSpace::with_caps(2, dim, cap, 256))?;
    ok(fock::with_convergence(&space, |s| {
        let psi = tmsv_state(s, r)?.vector;
        let h = pq_hamiltonian(s, 1.0, eps, HamiltonianForm::Pq)?;
        let mut out = Vec::new();
        for &mu in mus {
            let e = fock::expectations(FockInput::Pure(&evolve_unitary(&psi, &h, 2.0 * mu)?), s, eps, 1.0)?;
            out.extend([e.var_q, e.var_p, e.mean_q, e.mean_p, e.n1, e.n2]);
        }
        Ok(out)
    }))
}

fn c1_integrals_of_motion() -> Outcome {
    let mus: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let mut engine_drift = 0.0f64;
    let mut oracle_drift = 0.0f64;
    let mut oracle_delta = 0.0f64;
    for &r in &[0.5, 1.0] {
        for &eps in &[1.0, -1.0] {
            // Engine: every combination of source and amplifier sign.
            for &src in &[1.0, -1.0] {
                let s0 = tmsv(r * src);
                let c0 = conserved(&s0, eps);
                for &mu in &mus {
                    let s = ok(pq::evolve(&s0, &ok(PqAmpParams::new(1.0, 2.0 * mu, eps))?))?;
                    engine_drift = engine_drift.max(max_abs_diff(&c0, &conserved(&s, eps)));
                }
            }
            // Oracle: source squeezed in the amplifier's own Q, P.
            let o = pq_oracle(r * eps, eps, &[0.0, 0.25, 0.5, 0.75, 1.0], 30, 4096)?;
            let cons_idx = |j: usize| (0..4).map(move |c| 6 * j + c);
            let delta = (0..5)
                .flat_map(cons_idx)
                .map(|i| (o.value[i] - o.refined[i]).abs())
                .fold(0.0, f64::max);
            oracle_delta = oracle_delta.max(delta);
            for j in 1..5 {
                for (a, b) in cons_idx(0).zip(cons_idx(j)) {
                    oracle_drift = oracle_drift.max((o.value[a] - o.value[b]).abs());
                }
            }
        }
    }
    ensure(engine_drift <= 1e-12, || format!("engine drift {engine_drift:e} > 1e-12"))?;
    ensure(oracle_delta <= 1e-5, || format!("oracle D=30 convergence delta {oracle_delta:e} > 1e-5"))?;
    ensure(oracle_drift <= 1e-5, || format!("oracle drift {oracle_drift:e} > 1e-5"))?;
    Ok(format!(
        "engine drift {engine_drift:.1e}, oracle drift {oracle_drift:.1e} (D=30, delta {oracle_delta:.1e})"
    ))
}

fn c2_hamiltonian_forms() -> Outcome {
    let mut worst = 0.0f64;
    for &k in &[1.0, 2.0] {
        for &eps in &[1.0, -1.0] {
            for &d in &[10, 14] {
                let space = ok(FockSpace::new(2, d))?;
                let a = ok(pq_hamiltonian(&space, k, eps, HamiltonianForm::Pq))?;
                let b = ok(pq_hamiltonian(&space, k, eps, HamiltonianForm::Photonic))?;
                worst = worst.max(a.interior_deviation(&b, &space, d - 3));
            }
        }
    }
    ensure(worst <= 1e-10, || format!("interior deviation {worst:e} > 1e-10"))?;
    Ok(format!("max interior deviation {worst:.1e}"))
}

fn c3_gain_law() -> Outcome {
    let mus: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let s0 = tmsv(1.0);
    let mut n1 = Vec::new();
    for &mu in &mus {
        let s = ok(pq::evolve(&s0, &ok(PqAmpParams::new(1.0, 2.0 * mu, 1.0))?))?;
        n1.push(ok(s.mean_photon_number(0))?);
    }
    let v = DMatrix::from_fn(mus.len(), 3, |i, j| mus[i].powi(j as i32));
    let coef = ok(v.svd(true, true).solve(&DVector::from_vec(n1.clone()), 1e-14))?;
    let m = ok(s0.epr_moments(1.0))?;
    let target = m.var_q + m.var_p + m.mean_q.powi(2) + m.mean_p.powi(2);
    ensure((target - (-2.0f64).exp()).abs() <= 1e-14, || format!("<Q²+P²> = {target}"))?;
    let fit_err = (coef[2] - target).abs();
    ensure(fit_err <= 1e-6, || format!("quadratic coefficient {} vs {target}", coef[2]))?;

    let o = pq_oracle(1.0, 1.0, &mus, 40, 4096)?;
    ensure(o.is_converged(), || format!("oracle D=40 not converged (delta {:e})", o.delta))?;
    let curve_err = (0..mus.len())
        .map(|j| (o.value[6 * j + 4] - n1[j]).abs())
        .fold(0.0, f64::max);
    ensure(curve_err <= 1e-4, || format!("oracle curve deviation {curve_err:e} > 1e-4"))?;
    Ok(format!(
        "quadratic coefficient {:.12} vs e^-2 (error {fit_err:.1e}), oracle curve deviation {curve_err:.1e} (D=40)",
        coef[2]
    ))
}

fn c4_repeater_limit() -> Outcome {
    let mu = 1.0;
    let p = ok(PqAmpParams::new(1.0, 2.0 * mu, 1.0))?;
    let mut changes = Vec::new();
    for &r in &[1.0, 2.0, 3.0] {
        let s0 = tmsv(r);
        let (n1, _) = ok(pq::predicted_photon_numbers(&s0, &p))?;
        let dn = n1 - ok(s0.mean_photon_number(0))?;
        let bound = 2.0 * (-2.0 * r).exp() * (1.0 + mu);
        ensure(dn <= bound, || format!("r={r}: change {dn:e} > bound {bound:e}"))?;
        changes.push(dn);
    }
    ensure(changes.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {changes:?}"))?;

    let mut oracle_err = 0.0f64;
    for &(r, dim, cap) in &[(1.0, 40, 4096), (1.5, 90, 10_000)] {
        let o = pq_oracle(r, 1.0, &[0.0, mu], dim, cap)?;
        ensure(o.is_converged(), || format!("oracle r={r} D={dim} not converged ({:e})", o.delta))?;
        let dn_oracle = o.value[10] - o.value[4];
        let s0 = tmsv(r);
        let dn = ok(pq::predicted_photon_numbers(&s0, &p))?.0 - ok(s0.mean_photon_number(0))?;
        oracle_err = oracle_err.max((dn_oracle - dn).abs());
    }
    ensure(oracle_err <= 1e-4, || format!("oracle deviation {oracle_err:e} > 1e-4"))?;
    Ok(format!(
        "changes {:.3e} > {:.3e} > {:.3e}, oracle deviation {oracle_err:.1e} (r = 1, 1.5)",
        changes[0], changes[1], changes[2]
    ))
}

fn q_p_covariance(s: &GaussianState, eps: f64) -> f64 {
    let q = DVector::from_vec(vec![1.0, 0.0, -eps, 0.0]);
    let p = DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0 / eps]);
    (q.transpose() * s.cov() * p)[(0, 0)]
}

fn c5_raman_conservation() -> Outcome {
    let p = ok(RamanParams::new(0.2, 1.0, 2.0, 2.0, 1.0))?;
    let t_end = 0.5 * p.gamma_perp() / (p.g().powi(2) * (p.n0_atoms() + p.n1_atoms()));
    let segments = 5;
    let dt = t_end / segments as f64;

    let s0 = tmsv(0.5);
    let mut c0 = conserved(&s0, 1.0).to_vec();
    c0.push(q_p_covariance(&s0, 1.0));
    let mut s = s0.clone();
    let mut engine_drift = 0.0f64;
    for _ in 0..segments {
        s = ok(raman::evolve_moments(&s, &p, dt, 50))?;
        let mut c = conserved(&s, 1.0).to_vec();
        c.push(q_p_covariance(&s, 1.0));
        engine_drift = engine_drift.max(max_abs_diff(&c0, &c));
    }
    ensure(engine_drift <= 1e-9, || format!("engine drift {engine_drift:e} > 1e-9"))?;

    let track = |dim: usize| -> Result<Vec<Vec<f64>>, String> {
        let sp = ok(FockSpace::with_caps(2, dim, 4096, 900))?;
        let steps = (ok(lindblad_rate_bound(&p, &sp))? * dt).ceil().max(1.0) as usize;
        let mut rho = ok(pure_density(&sp, &ok(tmsv_state(&sp, 0.5))?.vector))?;
        let mut rows = Vec::new();
        for i in 0..=segments {
            if i > 0 {
                rho = ok(evolve_lindblad(&rho, &p, &sp, dt, steps))?;
            }
            let e = ok(fock::expectations(FockInput::Mixed(&rho), &sp, 1.0, p.g()))?;
            rows.push(vec![e.var_q, e.var_p, e.mean_q, e.mean_p]);
        }
        Ok(rows)
    };
    let delta_of = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter().zip(b).map(|(x, y)| max_abs_diff(x, y)).fold(0.0, f64::max)
    };
    // Start at D=14 and refine in steps of 5 until the D / D+5 check passes.
    let mut notes = Vec::new();
    let mut dim = 14;
    let mut a = track(dim)?;
    let (dim, a, delta) = loop {
        let b = track(dim + 5)?;
        let delta = delta_of(&a, &b);
        if delta <= 1e-5 || dim >= 19 {
            break (dim, a, delta);
        }
        notes.push(format!("D={dim} not converged (delta {delta:.1e})"));
        dim += 5;
        a = b;
    };
    let oracle_drift = a.iter().map(|x| max_abs_diff(&a[0], x)).fold(0.0, f64::max);
    ensure(delta <= 1e-5, || format!("oracle D={dim} convergence delta {delta:e} > 1e-5"))?;
    ensure(oracle_drift <= 1e-5, || format!("oracle drift {oracle_drift:e} > 1e-5"))?;
    notes.push(format!("oracle drift {oracle_drift:.1e} at D={dim} (delta {delta:.1e})"));
    Ok(format!(
        "engine drift {engine_drift:.1e}; {} up to g²Nt/γ⊥ = 0.5",
        notes.join("; ")
    ))
}

fn c6_raman_identities() -> Outcome {
    let diff = |s: &GaussianState| s.mean_photon_number(0).unwrap() - s.mean_photon_number(1).unwrap();
    let h = 1e-3;
    let mut worst = 0.0f64;
    for &(n0, n1) in &[(1.0, 3.0), (3.0, 1.0), (0.0, 2.0)] {
        let p = ok(RamanParams::new(0.2, 1.0, n0, n1, 1.0))?;
        let start = ok(GaussianState::coherent(&[(0.4, 0.1), (-0.2, 0.3)]))?.two_mode_squeeze(0.3, 1.0).unwrap();
        let mut cur = start;
        for _ in 0..5 {
            let back = cur.clone();
            let mid = ok(raman::evolve_moments(&back, &p, h, 2))?;
            let fwd = ok(raman::evolve_moments(&mid, &p, h, 2))?;
            let slope = (diff(&fwd) - diff(&back)) / (2.0 * h);
            let rates = ok(raman::photon_rates(&mid, &p))?;
            let expected = 2.0 / p.gamma_perp() * (n1 - n0) * rates.bbdag;
            worst = worst.max((slope - expected).abs());
            cur = ok(raman::evolve_moments(&fwd, &p, 0.5, 50))?;
        }
    }
    ensure(worst <= 1e-5, || format!("difference-rate mismatch {worst:e} > 1e-5"))?;

    let p = ok(RamanParams::new(0.2, 1.0, 2.0, 2.0, 1.0))?;
    let s0 = tmsv(0.5);
    let s1 = ok(raman::evolve_moments(&s0, &p, 3.0, 300))?;
    let drift = (diff(&s1) - diff(&s0)).abs();
    ensure(drift <= 1e-9, || format!("N1 = N0 difference drift {drift:e} > 1e-9"))?;

    let expected = p.g().powi(2) / p.gamma_perp() * (p.n0_atoms() + p.n1_atoms());
    let rates = ok(raman::photon_rates(&ok(GaussianState::vacuum(2))?, &p))?;
    let space = ok(FockSpace::new(2, 12))?;
    let rho = ok(pure_density(&space, &ok(fock::number_state(&space, &[0, 0]))?))?;
    let dt = 1e-3;
    let out = ok(evolve_lindblad(&rho, &p, &space, dt, 10))?;
    let e = ok(fock::expectations(FockInput::Mixed(&out), &space, 1.0, p.g()))?;
    let rate_err = [rates.dn1_dt, rates.dn2_dt, e.n1 / dt, e.n2 / dt]
        .iter()
        .map(|r| (r - expected).abs())
        .fold(0.0, f64::max);
    ensure(rate_err <= 1e-5, || format!("vacuum growth rate error {rate_err:e} > 1e-5"))?;
    Ok(format!(
        "difference-rate mismatch {worst:.1e}, equal-population drift {drift:.1e}, growth rate error {rate_err:.1e}"
    ))
}

fn c7_analytic_gain() -> Outcome {
    let s0 = tmsv(2.0);
    let n10 = ok(s0.mean_photon_number(0))?;
    let n20 = ok(s0.mean_photon_number(1))?;
    let mut worst = 0.0f64;
    for &(n0, n1) in &[(50.0, 50.0), (2.0, 2.0), (1.0, 3.0), (3.0, 1.0), (0.0, 10.0)] {
        let p = ok(RamanParams::new(0.1, 1.0, n0, n1, 1.0))?;
        let t_end = 0.2 * p.gamma_perp() / (p.g().powi(2) * (n0 + n1));
        let mut s = s0.clone();
        for i in 1..=10 {
            let t = t_end * i as f64 / 10.0;
            s = ok(raman::evolve_moments(&s, &p, t_end / 10.0, 20))?;
            let (a1, a2) = ok(raman::analytic_photon_number(n10, n20, &p, t))?;
            for (num, an) in [(ok(s.mean_photon_number(0))?, a1), (ok(s.mean_photon_number(1))?, a2)] {
                worst = worst.max(((num - an) / an).abs());
            }
        }
    }
    ensure(worst <= 0.02, || format!("relative deviation {worst:e} > 2%"))?;
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn c8_metrology() -> Outcome {
    let vac = ok(GaussianState::vacuum(2))?;
    let mut levels = Vec::new();
    for mode in 0..2 {
        for &theta in &[0.0, 0.7, std::f64::consts::FRAC_PI_2, 2.0] {
            levels.push(ok(metrology::squeezing_level(&vac, mode, theta))?.level);
        }
    }
    for &eps in &[1.0, -1.0] {
        levels.push(ok(metrology::zero_frequency_spectrum(&vac, Observable::Q { epsilon: eps }))?.level);
        levels.push(ok(metrology::zero_frequency_spectrum(&vac, Observable::P { epsilon: eps }))?.level);
        levels.push(ok(metrology::epr_suppression(&vac, eps))?.level);
    }
    ensure(levels.iter().all(|&l| l == 1.0), || format!("vacuum levels {levels:?}"))?;

    let engine = ok(metrology::epr_suppression(&tmsv(1.0), 1.0))?.level;
    let space = ok(FockSpace::new(2, 30))?;
    let o = ok(fock::with_convergence(&space, |s| {
        let e = fock::expectations(FockInput::Pure(&tmsv_state(s, 1.0)?.vector), s, 1.0, 1.0)?;
        Ok(vec![e.var_q + e.var_p])
    }))?;
    ensure(o.is_converged(), || format!("oracle D=30 not converged ({:e})", o.delta))?;
    let e2 = (-2.0f64).exp();
    let err = (o.value[0] - e2).abs().max((engine - e2).abs());
    ensure(err <= 1e-6, || format!("suppression {engine} / oracle {} vs e^-2", o.value[0]))?;
    Ok(format!(
        "{} vacuum levels exactly 1, TMSV r=1 suppression {engine:.10} / oracle {:.10}",
        levels.len(),
        o.value[0]
    ))
}

const SCENARIOS: &[&str] = &[
    r#"{"source": "vacuum", "oracle": {"enabled": true, "dim": 8}}"#,
    r#"{"source": {"opo": {"r": 1}}, "amplifier": {"pq": {"k": 1, "t_max": 2, "samples": 11}},
        "oracle": {"enabled": true, "dim": 40}}"#,
    r#"{"source": {"opo": {"r": -1, "epsilon": -1}},
        "amplifier": {"pq": {"k": 1, "epsilon": -1, "t_max": 2, "samples": 5}},
        "oracle": {"enabled": true, "dim": 30}}"#,
    r#"{"source": {"opo": {"r": 3}}, "amplifier": {"pq": {"k": 1, "t_max": 2, "samples": 3}}}"#,
    r#"{"source": {"opo": {"r": 0.5}},
        "amplifier": {"raman": {"g": 0.2, "gamma_perp": 1, "n0": 2, "n1": 2, "t_max": 3.125,
                                 "samples": 6, "steps_per_sample": 50}},
        "oracle": {"enabled": true, "dim": 14}}"#,
    r#"{"source": {"opo": {"r": 2}},
        "amplifier": {"raman": {"g": 0.1, "gamma_perp": 1, "n0": 50, "n1": 50, "t_max": 1,
                                 "samples": 11, "steps_per_sample": 20}}}"#,
    r#"{"source": {"coherent": {"alpha": [[0.4, 0.1], [-0.2, 0.3]]}},
        "amplifier": {"raman": {"g": 0.2, "gamma_perp": 1, "n0": 1, "n1": 3, "t_max": 1,
                                 "samples": 5, "steps_per_sample": 40}},
        "oracle": {"enabled": true, "dim": 10}}"#,
];

fn c9_determinism() -> Outcome {
    let dir = ok(tempfile::tempdir())?;
    let mut bytes = 0;
    for (i, text) in SCENARIOS.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let s = ok(parse_config(text))?;
            let series = ok(scenario::run_scenario(&s))?;
            let summary = series.summary("run", &s, None);
            let csv = dir.path().join(format!("s{i}_{run}.csv"));
            let side = ok(scenario::write_outputs(&csv, &series, &summary))?;
            outputs.push((ok(std::fs::read(&csv))?, ok(std::fs::read(&side))?));
        }
        ensure(outputs[0] == outputs[1], || format!("scenario {i} outputs differ between runs"))?;
        bytes += outputs[0].0.len() + outputs[0].1.len();
    }
    Ok(format!("{} scenarios, {bytes} bytes of CSV + JSON identical across runs", SCENARIOS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("integrals of motion, parametric amplifier", c1_integrals_of_motion),
        ("pq and photonic Hamiltonian forms agree", c2_hamiltonian_forms),
        ("quadratic gain law", c3_gain_law),
        ("quantum-repeater limit", c4_repeater_limit),
        ("Raman conservation of Q, P moments", c5_raman_conservation),
        ("Raman photon-number identities", c6_raman_identities),
        ("analytic Raman gain", c7_analytic_gain),
        ("metrology normalization", c8_metrology),
        ("determinism", c9_determinism),
    ];
    // Honor a name filter so `cargo test <filter>` does not rerun the suite.
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    if filter.as_deref().is_some_and(|f| !"acceptance".contains(f)) {
        return;
    }
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
