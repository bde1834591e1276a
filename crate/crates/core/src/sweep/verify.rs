// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-checks runnable from the command line.

use nalgebra::SVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    embed, initial_state, integrate, project, steady_state, steady_state_full, InitialState,
    IntegrateOptions,
};
use crate::error::{Error, Result};
use crate::model::{BathParams, DissipationModel, MachineParams};
use crate::operators::{
    dark_projector, dark_state, jump_operators, liouvillian, reduce_to_w, KET_010, KET_101,
    N_REDUCED,
};
use crate::thermo::evaluate;
use crate::transcribed::{discrepancies, KNOWN_DISCREPANCIES};

/// Seed of the randomized checks.
pub const VERIFY_SEED: u64 = 0x5eed_f41d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl VerifyLevel {
    fn draws(&self) -> usize {
        match self {
            VerifyLevel::Fast => 10,
            VerifyLevel::Full => 100,
        }
    }
}

impl std::str::FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(Error::Config(format!("unknown verify level '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// A random valid instance. With `unit_alpha_share > 0`, that fraction of
/// draws sits exactly at α = 1.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    alpha_max: f64,
    unit_alpha_share: f64,
) -> (MachineParams, BathParams) {
    let e2 = rng.random_range(2.0..8.0);
    let e1 = e2 * rng.random_range(0.1..0.9);
    let g = rng.random_range(1e-4..0.02);
    let b1 = rng.random_range(0.5..2.0);
    let b2 = b1 * rng.random_range(0.1..1.0);
    let b3 = b2 * rng.random_range(0.05..1.0);
    let gamma0 = [(); 3].map(|_| rng.random_range(1e-3..0.05));
    let alpha = if rng.random_bool(unit_alpha_share) {
        1.0
    } else {
        rng.random_range(0.0..=alpha_max)
    };
    let model = if rng.random_bool(0.5) {
        DissipationModel::Coherent
    } else {
        DissipationModel::IncoherentCorrelated
    };
    let machine = MachineParams::new(e1, e2, g).expect("drawn inside the valid domain");
    let baths =
        BathParams::new([b1, b2, b3], gamma0, alpha, model).expect("drawn inside the valid domain");
    (machine, baths)
}

/// Largest componentwise gap between the reduced steady state and the
/// projected full-Liouvillian steady state (same dark population).
pub fn oracle_deviation(
    machine: &MachineParams,
    baths: &BathParams,
    init: &InitialState,
) -> Result<f64> {
    let l = liouvillian(machine, baths)?;
    let w = reduce_to_w(&l)?;
    let p0 = initial_state(init, machine, baths)?;
    let reduced = steady_state(&w, &p0)?;
    let full = steady_state_full(&l, Some(&embed(&p0)))?;
    let (projected, _) = project(&full);
    Ok(reduced
        .state
        .0
        .iter()
        .zip(&projected.0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Largest relative deviation of |Q̇_i/Q̇_j| from E_i/E_j.
pub fn ratio_law_deviation(q: [f64; 3], energies: [f64; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let observed = (q[i] / q[j]).abs();
        let expected = energies[i] / energies[j];
        worst = worst.max((observed / expected - 1.0).abs());
    }
    worst
}

fn check(name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult {
            name: name.into(),
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn transcription_ledger() -> Result<(bool, String)> {
    let (machine, baths) = crate::transcribed::audit_point();
    let found: Vec<(usize, usize)> = discrepancies(&machine, &baths, 1e-12)?
        .iter()
        .map(|d| (d.row, d.col))
        .collect();
    let dev = oracle_deviation(&machine, &baths, &InitialState::ThermalProduct)?;
    let passed = found == KNOWN_DISCREPANCIES && dev <= 1e-9;
    Ok((
        passed,
        format!(
            "{} discrepant entries (expected {}); derived W vs oracle {dev:.2e}",
            found.len(),
            KNOWN_DISCREPANCIES.len()
        ),
    ))
}

fn oracle_equivalence(draws: usize) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let (m, b) = random_instance(&mut rng, 1.0, 0.2);
        let init = if rng.random_bool(0.5) {
            InitialState::ThermalProduct
        } else {
            InitialState::DarkOrthogonal
        };
        worst = worst.max(oracle_deviation(&m, &b, &init)?);
    }
    Ok((
        worst <= 1e-9,
        format!("{draws} draws, max deviation {worst:.2e} (tol 1e-9)"),
    ))
}

fn trace_preservation(draws: usize) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 1);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let (m, b) = random_instance(&mut rng, 1.0, 0.2);
        let w = reduce_to_w(&liouvillian(&m, &b)?)?;
        let mat = w.matrix();
        for col in 0..N_REDUCED {
            let s: f64 = (0..8).map(|r| mat[(r, col)]).sum();
            worst = worst.max(s.abs() / w.norm());
        }
    }
    Ok((
        worst <= 1e-12,
        format!("{draws} draws, max |1ᵀW|/‖W‖ {worst:.2e}"),
    ))
}

fn laws(draws: usize) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 2);
    let (mut ratio, mut first, mut sigma_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..draws {
        let (m, b) = random_instance(&mut rng, 0.99, 0.0);
        let r = evaluate(&m, &b, &InitialState::ThermalProduct)?.report;
        ratio = ratio.max(ratio_law_deviation(r.q_dot, m.energies()));
        let scale = r.q_dot.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        first = first.max(r.q_dot.iter().sum::<f64>().abs() / scale);
        sigma_min = sigma_min.min(r.sigma_dot);
    }
    let passed = ratio <= 1e-6 && first <= 1e-10 && sigma_min >= -1e-12;
    Ok((passed, format!("{draws} draws: ratio law {ratio:.2e}, first law {first:.2e}, min entropy production {sigma_min:.3e}")))
}

fn gibbs_stationarity() -> Result<(bool, String)> {
    let m = MachineParams::new(0.8, 5.0, 0.005)?;
    let mut worst: f64 = 0.0;
    for model in [
        DissipationModel::Coherent,
        DissipationModel::IncoherentCorrelated,
    ] {
        for alpha in [0.0, 0.5, 1.0] {
            let b = BathParams::symmetric([0.7; 3], 0.01, alpha, model)?;
            let r = evaluate(&m, &b, &InitialState::ThermalProduct)?.report;
            worst = r
                .q_dot
                .iter()
                .chain([&r.sigma_dot])
                .fold(worst, |a, x| a.max(x.abs()));
        }
    }
    Ok((
        worst <= 1e-10,
        format!("equal temperatures: max |current| {worst:.2e}"),
    ))
}

fn dark_state_physics() -> Result<(bool, String)> {
    let m = MachineParams::new(0.8, 5.0, 0.01)?;
    let b = BathParams::symmetric([1.0, 0.5, 0.05], 0.01, 1.0, DissipationModel::Coherent)?;
    let psi = dark_state();
    let annihilated = jump_operators(1.0, DissipationModel::Coherent)
        .iter()
        .map(|j| (j.op * psi).norm())
        .fold(0.0, f64::max);
    let l = liouvillian(&m, &b)?;
    let stationary = l.apply(&dark_projector()).norm();
    let w = reduce_to_w(&l)?;
    let mut d = SVector::<f64, N_REDUCED>::zeros();
    d[KET_010] = 0.5;
    d[KET_101] = 0.5;
    d[8] = -1.0;
    let left_null = (d.transpose() * w.matrix()).norm() / w.norm();
    let p0 = initial_state(&InitialState::ThermalProduct, &m, &b)?;
    let traj = integrate(
        &w,
        &p0,
        2000.0,
        &IntegrateOptions {
            samples: 21,
            ..Default::default()
        },
    )?;
    let drift = traj
        .states
        .iter()
        .map(|s| (s.dark_population() - p0.dark_population()).abs())
        .fold(0.0, f64::max);
    let passed = annihilated <= 1e-14 && stationary <= 1e-14 && left_null <= 1e-12 && drift <= 1e-9;
    Ok((
        passed,
        format!("|s_i ψ_D| {annihilated:.1e}, |L(P_D)| {stationary:.1e}, |dᵀW|/‖W‖ {left_null:.1e}, p_D drift {drift:.1e}"),
    ))
}

/// Runs the invariant, oracle and transcription checks.
pub fn verify(level: VerifyLevel) -> VerifyReport {
    let draws = level.draws();
    let checks = vec![
        check("transcription-ledger", transcription_ledger()),
        check("oracle-equivalence", oracle_equivalence(draws)),
        check("trace-preservation", trace_preservation(draws)),
        check("ratio-and-laws", laws(draws)),
        check("gibbs-stationarity", gibbs_stationarity()),
        check("dark-state", dark_state_physics()),
    ];
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport {
        level,
        passed,
        checks,
    }
}
