// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Steady-state thermodynamics: heat currents, COP, entropy production,
//! effective temperatures and the COP at maximum cooling power.

use serde::{Deserialize, Serialize};

use crate::dynamics::{embed, initial_state, steady_state, InitialState, SteadySolution};
use crate::error::{Error, Result};
use crate::model::{cooling_window_max_e1, rates, BathParams, MachineParams};
use crate::operators::{
    bath_dissipator, free_hamiltonian, interaction_hamiltonian, jump_operators, liouvillian,
    reduce_to_w,
};

/// Heat currents in natural units (k_B·T1 per unit time), positive when
/// heat flows from the reservoir into the machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatCurrents {
    /// Tr[(H1 + H2 + H3)·L_i(π)].
    pub q_dot: [f64; 3],
    /// Tr[H_int·L_i(π)], dropped from `q_dot` under the local approach.
    pub interaction: [f64; 3],
}

impl HeatCurrents {
    /// |Σ Q̇_i| / max |Q̇_i| (zero when all currents vanish).
    pub fn first_law_residual(&self) -> f64 {
        let scale = self.q_dot.iter().map(|q| q.abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        self.q_dot.iter().sum::<f64>().abs() / scale
    }

    /// max_i |Tr[H_int·L_i(π)]| / |Q̇_i|, skipping currents below `floor`.
    pub fn interaction_correction(&self, floor: f64) -> f64 {
        (0..3)
            .filter(|&i| self.q_dot[i].abs() > floor)
            .map(|i| self.interaction[i].abs() / self.q_dot[i].abs())
            .fold(0.0, f64::max)
    }
}

pub fn heat_currents(
    solution: &SteadySolution,
    machine: &MachineParams,
    baths: &BathParams,
) -> Result<HeatCurrents> {
    let rates = rates(machine, baths)?;
    let jumps = jump_operators(baths.alpha(), baths.model());
    let rho = embed(&solution.state);
    let h0 = free_hamiltonian(machine);
    let hint = interaction_hamiltonian(machine);
    let mut q_dot = [0.0; 3];
    let mut interaction = [0.0; 3];
    for bath in 0..3 {
        let d = bath_dissipator(bath, &jumps, &rates, &rho);
        q_dot[bath] = (h0 * d).trace().re;
        interaction[bath] = (hint * d).trace().re;
    }
    Ok(HeatCurrents { q_dot, interaction })
}

/// η = Q̇1/Q̇3.
pub fn cop(q: [f64; 3]) -> Result<f64> {
    if q[2] == 0.0 || !q[2].is_finite() {
        return Err(Error::UndefinedCop);
    }
    Ok(q[0] / q[2])
}

/// Σ̇ = −Σ β_i Q̇_i, cross-checked against Q̇3(β2 − β3) − Q̇1(β1 − β2).
///
/// Currents are expected in units of the bare rate γ0; the absolute
/// tolerances (1e-12) refer to those units.
pub fn entropy_production(q: [f64; 3], baths: &BathParams) -> Result<f64> {
    let beta = baths.beta();
    let direct = -(0..3).map(|i| beta[i] * q[i]).sum::<f64>();
    let reduced = q[2] * (beta[1] - beta[2]) - q[0] * (beta[0] - beta[1]);
    let scale = (0..3).map(|i| (beta[i] * q[i]).abs()).fold(0.0, f64::max);
    if (direct - reduced).abs() > 1e-10 * scale + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "heat currents violate the first law: entropy production forms differ ({direct:.3e} vs {reduced:.3e})"
        )));
    }
    if direct < -1e-12 {
        return Err(Error::SecondLawViolation(direct));
    }
    Ok(direct)
}

/// Gibbs-ratio inverse temperature ln(π0/π1)/E_i of qubit `qubit` (0-based).
pub fn effective_beta(
    solution: &SteadySolution,
    machine: &MachineParams,
    qubit: usize,
) -> Result<f64> {
    let (p0, p1) = solution.state.marginal(qubit);
    if p0 <= 0.0 || p1 <= 0.0 {
        return Err(Error::ZeroMarginal { qubit });
    }
    Ok((p0 / p1).ln() / machine.energies()[qubit])
}

/// Thermodynamic summary of a steady state. Currents and entropy production
/// are expressed in units of the cold-bath rate γ0⁽¹⁾.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub q_dot: [f64; 3],
    /// `None` at degenerate points where Q̇3 vanishes.
    pub cop: Option<f64>,
    pub sigma_dot: f64,
    pub beta_eff: [f64; 3],
    pub cooling: bool,
    pub hint_correction: f64,
    pub first_law_residual: f64,
}

/// Currents below this fraction of γ0·E_i count as zero.
const NEGLIGIBLE_CURRENT: f64 = 1e-12;

pub fn thermo_report(
    solution: &SteadySolution,
    machine: &MachineParams,
    baths: &BathParams,
) -> Result<ThermoReport> {
    let currents = heat_currents(solution, machine, baths)?;
    let gamma_ref = baths.gamma0()[0];
    let energies = machine.energies();
    let q = currents.q_dot;
    let q_scaled = q.map(|x| x / gamma_ref);
    let sigma = entropy_production(q_scaled, baths)?;
    let cop = if q[2].abs() > NEGLIGIBLE_CURRENT * gamma_ref * energies[2] {
        Some(cop(q)?)
    } else {
        None
    };
    let mut beta_eff = [0.0; 3];
    for (i, b) in beta_eff.iter_mut().enumerate() {
        *b = effective_beta(solution, machine, i)?;
    }
    let floor = NEGLIGIBLE_CURRENT * gamma_ref * machine.min_gap();
    Ok(ThermoReport {
        q_dot: q_scaled,
        cop,
        sigma_dot: sigma,
        beta_eff,
        cooling: q[0] >= 0.0,
        hint_correction: currents.interaction_correction(floor),
        first_law_residual: currents.first_law_residual(),
    })
}

/// A fully evaluated operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub solution: SteadySolution,
    pub report: ThermoReport,
}

/// Builds the generator, solves for the steady state and evaluates the
/// thermodynamics in one go.
pub fn evaluate(
    machine: &MachineParams,
    baths: &BathParams,
    init: &InitialState,
) -> Result<OperatingPoint> {
    let l = liouvillian(machine, baths)?;
    let w = reduce_to_w(&l)?;
    let p0 = initial_state(init, machine, baths)?;
    let solution = steady_state(&w, &p0)?;
    let report = thermo_report(&solution, machine, baths)?;
    Ok(OperatingPoint { solution, report })
}

/// Grid and tolerance for the maximum-power search over E1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E1Grid {
    /// Interior grid points strictly inside (0, E1_max).
    pub points: usize,
    /// Golden-section bracket width at termination, relative to E1_max.
    pub rel_tol: f64,
}

impl Default for E1Grid {
    fn default() -> Self {
        Self {
            points: 64,
            rel_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPowerPoint {
    pub e1: f64,
    /// Cooling power in γ0⁽¹⁾ units.
    pub q1: f64,
    pub eta: f64,
    /// Entropy production at the maximizer, γ0⁽¹⁾ units.
    pub sigma_dot: f64,
    /// Grid scan found more than one local maximum.
    pub multimodal: bool,
}

/// Maximizes the cooling power over E1 at fixed E2 and g, then reports the
/// COP at the maximizer.
pub fn cop_at_max_power(
    e2: f64,
    g: f64,
    baths: &BathParams,
    init: &InitialState,
    grid: &E1Grid,
) -> Result<MaxPowerPoint> {
    let e_max = match cooling_window_max_e1(baths, e2) {
        Ok(e) => e,
        Err(Error::CarnotUndefined) => e2,
        Err(e) => return Err(e),
    };
    if !(e_max > 0.0) {
        return Err(Error::EmptyCoolingWindow);
    }
    let n = grid.points.max(3);
    let q1_at = |e1: f64| -> Result<f64> {
        let m = MachineParams::new(e1, e2, g)?;
        Ok(evaluate(&m, baths, init)?.report.q_dot[0])
    };
    let xs: Vec<f64> = (1..=n).map(|k| e_max * k as f64 / (n + 1) as f64).collect();
    let qs = xs.iter().map(|&x| q1_at(x)).collect::<Result<Vec<f64>>>()?;

    let best = qs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    let local_maxima = (0..n)
        .filter(|&k| {
            let left = if k == 0 { f64::NEG_INFINITY } else { qs[k - 1] };
            let right = if k + 1 == n {
                f64::NEG_INFINITY
            } else {
                qs[k + 1]
            };
            qs[k] > left && qs[k] >= right
        })
        .count();
    if qs[best] <= 0.0 {
        return Err(Error::EmptyCoolingWindow);
    }

    let lo = if best == 0 { xs[0] * 0.5 } else { xs[best - 1] };
    let hi = if best + 1 == n {
        0.5 * (xs[n - 1] + e_max)
    } else {
        xs[best + 1]
    };
    let (e1, _) = golden_section_max(q1_at, lo, hi, grid.rel_tol * e_max)?;
    // never report worse than the grid
    let e1 = if q1_at(e1)? >= qs[best] { e1 } else { xs[best] };

    let m = MachineParams::new(e1, e2, g)?;
    let point = evaluate(&m, baths, init)?;
    let eta = point.report.cop.ok_or(Error::UndefinedCop)?;
    Ok(MaxPowerPoint {
        e1,
        q1: point.report.q_dot[0],
        eta,
        sigma_dot: point.report.sigma_dot,
        multimodal: local_maxima > 1,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal function on [a, b].
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("empty bracket [{a}, {b}]")));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}
