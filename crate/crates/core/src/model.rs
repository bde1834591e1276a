// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Machine and reservoir parameters, thermal rates and the analytic
//! performance bounds.
//!
//! Units: ħ = k_B = 1 and energies are measured in k_B·T1, so the coldest
//! reservoir conventionally has β1 = 1. Rates share the energy unit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Free parameters of the machine Hamiltonian.
///
/// Only E1 and E2 are stored; E3 = E2 − E1 is derived so that the resonance
/// E2 = E1 + E3 holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineParams {
    e1: f64,
    e2: f64,
    g: f64,
}

impl MachineParams {
    pub fn new(e1: f64, e2: f64, g: f64) -> Result<Self> {
        if !(e1.is_finite() && e2.is_finite() && g.is_finite()) {
            return Err(Error::InvalidParameter(
                "machine energies must be finite".into(),
            ));
        }
        if e1 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "E1 must be positive, got {e1}"
            )));
        }
        if e2 <= e1 {
            return Err(Error::InvalidParameter(format!(
                "E2 must exceed E1 so that E3 = E2 - E1 > 0 (E1 = {e1}, E2 = {e2})"
            )));
        }
        if g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "g must be non-negative, got {g}"
            )));
        }
        let params = Self { e1, e2, g };
        if !params.is_weak_coupling() {
            log::debug!(
                "g = {g} exceeds a tenth of the smallest gap {:.4}; local master equation may be inaccurate",
                params.min_gap()
            );
        }
        Ok(params)
    }

    pub fn e1(&self) -> f64 {
        self.e1
    }

    pub fn e2(&self) -> f64 {
        self.e2
    }

    pub fn e3(&self) -> f64 {
        self.e2 - self.e1
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Gaps (E1, E2, E3) indexed by reservoir.
    pub fn energies(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3()]
    }

    pub fn min_gap(&self) -> f64 {
        self.energies().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `g < E_min / 10`.
    pub fn is_weak_coupling(&self) -> bool {
        self.g < self.min_gap() / 10.0
    }

    pub fn with_e1(&self, e1: f64) -> Result<Self> {
        Self::new(e1, self.e2, self.g)
    }
}

/// Which dissipator the reservoirs induce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DissipationModel {
    /// One- and two-spin flips summed coherently into a single jump operator
    /// per reservoir.
    Coherent,
    /// One- and two-spin flips dissipate through independent channels.
    IncoherentCorrelated,
}

impl DissipationModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DissipationModel::Coherent => "coherent",
            DissipationModel::IncoherentCorrelated => "incoherent-correlated",
        }
    }
}

impl std::str::FromStr for DissipationModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(DissipationModel::Coherent),
            "incoherent-correlated" | "ic" => Ok(DissipationModel::IncoherentCorrelated),
            other => Err(Error::InvalidParameter(format!(
                "unknown dissipation model '{other}'"
            ))),
        }
    }
}

/// Reservoir parameters: inverse temperatures, bare emission rates and the
/// commonness α of the baths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    beta: [f64; 3],
    gamma0: [f64; 3],
    alpha: f64,
    model: DissipationModel,
}

impl BathParams {
    pub fn new(
        beta: [f64; 3],
        gamma0: [f64; 3],
        alpha: f64,
        model: DissipationModel,
    ) -> Result<Self> {
        if beta.iter().chain(gamma0.iter()).any(|x| !x.is_finite()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(
                "bath parameters must be finite".into(),
            ));
        }
        if !(beta[0] >= beta[1] && beta[1] >= beta[2] && beta[2] > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "inverse temperatures must satisfy beta1 >= beta2 >= beta3 > 0, got {beta:?}"
            )));
        }
        if gamma0.iter().any(|&g| g <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma0 must be positive, got {gamma0:?}"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            beta,
            gamma0,
            alpha,
            model,
        })
    }

    /// Same bare rate for every reservoir.
    pub fn symmetric(
        beta: [f64; 3],
        gamma0: f64,
        alpha: f64,
        model: DissipationModel,
    ) -> Result<Self> {
        Self::new(beta, [gamma0; 3], alpha, model)
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    pub fn gamma0(&self) -> [f64; 3] {
        self.gamma0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn model(&self) -> DissipationModel {
        self.model
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.beta, self.gamma0, alpha, self.model)
    }

    pub fn with_model(&self, model: DissipationModel) -> Self {
        Self { model, ..*self }
    }

    pub fn with_beta(&self, beta: [f64; 3]) -> Result<Self> {
        Self::new(beta, self.gamma0, self.alpha, self.model)
    }

    /// True when the jump operators share the dark state (α = 1, coherent
    /// model), so the steady state depends on the initial dark population.
    pub fn has_dark_subspace(&self) -> bool {
        self.model == DissipationModel::Coherent && self.alpha == 1.0
    }
}

/// Absorption and emission rates per reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSet {
    pub gamma_up: [f64; 3],
    pub gamma_down: [f64; 3],
}

/// Bose–Einstein occupation 1/(e^{βE} − 1).
pub fn thermal_occupation(beta: f64, energy: f64) -> Result<f64> {
    let x = beta * energy;
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "thermal occupation needs beta*E > 0, got {x}"
        )));
    }
    Ok(1.0 / x.exp_m1())
}

/// Local detailed-balance rates γ↑ = γ0·n, γ↓ = γ0·(n + 1).
pub fn rates(machine: &MachineParams, baths: &BathParams) -> Result<RateSet> {
    let energies = machine.energies();
    let mut gamma_up = [0.0; 3];
    let mut gamma_down = [0.0; 3];
    for i in 0..3 {
        let n = thermal_occupation(baths.beta[i], energies[i])?;
        gamma_up[i] = baths.gamma0[i] * n;
        gamma_down[i] = baths.gamma0[i] * (n + 1.0);
    }
    Ok(RateSet {
        gamma_up,
        gamma_down,
    })
}

/// Carnot coefficient of performance (β2 − β3)/(β1 − β2).
pub fn carnot_cop(baths: &BathParams) -> Result<f64> {
    let [b1, b2, b3] = baths.beta;
    if b1 == b2 {
        return Err(Error::CarnotUndefined);
    }
    Ok((b2 - b3) / (b1 - b2))
}

/// Largest E1 inside the cooling window at fixed E2: the solution of
/// E1 = η_C·(E2 − E1).
pub fn cooling_window_max_e1(baths: &BathParams, e2: f64) -> Result<f64> {
    if !(e2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "E2 must be positive, got {e2}"
        )));
    }
    let eta_c = carnot_cop(baths)?;
    Ok(eta_c * e2 / (1.0 + eta_c))
}
