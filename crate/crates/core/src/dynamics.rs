// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Steady states and transients.
//!
//! The reduced solver works on the 10×10 W matrix. The full solver extracts
//! the null space of the 64×64 Liouvillian and serves as an independent
//! cross-check of the reduction.

use nalgebra::{DMatrix, DVector, SVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BathParams, MachineParams};
use crate::operators::{
    dark_projector, read_coordinates, reduced_basis_element, unvectorize, DensityMatrix,
    Liouvillian, WMatrix, C64, DIM, KET_010, KET_101, N_REDUCED,
};

/// Relative singular-value threshold for kernel membership.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

pub type Coordinates = SVector<f64, N_REDUCED>;

/// Populations p000 … p111 followed by c_R, c_I of c = ⟨010|ρ|101⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState(pub [f64; N_REDUCED]);

impl ReducedState {
    /// Validating constructor.
    pub fn new(values: [f64; N_REDUCED]) -> Result<Self> {
        let s = Self(values);
        s.validate()?;
        Ok(s)
    }

    pub fn from_vector(v: &Coordinates) -> Self {
        let mut values = [0.0; N_REDUCED];
        values.copy_from_slice(v.as_slice());
        Self(values)
    }

    pub fn to_vector(&self) -> Coordinates {
        Coordinates::from_column_slice(&self.0)
    }

    pub fn populations(&self) -> &[f64] {
        &self.0[..8]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[index]
    }

    pub fn c_r(&self) -> f64 {
        self.0[8]
    }

    pub fn c_i(&self) -> f64 {
        self.0[9]
    }

    pub fn trace(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// p_D = (p010 + p101)/2 − c_R.
    pub fn dark_population(&self) -> f64 {
        0.5 * (self.0[KET_010] + self.0[KET_101]) - self.c_r()
    }

    /// Marginal (π0, π1) of `qubit` (0-based).
    pub fn marginal(&self, qubit: usize) -> (f64, f64) {
        let mut m = (0.0, 0.0);
        for (k, p) in self.populations().iter().enumerate() {
            if crate::operators::bit(k, qubit) == 0 {
                m.0 += p;
            } else {
                m.1 += p;
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite coordinate".into()));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "populations sum to {trace}, not 1"
            )));
        }
        if let Some((k, p)) = self
            .populations()
            .iter()
            .enumerate()
            .find(|(_, p)| **p < -1e-12)
        {
            return Err(Error::InvalidState(format!(
                "population {k} is negative ({p})"
            )));
        }
        let coh2 = self.c_r().powi(2) + self.c_i().powi(2);
        if coh2 > self.0[KET_010] * self.0[KET_101] + 1e-12 {
            return Err(Error::InvalidState(format!(
                "|c|^2 = {coh2} exceeds p010*p101 = {}",
                self.0[KET_010] * self.0[KET_101]
            )));
        }
        Ok(())
    }
}

/// Initial machine state used to pin the dark population at α = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// Each qubit in equilibrium with its own reservoir.
    ThermalProduct,
    /// Thermal product with its degenerate block rotated onto
    /// (|010⟩ + |101⟩)/√2, so that ρ|ψ_D⟩ = 0.
    DarkOrthogonal,
    Custom(ReducedState),
}

impl InitialState {
    pub fn label(&self) -> &'static str {
        match self {
            InitialState::ThermalProduct => "thermal-product",
            InitialState::DarkOrthogonal => "dark-orthogonal",
            InitialState::Custom(_) => "custom",
        }
    }
}

fn thermal_product(machine: &MachineParams, baths: &BathParams) -> ReducedState {
    let energies = machine.energies();
    let beta = baths.beta();
    let excited: Vec<f64> = (0..3)
        .map(|i| 1.0 / ((beta[i] * energies[i]).exp() + 1.0))
        .collect();
    let mut values = [0.0; N_REDUCED];
    for (k, v) in values.iter_mut().take(DIM).enumerate() {
        *v = (0..3)
            .map(|q| {
                if crate::operators::bit(k, q) == 1 {
                    excited[q]
                } else {
                    1.0 - excited[q]
                }
            })
            .product();
    }
    ReducedState(values)
}

pub fn initial_state(
    kind: &InitialState,
    machine: &MachineParams,
    baths: &BathParams,
) -> Result<ReducedState> {
    match kind {
        InitialState::ThermalProduct => Ok(thermal_product(machine, baths)),
        InitialState::DarkOrthogonal => {
            let mut s = thermal_product(machine, baths);
            let half = 0.5 * (s.0[KET_010] + s.0[KET_101]);
            s.0[KET_010] = half;
            s.0[KET_101] = half;
            s.0[8] = half;
            s.0[9] = 0.0;
            Ok(s)
        }
        InitialState::Custom(s) => {
            s.validate()?;
            Ok(*s)
        }
    }
}

/// Embeds reduced coordinates as a density matrix with all other coherences zero.
pub fn embed(p: &ReducedState) -> DensityMatrix {
    let mut rho = DensityMatrix::zeros();
    for (k, value) in p.0.iter().enumerate() {
        if *value != 0.0 {
            rho += reduced_basis_element(k) * C64::from(*value);
        }
    }
    rho
}

/// Reads the reduced coordinates of ρ; the second value is the largest
/// magnitude among the discarded entries.
pub fn project(rho: &DensityMatrix) -> (ReducedState, f64) {
    let (coords, excluded) = read_coordinates(rho);
    (ReducedState(coords), excluded)
}

/// How a steady state was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    /// Unique kernel vector of W.
    Kernel,
    /// Linear system with trace and dark-population constraints appended.
    Constrained,
    /// Long-time integration after an ill-conditioned constrained solve.
    Integration,
}

impl SolveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMethod::Kernel => "kernel",
            SolveMethod::Constrained => "constrained",
            SolveMethod::Integration => "integration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadySolution {
    pub state: ReducedState,
    /// ‖W·p‖.
    pub residual: f64,
    pub kernel_dimension: usize,
    pub dark_population: f64,
    pub method: SolveMethod,
    /// Singular values of W in ascending order.
    pub singular_values: Vec<f64>,
}

fn sorted_singular_values(values: &[f64]) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = values.iter().copied().enumerate().collect();
    v.sort_by(|a, b| a.1.total_cmp(&b.1));
    v
}

fn dark_functional() -> Coordinates {
    let mut d = Coordinates::zeros();
    d[KET_010] = 0.5;
    d[KET_101] = 0.5;
    d[8] = -1.0;
    d
}

fn trace_functional() -> Coordinates {
    let mut t = Coordinates::zeros();
    for k in 0..DIM {
        t[k] = 1.0;
    }
    t
}

/// Kernel dimension expected from the model: two when the dark state is
/// decoupled, one otherwise.
pub fn expected_kernel_dimension(baths: &BathParams) -> usize {
    if baths.has_dark_subspace() {
        2
    } else {
        1
    }
}

/// Steady state of ṗ = W·p.
///
/// For a unique kernel the initial state is ignored. With a dark subspace the
/// solution carries the dark population of `init`.
pub fn steady_state(w: &WMatrix, init: &ReducedState) -> Result<SteadySolution> {
    let wm = DMatrix::from_column_slice(N_REDUCED, N_REDUCED, w.matrix().as_slice());
    let svd = wm.clone().svd(false, true);
    let sigma = svd.singular_values.as_slice();
    let order = sorted_singular_values(sigma);
    let sigma_max = order.last().map(|x| x.1).unwrap_or(0.0);
    let singular_values: Vec<f64> = order.iter().map(|x| x.1).collect();
    let kernel_dimension = order
        .iter()
        .filter(|x| x.1 < KERNEL_THRESHOLD * sigma_max)
        .count();
    let expected = expected_kernel_dimension(w.baths());
    if kernel_dimension != expected {
        return Err(Error::Degenerate {
            expected,
            found: kernel_dimension,
            spectrum: singular_values.iter().take(4).copied().collect(),
        });
    }

    let (p, method) = if expected == 1 {
        let v_t = svd.v_t.as_ref().expect("requested V^T");
        let v: Coordinates = Coordinates::from_iterator(v_t.row(order[0].0).iter().copied());
        let total: f64 = v.rows(0, DIM).sum();
        (refine(&wm, v / total, None), SolveMethod::Kernel)
    } else {
        init.validate()?;
        let (p, method) = constrained_solve(w, &wm, init)?;
        match method {
            SolveMethod::Constrained => (refine(&wm, p, Some(init.dark_population())), method),
            _ => (p, method),
        }
    };

    let state = ReducedState::from_vector(&p);
    let residual = (w.matrix() * p).norm();
    Ok(SteadySolution {
        dark_population: state.dark_population(),
        state,
        residual,
        kernel_dimension,
        method,
        singular_values,
    })
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

/// Dot product evaluated as if in twice the working precision.
fn dot2(x: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for (a, b) in x {
        let p = a * b;
        let ep = a.mul_add(b, -p);
        let (t, e) = two_sum(s, p);
        s = t;
        c += e + ep;
    }
    s + c
}

/// Iterative refinement of W·p = 0 under the trace (and optional dark
/// population) constraint, with residuals computed in compensated
/// arithmetic. Small populations then come out with componentwise rather
/// than normwise accuracy, which is what keeps heat currents from
/// exponentially suppressed levels consistent with the first law.
fn refine(wm: &DMatrix<f64>, mut p: Coordinates, dark: Option<f64>) -> Coordinates {
    let rows = N_REDUCED + 1 + usize::from(dark.is_some());
    let mut a = DMatrix::<f64>::zeros(rows, N_REDUCED);
    a.rows_mut(0, N_REDUCED).copy_from(wm);
    let mut b = DVector::<f64>::zeros(rows);
    let t = trace_functional();
    let d = dark_functional();
    for k in 0..N_REDUCED {
        a[(N_REDUCED, k)] = t[k];
    }
    b[N_REDUCED] = 1.0;
    if let Some(pd) = dark {
        for k in 0..N_REDUCED {
            a[(N_REDUCED + 1, k)] = d[k];
        }
        b[N_REDUCED + 1] = pd;
    }
    let svd = a.clone().svd(true, true);
    for _ in 0..4 {
        let r = DVector::<f64>::from_iterator(
            rows,
            (0..rows).map(|i| b[i] - dot2((0..N_REDUCED).map(|k| (a[(i, k)], p[k])))),
        );
        let Ok(delta) = svd.solve(&r, 0.0) else { break };
        p += Coordinates::from_column_slice(delta.as_slice());
        if delta.norm() <= f64::EPSILON * p.norm() {
            break;
        }
    }
    p
}

fn constrained_solve(
    w: &WMatrix,
    wm: &DMatrix<f64>,
    init: &ReducedState,
) -> Result<(Coordinates, SolveMethod)> {
    let mut a = DMatrix::<f64>::zeros(N_REDUCED + 2, N_REDUCED);
    a.rows_mut(0, N_REDUCED).copy_from(wm);
    let t = trace_functional();
    let d = dark_functional();
    for k in 0..N_REDUCED {
        a[(N_REDUCED, k)] = t[k];
        a[(N_REDUCED + 1, k)] = d[k];
    }
    let mut b = DVector::<f64>::zeros(N_REDUCED + 2);
    b[N_REDUCED] = 1.0;
    b[N_REDUCED + 1] = init.dark_population();

    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin > 1e-12 * smax {
        let x = svd
            .solve(&b, 0.0)
            .map_err(|e| Error::Solver(e.to_string()))?;
        let p = Coordinates::from_column_slice(x.as_slice());
        if (w.matrix() * p).norm() <= 1e-10 * w.norm() {
            return Ok((p, SolveMethod::Constrained));
        }
    }
    log::warn!("constrained steady-state solve ill-conditioned; integrating to long times");
    let p = relax(w, init)?;
    Ok((p.to_vector(), SolveMethod::Integration))
}

/// Smallest |Re λ| over eigenvalues of W outside its kernel.
pub fn spectral_gap(w: &WMatrix) -> f64 {
    let mut re: Vec<f64> = w
        .matrix()
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re.abs())
        .collect();
    re.sort_by(f64::total_cmp);
    let skip = expected_kernel_dimension(w.baths());
    re.get(skip).copied().unwrap_or(0.0)
}

/// Integrates from `init` until ‖W·p‖ ≤ 1e-10‖W‖.
pub fn relax(w: &WMatrix, init: &ReducedState) -> Result<ReducedState> {
    let gap = spectral_gap(w).max(1e-300);
    let mut state = *init;
    let mut horizon = 50.0 / gap;
    for _ in 0..8 {
        let traj = integrate(
            w,
            &state,
            horizon,
            &IntegrateOptions {
                samples: 2,
                ..Default::default()
            },
        )?;
        state = *traj.states.last().expect("non-empty trajectory");
        if (w.matrix() * state.to_vector()).norm() <= 1e-10 * w.norm() {
            return Ok(state);
        }
        horizon *= 2.0;
    }
    Err(Error::Solver(
        "long-time integration did not converge".into(),
    ))
}

/// Steady state from the null space of the full Liouvillian.
///
/// A two-dimensional kernel (dark subspace) is resolved by fixing the trace
/// and the dark population of `init`; `None` means the thermal product state.
pub fn steady_state_full(l: &Liouvillian, init: Option<&DensityMatrix>) -> Result<DensityMatrix> {
    let svd = l.matrix().clone().svd(false, true);
    let order = sorted_singular_values(svd.singular_values.as_slice());
    let sigma_max = order.last().map(|x| x.1).unwrap_or(0.0);
    let kernel: Vec<usize> = order
        .iter()
        .filter(|x| x.1 < KERNEL_THRESHOLD * sigma_max)
        .map(|x| x.0)
        .collect();
    let expected = expected_kernel_dimension(l.baths());
    if kernel.len() != expected {
        return Err(Error::Degenerate {
            expected,
            found: kernel.len(),
            spectrum: order.iter().take(4).map(|x| x.1).collect(),
        });
    }
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let basis: Vec<DensityMatrix> = kernel
        .iter()
        .map(|&k| unvectorize(&v_t.row(k).adjoint()))
        .collect();

    let mut rho = if basis.len() == 1 {
        basis[0] / basis[0].trace()
    } else {
        let target = match init {
            Some(r) => (dark_projector() * r).trace(),
            None => {
                let p = initial_state(&InitialState::ThermalProduct, l.machine(), l.baths())?;
                C64::from(p.dark_population())
            }
        };
        let proj = dark_projector();
        let m = nalgebra::Matrix2::new(
            basis[0].trace(),
            basis[1].trace(),
            (proj * basis[0]).trace(),
            (proj * basis[1]).trace(),
        );
        let rhs = nalgebra::Vector2::new(C64::from(1.0), target);
        let c = m.lu().solve(&rhs).ok_or_else(|| {
            Error::Solver("singular constraint system in full steady state".into())
        })?;
        basis[0] * c[0] + basis[1] * c[1]
    };

    rho = (rho + rho.adjoint()) * C64::from(0.5);
    rho /= rho.trace();
    let eig = SymmetricEigen::new(rho);
    let min_eigenvalue = eig.eigenvalues.min();
    if min_eigenvalue < -1e-9 {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of evenly spaced output samples including t = 0 and t_max.
    pub samples: usize,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            samples: 101,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ReducedState>,
    pub steps: usize,
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of ṗ = W·p on [0, t_max].
pub fn integrate(
    w: &WMatrix,
    p0: &ReducedState,
    t_max: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    p0.validate()?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let samples = opts.samples.max(2);
    let m = *w.matrix();
    let f = |y: &Coordinates| m * y;

    let mut times = Vec::with_capacity(samples);
    let mut states = Vec::with_capacity(samples);
    times.push(0.0);
    states.push(*p0);

    let mut y = p0.to_vector();
    let mut t = 0.0;
    let norm = w.norm().max(f64::MIN_POSITIVE);
    let mut h = (0.01 / norm).min(t_max);
    let mut steps = 0usize;
    let mut k = [Coordinates::zeros(); 7];
    k[0] = f(&y);

    for s in 1..samples {
        let target = t_max * s as f64 / (samples - 1) as f64;
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::Stiff {
                    time: t,
                    spectral_gap: spectral_gap(w),
                });
            }
            let step = h.min(target - t);
            for stage in 1..7 {
                let mut acc = y;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    if A[stage][j] != 0.0 {
                        acc += kj * (step * A[stage][j]);
                    }
                }
                k[stage] = f(&acc);
            }
            let mut y5 = y;
            let mut y4 = y;
            for j in 0..7 {
                y5 += k[j] * (step * B5[j]);
                y4 += k[j] * (step * B4[j]);
            }
            let err = (0..N_REDUCED)
                .map(|i| {
                    let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
                    ((y5[i] - y4[i]) / sc).powi(2)
                })
                .sum::<f64>()
                / N_REDUCED as f64;
            let err = err.sqrt();
            steps += 1;
            if err <= 1.0 {
                t = if step == target - t { target } else { t + step };
                y = y5;
                // FSAL: last stage is f at the accepted point.
                k[0] = k[6];
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if step == h || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h < 1e-14 * t.max(1.0 / norm) {
                return Err(Error::Stiff {
                    time: t,
                    spectral_gap: spectral_gap(w),
                });
            }
        }
        times.push(target);
        states.push(ReducedState::from_vector(&y));
    }
    Ok(Trajectory {
        times,
        states,
        steps,
    })
}
