// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Machine Hamiltonian, jump operators, the Liouvillian superoperator and its
//! projection onto the ten reduced coordinates.
//!
//! Basis: |q1 q2 q3⟩ ↦ 4·q1 + 2·q2 + q3, so |000⟩ = 0, |001⟩ = 1, …,
//! |111⟩ = 7. Density matrices are vectorized by stacking columns:
//! vec(ρ)[i + 8j] = ρ[i, j], hence vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).

use nalgebra::{Complex, DMatrix, DVector, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::model::{rates, BathParams, DissipationModel, MachineParams, RateSet};

pub type C64 = Complex<f64>;

/// Hilbert-space dimension of the three-qubit machine.
pub const DIM: usize = 8;
/// Dimension of the vectorized density matrix.
pub const SUPER_DIM: usize = DIM * DIM;
/// Number of reduced coordinates: eight populations, Re c, Im c.
pub const N_REDUCED: usize = 10;

/// Index of |010⟩.
pub const KET_010: usize = 2;
/// Index of |101⟩.
pub const KET_101: usize = 5;

pub type Operator = SMatrix<C64, DIM, DIM>;
pub type DensityMatrix = Operator;
pub type Ket = SVector<C64, DIM>;

const ONE: C64 = C64::new(1.0, 0.0);

/// Basis index of |q1 q2 q3⟩.
pub fn basis_index(q1: u8, q2: u8, q3: u8) -> usize {
    debug_assert!(q1 < 2 && q2 < 2 && q3 < 2);
    4 * q1 as usize + 2 * q2 as usize + q3 as usize
}

/// Occupation (0 or 1) of `qubit` (0-based, qubit 1 is index 0) in basis state `index`.
pub fn bit(index: usize, qubit: usize) -> usize {
    (index >> (2 - qubit)) & 1
}

pub fn basis_label(index: usize) -> String {
    format!("{}{}{}", bit(index, 0), bit(index, 1), bit(index, 2))
}

pub fn dagger(op: &Operator) -> Operator {
    op.adjoint()
}

/// σ⁻ = |0⟩⟨1| acting on `qubit` (0-based).
pub fn sigma_minus(qubit: usize) -> Operator {
    assert!(qubit < 3, "qubit index out of range");
    let mut op = Operator::zeros();
    for k in 0..DIM {
        if bit(k, qubit) == 1 {
            let lowered = k & !(1 << (2 - qubit));
            op[(lowered, k)] = ONE;
        }
    }
    op
}

pub fn sigma_plus(qubit: usize) -> Operator {
    sigma_minus(qubit).adjoint()
}

/// Projector |1⟩⟨1| on `qubit`.
pub fn number_operator(qubit: usize) -> Operator {
    sigma_plus(qubit) * sigma_minus(qubit)
}

/// H1 + H2 + H3 = Σ E_i |1⟩⟨1|_i.
pub fn free_hamiltonian(machine: &MachineParams) -> Operator {
    let energies = machine.energies();
    let mut h = Operator::zeros();
    for (qubit, e) in energies.iter().enumerate() {
        h += number_operator(qubit) * C64::from(*e);
    }
    h
}

/// g(|101⟩⟨010| + |010⟩⟨101|).
pub fn interaction_hamiltonian(machine: &MachineParams) -> Operator {
    let mut h = Operator::zeros();
    h[(KET_101, KET_010)] = C64::from(machine.g());
    h[(KET_010, KET_101)] = C64::from(machine.g());
    h
}

pub fn hamiltonian(machine: &MachineParams) -> Operator {
    free_hamiltonian(machine) + interaction_hamiltonian(machine)
}

/// A jump operator together with the reservoir (0-based) it couples to.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub op: Operator,
    pub bath: usize,
}

/// Lowering parts of the jump operators for each reservoir: the one-spin
/// flip and the resonant two-spin flip.
fn flip_pairs() -> [(Operator, Operator); 3] {
    [
        (sigma_minus(0), sigma_minus(1) * sigma_plus(2)),
        (sigma_minus(1), sigma_minus(0) * sigma_minus(2)),
        (sigma_minus(2), sigma_plus(0) * sigma_minus(1)),
    ]
}

/// Jump operators for a given commonness α and dissipation model.
///
/// Coherent: one operator per reservoir, s_i = single + α·pair.
/// Incoherent-correlated: two operators per reservoir, single and α·pair,
/// each with its own dissipator.
pub fn jump_operators(alpha: f64, model: DissipationModel) -> Vec<JumpOperator> {
    let a = C64::from(alpha);
    let mut out = Vec::with_capacity(6);
    for (bath, (single, pair)) in flip_pairs().into_iter().enumerate() {
        match model {
            DissipationModel::Coherent => out.push(JumpOperator {
                op: single + pair * a,
                bath,
            }),
            DissipationModel::IncoherentCorrelated => {
                out.push(JumpOperator { op: single, bath });
                out.push(JumpOperator { op: pair * a, bath });
            }
        }
    }
    out
}

/// D[A]ρ = AρA† − ½{A†A, ρ}.
pub fn dissipator(a: &Operator, rho: &DensityMatrix) -> DensityMatrix {
    let ad = a.adjoint();
    let ada = ad * a;
    a * rho * ad - (ada * rho + rho * ada) * C64::from(0.5)
}

/// Dissipator of reservoir `bath` applied directly to ρ:
/// Σ_J γ↓·D[J]ρ + γ↑·D[J†]ρ over the jump operators of that reservoir.
pub fn bath_dissipator(
    bath: usize,
    jumps: &[JumpOperator],
    rates: &RateSet,
    rho: &DensityMatrix,
) -> DensityMatrix {
    let mut out = DensityMatrix::zeros();
    for j in jumps.iter().filter(|j| j.bath == bath) {
        out += dissipator(&j.op, rho) * C64::from(rates.gamma_down[bath]);
        out += dissipator(&j.op.adjoint(), rho) * C64::from(rates.gamma_up[bath]);
    }
    out
}

pub fn vectorize(rho: &DensityMatrix) -> DVector<C64> {
    DVector::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &DVector<C64>) -> DensityMatrix {
    assert_eq!(v.len(), SUPER_DIM);
    DensityMatrix::from_column_slice(v.as_slice())
}

fn to_dynamic(op: &Operator) -> DMatrix<C64> {
    DMatrix::from_column_slice(DIM, DIM, op.as_slice())
}

/// Superoperator of ρ ↦ AρB.
fn sandwich(a: &Operator, b: &Operator) -> DMatrix<C64> {
    to_dynamic(&b.transpose()).kronecker(&to_dynamic(a))
}

/// Superoperator of D[A].
fn dissipator_super(a: &Operator) -> DMatrix<C64> {
    let ad = a.adjoint();
    let ada = ad * a;
    let id = Operator::identity();
    sandwich(a, &ad) - (sandwich(&ada, &id) + sandwich(&id, &ada)) * C64::from(0.5)
}

/// The 64×64 generator of the machine dynamics.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: DMatrix<C64>,
    machine: MachineParams,
    baths: BathParams,
    rates: RateSet,
}

impl Liouvillian {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn machine(&self) -> &MachineParams {
        &self.machine
    }

    pub fn baths(&self) -> &BathParams {
        &self.baths
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn model(&self) -> DissipationModel {
        self.baths.model()
    }

    pub fn alpha(&self) -> f64 {
        self.baths.alpha()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)))
    }

    /// Row vector whose product with vec(ρ) is Tr ρ.
    pub fn trace_functional() -> DVector<C64> {
        vectorize(&Operator::identity())
    }
}

/// Builds L = −i[H_m, ·] + Σ_J γ↓D[J] + γ↑D[J†].
pub fn liouvillian(machine: &MachineParams, baths: &BathParams) -> Result<Liouvillian> {
    let rates = rates(machine, baths)?;
    let h = hamiltonian(machine);
    let id = Operator::identity();
    let minus_i = C64::new(0.0, -1.0);
    let mut matrix = (sandwich(&h, &id) - sandwich(&id, &h)) * minus_i;
    for j in jump_operators(baths.alpha(), baths.model()) {
        matrix += dissipator_super(&j.op) * C64::from(rates.gamma_down[j.bath]);
        matrix += dissipator_super(&j.op.adjoint()) * C64::from(rates.gamma_up[j.bath]);
    }
    Ok(Liouvillian {
        matrix,
        machine: *machine,
        baths: *baths,
        rates,
    })
}

/// |ψ_D⟩ = (|010⟩ − |101⟩)/√2.
pub fn dark_state() -> Ket {
    let mut v = Ket::zeros();
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    v[KET_010] = C64::from(amp);
    v[KET_101] = C64::from(-amp);
    v
}

pub fn dark_projector() -> DensityMatrix {
    let d = dark_state();
    d * d.adjoint()
}

/// Density-matrix basis element for reduced coordinate `k`:
/// populations |k⟩⟨k| for k < 8, then c_R and c_I of c = ⟨010|ρ|101⟩.
pub fn reduced_basis_element(k: usize) -> DensityMatrix {
    let mut m = DensityMatrix::zeros();
    match k {
        0..=7 => m[(k, k)] = ONE,
        8 => {
            m[(KET_010, KET_101)] = ONE;
            m[(KET_101, KET_010)] = ONE;
        }
        9 => {
            m[(KET_010, KET_101)] = C64::i();
            m[(KET_101, KET_010)] = -C64::i();
        }
        _ => panic!("reduced coordinate index out of range: {k}"),
    }
    m
}

/// Reads the ten reduced coordinates off a matrix and reports the largest
/// entry the coordinates do not capture.
pub(crate) fn read_coordinates(m: &DensityMatrix) -> ([f64; N_REDUCED], f64) {
    let mut out = [0.0; N_REDUCED];
    let mut leak: f64 = 0.0;
    for i in 0..DIM {
        out[i] = m[(i, i)].re;
        leak = leak.max(m[(i, i)].im.abs());
    }
    let c = m[(KET_010, KET_101)];
    out[8] = c.re;
    out[9] = c.im;
    leak = leak.max((m[(KET_101, KET_010)] - c.conj()).norm());
    for i in 0..DIM {
        for j in 0..DIM {
            let tracked =
                i == j || (i == KET_010 && j == KET_101) || (i == KET_101 && j == KET_010);
            if !tracked {
                leak = leak.max(m[(i, j)].norm());
            }
        }
    }
    (out, leak)
}

/// Generator of the ten reduced coordinates (p000 … p111, c_R, c_I).
#[derive(Debug, Clone)]
pub struct WMatrix {
    matrix: SMatrix<f64, N_REDUCED, N_REDUCED>,
    machine: MachineParams,
    baths: BathParams,
}

impl WMatrix {
    pub fn matrix(&self) -> &SMatrix<f64, N_REDUCED, N_REDUCED> {
        &self.matrix
    }

    pub fn machine(&self) -> &MachineParams {
        &self.machine
    }

    pub fn baths(&self) -> &BathParams {
        &self.baths
    }

    pub fn alpha(&self) -> f64 {
        self.baths.alpha()
    }

    pub fn model(&self) -> DissipationModel {
        self.baths.model()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn has_dark_subspace(&self) -> bool {
        self.baths.has_dark_subspace()
    }
}

/// Projects the Liouvillian onto the reduced coordinates.
///
/// Column k of W is the coordinate readout of L applied to the k-th basis
/// element. Fails if L maps any of them outside the ten-coordinate subspace.
pub fn reduce_to_w(l: &Liouvillian) -> Result<WMatrix> {
    let scale = l.matrix.norm().max(f64::MIN_POSITIVE);
    let mut matrix = SMatrix::<f64, N_REDUCED, N_REDUCED>::zeros();
    for k in 0..N_REDUCED {
        let image = l.apply(&reduced_basis_element(k));
        let (coords, leak) = read_coordinates(&image);
        if leak > 1e-12 * scale {
            return Err(Error::ClosureViolation {
                coordinate: k,
                leakage: leak,
            });
        }
        for (r, value) in coords.iter().enumerate() {
            matrix[(r, k)] = *value;
        }
    }
    Ok(WMatrix {
        matrix,
        machine: l.machine,
        baths: l.baths,
    })
}
