// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Hand-transcribed rate equations for the ten reduced coordinates, kept
//! verbatim for auditing against the generator-derived W.
//!
//! The transcription reproduces the printed coefficients as they stand,
//! including entries that disagree with the master equation. Two liberties
//! are unavoidable in a real matrix: imaginary units on the c_I couplings
//! are dropped (keeping the printed sign), and the c_R damping term printed
//! without a variable is placed on the c_R column.

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::ReducedState;
use crate::error::Result;
use crate::model::{rates, BathParams, DissipationModel, MachineParams};
use crate::operators::{liouvillian, reduce_to_w, N_REDUCED};

// Reduced-coordinate indices.
pub const P000: usize = 0;
pub const P001: usize = 1;
pub const P010: usize = 2;
pub const P011: usize = 3;
pub const P100: usize = 4;
pub const P101: usize = 5;
pub const P110: usize = 6;
pub const P111: usize = 7;
pub const CR: usize = 8;
pub const CI: usize = 9;

/// Name of reduced coordinate `k` (populations first, then c_R and c_I).
pub fn coordinate_label(k: usize) -> &'static str {
    const LABELS: [&str; N_REDUCED] = [
        "p000", "p001", "p010", "p011", "p100", "p101", "p110", "p111", "c_R", "c_I",
    ];
    LABELS[k]
}

/// The transcribed 10×10 rate matrix.
pub fn transcribed_w(
    machine: &MachineParams,
    baths: &BathParams,
) -> Result<SMatrix<f64, N_REDUCED, N_REDUCED>> {
    let r = rates(machine, baths)?;
    let [u1, u2, u3] = r.gamma_up;
    let [d1, d2, d3] = r.gamma_down;
    let a = baths.alpha();
    let a2 = a * a;
    let g = machine.g();
    let s: f64 = (0..3).map(|i| r.gamma_up[i] + r.gamma_down[i]).sum();

    let mut w = SMatrix::<f64, N_REDUCED, N_REDUCED>::zeros();

    w[(P000, P100)] = d1;
    w[(P000, P010)] = d2;
    w[(P000, P001)] = d3;
    w[(P000, P000)] = -(u1 + u2 + u3);

    w[(P001, P101)] = d1;
    w[(P001, P011)] = d2;
    w[(P001, P000)] = u3;
    w[(P001, P001)] = -(u1 + u2 + d3);

    w[(P100, P000)] = u1;
    w[(P100, P110)] = d2;
    w[(P100, P010)] = d3 * a2;
    w[(P100, P101)] = d3;
    w[(P100, CR)] = d3 * 2.0 * a;
    w[(P100, P100)] = -(d1 + u2 + (a2 + 1.0) * u3);

    w[(P101, P000)] = u2;
    w[(P101, P001)] = a2 * u1;
    w[(P101, P100)] = a2 * u3;
    w[(P101, P011)] = d3;
    w[(P101, P110)] = d1;
    w[(P101, P111)] = a2 * d2;
    w[(P101, CI)] = -2.0 * g;
    w[(P101, CR)] = -a * s;
    w[(P101, P010)] = -(u1 + d2 + u3 + a2 * (d1 + u2 + d3));

    w[(P010, P000)] = a2 * u2;
    w[(P010, P001)] = u1;
    w[(P010, P100)] = u3;
    w[(P010, P011)] = a2 * d3;
    w[(P010, P110)] = a2 * d1;
    w[(P010, P111)] = d2;
    w[(P010, CI)] = 2.0 * g;
    w[(P010, CR)] = -a * s;
    w[(P010, P010)] = -(a2 * (u1 + d2 + u3) + d1 + u2 + d3);

    w[(CR, P000)] = a * u2;
    w[(CR, P001)] = a * u1;
    w[(CR, P100)] = a * u3;
    w[(CR, P011)] = a * d3;
    w[(CR, P110)] = a * d1;
    w[(CR, P111)] = a * d2;
    w[(CR, P010)] = -a * s;
    w[(CR, P101)] = -a * s;
    w[(CR, CR)] = -(a2 + 1.0) * s;

    w[(CI, P101)] = g;
    w[(CI, P010)] = -g;

    w[(P011, P111)] = d1;
    w[(P011, P001)] = u2;
    w[(P011, P101)] = u3 * a2;
    w[(P011, P010)] = u3;
    w[(P011, CR)] = u3 * 2.0 * a;
    w[(P011, P011)] = -(u1 + d2 + (a2 + 1.0) * d3);

    w[(P110, P010)] = u1;
    w[(P110, P100)] = u2;
    w[(P110, P111)] = d3;
    w[(P110, P110)] = -(d1 + d2 + u3);

    w[(P111, P011)] = u1;
    w[(P111, P101)] = u2;
    w[(P111, P110)] = u3;
    w[(P111, P111)] = -(d1 + d2 + d3);

    Ok(w)
}

/// Generic audit point: distinct rates on every reservoir and 0 < α < 1, so
/// that no coefficient coincides by accident.
pub fn audit_point() -> (MachineParams, BathParams) {
    let machine = MachineParams::new(0.8, 5.0, 0.01).expect("valid audit machine");
    let baths = BathParams::new(
        [1.0, 0.5, 0.05],
        [0.01, 0.013, 0.017],
        0.37,
        DissipationModel::Coherent,
    )
    .expect("valid audit baths");
    (machine, baths)
}

/// (row, column) entries where the transcription disagrees with the
/// generator at [`audit_point`].
pub const KNOWN_DISCREPANCIES: [(usize, usize); 35] = [
    (P000, P000),
    (P000, P101),
    (P000, CR),
    (P001, P001),
    (P001, P010),
    (P001, CR),
    (P010, P000),
    (P010, P001),
    (P010, P010),
    (P010, P011),
    (P010, P100),
    (P010, P110),
    (P010, P111),
    (P010, CI),
    (P101, P000),
    (P101, P001),
    (P101, P010),
    (P101, P011),
    (P101, P100),
    (P101, P101),
    (P101, P110),
    (P101, P111),
    (P101, CI),
    (P110, P101),
    (P110, P110),
    (P110, CR),
    (P111, P010),
    (P111, P111),
    (P111, CR),
    (CR, P010),
    (CR, P101),
    (CR, CR),
    (CI, P010),
    (CI, P101),
    (CI, CI),
];

/// One entry where the transcription and the derived W disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub row: usize,
    pub col: usize,
    pub transcribed: f64,
    pub derived: f64,
}

impl Discrepancy {
    pub fn describe(&self) -> String {
        format!(
            "d{}/dt <- {}: transcribed {:.6e}, derived {:.6e}",
            coordinate_label(self.row),
            coordinate_label(self.col),
            self.transcribed,
            self.derived
        )
    }
}

/// Entries with |transcribed − derived| > tol·‖W‖_max, in
/// row-major order.
pub fn discrepancies(
    machine: &MachineParams,
    baths: &BathParams,
    tol: f64,
) -> Result<Vec<Discrepancy>> {
    let printed = transcribed_w(machine, baths)?;
    let derived = reduce_to_w(&liouvillian(machine, baths)?)?;
    let derived = derived.matrix();
    let scale = derived.amax();
    let mut out = Vec::new();
    for row in 0..N_REDUCED {
        for col in 0..N_REDUCED {
            let (t, d) = (printed[(row, col)], derived[(row, col)]);
            if (t - d).abs() > tol * scale {
                out.push(Discrepancy {
                    row,
                    col,
                    transcribed: t,
                    derived: d,
                });
            }
        }
    }
    Ok(out)
}

/// Heat currents from the printed closed-form expressions, in natural units.
/// The 2α·c_R terms are dropped for the incoherent-correlated model.
pub fn closed_form_currents(
    state: &ReducedState,
    machine: &MachineParams,
    baths: &BathParams,
) -> Result<[f64; 3]> {
    let r = rates(machine, baths)?;
    let a = baths.alpha();
    let a2 = a * a;
    let coherent = match baths.model() {
        DissipationModel::Coherent => 2.0 * a * state.c_r(),
        DissipationModel::IncoherentCorrelated => 0.0,
    };
    let p = |k: usize| state.population(k);
    // Collective partners reached by absorption and by emission on each bath.
    let partners = [
        ([P001, P101], [P110, P010]),
        ([P000, P010], [P111, P101]),
        ([P100, P101], [P011, P010]),
    ];
    let energies = machine.energies();
    let mut q = [0.0; 3];
    for i in 0..3 {
        let (pi0, pi1) = state.marginal(i);
        let (up, down) = partners[i];
        let gain = pi0 + a2 * (p(up[0]) + p(up[1])) + coherent;
        let loss = pi1 + a2 * (p(down[0]) + p(down[1])) + coherent;
        q[i] = energies[i] * (r.gamma_up[i] * gain - r.gamma_down[i] * loss);
    }
    Ok(q)
}
