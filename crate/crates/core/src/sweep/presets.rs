// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Figure datasets. Each preset states which numbers are fixed by the
//! figure it reproduces and which grids were chosen here.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fmt_num, rows_to_table, run_sweep, Axis, AxisParam, ResultRow, RunConfig, Table};
use crate::dynamics::InitialState;
use crate::error::{Error, Result};
use crate::model::{cooling_window_max_e1, DissipationModel};
use crate::thermo::{cop_at_max_power, E1Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig5c,
}

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::Fig2,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig3c,
        Preset::Fig3d,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig5c,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig3c => "fig3c",
            Preset::Fig3d => "fig3d",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig5c => "fig5c",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}'")))
    }
}

/// One CSV file of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub table: Table,
}

/// Datasets plus every underlying solved point.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetOutput {
    pub datasets: Vec<Dataset>,
    pub points: Vec<ResultRow>,
}

/// Solid-curve α values of the E1 curves.
pub const CURVE_ALPHAS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 0.99];

/// Side of the square temperature grids.
pub const GRID_SIDE: usize = 60;

/// Interior E1 points per curve across the cooling window.
pub const WINDOW_POINTS: usize = 200;

/// (E1, g) sets of the α-ratio curves; chosen, β and γ0 as in [`curve_base`].
pub const ALPHA_RATIO_SETS: [(f64, f64); 5] = [
    (0.5, 0.005),
    (0.8, 0.005),
    (1.0, 0.005),
    (0.8, 0.01),
    (1.5, 0.01),
];

/// Relative margin below E1_max that counts as inside the cooling window.
pub const WINDOW_MARGIN: f64 = 1e-6;

/// Stated: β = (1, 0.5, 0.05), g = 0.005. Chosen: γ0 = 0.01, E2 = 5.
pub fn curve_base() -> RunConfig {
    RunConfig {
        g: 0.005,
        beta: [1.0, 0.5, 0.05],
        ..RunConfig::default()
    }
}

/// Stated: E1 = 0.8, g = 0.01.
pub fn map_base(alpha: f64) -> RunConfig {
    RunConfig {
        e1: 0.8,
        g: 0.01,
        alpha,
        ..RunConfig::default()
    }
}

/// Six solid curves plus the two α = 1 initial states, labelled for file names.
pub fn curve_configs() -> Vec<(String, RunConfig)> {
    let base = curve_base();
    let mut out: Vec<(String, RunConfig)> = CURVE_ALPHAS
        .iter()
        .map(|&a| {
            (
                format!("alpha-{a:.2}"),
                RunConfig {
                    alpha: a,
                    ..base.clone()
                },
            )
        })
        .collect();
    for init in [InitialState::ThermalProduct, InitialState::DarkOrthogonal] {
        out.push((
            format!("alpha-1.00-{}", init.label()),
            RunConfig {
                alpha: 1.0,
                init,
                ..base.clone()
            },
        ));
    }
    out
}

/// Chosen: E1 from 0.05 to 3.0 in steps of 0.01.
pub fn curve_e1_axis() -> Axis {
    Axis::range(AxisParam::E1, 0.05, 3.0, 0.01).expect("static range")
}

/// Chosen: β2/β1 and β3/β2 on k/60, k = 1..60.
pub fn grid_axes() -> [Axis; 2] {
    let side: Vec<f64> = (1..=GRID_SIDE)
        .map(|k| k as f64 / GRID_SIDE as f64)
        .collect();
    [
        Axis::list(AxisParam::Beta2Ratio, side.clone()).expect("static grid"),
        Axis::list(AxisParam::Beta3Ratio, side).expect("static grid"),
    ]
}

/// E1 < E1_max·(1 − margin) for the configuration's reservoirs.
pub fn inside_window(cfg: &RunConfig) -> bool {
    let Ok(baths) = cfg.baths() else { return false };
    match cooling_window_max_e1(&baths, cfg.e2) {
        Ok(e_max) => cfg.e1 < e_max * (1.0 - WINDOW_MARGIN),
        Err(_) => false,
    }
}

/// Quantity compared by a ratio map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    CoolingPower,
    Beta1Eff,
}

impl Quantity {
    fn of(&self, row: &ResultRow) -> f64 {
        match (self, &row.result) {
            (Quantity::CoolingPower, Some(r)) => r.report.q_dot[0],
            (Quantity::Beta1Eff, Some(r)) => r.report.beta_eff[0],
            (_, None) => f64::NAN,
        }
    }
}

/// Ratio of one quantity between two runs at the same swept point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCell {
    pub x: Vec<f64>,
    pub beta: [f64; 3],
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub inside_window: bool,
    pub error: Option<String>,
}

/// Pairs two sweeps over the same axes and divides `quantity`.
pub fn ratio_sweep(
    num: &RunConfig,
    den: &RunConfig,
    axes: &[Axis],
    quantity: Quantity,
) -> Result<(Vec<RatioCell>, Vec<ResultRow>)> {
    let top = run_sweep(num, axes)?;
    let bottom = run_sweep(den, axes)?;
    let mut keys = super::grid_configs(num, axes)?;
    keys.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let cells = keys
        .iter()
        .zip(top.iter().zip(&bottom))
        .map(|((x, cfg), (t, b))| {
            let (n, d) = (quantity.of(t), quantity.of(b));
            RatioCell {
                x: x.clone(),
                beta: cfg.beta,
                numerator: n,
                denominator: d,
                ratio: n / d,
                inside_window: inside_window(cfg),
                error: t.error.clone().or_else(|| b.error.clone()),
            }
        })
        .collect();
    let mut points = top;
    points.extend(bottom);
    Ok((cells, points))
}

pub fn ratio_table(axes: &[Axis], cells: &[RatioCell], num: &str, den: &str) -> Table {
    let mut header: Vec<String> = axes.iter().map(|a| a.param.as_str().to_string()).collect();
    header.extend(
        [
            "beta1",
            "beta2",
            "beta3",
            num,
            den,
            "ratio",
            "inside_window",
            "error",
        ]
        .map(String::from),
    );
    let mut t = Table::new(&header);
    for c in cells {
        let mut row: Vec<String> = c.x.iter().chain(&c.beta).map(|&v| fmt_num(v)).collect();
        row.extend([
            fmt_num(c.numerator),
            fmt_num(c.denominator),
            fmt_num(c.ratio),
        ]);
        row.push(c.inside_window.to_string());
        row.push(c.error.clone().unwrap_or_default());
        t.push(row);
    }
    t
}

/// E1 grid strictly inside the cooling window of `cfg`.
pub fn window_axis(cfg: &RunConfig, points: usize) -> Result<Axis> {
    let e_max = cooling_window_max_e1(&cfg.baths()?, cfg.e2)?;
    let values = (1..=points)
        .map(|k| e_max * k as f64 / (points + 1) as f64)
        .collect();
    Axis::list(AxisParam::E1, values)
}

fn curves(axis_for: impl Fn(&RunConfig) -> Result<Axis>, prefix: &str) -> Result<PresetOutput> {
    let mut datasets = Vec::new();
    let mut points = Vec::new();
    for (label, cfg) in curve_configs() {
        let rows = run_sweep(&cfg, &[axis_for(&cfg)?])?;
        datasets.push(Dataset {
            name: format!("{prefix}_{label}"),
            table: rows_to_table(&rows),
        });
        points.extend(rows);
    }
    Ok(PresetOutput { datasets, points })
}

/// Maximum-power point of one curve configuration.
pub fn max_power_row(label: &str, cfg: &RunConfig) -> Vec<String> {
    let found = cfg
        .baths()
        .and_then(|b| cop_at_max_power(cfg.e2, cfg.g, &b, &cfg.init, &E1Grid::default()));
    let mut row = vec![
        label.to_string(),
        fmt_num(cfg.alpha),
        cfg.init.label().to_string(),
    ];
    match found {
        Ok(p) => {
            row.extend([p.e1, p.q1, p.eta, p.sigma_dot].map(fmt_num));
            row.push(p.multimodal.to_string());
            row.push(String::new());
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(fmt_num(f64::NAN), 4));
            row.push("na".into());
            row.push(e.to_string());
        }
    }
    row
}

const MAX_POWER_COLUMNS: [&str; 9] = [
    "curve",
    "alpha",
    "init",
    "e1_star",
    "q1_star",
    "eta_star",
    "sigma_dot_star",
    "multimodal",
    "error",
];

fn max_power_table(configs: &[(String, RunConfig)]) -> Table {
    let rows: Vec<Vec<String>> = configs
        .par_iter()
        .map(|(l, c)| max_power_row(l, c))
        .collect();
    let mut t = Table::new(&MAX_POWER_COLUMNS);
    for r in rows {
        t.push(r);
    }
    t
}

/// Inset α values; chosen.
pub fn inset_configs() -> Vec<(String, RunConfig)> {
    let base = curve_base();
    let mut alphas: Vec<f64> = (0..20).map(|k| k as f64 * 0.05).collect();
    alphas.push(0.99);
    let mut out: Vec<(String, RunConfig)> = alphas
        .into_iter()
        .map(|a| {
            (
                format!("alpha-{a:.2}"),
                RunConfig {
                    alpha: a,
                    ..base.clone()
                },
            )
        })
        .collect();
    for init in [InitialState::ThermalProduct, InitialState::DarkOrthogonal] {
        out.push((
            format!("alpha-1.00-{}", init.label()),
            RunConfig {
                alpha: 1.0,
                init,
                ..base.clone()
            },
        ));
    }
    out
}

/// Chosen: α from 0 to 0.99 in steps of 0.01.
pub fn alpha_ratio_axis() -> Axis {
    Axis::range(AxisParam::Alpha, 0.0, 0.99, 0.01).expect("static range")
}

fn ic(cfg: &RunConfig) -> RunConfig {
    RunConfig {
        model: DissipationModel::IncoherentCorrelated,
        ..cfg.clone()
    }
}

/// Configurations of the α = 1 ratio maps.
pub fn dark_map_configs(init: InitialState) -> (RunConfig, RunConfig) {
    let num = RunConfig {
        init,
        ..map_base(1.0)
    };
    let den = ic(&num);
    (num, den)
}

pub fn run_preset(preset: Preset) -> Result<PresetOutput> {
    let grid = grid_axes();
    match preset {
        Preset::Fig2 => curves(|_| Ok(curve_e1_axis()), "fig2"),
        Preset::Fig3a | Preset::Fig3c => {
            let rows = run_sweep(&map_base(0.0), &grid)?;
            let datasets = vec![Dataset {
                name: preset.as_str().into(),
                table: rows_to_table(&rows),
            }];
            Ok(PresetOutput {
                datasets,
                points: rows,
            })
        }
        Preset::Fig3b | Preset::Fig3d => {
            let (quantity, num, den) = if preset == Preset::Fig3b {
                (Quantity::CoolingPower, "q1", "q1_bar")
            } else {
                (Quantity::Beta1Eff, "beta1_eff", "beta1_eff_bar")
            };
            let (cells, points) = ratio_sweep(&map_base(0.8), &map_base(0.0), &grid, quantity)?;
            let table = ratio_table(&grid, &cells, num, den);
            Ok(PresetOutput {
                datasets: vec![Dataset {
                    name: preset.as_str().into(),
                    table,
                }],
                points,
            })
        }
        Preset::Fig4a => {
            let mut out = curves(|c| window_axis(c, WINDOW_POINTS), "fig4a")?;
            out.datasets.push(Dataset {
                name: "fig4a_max_power".into(),
                table: max_power_table(&curve_configs()),
            });
            Ok(out)
        }
        Preset::Fig4b => {
            let mut out = curves(|c| window_axis(c, WINDOW_POINTS), "fig4b")?;
            out.datasets.push(Dataset {
                name: "fig4b_inset".into(),
                table: max_power_table(&inset_configs()),
            });
            Ok(out)
        }
        Preset::Fig5a => {
            let axis = [alpha_ratio_axis()];
            let mut datasets = Vec::new();
            let mut points = Vec::new();
            for (e1, g) in ALPHA_RATIO_SETS {
                let cfg = RunConfig {
                    e1,
                    g,
                    ..curve_base()
                };
                let (cells, rows) = ratio_sweep(&cfg, &ic(&cfg), &axis, Quantity::CoolingPower)?;
                datasets.push(Dataset {
                    name: format!("fig5a_e1-{e1:.2}_g-{g}"),
                    table: ratio_table(&axis, &cells, "q1", "q1_ic"),
                });
                points.extend(rows);
            }
            Ok(PresetOutput { datasets, points })
        }
        Preset::Fig5b | Preset::Fig5c => {
            let init = if preset == Preset::Fig5b {
                InitialState::ThermalProduct
            } else {
                InitialState::DarkOrthogonal
            };
            let (num, den) = dark_map_configs(init);
            let (cells, points) = ratio_sweep(&num, &den, &grid, Quantity::CoolingPower)?;
            let table = ratio_table(&grid, &cells, "q1", "q1_ic");
            Ok(PresetOutput {
                datasets: vec![Dataset {
                    name: preset.as_str().into(),
                    table,
                }],
                points,
            })
        }
    }
}

/// Runs a preset and writes one CSV per dataset into `out_dir`.
pub fn write_preset(preset: Preset, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let out = run_preset(preset)?;
    out.datasets
        .iter()
        .map(|d| {
            let path = out_dir.join(format!("{}.csv", d.name));
            d.table.write_atomic(&path)?;
            Ok(path)
        })
        .collect()
}
