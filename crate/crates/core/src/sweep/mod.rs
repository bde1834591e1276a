// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration, parameter sweeps and result tables.

mod presets;
mod table;
mod verify;

pub use presets::*;
pub use table::{fmt_num, Table};
pub use verify::*;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::dynamics::{initial_state, integrate, InitialState, IntegrateOptions, SolveMethod};
use crate::error::{Error, Result};
use crate::model::{BathParams, DissipationModel, MachineParams};
use crate::operators::{liouvillian, reduce_to_w};
use crate::thermo::{evaluate, ThermoReport};

/// A single operating point plus solver options. Every key is optional in
/// the JSON form; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub e1: f64,
    pub e2: f64,
    pub g: f64,
    pub beta: [f64; 3],
    /// A single rate or one per reservoir.
    #[serde(deserialize_with = "one_or_three")]
    pub gamma0: [f64; 3],
    pub alpha: f64,
    pub model: DissipationModel,
    pub init: InitialState,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            e1: 0.8,
            e2: 5.0,
            g: 0.005,
            beta: [1.0, 0.5, 0.05],
            gamma0: [0.01; 3],
            alpha: 0.0,
            model: DissipationModel::Coherent,
            init: InitialState::ThermalProduct,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            output: None,
        }
    }
}

fn one_or_three<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[f64; 3], D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Rates {
        One(f64),
        Three([f64; 3]),
    }
    Ok(match Rates::deserialize(d)? {
        Rates::One(x) => [x; 3],
        Rates::Three(v) => v,
    })
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn machine(&self) -> Result<MachineParams> {
        MachineParams::new(self.e1, self.e2, self.g)
    }

    pub fn baths(&self) -> Result<BathParams> {
        BathParams::new(self.beta, self.gamma0, self.alpha, self.model)
    }

    pub fn validate(&self) -> Result<()> {
        self.machine()?;
        self.baths()?;
        if let InitialState::Custom(s) = &self.init {
            s.validate()?;
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn integrate_options(&self, samples: usize) -> IntegrateOptions {
        IntegrateOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            samples,
            ..Default::default()
        }
    }
}

/// Parameters a sweep axis can vary. Ratio axes are applied after absolute
/// ones: `beta2_ratio` sets β2 = r·β1 and `beta3_ratio` sets β3 = r·β2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    E1,
    Alpha,
    G,
    Beta2,
    Beta3,
    Beta2Ratio,
    Beta3Ratio,
}

impl AxisParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisParam::E1 => "e1",
            AxisParam::Alpha => "alpha",
            AxisParam::G => "g",
            AxisParam::Beta2 => "beta2",
            AxisParam::Beta3 => "beta3",
            AxisParam::Beta2Ratio => "beta2_ratio",
            AxisParam::Beta3Ratio => "beta3_ratio",
        }
    }

    pub fn apply(&self, cfg: &mut RunConfig, value: f64) {
        match self {
            AxisParam::E1 => cfg.e1 = value,
            AxisParam::Alpha => cfg.alpha = value,
            AxisParam::G => cfg.g = value,
            AxisParam::Beta2 => cfg.beta[1] = value,
            AxisParam::Beta3 => cfg.beta[2] = value,
            AxisParam::Beta2Ratio => cfg.beta[1] = value * cfg.beta[0],
            AxisParam::Beta3Ratio => cfg.beta[2] = value * cfg.beta[1],
        }
    }
}

impl FromStr for AxisParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "e1" => AxisParam::E1,
            "alpha" => AxisParam::Alpha,
            "g" => AxisParam::G,
            "beta2" => AxisParam::Beta2,
            "beta3" => AxisParam::Beta3,
            "beta2_ratio" => AxisParam::Beta2Ratio,
            "beta3_ratio" => AxisParam::Beta3Ratio,
            other => return Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
        })
    }
}

/// One swept parameter and its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: AxisParam,
    pub values: Vec<f64>,
}

impl Axis {
    /// Inclusive range `start, start + step, …` up to `stop` (within half a step).
    pub fn range(param: AxisParam, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step > 0.0 && stop >= start) {
            return Err(Error::Config(format!(
                "bad range for {}: {start}:{stop}:{step}",
                param.as_str()
            )));
        }
        let n = ((stop - start) / step + 0.5).floor() as usize + 1;
        let values = (0..n).map(|k| start + step * k as f64).collect();
        Ok(Self { param, values })
    }

    pub fn list(param: AxisParam, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "axis {} needs finite values",
                param.as_str()
            )));
        }
        Ok(Self { param, values })
    }
}

/// `name=start:stop:step` or `name=v1,v2,…`.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, spec) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("axis '{s}' is not name=values")))?;
        let param: AxisParam = name.parse()?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number '{t}' in axis '{s}'")))
        };
        if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!(
                    "range axis '{s}' needs start:stop:step"
                )));
            }
            Axis::range(param, num(parts[0])?, num(parts[1])?, num(parts[2])?)
        } else {
            let values = spec.split(',').map(num).collect::<Result<Vec<_>>>()?;
            Axis::list(param, values)
        }
    }
}

/// Solver output attached to a successful row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub report: ThermoReport,
    pub kernel_dimension: usize,
    pub method: SolveMethod,
    pub residual: f64,
    pub dark_population: f64,
}

/// One solved (or failed) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub e1: f64,
    pub e2: f64,
    pub g: f64,
    pub alpha: f64,
    pub beta: [f64; 3],
    pub gamma0: [f64; 3],
    pub model: DissipationModel,
    pub init: String,
    pub result: Option<PointResult>,
    pub error: Option<String>,
}

pub const ROW_COLUMNS: [&str; 29] = [
    "e1",
    "e2",
    "e3",
    "g",
    "alpha",
    "beta1",
    "beta2",
    "beta3",
    "gamma0_1",
    "gamma0_2",
    "gamma0_3",
    "model",
    "init",
    "q1",
    "q2",
    "q3",
    "cop",
    "sigma_dot",
    "beta1_eff",
    "beta2_eff",
    "beta3_eff",
    "cooling",
    "hint_correction",
    "first_law_residual",
    "kernel_dimension",
    "method",
    "residual",
    "dark_population",
    "error",
];

impl ResultRow {
    fn unsolved(cfg: &RunConfig) -> Self {
        Self {
            e1: cfg.e1,
            e2: cfg.e2,
            g: cfg.g,
            alpha: cfg.alpha,
            beta: cfg.beta,
            gamma0: cfg.gamma0,
            model: cfg.model,
            init: cfg.init.label().to_string(),
            result: None,
            error: None,
        }
    }

    /// Cooling power in γ0⁽¹⁾ units, NaN for failed rows.
    pub fn q1(&self) -> f64 {
        self.result.map_or(f64::NAN, |r| r.report.q_dot[0])
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut out: Vec<String> = [self.e1, self.e2, self.e2 - self.e1, self.g, self.alpha]
            .iter()
            .chain(&self.beta)
            .chain(&self.gamma0)
            .map(|&x| fmt_num(x))
            .collect();
        out.push(self.model.as_str().to_string());
        out.push(self.init.clone());
        match &self.result {
            Some(r) => {
                let rep = &r.report;
                out.extend(rep.q_dot.iter().map(|&x| fmt_num(x)));
                out.push(fmt_num(rep.cop.unwrap_or(f64::NAN)));
                out.push(fmt_num(rep.sigma_dot));
                out.extend(rep.beta_eff.iter().map(|&x| fmt_num(x)));
                out.push(rep.cooling.to_string());
                out.push(fmt_num(rep.hint_correction));
                out.push(fmt_num(rep.first_law_residual));
                out.push(r.kernel_dimension.to_string());
                out.push(r.method.as_str().to_string());
                out.push(fmt_num(r.residual));
                out.push(fmt_num(r.dark_population));
            }
            None => {
                let nan = fmt_num(f64::NAN);
                out.extend(std::iter::repeat_n(nan.clone(), 8));
                out.push("na".into());
                out.push(nan.clone());
                out.push(nan.clone());
                out.push("na".into());
                out.push("na".into());
                out.push(nan.clone());
                out.push(nan);
            }
        }
        out.push(self.error.clone().unwrap_or_default());
        out
    }
}

pub fn rows_to_table(rows: &[ResultRow]) -> Table {
    let mut t = Table::new(&ROW_COLUMNS);
    for r in rows {
        t.push(r.csv_record());
    }
    t
}

/// Solves one operating point.
pub fn run_steady(cfg: &RunConfig) -> Result<ResultRow> {
    cfg.validate()?;
    let machine = cfg.machine()?;
    let baths = cfg.baths()?;
    let point = evaluate(&machine, &baths, &cfg.init)?;
    let mut row = ResultRow::unsolved(cfg);
    row.result = Some(PointResult {
        report: point.report,
        kernel_dimension: point.solution.kernel_dimension,
        method: point.solution.method,
        residual: point.solution.residual,
        dark_population: point.solution.dark_population,
    });
    Ok(row)
}

/// Like [`run_steady`] but records failures in the row.
pub fn solve_point(cfg: &RunConfig) -> ResultRow {
    run_steady(cfg).unwrap_or_else(|e| {
        let mut row = ResultRow::unsolved(cfg);
        row.error = Some(e.to_string());
        row
    })
}

/// Configurations for the Cartesian product of `axes`, in row-major order.
pub fn grid_configs(base: &RunConfig, axes: &[Axis]) -> Result<Vec<(Vec<f64>, RunConfig)>> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Config(format!(
            "a sweep takes one or two axes, got {}",
            axes.len()
        )));
    }
    if axes.len() == 2 && axes[0].param == axes[1].param {
        return Err(Error::Config(format!(
            "axis {} given twice",
            axes[0].param.as_str()
        )));
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let mut order: Vec<usize> = (0..axes.len()).collect();
    order.sort_by_key(|&k| axes[k].param);
    Ok(points
        .into_iter()
        .map(|p| {
            let mut cfg = base.clone();
            for &k in &order {
                axes[k].param.apply(&mut cfg, p[k]);
            }
            (p, cfg)
        })
        .collect())
}

/// Solves every grid point in parallel. Rows are sorted by the swept values
/// (first axis major); failed points keep their row with the error recorded.
pub fn run_sweep(base: &RunConfig, axes: &[Axis]) -> Result<Vec<ResultRow>> {
    let mut solved: Vec<(Vec<f64>, ResultRow)> = grid_configs(base, axes)?
        .into_par_iter()
        .map(|(key, cfg)| (key, solve_point(&cfg)))
        .collect();
    solved.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let rows: Vec<ResultRow> = solved.into_iter().map(|(_, r)| r).collect();
    let strong = rows
        .iter()
        .filter(|r| MachineParams::new(r.e1, r.e2, r.g).is_ok_and(|m| !m.is_weak_coupling()))
        .count();
    if strong > 0 {
        log::warn!(
            "{strong} of {} points have g above a tenth of the smallest gap; local master equation may be inaccurate there",
            rows.len()
        );
    }
    Ok(rows)
}

/// Integrates the reduced dynamics from the configured initial state.
/// Columns: t, the ten coordinates, p_D and the trace.
pub fn run_transient(cfg: &RunConfig, t_max: f64, samples: usize) -> Result<Table> {
    cfg.validate()?;
    let machine = cfg.machine()?;
    let baths = cfg.baths()?;
    let w = reduce_to_w(&liouvillian(&machine, &baths)?)?;
    let p0 = initial_state(&cfg.init, &machine, &baths)?;
    let traj = integrate(&w, &p0, t_max, &cfg.integrate_options(samples))?;
    let mut header = vec!["t".to_string()];
    header.extend(
        (0..crate::operators::N_REDUCED)
            .map(|k| crate::transcribed::coordinate_label(k).to_string()),
    );
    header.push("p_dark".into());
    header.push("trace".into());
    let mut table = Table::new(&header);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![fmt_num(*t)];
        row.extend(s.0.iter().map(|&x| fmt_num(x)));
        row.push(fmt_num(s.dark_population()));
        row.push(fmt_num(s.trace()));
        table.push(row);
    }
    Ok(table)
}
