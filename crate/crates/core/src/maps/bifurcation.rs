use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{iterate, MapId, MapParams, MapState};
use crate::{Error, Result};

/// Sweep configuration for [`bifurcation_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Name of the swept coefficient (`a1`..`c` for 3D, `k` for 2D).
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub burn_in: usize,
    pub samples_per_value: usize,
    /// State component recorded per sample (`x`, `y`, `z` or `x`, `q`).
    pub component: String,
}

impl SweepSpec {
    pub const DEFAULT_BURN_IN: usize = 2000;
    pub const DEFAULT_SAMPLES: usize = 200;

    pub fn new(param: impl Into<String>, lo: f64, hi: f64, steps: usize) -> Self {
        SweepSpec {
            param: param.into(),
            lo,
            hi,
            steps,
            burn_in: Self::DEFAULT_BURN_IN,
            samples_per_value: Self::DEFAULT_SAMPLES,
            component: "x".into(),
        }
    }

    /// The evenly spaced parameter values, `lo` and `hi` included.
    pub fn values(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + span * i as f64 / last })
            .collect()
    }
}

/// One sample of the sweep. A diverged parameter value yields a single row
/// with `value: None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRow {
    pub param_value: f64,
    pub value: Option<f64>,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationTable {
    pub map: MapId,
    pub param: String,
    pub component: String,
    pub rows: Vec<BifurcationRow>,
}

impl BifurcationTable {
    /// Distinct parameter values in row order.
    pub fn param_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.param_value) {
                out.push(r.param_value);
            }
        }
        out
    }

    /// Sample values recorded at one parameter value.
    pub fn samples_at(&self, param_value: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.param_value == param_value)
            .filter_map(|r| r.value)
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        super::write_csv(
            &[self.param.as_str(), self.component.as_str(), "diverged"],
            self.rows.iter().map(|r| {
                vec![
                    r.param_value.to_string(),
                    r.value.map(|v| v.to_string()).unwrap_or_default(),
                    u8::from(r.diverged).to_string(),
                ]
            }),
        )
    }
}

fn component_index(map: MapId, name: &str) -> Result<usize> {
    let names: &[&str] = match map {
        MapId::Hyper3D => &["x", "y", "z"],
        MapId::Mem2D => &["x", "q"],
    };
    names.iter().position(|n| *n == name).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown {map} state component `{name}`"))
    })
}

fn sample_one(
    params: &MapParams,
    seed: &MapState,
    spec: &SweepSpec,
    component: usize,
) -> Result<Vec<f64>> {
    let burn = spec.burn_in;
    let n = spec.samples_per_value;
    Ok(match (params, seed) {
        (MapParams::Hyper3D(p), MapState::Hyper3D(s)) => {
            iterate(p, (*s).into(), burn, n)?.into_iter().map(|v| v[component]).collect()
        }
        (MapParams::Mem2D(p), MapState::Mem2D(s)) => {
            iterate(p, (*s).into(), burn, n)?.into_iter().map(|v| v[component]).collect()
        }
        _ => unreachable!("map kinds checked by caller"),
    })
}

/// Sweeps one coefficient over `[lo, hi]` and records long-run samples of a
/// state component at each value. Parameter values are evaluated in
/// parallel; rows come back ordered by parameter value.
pub fn bifurcation_sweep(
    base: &MapParams,
    seed: &MapState,
    spec: &SweepSpec,
) -> Result<BifurcationTable> {
    let map = base.map_id();
    if seed.map_id() != map {
        return Err(Error::InvalidArgument(format!(
            "seed state is for the {} map but parameters are for the {map} map",
            seed.map_id()
        )));
    }
    if spec.lo >= spec.hi || !spec.lo.is_finite() || !spec.hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sweep range must satisfy lo < hi, got [{}, {}]",
            spec.lo, spec.hi
        )));
    }
    if spec.steps < 2 {
        return Err(Error::InvalidArgument("sweep needs at least 2 steps".into()));
    }
    if spec.samples_per_value == 0 {
        return Err(Error::InvalidArgument("samples_per_value must be at least 1".into()));
    }
    base.with(&spec.param, spec.lo)?;
    let component = component_index(map, &spec.component)?;

    let per_value: Vec<Vec<BifurcationRow>> = spec
        .values()
        .into_par_iter()
        .map(|v| {
            let params = base.with(&spec.param, v)?;
            Ok(match sample_one(&params, seed, spec, component) {
                Ok(samples) => samples
                    .into_iter()
                    .map(|x| BifurcationRow { param_value: v, value: Some(x), diverged: false })
                    .collect(),
                Err(Error::OrbitDiverged { .. }) => {
                    vec![BifurcationRow { param_value: v, value: None, diverged: true }]
                }
                Err(e) => return Err(e),
            })
        })
        .collect::<Result<_>>()?;

    Ok(BifurcationTable {
        map,
        param: spec.param.clone(),
        component: spec.component.clone(),
        rows: per_value.into_iter().flatten().collect(),
    })
}
