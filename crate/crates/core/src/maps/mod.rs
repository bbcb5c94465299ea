//! The two discrete maps that drive the cipher.
//!
//! 3D hyperchaotic map:
//!
//! ```text
//! x' = a1·x + a2·y + a3·y²
//! y' = b1 − b2·z
//! z' = c·x
//! ```
//!
//! 2D quadratic memristor map:
//!
//! ```text
//! x' = k·(q² − 1)·x
//! q' = q + x
//! ```
//!
//! Every iteration is checked against [`DIVERGENCE_LIMIT`]; a state that
//! leaves the bounded region is reported as [`Error::OrbitDiverged`] rather
//! than propagated into the keystream.

mod bifurcation;
mod lyapunov;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use bifurcation::{bifurcation_sweep, BifurcationRow, BifurcationTable, SweepSpec};
pub use lyapunov::{lyapunov_spectrum, lyapunov_spectrum_of, LyapunovSpectrum};

/// Largest state magnitude accepted before an orbit is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Transient iterations discarded before sampling, unless overridden.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Which of the two maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapId {
    #[serde(rename = "3d")]
    Hyper3D,
    #[serde(rename = "2d")]
    Mem2D,
}

impl MapId {
    pub fn dimension(self) -> usize {
        match self {
            MapId::Hyper3D => 3,
            MapId::Mem2D => 2,
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapId::Hyper3D => "3d",
            MapId::Mem2D => "2d",
        })
    }
}

impl FromStr for MapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "3d" | "hyper3d" => Ok(MapId::Hyper3D),
            "2d" | "mem2d" => Ok(MapId::Mem2D),
            other => Err(Error::InvalidArgument(format!("unknown map `{other}`, expected 3d or 2d"))),
        }
    }
}

/// A discrete map on `N` real state variables.
///
/// `advance` is the raw recurrence; callers go through [`checked_step`] to
/// get divergence detection.
pub trait DiscreteMap<const N: usize>: Sync {
    fn advance(&self, s: [f64; N]) -> [f64; N];

    /// Row-major Jacobian of `advance` evaluated at `s`.
    fn tangent(&self, s: &[f64; N]) -> [[f64; N]; N];
}

/// Coefficients of the 3D hyperchaotic map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper3DParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
}

impl Hyper3DParams {
    /// The configuration used for encryption.
    pub const REFERENCE: Hyper3DParams = Hyper3DParams {
        a1: 0.05,
        a2: 0.25,
        a3: 0.11,
        b1: 4.0,
        b2: 1.2,
        c: 2.15,
    };

    pub const NAMES: [&'static str; 6] = ["a1", "a2", "a3", "b1", "b2", "c"];

    pub fn new(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64, c: f64) -> Result<Self> {
        let p = Hyper3DParams { a1, a2, a3, b1, b2, c };
        if [a1, a2, a3, b1, b2, c].iter().all(|v| v.is_finite()) {
            Ok(p)
        } else {
            Err(Error::InvalidArgument(format!("non-finite 3D map parameter in {p:?}")))
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "a1" => self.a1,
            "a2" => self.a2,
            "a3" => self.a3,
            "b1" => self.b1,
            "b2" => self.b2,
            "c" => self.c,
            _ => return None,
        })
    }

    /// Copy with the named coefficient replaced.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite value for `{name}`")));
        }
        let mut p = *self;
        let slot = match name {
            "a1" => &mut p.a1,
            "a2" => &mut p.a2,
            "a3" => &mut p.a3,
            "b1" => &mut p.b1,
            "b2" => &mut p.b2,
            "c" => &mut p.c,
            _ => return Err(unknown_param(MapId::Hyper3D, name)),
        };
        *slot = value;
        Ok(p)
    }
}

impl Default for Hyper3DParams {
    fn default() -> Self {
        Self::REFERENCE
    }
}

impl DiscreteMap<3> for Hyper3DParams {
    #[inline]
    fn advance(&self, [x, y, z]: [f64; 3]) -> [f64; 3] {
        [
            self.a1 * x + self.a2 * y + self.a3 * y * y,
            self.b1 - self.b2 * z,
            self.c * x,
        ]
    }

    #[inline]
    fn tangent(&self, s: &[f64; 3]) -> [[f64; 3]; 3] {
        let y = s[1];
        [
            [self.a1, self.a2 + 2.0 * self.a3 * y, 0.0],
            [0.0, 0.0, -self.b2],
            [self.c, 0.0, 0.0],
        ]
    }
}

/// Coefficient of the 2D memristor map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mem2DParams {
    pub k: f64,
}

impl Mem2DParams {
    /// Hyperchaotic regime used for encryption.
    pub const REFERENCE: Mem2DParams = Mem2DParams { k: 1.75 };

    pub const NAMES: [&'static str; 1] = ["k"];

    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() {
            Ok(Mem2DParams { k })
        } else {
            Err(Error::InvalidArgument("non-finite 2D map parameter k".into()))
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        (name == "k").then_some(self.k)
    }

    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        match name {
            "k" => Mem2DParams::new(value),
            _ => Err(unknown_param(MapId::Mem2D, name)),
        }
    }
}

impl Default for Mem2DParams {
    fn default() -> Self {
        Self::REFERENCE
    }
}

impl DiscreteMap<2> for Mem2DParams {
    #[inline]
    fn advance(&self, [x, q]: [f64; 2]) -> [f64; 2] {
        [self.k * (q * q - 1.0) * x, q + x]
    }

    #[inline]
    fn tangent(&self, &[x, q]: &[f64; 2]) -> [[f64; 2]; 2] {
        [[self.k * (q * q - 1.0), 2.0 * self.k * q * x], [1.0, 1.0]]
    }
}

fn unknown_param(map: MapId, name: &str) -> Error {
    let names: &[&str] = match map {
        MapId::Hyper3D => &Hyper3DParams::NAMES,
        MapId::Mem2D => &Mem2DParams::NAMES,
    };
    Error::InvalidArgument(format!(
        "unknown {map} map parameter `{name}`, expected one of {}",
        names.join(", ")
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State3 {
    pub const DEFAULT_SEED: State3 = State3 { x: 0.1, y: 0.1, z: 0.1 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        State3 { x, y, z }
    }
}

impl From<[f64; 3]> for State3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        State3 { x, y, z }
    }
}

impl From<State3> for [f64; 3] {
    fn from(s: State3) -> Self {
        [s.x, s.y, s.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State2 {
    pub x: f64,
    pub q: f64,
}

impl State2 {
    pub const DEFAULT_SEED: State2 = State2 { x: 0.1, q: 0.1 };

    pub fn new(x: f64, q: f64) -> Self {
        State2 { x, q }
    }
}

impl From<[f64; 2]> for State2 {
    fn from([x, q]: [f64; 2]) -> Self {
        State2 { x, q }
    }
}

impl From<State2> for [f64; 2] {
    fn from(s: State2) -> Self {
        [s.x, s.q]
    }
}

/// Parameters of either map, tagged by which map they belong to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map")]
pub enum MapParams {
    #[serde(rename = "3d")]
    Hyper3D(Hyper3DParams),
    #[serde(rename = "2d")]
    Mem2D(Mem2DParams),
}

impl MapParams {
    pub fn reference(map: MapId) -> Self {
        match map {
            MapId::Hyper3D => MapParams::Hyper3D(Hyper3DParams::REFERENCE),
            MapId::Mem2D => MapParams::Mem2D(Mem2DParams::REFERENCE),
        }
    }

    pub fn map_id(&self) -> MapId {
        match self {
            MapParams::Hyper3D(_) => MapId::Hyper3D,
            MapParams::Mem2D(_) => MapId::Mem2D,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match self {
            MapParams::Hyper3D(p) => p.get(name),
            MapParams::Mem2D(p) => p.get(name),
        }
    }

    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        Ok(match self {
            MapParams::Hyper3D(p) => MapParams::Hyper3D(p.with(name, value)?),
            MapParams::Mem2D(p) => MapParams::Mem2D(p.with(name, value)?),
        })
    }
}

/// A state of either map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapState {
    Hyper3D(State3),
    Mem2D(State2),
}

impl MapState {
    pub fn default_seed(map: MapId) -> Self {
        match map {
            MapId::Hyper3D => MapState::Hyper3D(State3::DEFAULT_SEED),
            MapId::Mem2D => MapState::Mem2D(State2::DEFAULT_SEED),
        }
    }

    pub fn map_id(&self) -> MapId {
        match self {
            MapState::Hyper3D(_) => MapId::Hyper3D,
            MapState::Mem2D(_) => MapId::Mem2D,
        }
    }

    /// Builds a state from a component list of the map's dimension.
    pub fn from_components(map: MapId, v: &[f64]) -> Result<Self> {
        match (map, v) {
            (MapId::Hyper3D, &[x, y, z]) => Ok(MapState::Hyper3D(State3 { x, y, z })),
            (MapId::Mem2D, &[x, q]) => Ok(MapState::Mem2D(State2 { x, q })),
            _ => Err(Error::InvalidArgument(format!(
                "{map} map needs {} state components, got {}",
                map.dimension(),
                v.len()
            ))),
        }
    }
}

fn check_state<const N: usize>(s: &[f64; N], iteration: usize) -> Result<()> {
    if s.iter().all(|v| v.is_finite() && v.abs() <= DIVERGENCE_LIMIT) {
        Ok(())
    } else {
        Err(Error::OrbitDiverged { iteration })
    }
}

/// One step of `map` with divergence detection. `iteration` is reported in
/// the error when the new state is out of bounds.
pub fn checked_step<M: DiscreteMap<N>, const N: usize>(
    map: &M,
    s: [f64; N],
    iteration: usize,
) -> Result<[f64; N]> {
    let next = map.advance(s);
    check_state(&next, iteration)?;
    Ok(next)
}

pub fn step3(s: State3, p: &Hyper3DParams) -> Result<State3> {
    checked_step(p, s.into(), 1).map(State3::from)
}

pub fn step2(s: State2, p: &Mem2DParams) -> Result<State2> {
    checked_step(p, s.into(), 1).map(State2::from)
}

pub fn jacobian3(s: State3, p: &Hyper3DParams) -> [[f64; 3]; 3] {
    p.tangent(&s.into())
}

pub fn jacobian2(s: State2, p: &Mem2DParams) -> [[f64; 2]; 2] {
    p.tangent(&s.into())
}

/// Iterates `burn_in` steps silently, then records the next `n` states.
///
/// Iterations are counted from 1 across burn-in and recording, so the index
/// in an `OrbitDiverged` error is the total number of steps taken.
pub fn iterate<M: DiscreteMap<N>, const N: usize>(
    map: &M,
    seed: [f64; N],
    burn_in: usize,
    n: usize,
) -> Result<Vec<[f64; N]>> {
    check_state(&seed, 0)?;
    let mut s = seed;
    for i in 1..=burn_in {
        s = checked_step(map, s, i)?;
    }
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        s = checked_step(map, s, burn_in + i)?;
        out.push(s);
    }
    Ok(out)
}

/// Recorded states of one map together with everything needed to
/// regenerate them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit<P, S> {
    pub params: P,
    pub seed_state: S,
    pub burn_in: usize,
    pub states: Vec<S>,
}

pub type Orbit3 = Orbit<Hyper3DParams, State3>;
pub type Orbit2 = Orbit<Mem2DParams, State2>;

impl<P, S> Orbit<P, S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn require_samples(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("orbit sample count must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn orbit3(seed: State3, p: &Hyper3DParams, burn_in: usize, n: usize) -> Result<Orbit3> {
    require_samples(n)?;
    let states = iterate(p, seed.into(), burn_in, n)?;
    Ok(Orbit {
        params: *p,
        seed_state: seed,
        burn_in,
        states: states.into_iter().map(State3::from).collect(),
    })
}

pub fn orbit2(seed: State2, p: &Mem2DParams, burn_in: usize, n: usize) -> Result<Orbit2> {
    require_samples(n)?;
    let states = iterate(p, seed.into(), burn_in, n)?;
    Ok(Orbit {
        params: *p,
        seed_state: seed,
        burn_in,
        states: states.into_iter().map(State2::from).collect(),
    })
}

impl Orbit3 {
    pub fn to_csv(&self) -> Result<String> {
        write_csv(&["n", "x", "y", "z"], self.states.iter().enumerate().map(|(i, s)| {
            vec![i.to_string(), s.x.to_string(), s.y.to_string(), s.z.to_string()]
        }))
    }
}

impl Orbit2 {
    pub fn to_csv(&self) -> Result<String> {
        write_csv(&["n", "x", "q"], self.states.iter().enumerate().map(|(i, s)| {
            vec![i.to_string(), s.x.to_string(), s.q.to_string()]
        }))
    }
}

pub(crate) fn write_csv<I>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::IoFailure(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::IoFailure(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
