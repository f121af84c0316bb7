//! JSON configuration for `simulate`, validated field by field so that every
//! error names the offending field as a JSON pointer.
//!
//! ```json
//! {
//!   "model": "hhm",
//!   "representation": "polar",
//!   "grid": { "points": 256, "domain": "circle", "scheme": "fd4" },
//!   "dt": 2.5e-4,
//!   "t_end": 1.0,
//!   "cadence": 100,
//!   "renormalize": true,
//!   "filter": "auto",
//!   "seed": { "family": "static-winding", "p3": 1.0, "winding": 1 },
//!   "probes": [0.0]
//! }
//! ```

use std::collections::BTreeSet;

use serde_json::{Map, Value};

use hyperwind_core::evolution::{growth_limited_cutoff, Model, Representation, SimulationConfig, SpatialScheme};
use hyperwind_core::geometry::{SpaceKind, CONSTRAINT_TOL, DEFAULT_HALF_LENGTH};

use crate::CliError;

/// Noise budget used by `"filter": "auto"`.
pub const AUTO_FILTER_BUDGET: f64 = 1e-8;

/// Reader over one JSON object that remembers its pointer and which keys were
/// consumed.
#[derive(Debug)]
pub struct Fields<'a> {
    map: &'a Map<String, Value>,
    pointer: String,
    used: BTreeSet<&'a str>,
}

impl<'a> Fields<'a> {
    pub fn root(value: &'a Value) -> Result<Self, CliError> {
        Self::at(value, String::new())
    }

    fn at(value: &'a Value, pointer: String) -> Result<Self, CliError> {
        match value {
            Value::Object(map) => Ok(Self { map, pointer, used: BTreeSet::new() }),
            _ => Err(CliError::invalid(display(&pointer), "expected an object")),
        }
    }

    pub fn pointer(&self, key: &str) -> String {
        format!("{}/{}", self.pointer, key.replace('~', "~0").replace('/', "~1"))
    }

    fn get(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.map.get_key_value(key)?;
        self.used.insert(k.as_str());
        if v.is_null() {
            None
        } else {
            Some(v)
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.get(key).is_some_and(|v| !v.is_null())
    }

    pub fn object(&mut self, key: &str) -> Result<Fields<'a>, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => Fields::at(v, ptr),
            None => Err(CliError::invalid(ptr, "missing required object")),
        }
    }

    pub fn f64(&mut self, key: &str) -> Result<f64, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::invalid(ptr, "expected a finite number")),
            None => Err(CliError::invalid(ptr, "missing required number")),
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.has(key) {
            self.f64(key)
        } else {
            self.get(key);
            Ok(default)
        }
    }

    pub fn i64_or(&mut self, key: &str, default: i64) -> Result<i64, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => v.as_i64().ok_or_else(|| CliError::invalid(ptr, "expected an integer")),
            None => Ok(default),
        }
    }

    pub fn usize(&mut self, key: &str) -> Result<usize, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| CliError::invalid(ptr, "expected a non-negative integer")),
            None => Err(CliError::invalid(ptr, "missing required integer")),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        if self.has(key) {
            self.usize(key)
        } else {
            self.get(key);
            Ok(default)
        }
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> Result<bool, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => v.as_bool().ok_or_else(|| CliError::invalid(ptr, "expected true or false")),
            None => Ok(default),
        }
    }

    pub fn str(&mut self, key: &str) -> Result<&'a str, CliError> {
        let ptr = self.pointer(key);
        match self.get(key) {
            Some(v) => v.as_str().ok_or_else(|| CliError::invalid(ptr, "expected a string")),
            None => Err(CliError::invalid(ptr, "missing required string")),
        }
    }

    pub fn str_or(&mut self, key: &str, default: &'a str) -> Result<&'a str, CliError> {
        if self.has(key) {
            self.str(key)
        } else {
            self.get(key);
            Ok(default)
        }
    }

    pub fn raw(&mut self, key: &str) -> Option<&'a Value> {
        self.get(key)
    }

    /// Rejects keys that were never read.
    pub fn finish(self) -> Result<(), CliError> {
        match self.map.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(k) => Err(CliError::invalid(self.pointer(k), "unknown field")),
            None => Ok(()),
        }
    }
}

fn display(pointer: &str) -> String {
    if pointer.is_empty() {
        "/".into()
    } else {
        pointer.into()
    }
}

/// Initial data families accepted by `simulate`.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// `sinh θ = p3`, `φ = N x`.
    StaticWinding { p3: f64, winding: i64 },
    HhmSine { k: f64, v: f64, winding: i64, xi0: f64 },
    HhmCnoidal { p1: f64, p2: f64, p3: f64, xi0: f64 },
    HhmSech { p1: f64, p3: f64, xi0: f64 },
    /// Constant `(θ, φ)`, zero velocities.
    Uniform { theta: f64, phi: f64 },
    HsmBlowup { winding: i64, rho: f64, t0: f64 },
}

impl Seed {
    pub const FAMILIES: [&'static str; 6] =
        ["static-winding", "hhm-sine", "hhm-cnoidal", "hhm-sech", "uniform", "hsm-blowup"];

    pub fn family(&self) -> &'static str {
        match self {
            Seed::StaticWinding { .. } => "static-winding",
            Seed::HhmSine { .. } => "hhm-sine",
            Seed::HhmCnoidal { .. } => "hhm-cnoidal",
            Seed::HhmSech { .. } => "hhm-sech",
            Seed::Uniform { .. } => "uniform",
            Seed::HsmBlowup { .. } => "hsm-blowup",
        }
    }

    fn models(&self) -> &'static [Model] {
        match self {
            Seed::Uniform { .. } => &[Model::Hhm, Model::Hsm],
            Seed::HsmBlowup { .. } => &[Model::Hsm],
            _ => &[Model::Hhm],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub sim: SimulationConfig,
    pub seed: Seed,
    pub probes: Vec<f64>,
}

/// Parses and validates a `simulate` configuration. `seed_family` overrides
/// `/seed/family`.
pub fn parse_simulate(value: &Value, seed_family: Option<&str>) -> Result<SimulateConfig, CliError> {
    let mut root = Fields::root(value)?;
    let model_ptr = root.pointer("model");
    let model = match root.str("model")? {
        "hhm" => Model::Hhm,
        "hsm" => Model::Hsm,
        other => return Err(CliError::invalid(model_ptr, format!("unknown model {other:?} (hhm, hsm)"))),
    };
    let repr_ptr = root.pointer("representation");
    let representation = match root.str_or("representation", "polar")? {
        "polar" => Representation::Polar,
        "ambient" => Representation::Ambient,
        other => return Err(CliError::invalid(repr_ptr, format!("unknown representation {other:?}"))),
    };
    if model == Model::Hsm && representation == Representation::Ambient {
        return Err(CliError::invalid(repr_ptr, "the HSM is evolved in polar form only"));
    }

    let mut grid = root.object("grid")?;
    let points_ptr = grid.pointer("points");
    let points = grid.usize("points")?;
    if points < 5 {
        return Err(CliError::invalid(points_ptr, format!("grid needs at least 5 points (got {points})")));
    }
    let domain_ptr = grid.pointer("domain");
    let space = match grid.str_or("domain", "circle")? {
        "circle" => SpaceKind::Circle,
        "line" => {
            let ptr = grid.pointer("half_length");
            let half_length = grid.f64_or("half_length", DEFAULT_HALF_LENGTH)?;
            if half_length <= 0.0 {
                return Err(CliError::invalid(ptr, "half_length must be positive"));
            }
            SpaceKind::TruncatedLine { half_length }
        }
        other => return Err(CliError::invalid(domain_ptr, format!("unknown domain {other:?} (circle, line)"))),
    };
    let scheme_ptr = grid.pointer("scheme");
    let scheme = match grid.str_or("scheme", "fd4")? {
        "fd4" => SpatialScheme::FourthOrderCentered,
        "spectral" => {
            if !points.is_power_of_two() {
                return Err(CliError::invalid(points_ptr, "the spectral scheme needs a power-of-two grid"));
            }
            SpatialScheme::Spectral
        }
        other => return Err(CliError::invalid(scheme_ptr, format!("unknown scheme {other:?} (fd4, spectral)"))),
    };
    grid.finish()?;

    let dt_ptr = root.pointer("dt");
    let dt = root.f64("dt")?;
    if dt <= 0.0 {
        return Err(CliError::invalid(dt_ptr, "dt must be positive"));
    }
    let t_ptr = root.pointer("t_end");
    let t_end = root.f64("t_end")?;
    if t_end < 0.0 {
        return Err(CliError::invalid(t_ptr, "t_end must be non-negative"));
    }
    let cadence_ptr = root.pointer("cadence");
    let cadence = root.usize_or("cadence", 1)?;
    if cadence == 0 {
        return Err(CliError::invalid(cadence_ptr, "cadence must be at least 1"));
    }
    let renormalize = root.bool_or("renormalize", true)?;
    let tol_ptr = root.pointer("constraint_tol");
    let constraint_tol = root.f64_or("constraint_tol", CONSTRAINT_TOL)?;
    if constraint_tol <= 0.0 {
        return Err(CliError::invalid(tol_ptr, "constraint_tol must be positive"));
    }

    let filter_ptr = root.pointer("filter");
    let default_filter = if model == Model::Hhm { "auto" } else { "off" };
    let filter = match root.raw("filter") {
        None => parse_filter_word(default_filter, points, space, t_end, &filter_ptr)?,
        Some(Value::String(s)) => parse_filter_word(s, points, space, t_end, &filter_ptr)?,
        Some(v) => match v.as_u64() {
            Some(n) => {
                if !points.is_power_of_two() {
                    return Err(CliError::invalid(filter_ptr, "the filter needs a power-of-two grid"));
                }
                Some(n as usize)
            }
            None => return Err(CliError::invalid(filter_ptr, "expected \"auto\", \"off\" or a cutoff index")),
        },
    };

    let mut seed_fields = root.object("seed")?;
    let family_ptr = seed_fields.pointer("family");
    let family = match seed_family {
        Some(f) => {
            seed_fields.raw("family");
            f
        }
        None => seed_fields.str("family")?,
    };
    let seed = match family {
        "static-winding" => Seed::StaticWinding {
            p3: seed_fields.f64_or("p3", 1.0)?,
            winding: seed_fields.i64_or("winding", 1)?,
        },
        "hhm-sine" => Seed::HhmSine {
            k: seed_fields.f64("k")?,
            v: seed_fields.f64("v")?,
            winding: seed_fields.i64_or("winding", 1)?,
            xi0: seed_fields.f64_or("xi0", 0.0)?,
        },
        "hhm-cnoidal" => Seed::HhmCnoidal {
            p1: seed_fields.f64("p1")?,
            p2: seed_fields.f64("p2")?,
            p3: seed_fields.f64("p3")?,
            xi0: seed_fields.f64_or("xi0", 0.0)?,
        },
        "hhm-sech" => Seed::HhmSech {
            p1: seed_fields.f64_or("p1", 0.0)?,
            p3: seed_fields.f64_or("p3", -2.0)?,
            xi0: seed_fields.f64_or("xi0", 0.0)?,
        },
        "uniform" => Seed::Uniform {
            theta: seed_fields.f64_or("theta", 0.0)?,
            phi: seed_fields.f64_or("phi", 0.0)?,
        },
        "hsm-blowup" => Seed::HsmBlowup {
            winding: seed_fields.i64_or("winding", 1)?,
            rho: seed_fields.f64("rho")?,
            t0: seed_fields.f64_or("t0", 0.0)?,
        },
        other => {
            return Err(CliError::invalid(
                family_ptr,
                format!("unknown seed family {other:?} (one of {})", Seed::FAMILIES.join(", ")),
            ))
        }
    };
    if !seed.models().contains(&model) {
        return Err(CliError::invalid(family_ptr, format!("seed {} does not apply to this model", seed.family())));
    }
    seed_fields.finish()?;

    let probes_ptr = root.pointer("probes");
    let probes = match root.raw("probes") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| {
                    CliError::invalid(format!("{probes_ptr}/{i}"), "expected a finite number")
                })
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(CliError::invalid(probes_ptr, "expected an array of positions")),
    };
    root.finish()?;

    let sim = SimulationConfig {
        model,
        representation,
        points,
        space,
        dt,
        t_end,
        scheme,
        renormalize,
        cadence,
        constraint_tol,
        filter,
    };
    Ok(SimulateConfig { sim, seed, probes })
}

fn parse_filter_word(
    word: &str,
    points: usize,
    space: SpaceKind,
    t_end: f64,
    ptr: &str,
) -> Result<Option<usize>, CliError> {
    match word {
        "off" => Ok(None),
        "auto" => {
            if !points.is_power_of_two() {
                return Err(CliError::invalid(
                    ptr,
                    "\"auto\" filtering needs a power-of-two grid; set \"filter\": \"off\" to run unfiltered",
                ));
            }
            let cutoff = growth_limited_cutoff(space, t_end, AUTO_FILTER_BUDGET);
            Ok((cutoff < points / 2).then_some(cutoff))
        }
        other => Err(CliError::invalid(ptr, format!("unknown filter {other:?} (auto, off or an integer)"))),
    }
}
