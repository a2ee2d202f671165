//! 1D transmission geometry: Ω = (0, L) with an interior undamped region
//! Ω₂ = (a, b) and damped complement Ω₁ = (0, a) ∪ (b, L), interface points
//! Γ = {a, b}, clamped outer boundary Γ₁ = {0, L}.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Whether an element carries the structural damping term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Damped,
    Undamped,
}

/// Geometry and physical parameters of the transmission problem.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainConfig {
    /// Total length L of Ω = (0, L), in meters.
    pub length: f64,
    /// Left interface point a.
    pub interface_a: f64,
    /// Right interface point b.
    pub interface_b: f64,
    /// Damping factor ρ ≥ 0. The stability results need ρ > 0; ρ = 0 is
    /// admitted for conservation tests.
    pub rho: f64,
    /// Element counts for (0, a), (a, b), (b, L).
    pub elements_per_region: [usize; 3],
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig {
            length: 1.0,
            interface_a: 0.3,
            interface_b: 0.7,
            rho: 1.0,
            elements_per_region: [8, 8, 8],
        }
    }
}

/// Checks all invariants, returning the config unchanged when they hold.
pub fn validate(config: DomainConfig) -> Result<DomainConfig> {
    if !(config.length.is_finite()
        && config.interface_a.is_finite()
        && config.interface_b.is_finite())
    {
        return Err(Error::Geometry("non-finite geometry".to_string()));
    }
    if config.length <= 0.0 {
        return Err(Error::Geometry(format!(
            "length must be positive, got {}",
            config.length
        )));
    }
    if !(0.0 < config.interface_a
        && config.interface_a < config.interface_b
        && config.interface_b < config.length)
    {
        return Err(Error::Geometry(format!(
            "need 0 < a < b < L, got a = {}, b = {}, L = {}",
            config.interface_a, config.interface_b, config.length
        )));
    }
    if !(config.rho.is_finite() && config.rho >= 0.0) {
        return Err(Error::Parameter(format!(
            "damping factor must be non-negative, got {}",
            config.rho
        )));
    }
    if config.elements_per_region.contains(&0) {
        return Err(Error::Parameter(format!(
            "element counts must be at least 1 each, got {:?}",
            config.elements_per_region
        )));
    }
    Ok(config)
}

impl DomainConfig {
    pub fn validated(self) -> Result<Self> {
        validate(self)
    }
}

/// Mesh of Ω with nodes containing {0, a, b, L} and per-element region tags.
#[derive(Clone, Debug)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    element_region: Vec<Region>,
}

impl Mesh1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.element_region.len()
    }

    pub fn element_region(&self, e: usize) -> Region {
        self.element_region[e]
    }

    /// Element endpoints (x_left, x_right).
    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn element_length(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    pub fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Uniform mesh over (0, L) with a single region tag everywhere; the
    /// whole-domain operator of the damped plate uses `Region::Damped`.
    pub fn uniform(length: f64, n_elements: usize, region: Region) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Geometry(format!(
                "length must be positive, got {length}"
            )));
        }
        if n_elements == 0 {
            return Err(Error::Parameter("need at least 1 element".to_string()));
        }
        let mut nodes = Vec::with_capacity(n_elements + 1);
        nodes.push(0.0);
        for i in 1..n_elements {
            nodes.push(length * i as f64 / n_elements as f64);
        }
        nodes.push(length);
        Ok(Mesh1D {
            nodes,
            element_region: vec![region; n_elements],
        })
    }
}

/// Subdivides each of the three regions uniformly so that a and b are nodes.
pub fn build_mesh(config: &DomainConfig) -> Result<Mesh1D> {
    let config = validate(config.clone())?;
    let [n_left, n_mid, n_right] = config.elements_per_region;
    let breakpoints = [0.0, config.interface_a, config.interface_b, config.length];
    let counts = [n_left, n_mid, n_right];
    let mut nodes = vec![0.0];
    let mut element_region = Vec::new();
    for r in 0..3 {
        let (start, end) = (breakpoints[r], breakpoints[r + 1]);
        let n = counts[r];
        // interior points interpolated, endpoint pinned exactly
        for i in 1..n {
            nodes.push(start + (end - start) * i as f64 / n as f64);
        }
        nodes.push(end);
        let tag = if r == 1 {
            Region::Undamped
        } else {
            Region::Damped
        };
        element_region.extend(std::iter::repeat_n(tag, n));
    }
    Ok(Mesh1D {
        nodes,
        element_region,
    })
}

/// Full lab configuration: geometry plus the seed echoed in reports.
#[derive(Clone, Debug, PartialEq)]
pub struct LabConfig {
    pub domain: DomainConfig,
    pub seed: u64,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            domain: DomainConfig::default(),
            seed: 42,
        }
    }
}

/// Parses the flat key/value config format.
///
/// Keys: `length`, `interface_a`, `interface_b`, `rho`, `n_left`, `n_mid`,
/// `n_right`, `seed`. Lines are `key = value`; `#` starts a comment. Absent
/// keys take the documented defaults; unknown keys are an error.
pub fn parse_config(text: &str) -> Result<LabConfig> {
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if values.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
    }

    let mut config = LabConfig::default();
    for (key, value) in &values {
        let parse_f64 = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("key `{key}`: invalid number `{value}`")))
        };
        let parse_usize = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("key `{key}`: invalid count `{value}`")))
        };
        match key.as_str() {
            "length" => config.domain.length = parse_f64()?,
            "interface_a" => config.domain.interface_a = parse_f64()?,
            "interface_b" => config.domain.interface_b = parse_f64()?,
            "rho" => config.domain.rho = parse_f64()?,
            "n_left" => config.domain.elements_per_region[0] = parse_usize()?,
            "n_mid" => config.domain.elements_per_region[1] = parse_usize()?,
            "n_right" => config.domain.elements_per_region[2] = parse_usize()?,
            "seed" => {
                config.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("key `seed`: invalid integer `{value}`")))?
            }
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
    }
    config.domain = validate(config.domain)?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<LabConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
