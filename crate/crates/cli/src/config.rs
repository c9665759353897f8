//! Run configuration: a TOML document with `[scene]`, `[sources]`,
//! `[numeric]` and `[output]` sections. Unknown keys are rejected.

use std::f64::consts::PI;
use std::path::PathBuf;

use obscat::fields::{GridSpec, Sources};
use obscat::geometry::{Curve, CurveShape, Point, RadialFunction};
use obscat::system::{Impedance, Scene};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub scene: SceneConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sources: Option<SourcesConfig>,
    pub numeric: NumericConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub omega: f64,
    #[serde(deserialize_with = "angle")]
    pub theta: f64,
    #[serde(default, deserialize_with = "angle")]
    pub phi: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub eps1: f64,
    pub mu1: f64,
    pub impedance: ImpedanceConfig,
    pub outer: CurveConfig,
    pub inner: CurveConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImpedanceConfig {
    Constant { value: f64 },
    /// `λ(t) = 1 / (offset + amplitude·cos t)`
    ReciprocalCosine { offset: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// `(a cos t + b cos 2t, c sin t) + center`
    Kite {
        a: f64,
        b: f64,
        c: f64,
        center: [f64; 2],
    },
    /// `r(t) = (p cos²t + q sin²t)^{1/2}`
    Peanut {
        p: f64,
        q: f64,
        #[serde(default)]
        offset: [f64; 2],
    },
    /// `r(t) = (a + b cos t + c sin 2t) / (1 + d cos t)`
    Apple {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        #[serde(default)]
        offset: [f64; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcesConfig {
    pub z: [[f64; 2]; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericConfig {
    /// Half node counts. Nearfield mode uses the largest.
    pub n: Vec<usize>,
    /// Number of far-field directions `M`.
    pub directions: usize,
    /// Observation angle of the verification table.
    pub t: f64,
    pub grid_c: f64,
    pub grid_m: usize,
    pub clearance: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            n: vec![64],
            directions: 64,
            t: 0.0,
            grid_c: 1.0,
            grid_m: 128,
            clearance: 0.02,
        }
    }
}

impl NumericConfig {
    fn fill_from(partial: PartialNumeric) -> Self {
        let d = Self::default();
        Self {
            n: partial.n.unwrap_or(d.n),
            directions: partial.directions.unwrap_or(d.directions),
            t: partial.t.unwrap_or(d.t),
            grid_c: partial.grid_c.unwrap_or(d.grid_c),
            grid_m: partial.grid_m.unwrap_or(d.grid_m),
            clearance: partial.clearance.unwrap_or(d.clearance),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialNumeric {
    #[serde(default, deserialize_with = "some_n_list")]
    n: Option<Vec<usize>>,
    directions: Option<usize>,
    #[serde(default, deserialize_with = "some_angle")]
    t: Option<f64>,
    grid_c: Option<f64>,
    grid_m: Option<usize>,
    clearance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub prefix: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("."),
            prefix: "run".into(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialOutput {
    dir: Option<PathBuf>,
    prefix: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scene: SceneConfig,
    sources: Option<SourcesConfig>,
    numeric: Option<PartialNumeric>,
    output: Option<PartialOutput>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleInput {
    Value(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NInput {
    One(usize),
    Many(Vec<usize>),
}

fn angle<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match AngleInput::deserialize(d)? {
        AngleInput::Value(v) => Ok(v),
        AngleInput::Text(s) => parse_angle(&s).map_err(de::Error::custom),
    }
}

fn some_angle<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    angle(d).map(Some)
}

fn n_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
    Ok(match NInput::deserialize(d)? {
        NInput::One(n) => vec![n],
        NInput::Many(v) => v,
    })
}

fn some_n_list<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<usize>>, D::Error> {
    n_list(d).map(Some)
}

/// Parses `"pi"`, `"pi/3"`, `"2pi/3"`, `"-2*pi/3"` or a plain number.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot parse angle {text:?}; use a number or a form like \"pi/3\" or \"2*pi/3\"");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(c * PI / den)
}

impl RunConfig {
    /// Parses a TOML document; errors carry the line and key.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let d = OutputConfig::default();
        let output = match raw.output {
            Some(o) => OutputConfig {
                dir: o.dir.unwrap_or(d.dir),
                prefix: o.prefix.unwrap_or(d.prefix),
            },
            None => d,
        };
        let config = RunConfig {
            scene: raw.scene,
            sources: raw.sources,
            numeric: raw.numeric.map(NumericConfig::fill_from).unwrap_or_default(),
            output,
        };
        config.check_numeric()?;
        Ok(config)
    }

    /// Fully resolved TOML; parsing it back yields an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    fn check_numeric(&self) -> Result<(), CliError> {
        let n = &self.numeric;
        let bad = |key: &str, why: String| Err(CliError::Config(format!("numeric.{key}: {why}")));
        if n.n.is_empty() {
            return bad("n", "list is empty".into());
        }
        if let Some(v) = n.n.iter().find(|&&v| v < 2) {
            return bad("n", format!("every entry must be >= 2, got {v}"));
        }
        if n.directions == 0 {
            return bad("directions", "must be positive".into());
        }
        if !(n.grid_c > 0.0 && n.grid_c.is_finite()) {
            return bad("grid_c", format!("must be positive, got {}", n.grid_c));
        }
        if n.grid_m == 0 {
            return bad("grid_m", "must be positive".into());
        }
        if !(n.clearance >= 0.0 && n.clearance.is_finite()) {
            return bad("clearance", format!("must be non-negative, got {}", n.clearance));
        }
        if !n.t.is_finite() {
            return bad("t", "must be finite".into());
        }
        Ok(())
    }

    pub fn build_scene(&self) -> Result<Scene, CliError> {
        let s = &self.scene;
        let curve = |c: &CurveConfig, key: &str| {
            c.build().map_err(|e| CliError::Config(format!("scene.{key}: {e}")))
        };
        Ok(Scene {
            omega: s.omega,
            theta: s.theta,
            phi: s.phi,
            eps0: s.eps0,
            mu0: s.mu0,
            eps1: s.eps1,
            mu1: s.mu1,
            impedance: match s.impedance {
                ImpedanceConfig::Constant { value } => Impedance::Constant { value },
                ImpedanceConfig::ReciprocalCosine { offset, amplitude } => {
                    Impedance::ReciprocalCosine { offset, amplitude }
                }
            },
            outer: curve(&s.outer, "outer")?,
            inner: curve(&s.inner, "inner")?,
        })
    }

    pub fn sources(&self) -> Option<Sources> {
        self.sources.map(|s| {
            let p = s.z.map(|[x, y]| Point::new(x, y));
            Sources::new(p[0], p[1], p[2], p[3])
        })
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            c: self.numeric.grid_c,
            m: self.numeric.grid_m,
            clearance: self.numeric.clearance,
        }
    }
}

impl CurveConfig {
    pub fn build(&self) -> obscat::Result<Curve> {
        let pt = |[x, y]: [f64; 2]| Point::new(x, y);
        match *self {
            CurveConfig::Circle { center, radius } => Curve::circle(pt(center), radius),
            CurveConfig::Kite { a, b, c, center } => Curve::new(CurveShape::Kite {
                a,
                b,
                c,
                center: pt(center),
            }),
            CurveConfig::Peanut { p, q, offset } => Curve::radial(RadialFunction::Peanut { p, q }, pt(offset)),
            CurveConfig::Apple { a, b, c, d, offset } => {
                Curve::radial(RadialFunction::Apple { a, b, c, d }, pt(offset))
            }
        }
    }
}
