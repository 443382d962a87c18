//! JSON configuration documents and their translation to `PencilSpec`.
//!
//! A document pins one pencil: the shared curve, the marching-scale
//! functions, the isoparameter `t0`, the initial angle `theta0`, and
//! λ(s). Unknown fields are rejected so typos fail loudly. Example:
//!
//! ```json
//! {
//!   "curve": { "x": "cos(s)", "y": "sin(s)", "z": "0",
//!              "s_range": [0.0, 6.283185307179586] },
//!   "t_range": [-1.0, 1.0],
//!   "t0": 0.0,
//!   "theta0": 0.0,
//!   "lambda": "s",
//!   "marching_scale": {
//!     "direct": { "u": "sin(t)", "v": "0", "w": "-sinh(t*s)" }
//!   }
//! }
//! ```

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::expr::{Expr, ParseError};
use crate::frenet::CurveSpec;
use crate::pencil::{MarchingScale, PencilError, PencilSpec};
use crate::verify::Tolerances;

pub const DEFAULT_GRID: (usize, usize) = (101, 41);

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in field `{field}`: {source}")]
    Expr {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error("grid needs at least 2 samples per direction, got {0} x {1}")]
    Grid(usize, usize),
    #[error("coefficient table needs 3 rows (u, v, w) of equal length >= 1")]
    Coefficients,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub curve: CurveSection,
    pub t_range: (f64, f64),
    pub t0: f64,
    #[serde(default)]
    pub theta0: f64,
    pub lambda: String,
    pub marching_scale: MarchingScaleSection,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub tolerances: Option<ToleranceSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub x: String,
    pub y: String,
    pub z: String,
    pub s_range: (f64, f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum MarchingScaleSection {
    Direct {
        u: String,
        v: String,
        w: String,
    },
    Polynomial {
        a: [Vec<f64>; 3],
        l: String,
        m: String,
        n: String,
        #[serde(rename = "U")]
        big_u: String,
        #[serde(rename = "V")]
        big_v: String,
        #[serde(rename = "W")]
        big_w: String,
    },
    Composed {
        a: [Vec<f64>; 3],
        l: String,
        m: String,
        n: String,
        #[serde(rename = "U")]
        big_u: String,
        #[serde(rename = "V")]
        big_v: String,
        #[serde(rename = "W")]
        big_w: String,
        f: String,
        g: String,
        h: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_s: usize,
    pub n_t: usize,
}

/// Optional per-check overrides; unset checks keep the default (or the
/// `LORENTZ_PENCIL_TOL` blanket value).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub unit_speed: Option<f64>,
    pub frame: Option<f64>,
    pub isoparametric: Option<f64>,
    pub phi1: Option<f64>,
    pub parallelism: Option<f64>,
    pub rodrigues: Option<f64>,
}

/// A validated configuration: the assembled spec plus the effective
/// grid and tolerances.
#[derive(Debug)]
pub struct LoadedConfig {
    pub spec: PencilSpec,
    pub grid: (usize, usize),
    pub tolerances: Tolerances,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    let doc: ConfigDocument = serde_json::from_str(text)?;
    build(doc)
}

fn parse_field(field: &'static str, text: &str, vars: &[&str]) -> Result<Expr, ConfigError> {
    Expr::parse(text, vars).map_err(|source| ConfigError::Expr { field, source })
}

fn build(doc: ConfigDocument) -> Result<LoadedConfig, ConfigError> {
    let curve = CurveSpec::new(
        parse_field("curve.x", &doc.curve.x, &["s"])?,
        parse_field("curve.y", &doc.curve.y, &["s"])?,
        parse_field("curve.z", &doc.curve.z, &["s"])?,
        doc.curve.s_range,
    )
    .map_err(PencilError::from)?;
    let lambda = parse_field("lambda", &doc.lambda, &["s"])?;

    let ms = match &doc.marching_scale {
        MarchingScaleSection::Direct { u, v, w } => MarchingScale::Direct {
            u: parse_field("marching_scale.u", u, &["s", "t"])?,
            v: parse_field("marching_scale.v", v, &["s", "t"])?,
            w: parse_field("marching_scale.w", w, &["s", "t"])?,
        },
        MarchingScaleSection::Polynomial {
            a,
            l,
            m,
            n,
            big_u,
            big_v,
            big_w,
        } => {
            check_coefficients(a)?;
            MarchingScale::FamilyPolynomial {
                a: a.clone(),
                l: parse_field("marching_scale.l", l, &["s"])?,
                m: parse_field("marching_scale.m", m, &["s"])?,
                n: parse_field("marching_scale.n", n, &["s"])?,
                big_u: parse_field("marching_scale.U", big_u, &["t"])?,
                big_v: parse_field("marching_scale.V", big_v, &["t"])?,
                big_w: parse_field("marching_scale.W", big_w, &["t"])?,
            }
        }
        MarchingScaleSection::Composed {
            a,
            l,
            m,
            n,
            big_u,
            big_v,
            big_w,
            f,
            g,
            h,
        } => {
            check_coefficients(a)?;
            MarchingScale::FamilyComposed {
                a: a.clone(),
                l: parse_field("marching_scale.l", l, &["s"])?,
                m: parse_field("marching_scale.m", m, &["s"])?,
                n: parse_field("marching_scale.n", n, &["s"])?,
                big_u: parse_field("marching_scale.U", big_u, &["t"])?,
                big_v: parse_field("marching_scale.V", big_v, &["t"])?,
                big_w: parse_field("marching_scale.W", big_w, &["t"])?,
                f: parse_field("marching_scale.f", f, &["x"])?,
                g: parse_field("marching_scale.g", g, &["x"])?,
                h: parse_field("marching_scale.h", h, &["x"])?,
            }
        }
    };

    let spec = PencilSpec::new(curve, ms, doc.t0, doc.t_range, doc.theta0, lambda)?;

    let grid = match &doc.grid {
        None => DEFAULT_GRID,
        Some(g) if g.n_s >= 2 && g.n_t >= 2 => (g.n_s, g.n_t),
        Some(g) => return Err(ConfigError::Grid(g.n_s, g.n_t)),
    };

    let mut tol = Tolerances::from_env();
    if let Some(sec) = &doc.tolerances {
        if let Some(v) = sec.unit_speed {
            tol.unit_speed = v;
        }
        if let Some(v) = sec.frame {
            tol.frame = v;
        }
        if let Some(v) = sec.isoparametric {
            tol.isoparametric = v;
        }
        if let Some(v) = sec.phi1 {
            tol.phi1 = v;
        }
        if let Some(v) = sec.parallelism {
            tol.parallelism = v;
        }
        if let Some(v) = sec.rodrigues {
            tol.rodrigues = v;
        }
    }

    Ok(LoadedConfig {
        spec,
        grid,
        tolerances: tol,
    })
}

fn check_coefficients(a: &[Vec<f64>; 3]) -> Result<(), ConfigError> {
    let p = a[0].len();
    if p == 0 || a[1].len() != p || a[2].len() != p {
        return Err(ConfigError::Coefficients);
    }
    Ok(())
}
