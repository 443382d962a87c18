//! Built-in reference pencils, one per curve/surface case plus two
//! deliberate counterexamples. Each fixture is an embedded JSON config
//! document, so loading one exercises the same path as user configs.
//!
//! - `p1`, `p2`: spacelike curve with spacelike binormal (timelike
//!   surface normal); family-coefficient and direct forms.
//! - `p3`, `p4`: spacelike curve with timelike binormal.
//! - `p5`: timelike curve whose marching scale misses the curve by one
//!   binormal unit — verification must fail with isoparametric
//!   residual exactly 1.
//! - `p5c`: the corrected form of `p5`.
//! - `p6`: timelike curve, family-coefficient form, with λ(s) vanishing
//!   inside the range (degenerate normal at one node).

use crate::config::{parse_config, ConfigError, LoadedConfig};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub json: &'static str,
    /// Whether `verify_all` is expected to pass at default tolerances.
    pub expected_pass: bool,
}

impl Fixture {
    pub fn load(&self) -> Result<LoadedConfig, ConfigError> {
        parse_config(self.json)
    }
}

const P1: Fixture = Fixture {
    name: "p1",
    description: "hyperbolic spacelike curve, polynomial family coefficients",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "sinh(s/sqrt(2))", "y": "s/sqrt(2)", "z": "cosh(s/sqrt(2))",
                   "s_range": [-2.0, 2.0] },
        "t_range": [-1.0, 1.0],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "1",
        "marching_scale": {
            "polynomial": {
                "a": [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
                "l": "0", "m": "sinh(-s/2)", "n": "cosh(-s/2)",
                "U": "t", "V": "t", "W": "t"
            }
        }
    }"#,
};

const P2: Fixture = Fixture {
    name: "p2",
    description: "hyperbolic spacelike curve with constant torsion 1/2, direct scales",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "sqrt(3)/2*sinh(s)", "y": "s/2", "z": "sqrt(3)/2*cosh(s)",
                   "s_range": [0.0, 6.283185307179586] },
        "t_range": [-2.0, 2.0],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "1",
        "marching_scale": {
            "direct": { "u": "t", "v": "sinh(-s/2)*t", "w": "cosh(-s/2)*t" }
        }
    }"#,
};

const P3: Fixture = Fixture {
    name: "p3",
    description: "unit circle (timelike binormal), direct scales, lambda = s",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "cos(s)", "y": "sin(s)", "z": "0",
                   "s_range": [0.0, 6.283185307179586] },
        "t_range": [-1.0, 1.0],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "s",
        "marching_scale": {
            "direct": { "u": "sin(t)", "v": "0", "w": "-sinh(t*s)" }
        }
    }"#,
};

const P4: Fixture = Fixture {
    name: "p4",
    description: "unit circle, degree-4 polynomial family, lambda = -cosh(s)",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "cos(s)", "y": "sin(s)", "z": "0",
                   "s_range": [-1.1, 1.1] },
        "t_range": [-0.7, 0.2],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "-cosh(s)",
        "marching_scale": {
            "polynomial": {
                "a": [[1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]],
                "l": "sin(s)", "m": "0", "n": "cosh(s)",
                "U": "sin(t)", "V": "t", "W": "sinh(t)"
            }
        }
    }"#,
};

const P5: Fixture = Fixture {
    name: "p5",
    description: "timelike hyperbola with w = cosh(s*t): misses the curve by one unit",
    expected_pass: false,
    json: r#"{
        "curve": { "x": "cosh(s)", "y": "0", "z": "sinh(s)",
                   "s_range": [0.0, 6.283185307179586] },
        "t_range": [-1.0, 1.0],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "-s",
        "marching_scale": {
            "direct": { "u": "sinh(t)", "v": "0", "w": "cosh(s*t)" }
        }
    }"#,
};

const P5C: Fixture = Fixture {
    name: "p5c",
    description: "corrected p5: w = sinh(s*t) restores the shared curve",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "cosh(s)", "y": "0", "z": "sinh(s)",
                   "s_range": [0.0, 6.283185307179586] },
        "t_range": [-1.0, 1.0],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "-s",
        "marching_scale": {
            "direct": { "u": "sinh(t)", "v": "0", "w": "sinh(s*t)" }
        }
    }"#,
};

const P6: Fixture = Fixture {
    name: "p6",
    description: "timelike hyperbola, degree-4 family, lambda vanishing at s = 0",
    expected_pass: true,
    json: r#"{
        "curve": { "x": "cosh(s)", "y": "0", "z": "sinh(s)",
                   "s_range": [-1.0, 1.0] },
        "t_range": [-0.4, 0.4],
        "t0": 0.0,
        "theta0": 0.0,
        "lambda": "-sinh(s)",
        "marching_scale": {
            "polynomial": {
                "a": [[1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]],
                "l": "1", "m": "0", "n": "sinh(s)",
                "U": "sinh(t)", "V": "t", "W": "sinh(t)"
            }
        }
    }"#,
};

pub const ALL: [Fixture; 7] = [P1, P2, P3, P4, P5, P5C, P6];

pub fn all() -> &'static [Fixture] {
    &ALL
}

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    ALL.iter().find(|f| f.name == name)
}
