//! Surface pencils through a common line of curvature in Minkowski
//! 3-space.
//!
//! Given a unit-speed curve `r(s)` in ℝ³ with the (+, +, −) metric, this
//! crate constructs surfaces `P(s, t) = r(s) + u T + v N + w B` over the
//! curve's Frenet frame, checks the closed-form conditions under which
//! `r` is a line of curvature shared by every member of the family, and
//! re-verifies that property numerically from the sampled surface alone.
//!
//! The pipeline, end to end:
//!
//! ```
//! use lorentz_pencil::{config, verify};
//!
//! let cfg = config::parse_config(r#"{
//!     "curve": { "x": "cos(s)", "y": "sin(s)", "z": "0",
//!                "s_range": [0.0, 6.283185307179586] },
//!     "t_range": [-1.0, 1.0],
//!     "t0": 0.0,
//!     "lambda": "s",
//!     "marching_scale": {
//!         "direct": { "u": "sin(t)", "v": "0", "w": "-sinh(t*s)" }
//!     }
//! }"#).unwrap();
//!
//! let report = verify::verify_all(&cfg.spec, &cfg.tolerances, 61, 11);
//! assert!(report.overall);
//! ```
//!
//! Module map: [`expr`] is the analytic expression language, [`minkowski`]
//! the Lorentzian vector kernel, [`frenet`] curve classification and
//! frames, [`pencil`] the surface construction and family conditions,
//! [`verify`] the independent numerical checks, [`obj`] deterministic
//! mesh export, [`config`] the JSON front end and [`fixtures`] the
//! built-in reference pencils.

pub mod config;
pub mod expr;
pub mod fixtures;
pub mod frenet;
pub mod minkowski;
pub mod obj;
pub mod pencil;
pub mod quad;
pub mod verify;

pub use frenet::{CurveKind, CurveSpec, FrenetFrame};
pub use minkowski::{CausalClass, Vec3};
pub use pencil::{MarchingScale, PencilSpec, SurfaceMesh};
pub use verify::{Tolerances, VerificationReport};
