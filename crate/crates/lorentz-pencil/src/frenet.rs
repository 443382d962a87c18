//! Curve kernel: causal classification of parametric curves, unit-speed
//! validation, and Frenet frames with curvature and torsion.
//!
//! Two structural-equation systems are in play. For a spacelike curve
//! `T' = κN`, `N' = εκT + τB`, `B' = τN` with `ε = +1` when the binormal
//! is spacelike and `ε = −1` when it is timelike. For a timelike curve
//! `T' = κN`, `N' = κT − τB`, `B' = τN`.
//!
//! Orientation of the binormal: the candidate is the Lorentzian product
//! `T × N`. When that candidate is spacelike it is kept as `B`; when it
//! is timelike (and for every timelike curve) `B = −(T × N)`. This is
//! the convention under which all four reference curves below reproduce
//! their known closed-form frames, and it fixes the sign of τ through
//! `B' = τN`.
//!
//! Frames come from symbolic derivatives only; finite differences are
//! reserved for independent verification elsewhere.
//!
//! ```
//! use lorentz_pencil::expr::Expr;
//! use lorentz_pencil::frenet::{classify_curve, frame_at, CurveSpec};
//!
//! let c = CurveSpec::new(
//!     Expr::parse("cos(s)", &["s"]).unwrap(),
//!     Expr::parse("sin(s)", &["s"]).unwrap(),
//!     Expr::parse("0", &["s"]).unwrap(),
//!     (0.0, 6.28),
//! ).unwrap();
//! let kind = classify_curve(&c, 50).unwrap();
//! let f = frame_at(&c, kind, 1.0).unwrap();
//! assert!((f.kappa - 1.0).abs() < 1e-12);
//! assert!(f.tau.abs() < 1e-10);
//! ```

use crate::expr::{EvalError, Expr};
use crate::minkowski::{CausalClass, Vec3};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("invalid parameter range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("expression evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("curve is not unit speed: max ||<r',r'>| - 1| = {deviation:.3e}")]
    NotUnitSpeed { deviation: f64 },
    #[error("tangent is null at s = {0}")]
    NullTangent(f64),
    #[error("curvature vanishes at s = {0} (frame undefined)")]
    VanishingCurvature(f64),
    #[error("causal type changes over the parameter range (first at s = {0})")]
    MixedCausalType(f64),
    #[error("binormal candidate is null at s = {0}")]
    DegenerateBinormal(f64),
    #[error("need at least {0} samples")]
    TooFewSamples(usize),
}

/// A parametric curve given by coordinate expressions in `s`.
///
/// Derivative expressions up to third order are prepared at
/// construction; the paper's framework needs the curve to be C² in
/// practice and the torsion formula consumes the third derivative.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    coords: [Expr; 3],
    d1: [Expr; 3],
    d2: [Expr; 3],
    d3: [Expr; 3],
    s_range: (f64, f64),
}

impl CurveSpec {
    pub fn new(x: Expr, y: Expr, z: Expr, s_range: (f64, f64)) -> Result<Self, CurveError> {
        // The negated form also rejects NaN endpoints.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(s_range.0 < s_range.1) {
            return Err(CurveError::InvalidRange(s_range.0, s_range.1));
        }
        let coords = [x, y, z];
        let d1 = coords.clone().map(|e| e.derivative("s"));
        let d2 = d1.clone().map(|e| e.derivative("s"));
        let d3 = d2.clone().map(|e| e.derivative("s"));
        Ok(CurveSpec {
            coords,
            d1,
            d2,
            d3,
            s_range,
        })
    }

    pub fn s_range(&self) -> (f64, f64) {
        self.s_range
    }

    pub fn coord_exprs(&self) -> &[Expr; 3] {
        &self.coords
    }

    fn eval3(arr: &[Expr; 3], s: f64) -> Result<Vec3, EvalError> {
        Ok(Vec3::new(
            arr[0].eval_s(s)?,
            arr[1].eval_s(s)?,
            arr[2].eval_s(s)?,
        ))
    }

    pub fn position(&self, s: f64) -> Result<Vec3, CurveError> {
        Ok(Self::eval3(&self.coords, s)?)
    }

    pub fn velocity(&self, s: f64) -> Result<Vec3, CurveError> {
        Ok(Self::eval3(&self.d1, s)?)
    }

    pub fn acceleration(&self, s: f64) -> Result<Vec3, CurveError> {
        Ok(Self::eval3(&self.d2, s)?)
    }

    pub fn jerk(&self, s: f64) -> Result<Vec3, CurveError> {
        Ok(Self::eval3(&self.d3, s)?)
    }
}

/// Causal kind of a curve, constant over its parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Spacelike curve whose binormal is spacelike (ε = +1); the
    /// principal normal is then timelike.
    SpacelikeWithSpacelikeBinormal,
    /// Spacelike curve whose binormal is timelike (ε = −1).
    SpacelikeWithTimelikeBinormal,
    /// Timelike curve; normal and binormal are both spacelike.
    Timelike,
}

impl CurveKind {
    pub fn epsilon(self) -> f64 {
        match self {
            CurveKind::SpacelikeWithSpacelikeBinormal => 1.0,
            CurveKind::SpacelikeWithTimelikeBinormal => -1.0,
            // Unused by the timelike structural equations; kept at +1.
            CurveKind::Timelike => 1.0,
        }
    }

    /// Sign applied to the binormal candidate `T × N`.
    fn binormal_sign(self) -> f64 {
        match self {
            CurveKind::SpacelikeWithSpacelikeBinormal => 1.0,
            CurveKind::SpacelikeWithTimelikeBinormal => -1.0,
            CurveKind::Timelike => -1.0,
        }
    }

    pub fn is_timelike_curve(self) -> bool {
        self == CurveKind::Timelike
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CurveKind::SpacelikeWithSpacelikeBinormal => "spacelike (spacelike binormal)",
            CurveKind::SpacelikeWithTimelikeBinormal => "spacelike (timelike binormal)",
            CurveKind::Timelike => "timelike",
        };
        f.write_str(s)
    }
}

/// Frenet data at one parameter value.
#[derive(Debug, Clone)]
pub struct FrenetFrame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub kind: CurveKind,
    pub s: f64,
}

const KAPPA_MIN: f64 = 1e-9;

/// Maximum of `||<r',r'>| - 1|` over uniform samples. Callers reject the
/// curve when this exceeds 1e-6.
pub fn check_unit_speed(curve: &CurveSpec, n_samples: usize) -> Result<f64, CurveError> {
    if n_samples < 2 {
        return Err(CurveError::TooFewSamples(2));
    }
    let mut worst = 0.0f64;
    for s in uniform_grid(curve.s_range.0, curve.s_range.1, n_samples) {
        let v = curve.velocity(s)?;
        worst = worst.max((v.inner(&v).abs() - 1.0).abs());
    }
    Ok(worst)
}

/// Classify the curve over uniform samples; mixed-kind curves are
/// rejected.
pub fn classify_curve(curve: &CurveSpec, n_samples: usize) -> Result<CurveKind, CurveError> {
    if n_samples < 2 {
        return Err(CurveError::TooFewSamples(2));
    }
    let mut kind: Option<CurveKind> = None;
    for s in uniform_grid(curve.s_range.0, curve.s_range.1, n_samples) {
        let here = classify_at(curve, s)?;
        match kind {
            None => kind = Some(here),
            Some(k) if k == here => {}
            Some(_) => return Err(CurveError::MixedCausalType(s)),
        }
    }
    Ok(kind.expect("n_samples >= 2"))
}

fn classify_at(curve: &CurveSpec, s: f64) -> Result<CurveKind, CurveError> {
    let t = curve.velocity(s)?;
    match t.causal_class() {
        CausalClass::Null => Err(CurveError::NullTangent(s)),
        CausalClass::Timelike => Ok(CurveKind::Timelike),
        CausalClass::Spacelike => {
            let tp = curve.acceleration(s)?;
            let kappa = tp.lorentz_norm();
            if kappa < KAPPA_MIN {
                return Err(CurveError::VanishingCurvature(s));
            }
            let n = tp * (1.0 / kappa);
            let b_candidate = t.lorentz_cross(&n);
            match b_candidate.causal_class() {
                CausalClass::Spacelike => Ok(CurveKind::SpacelikeWithSpacelikeBinormal),
                CausalClass::Timelike => Ok(CurveKind::SpacelikeWithTimelikeBinormal),
                CausalClass::Null => Err(CurveError::DegenerateBinormal(s)),
            }
        }
    }
}

/// Frenet frame, curvature and torsion at `s`.
///
/// τ comes from the structural equation `B' = τN`, shared by both curve
/// kinds: `τ = <B',N> / <N,N>`, with `B'` assembled from symbolic
/// derivatives of the curve up to third order.
pub fn frame_at(curve: &CurveSpec, kind: CurveKind, s: f64) -> Result<FrenetFrame, CurveError> {
    let t = curve.velocity(s)?;
    let tp = curve.acceleration(s)?;
    let kappa = tp.lorentz_norm();
    if kappa < KAPPA_MIN {
        return Err(CurveError::VanishingCurvature(s));
    }
    let n = tp * (1.0 / kappa);
    let sigma_b = kind.binormal_sign();
    let b = t.lorentz_cross(&n) * sigma_b;

    // kappa' from d(kappa^2)/ds = 2 sigma <r''', r''> with
    // sigma = sign <r'', r''>.
    let jerk = curve.jerk(s)?;
    let sigma_n = if tp.inner(&tp) >= 0.0 { 1.0 } else { -1.0 };
    let kappa_prime = sigma_n * jerk.inner(&tp) / kappa;
    let n_prime = jerk * (1.0 / kappa) - tp * (kappa_prime / (kappa * kappa));
    // B' = sigma_b (T' x N + T x N'); the first term is kappa N x N = 0.
    let b_prime = t.lorentz_cross(&n_prime) * sigma_b;
    let nn = n.inner(&n);
    let tau = b_prime.inner(&n) / nn;

    Ok(FrenetFrame {
        t,
        n,
        b,
        kappa,
        tau,
        epsilon: kind.epsilon(),
        kind,
        s,
    })
}

/// `frame_at` mapped over a grid, keeping only (s, τ).
pub fn torsion_profile(
    curve: &CurveSpec,
    kind: CurveKind,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>, CurveError> {
    grid.iter()
        .map(|&s| frame_at(curve, kind, s).map(|f| (s, f.tau)))
        .collect()
}

/// `n` uniformly spaced values covering `[a, b]` inclusive.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}
