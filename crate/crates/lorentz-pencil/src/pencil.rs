//! Surface pencils `P(s,t) = r(s) + u·T + v·N + w·B` sharing a
//! prescribed line of curvature, the angle function θ(s), and the
//! closed-form sufficient-condition sets for the three curve/surface
//! cases.
//!
//! ```
//! use lorentz_pencil::fixtures;
//!
//! let cfg = fixtures::by_name("p3").unwrap().load().unwrap();
//! let mesh = cfg.spec.sample_grid(11, 5).unwrap();
//! assert_eq!(mesh.vertices.len(), 11 * 5);
//! // the t0 row is the curve itself
//! let row = mesh.nearest_t_row(cfg.spec.t0);
//! let r = cfg.spec.curve.position(mesh.s_vals[3]).unwrap();
//! assert!((mesh.vertex(3, row) - r).euclid_norm() < 1e-12);
//! ```

use crate::expr::{EvalError, Expr};
use crate::frenet::{
    self, check_unit_speed, classify_curve, frame_at, uniform_grid, CurveError, CurveKind,
    CurveSpec, FrenetFrame,
};
use crate::minkowski::Vec3;
use crate::quad::{self, QuadError};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PencilError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("expression evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("t0 = {t0} lies outside the t range [{lo}, {hi}]")]
    T0OutOfRange { t0: f64, lo: f64, hi: f64 },
    #[error("invalid t range [{0}, {1}]")]
    InvalidTRange(f64, f64),
    #[error("grid needs at least 2 samples per direction, got {ns}x{nt}")]
    GridTooSmall { ns: usize, nt: usize },
    #[error("surface evaluation produced a non-finite vertex at (s, t) = ({s}, {t})")]
    NonFiniteVertex { s: f64, t: f64 },
    #[error("family coefficients need p >= 1")]
    EmptyFamily,
    #[error("family conditions apply only to polynomial or composed marching scales")]
    NotFamilySpec,
}

/// Marching-scale functions u, v, w of the pencil.
///
/// `Direct` holds arbitrary expressions in (s, t); family membership is
/// then established numerically rather than by the closed-form
/// conditions. The two structured variants hold the coefficient data of
/// the polynomial form `Σ_k a_ik · l(s)^k · U(t)^k` and its composition
/// with outer functions f, g, h.
#[derive(Debug, Clone)]
pub enum MarchingScale {
    Direct {
        u: Expr,
        v: Expr,
        w: Expr,
    },
    FamilyPolynomial {
        /// Coefficient rows for u, v, w; each row has length p >= 1.
        a: [Vec<f64>; 3],
        l: Expr,
        m: Expr,
        n: Expr,
        big_u: Expr,
        big_v: Expr,
        big_w: Expr,
    },
    FamilyComposed {
        a: [Vec<f64>; 3],
        l: Expr,
        m: Expr,
        n: Expr,
        big_u: Expr,
        big_v: Expr,
        big_w: Expr,
        f: Expr,
        g: Expr,
        h: Expr,
    },
}

impl MarchingScale {
    /// Expand to explicit (u, v, w) expressions in (s, t).
    fn resolve(&self) -> Result<[Expr; 3], PencilError> {
        match self {
            MarchingScale::Direct { u, v, w } => Ok([u.clone(), v.clone(), w.clone()]),
            MarchingScale::FamilyPolynomial {
                a,
                l,
                m,
                n,
                big_u,
                big_v,
                big_w,
            } => Ok([
                family_sum(&a[0], l, big_u)?,
                family_sum(&a[1], m, big_v)?,
                family_sum(&a[2], n, big_w)?,
            ]),
            MarchingScale::FamilyComposed {
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
            } => Ok([
                f.substitute("x", &family_sum(&a[0], l, big_u)?),
                g.substitute("x", &family_sum(&a[1], m, big_v)?),
                h.substitute("x", &family_sum(&a[2], n, big_w)?),
            ]),
        }
    }

    pub fn is_family(&self) -> bool {
        !matches!(self, MarchingScale::Direct { .. })
    }
}

fn family_sum(coeffs: &[f64], s_part: &Expr, t_part: &Expr) -> Result<Expr, PencilError> {
    if coeffs.is_empty() {
        return Err(PencilError::EmptyFamily);
    }
    let mut acc = Expr::Const(0.0);
    for (i, &c) in coeffs.iter().enumerate() {
        let k = (i + 1) as f64;
        let term = Expr::product(
            Expr::Const(c),
            Expr::product(
                Expr::power(s_part.clone(), k),
                Expr::power(t_part.clone(), k),
            ),
        );
        acc = Expr::sum(acc, term);
    }
    Ok(acc)
}

/// Marching-scale expressions together with their first partials.
#[derive(Debug, Clone)]
pub struct ResolvedScales {
    pub u: Expr,
    pub v: Expr,
    pub w: Expr,
    pub u_s: Expr,
    pub u_t: Expr,
    pub v_s: Expr,
    pub v_t: Expr,
    pub w_s: Expr,
    pub w_t: Expr,
}

impl ResolvedScales {
    fn new(exprs: [Expr; 3]) -> Self {
        let [u, v, w] = exprs;
        ResolvedScales {
            u_s: u.derivative("s"),
            u_t: u.derivative("t"),
            v_s: v.derivative("s"),
            v_t: v.derivative("t"),
            w_s: w.derivative("s"),
            w_t: w.derivative("t"),
            u,
            v,
            w,
        }
    }

    pub fn values(&self, s: f64, t: f64) -> Result<(f64, f64, f64), EvalError> {
        Ok((
            self.u.eval_st(s, t)?,
            self.v.eval_st(s, t)?,
            self.w.eval_st(s, t)?,
        ))
    }
}

/// A fully specified member family: curve, marching scales, isoparameter
/// t0, initial angle θ0 and the scale function λ(s).
#[derive(Debug, Clone)]
pub struct PencilSpec {
    pub curve: CurveSpec,
    pub kind: CurveKind,
    pub ms: MarchingScale,
    pub t0: f64,
    pub t_range: (f64, f64),
    pub theta0: f64,
    pub lambda: Expr,
    resolved: ResolvedScales,
    construction_warnings: Vec<String>,
}

/// Quadrature tolerance for θ(s) and its refinement-level cap.
pub const THETA_QUAD_TOL: f64 = 1e-10;
pub const THETA_QUAD_DEPTH: u32 = 20;

const CLASSIFY_SAMPLES: usize = 101;
const UNIT_SPEED_TOL: f64 = 1e-6;
const LAMBDA_MIN: f64 = 1e-9;

impl PencilSpec {
    /// Validate and assemble a spec. The curve must be unit speed (max
    /// deviation 1e-6 over 101 samples) and of constant causal kind.
    ///
    /// λ(s) is sampled over the range; zeros are recorded as
    /// construction warnings rather than rejected, since reference
    /// members of the family exist whose λ vanishes at isolated points.
    pub fn new(
        curve: CurveSpec,
        ms: MarchingScale,
        t0: f64,
        t_range: (f64, f64),
        theta0: f64,
        lambda: Expr,
    ) -> Result<Self, PencilError> {
        // The negated form also rejects NaN endpoints.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(t_range.0 < t_range.1) {
            return Err(PencilError::InvalidTRange(t_range.0, t_range.1));
        }
        if t0 < t_range.0 || t0 > t_range.1 {
            return Err(PencilError::T0OutOfRange {
                t0,
                lo: t_range.0,
                hi: t_range.1,
            });
        }
        let deviation = check_unit_speed(&curve, CLASSIFY_SAMPLES)?;
        if deviation > UNIT_SPEED_TOL {
            return Err(CurveError::NotUnitSpeed { deviation }.into());
        }
        let kind = classify_curve(&curve, CLASSIFY_SAMPLES)?;
        let resolved = ResolvedScales::new(ms.resolve()?);

        let mut warnings = Vec::new();
        let (l1, l2) = curve.s_range();
        let mut zeros = 0usize;
        for s in uniform_grid(l1, l2, CLASSIFY_SAMPLES) {
            if lambda.eval_s(s)?.abs() <= LAMBDA_MIN {
                zeros += 1;
            }
        }
        if zeros > 0 {
            warnings.push(format!(
                "lambda(s) vanishes at {zeros} of {CLASSIFY_SAMPLES} sample points; \
                 the normal degenerates there"
            ));
        }

        Ok(PencilSpec {
            curve,
            kind,
            ms,
            t0,
            t_range,
            theta0,
            lambda,
            resolved,
            construction_warnings: warnings,
        })
    }

    pub fn scales(&self) -> &ResolvedScales {
        &self.resolved
    }

    pub fn construction_warnings(&self) -> &[String] {
        &self.construction_warnings
    }

    pub fn frame_at(&self, s: f64) -> Result<FrenetFrame, PencilError> {
        Ok(frame_at(&self.curve, self.kind, s)?)
    }

    /// Sign of the torsion integral in θ(s): −1 for both spacelike-curve
    /// cases and +1 for a timelike curve.
    pub fn theta_sign(&self) -> f64 {
        if self.kind.is_timelike_curve() {
            1.0
        } else {
            -1.0
        }
    }

    /// θ(s) = θ0 ± ∫_0^s τ dσ by adaptive Simpson quadrature
    /// (absolute tolerance 1e-10). The lower limit is always s = 0.
    pub fn theta_at(&self, s: f64) -> Result<f64, PencilError> {
        let tau = |sigma: f64| {
            frame_at(&self.curve, self.kind, sigma)
                .map(|f| f.tau)
                .map_err(|e| e.to_string())
        };
        let integral = quad::adaptive_simpson(&tau, 0.0, s, THETA_QUAD_TOL, THETA_QUAD_DEPTH)?;
        Ok(self.theta0 + self.theta_sign() * integral)
    }

    /// P(s,t) = r(s) + u·T + v·N + w·B.
    pub fn evaluate_surface(&self, s: f64, t: f64) -> Result<Vec3, PencilError> {
        let frame = self.frame_at(s)?;
        let r = self.curve.position(s)?;
        let (u, v, w) = self.resolved.values(s, t)?;
        Ok(r + frame.t * u + frame.n * v + frame.b * w)
    }

    /// Uniform lattice over `s_range x t_range`, row-major with s as the
    /// major index.
    pub fn sample_grid(&self, n_s: usize, n_t: usize) -> Result<SurfaceMesh, PencilError> {
        self.sample_grid_impl(n_s, n_t, false)
    }

    /// Same lattice evaluated across threads; vertices are bit-identical
    /// to `sample_grid` because each node is computed independently and
    /// written into its own slot.
    pub fn sample_grid_parallel(&self, n_s: usize, n_t: usize) -> Result<SurfaceMesh, PencilError> {
        self.sample_grid_impl(n_s, n_t, true)
    }

    fn sample_grid_impl(
        &self,
        n_s: usize,
        n_t: usize,
        parallel: bool,
    ) -> Result<SurfaceMesh, PencilError> {
        if n_s < 2 || n_t < 2 {
            return Err(PencilError::GridTooSmall { ns: n_s, nt: n_t });
        }
        let (l1, l2) = self.curve.s_range();
        let s_vals = uniform_grid(l1, l2, n_s);
        let t_vals = uniform_grid(self.t_range.0, self.t_range.1, n_t);

        let row = |s: f64| -> Result<Vec<Vec3>, PencilError> {
            t_vals
                .iter()
                .map(|&t| {
                    let p = self.evaluate_surface(s, t)?;
                    if !p.is_finite() {
                        return Err(PencilError::NonFiniteVertex { s, t });
                    }
                    Ok(p)
                })
                .collect()
        };

        let rows: Vec<Result<Vec<Vec3>, PencilError>> = if parallel {
            std::thread::scope(|scope| {
                let handles: Vec<_> = s_vals
                    .iter()
                    .map(|&s| scope.spawn(move || row(s)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("row evaluation panicked"))
                    .collect()
            })
        } else {
            s_vals.iter().map(|&s| row(s)).collect()
        };

        let mut vertices = Vec::with_capacity(n_s * n_t);
        for r in rows {
            vertices.extend(r?);
        }
        Ok(SurfaceMesh {
            n_s,
            n_t,
            s_vals,
            t_vals,
            vertices,
        })
    }

    /// Evaluate the case-appropriate closed-form sufficient conditions
    /// on an s-grid. Only structured marching scales carry them.
    pub fn check_family_conditions(&self) -> Result<ConditionReport, PencilError> {
        self.check_family_conditions_with(101, 1e-8)
    }

    pub fn check_family_conditions_with(
        &self,
        n_s: usize,
        threshold: f64,
    ) -> Result<ConditionReport, PencilError> {
        let (a, m, n, big_u, big_v, big_w, outer) = match &self.ms {
            MarchingScale::Direct { .. } => return Err(PencilError::NotFamilySpec),
            MarchingScale::FamilyPolynomial {
                a,
                m,
                n,
                big_u,
                big_v,
                big_w,
                ..
            } => (a, m, n, big_u, big_v, big_w, None),
            MarchingScale::FamilyComposed {
                a,
                m,
                n,
                big_u,
                big_v,
                big_w,
                f,
                g,
                h,
                ..
            } => (a, m, n, big_u, big_v, big_w, Some((f, g, h))),
        };

        let t0 = self.t0;
        let bind_t = [("t", t0)];
        // Condition (a): the t-components (and outer functions, when
        // present) vanish at the isoparameter.
        let mut boundary = big_u.eval(&bind_t)?.abs();
        boundary = boundary.max(big_v.eval(&bind_t)?.abs());
        boundary = boundary.max(big_w.eval(&bind_t)?.abs());
        let (gp0, hp0) = if let Some((f, g, h)) = outer {
            let bind0 = [("x", 0.0)];
            boundary = boundary.max(f.eval(&bind0)?.abs());
            boundary = boundary.max(g.eval(&bind0)?.abs());
            boundary = boundary.max(h.eval(&bind0)?.abs());
            (
                g.derivative("x").eval(&bind0)?,
                h.derivative("x").eval(&bind0)?,
            )
        } else {
            (1.0, 1.0)
        };

        let vp0 = big_v.derivative("t").eval(&bind_t)?;
        let wp0 = big_w.derivative("t").eval(&bind_t)?;
        let a21 = a[1][0];
        let a31 = a[2][0];

        // Condition (c): the two coupling equations, with the θ(s) of
        // condition (b) supplied by quadrature.
        let (l1, l2) = self.curve.s_range();
        let mut res_v = 0.0f64;
        let mut res_w = 0.0f64;
        for s in uniform_grid(l1, l2, n_s) {
            let theta = self.theta_at(s)?;
            let lam = self.lambda.eval_s(s)?;
            let lhs_v = gp0 * a21 * m.eval_s(s)? * vp0;
            let lhs_w = hp0 * a31 * n.eval_s(s)? * wp0;
            let (rhs_v, rhs_w) = match self.kind {
                CurveKind::SpacelikeWithSpacelikeBinormal => {
                    (lam * theta.sinh(), lam * theta.cosh())
                }
                CurveKind::SpacelikeWithTimelikeBinormal => {
                    (-lam * theta.sinh(), -lam * theta.cosh())
                }
                CurveKind::Timelike => (lam * theta.sin(), -lam * theta.cos()),
            };
            res_v = res_v.max((lhs_v - rhs_v).abs());
            res_w = res_w.max((lhs_w - rhs_w).abs());
        }

        let entries = vec![
            ConditionEntry::new("boundary_vanishing", boundary, threshold),
            // θ(s) is produced by the same quadrature the coupling
            // equations consume, so its residual is structural.
            ConditionEntry::new("theta_consistency", 0.0, threshold),
            ConditionEntry::new("coupling_v", res_v, threshold),
            ConditionEntry::new("coupling_w", res_w, threshold),
        ];
        let overall = entries.iter().all(|e| e.pass);
        Ok(ConditionReport { entries, overall })
    }
}

/// The reference normal `n1(s)`: `cosh θ N + sinh θ B` for spacelike
/// curves, `cos θ N + sin θ B` for timelike curves. Lorentz-orthogonal
/// to T by frame orthogonality.
pub fn reference_normal(frame: &FrenetFrame, theta: f64) -> Vec3 {
    if frame.kind.is_timelike_curve() {
        frame.n * theta.cos() + frame.b * theta.sin()
    } else {
        frame.n * theta.cosh() + frame.b * theta.sinh()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConditionEntry {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl ConditionEntry {
    fn new(name: &str, residual: f64, threshold: f64) -> Self {
        ConditionEntry {
            name: name.into(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
    pub overall: bool,
}

/// A sampled surface patch: `n_s * n_t` vertices in row-major order with
/// s as the major index, plus the generating lattice.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub n_s: usize,
    pub n_t: usize,
    pub s_vals: Vec<f64>,
    pub t_vals: Vec<f64>,
    pub vertices: Vec<Vec3>,
}

impl SurfaceMesh {
    pub fn vertex(&self, i_s: usize, i_t: usize) -> Vec3 {
        self.vertices[i_s * self.n_t + i_t]
    }

    /// Index of the lattice t-row closest to the given value.
    pub fn nearest_t_row(&self, t: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &tv) in self.t_vals.iter().enumerate() {
            let d = (tv - t).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// `frenet::torsion_profile` re-exported at the pencil level for CLI use.
pub fn torsion_profile(
    curve: &CurveSpec,
    kind: CurveKind,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>, CurveError> {
    frenet::torsion_profile(curve, kind, grid)
}
