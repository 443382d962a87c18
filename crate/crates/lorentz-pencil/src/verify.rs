//! Independent numerical verification of the line-of-curvature property.
//!
//! Everything here re-derives its quantities from the sampled surface
//! rather than trusting the closed-form construction: normals come from
//! the Lorentzian cross product of coordinate tangents, and the
//! Rodrigues check differentiates the unit normal by central
//! differences. A construction bug in `pencil` therefore shows up as a
//! residual, not as agreement.
//!
//! ```
//! use lorentz_pencil::{fixtures, verify};
//! use lorentz_pencil::verify::Tolerances;
//!
//! // p5 is deliberately broken: its w misses the curve by one binormal unit.
//! let cfg = fixtures::by_name("p5").unwrap().load().unwrap();
//! let report = verify::verify_all(&cfg.spec, &Tolerances::default(), 61, 11);
//! assert!(!report.overall);
//! let iso = report.check("isoparametric").unwrap();
//! assert!((iso.residual - 1.0).abs() < 1e-9);
//! ```

use serde::Serialize;

use crate::frenet::{uniform_grid, CurveKind, FrenetFrame};
use crate::minkowski::{CausalClass, Vec3};
use crate::pencil::{reference_normal, PencilError, PencilSpec};

/// Per-check residual thresholds.
///
/// `LORENTZ_PENCIL_TOL`, when set to a parseable float, replaces every
/// threshold; explicit per-check configuration wins over both it and the
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub unit_speed: f64,
    pub frame: f64,
    pub isoparametric: f64,
    pub phi1: f64,
    pub parallelism: f64,
    pub rodrigues: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_speed: 1e-6,
            frame: 1e-9,
            isoparametric: 1e-9,
            phi1: 1e-8,
            parallelism: 1e-7,
            rodrigues: 1e-5,
        }
    }
}

impl Tolerances {
    /// Defaults, overridden wholesale by `LORENTZ_PENCIL_TOL` when the
    /// variable holds a positive float. Unparseable values are ignored.
    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Ok(text) = std::env::var("LORENTZ_PENCIL_TOL") {
            if let Ok(v) = text.trim().parse::<f64>() {
                if v.is_finite() && v > 0.0 {
                    tol = Tolerances {
                        unit_speed: v,
                        frame: v,
                        isoparametric: v,
                        phi1: v,
                        parallelism: v,
                        rodrigues: v,
                    };
                }
            }
        }
        tol
    }
}

/// One verification check: its worst residual and pinned threshold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: &str, residual: f64, threshold: f64) -> Self {
        CheckRecord {
            check: check.into(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }

    fn failed(check: &str, threshold: f64) -> Self {
        CheckRecord {
            check: check.into(),
            residual: f64::INFINITY,
            threshold,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub warnings: Vec<String>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check == name)
    }
}

/// Nodes whose normal is shorter than this (Euclidean) are skipped by
/// the pointwise normal checks; they correspond to zeros of λ(s).
const DEGENERATE_NORMAL: f64 = 1e-9;

/// Central-difference step for the Rodrigues check.
const RODRIGUES_H: f64 = 1e-5;

/// Below this rotation speed the Rodrigues equation holds vacuously;
/// the check warns instead of silently passing.
const OMEGA_MIN: f64 = 1e-8;

/// Coordinate tangents of `P` at `(s, t)` in frame components, plus the
/// ambient surface normal `P_s x P_t` (Lorentzian product).
///
/// `P_s` comes from the structural equations of the curve's kind, not
/// from differencing, so it is exact up to the symbolic derivatives of
/// the marching scales.
#[derive(Debug, Clone)]
pub struct SurfaceTangents {
    pub frame: FrenetFrame,
    /// P_s = ps[0] T + ps[1] N + ps[2] B.
    pub ps: [f64; 3],
    /// P_t = pt[0] T + pt[1] N + pt[2] B.
    pub pt: [f64; 3],
    /// Ambient-coordinate normal P_s x P_t.
    pub normal: Vec3,
}

pub fn surface_tangents(spec: &PencilSpec, s: f64, t: f64) -> Result<SurfaceTangents, PencilError> {
    let frame = spec.frame_at(s)?;
    let sc = spec.scales();
    let (u, v, w) = sc.values(s, t)?;
    let (us, vs, ws) = (
        sc.u_s.eval_st(s, t)?,
        sc.v_s.eval_st(s, t)?,
        sc.w_s.eval_st(s, t)?,
    );
    let (ut, vt, wt) = (
        sc.u_t.eval_st(s, t)?,
        sc.v_t.eval_st(s, t)?,
        sc.w_t.eval_st(s, t)?,
    );
    let (k, tau) = (frame.kappa, frame.tau);

    // P_s = r' + u_s T + u T' + v_s N + v N' + w_s B + w B', expanded
    // through the structural equations of the curve's kind.
    let ps = match frame.kind {
        CurveKind::Timelike => [1.0 + us + k * v, u * k + vs + w * tau, ws - v * tau],
        _ => [
            1.0 + us + frame.epsilon * k * v,
            u * k + vs + w * tau,
            v * tau + ws,
        ],
    };
    let pt = [ut, vt, wt];

    let ps_vec = frame.t * ps[0] + frame.n * ps[1] + frame.b * ps[2];
    let pt_vec = frame.t * pt[0] + frame.n * pt[1] + frame.b * pt[2];
    let normal = ps_vec.lorentz_cross(&pt_vec);
    Ok(SurfaceTangents {
        frame,
        ps,
        pt,
        normal,
    })
}

/// Decompose the normal in the moving frame: `n = φ1 T + φ2 N + φ3 B`.
///
/// The coefficients follow from the frame's Lorentzian cross-product
/// table, which differs per curve kind:
///
/// - spacelike binormal:  T x N =  B, N x B = T, T x B =  N
/// - timelike binormal:   T x N = -B, N x B = T, T x B = -N
/// - timelike curve:      T x N = -B, N x B = T, T x B =  N
pub fn phi_decompose(tangents: &SurfaceTangents) -> [f64; 3] {
    let [a, b, c] = tangents.ps;
    let [d, e, f] = tangents.pt;
    let tn = a * e - b * d;
    let tb = a * f - c * d;
    let nb = b * f - c * e;
    match tangents.frame.kind {
        CurveKind::SpacelikeWithSpacelikeBinormal => [nb, tb, tn],
        CurveKind::SpacelikeWithTimelikeBinormal => [nb, -tb, -tn],
        CurveKind::Timelike => [nb, tb, -tn],
    }
}

/// Expected causal class of the surface normal along the shared curve:
/// timelike when the reference normal mixes a timelike N (the
/// spacelike-binormal case), spacelike otherwise.
pub fn expected_normal_class(kind: CurveKind) -> CausalClass {
    match kind {
        CurveKind::SpacelikeWithSpacelikeBinormal => CausalClass::Timelike,
        _ => CausalClass::Spacelike,
    }
}

/// Run every verification check over a `n_s x n_t` lattice.
///
/// Check list (names are stable API):
/// `unit_speed`, `frame`, `isoparametric`, `phi1_zero`, `parallelism`,
/// `rodrigues`, `surface_type`. Evaluation errors inside a check mark it
/// failed (residual ∞) and add a diagnostic warning.
pub fn verify_all(
    spec: &PencilSpec,
    tol: &Tolerances,
    n_s: usize,
    n_t: usize,
) -> VerificationReport {
    let mut checks = Vec::new();
    let mut warnings: Vec<String> = spec.construction_warnings().to_vec();

    let (l1, l2) = spec.curve.s_range();
    let s_grid = uniform_grid(l1, l2, n_s.max(2));
    let t_grid = uniform_grid(spec.t_range.0, spec.t_range.1, n_t.max(2));

    // unit_speed
    match crate::frenet::check_unit_speed(&spec.curve, s_grid.len()) {
        Ok(dev) => checks.push(CheckRecord::new("unit_speed", dev, tol.unit_speed)),
        Err(e) => {
            warnings.push(format!("unit_speed: {e}"));
            checks.push(CheckRecord::failed("unit_speed", tol.unit_speed));
        }
    }

    // frame: Gram-matrix residual against the kind's signature.
    checks.push(run_max_over(
        "frame",
        tol.frame,
        &mut warnings,
        s_grid.iter().map(|&s| -> Result<f64, PencilError> {
            let f = spec.frame_at(s)?;
            Ok(frame_gram_residual(&f))
        }),
    ));

    // isoparametric: P(s, t0) recovers r(s).
    checks.push(run_max_over(
        "isoparametric",
        tol.isoparametric,
        &mut warnings,
        s_grid.iter().map(|&s| -> Result<f64, PencilError> {
            let p = spec.evaluate_surface(s, spec.t0)?;
            let r = spec.curve.position(s)?;
            Ok((p - r).euclid_norm())
        }),
    ));

    // phi1_zero: on the curve row the normal has no tangential part.
    checks.push(run_max_over(
        "phi1_zero",
        tol.phi1,
        &mut warnings,
        s_grid.iter().map(|&s| -> Result<f64, PencilError> {
            let tg = surface_tangents(spec, s, spec.t0)?;
            let scale = tg.normal.euclid_norm().max(1.0);
            Ok(phi_decompose(&tg)[0].abs() / scale)
        }),
    ));

    // parallelism: Euclidean-unit normal against the reference normal
    // n1(s), Euclidean rejection. Degenerate nodes are skipped.
    checks.push(parallelism_check(
        spec,
        tol.parallelism,
        &s_grid,
        &mut warnings,
    ));

    // rodrigues: dn̂/ds is tangential along the shared curve.
    checks.push(rodrigues_check(spec, tol.rodrigues, &s_grid, &mut warnings));

    // surface_type: causal class of the normal along the curve row.
    checks.push(surface_type_check(spec, &s_grid, &t_grid, &mut warnings));

    let overall = checks.iter().all(|c| c.pass);
    VerificationReport {
        checks,
        warnings,
        overall,
    }
}

fn run_max_over<I>(name: &str, threshold: f64, warnings: &mut Vec<String>, values: I) -> CheckRecord
where
    I: Iterator<Item = Result<f64, PencilError>>,
{
    let mut worst = 0.0f64;
    for v in values {
        match v {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                warnings.push(format!("{name}: {e}"));
                return CheckRecord::failed(name, threshold);
            }
        }
    }
    CheckRecord::new(name, worst, threshold)
}

/// Signs of `<T,T>`, `<N,N>`, `<B,B>` for each curve kind.
fn frame_signature(kind: CurveKind) -> (f64, f64, f64) {
    match kind {
        CurveKind::SpacelikeWithSpacelikeBinormal => (1.0, -1.0, 1.0),
        CurveKind::SpacelikeWithTimelikeBinormal => (1.0, 1.0, -1.0),
        CurveKind::Timelike => (-1.0, 1.0, 1.0),
    }
}

/// Gram residual: max deviation of the pairwise Lorentzian inner
/// products from the frame's signature.
fn frame_gram_residual(f: &FrenetFrame) -> f64 {
    let (tt, nn, bb) = frame_signature(f.kind);
    let mut r = (f.t.inner(&f.t) - tt).abs();
    r = r.max((f.n.inner(&f.n) - nn).abs());
    r = r.max((f.b.inner(&f.b) - bb).abs());
    r = r.max(f.t.inner(&f.n).abs());
    r = r.max(f.t.inner(&f.b).abs());
    r = r.max(f.n.inner(&f.b).abs());
    r
}

fn parallelism_check(
    spec: &PencilSpec,
    threshold: f64,
    s_grid: &[f64],
    warnings: &mut Vec<String>,
) -> CheckRecord {
    let name = "parallelism";
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    let mut last_sign = 0.0f64;
    let mut sign_flips = 0usize;
    for &s in s_grid {
        let step = || -> Result<Option<(f64, f64)>, PencilError> {
            let tg = surface_tangents(spec, s, spec.t0)?;
            if tg.normal.euclid_norm() < DEGENERATE_NORMAL {
                return Ok(None);
            }
            let n_hat = tg.normal * (1.0 / tg.normal.euclid_norm());
            let theta = spec.theta_at(s)?;
            let n1 = reference_normal(&tg.frame, theta);
            let e1 = n1 * (1.0 / n1.euclid_norm());
            let rejection = n_hat - e1 * n_hat.euclid_dot(&e1);
            // Sign of the implied λ: Lorentzian projection onto n1.
            let lam = tg.normal.inner(&n1) / n1.inner(&n1);
            Ok(Some((rejection.euclid_norm(), lam.signum())))
        };
        match step() {
            Ok(Some((res, sign))) => {
                worst = worst.max(res);
                if last_sign != 0.0 && sign != 0.0 && sign != last_sign {
                    sign_flips += 1;
                }
                if sign != 0.0 {
                    last_sign = sign;
                }
            }
            Ok(None) => skipped += 1,
            Err(e) => {
                warnings.push(format!("{name}: {e}"));
                return CheckRecord::failed(name, threshold);
            }
        }
    }
    if skipped > 0 {
        warnings.push(format!(
            "{name}: skipped {skipped} of {} nodes with degenerate normal",
            s_grid.len()
        ));
    }
    if sign_flips > 0 {
        warnings.push(format!(
            "{name}: implied λ(s) changes sign {sign_flips} time(s) across the row"
        ));
    }
    CheckRecord::new(name, worst, threshold)
}

/// Frame components of the Lorentz-unit surface normal at `(s, t0)`:
/// `n̂ = ψ1 T + ψ2 N + ψ3 B`. `None` for degenerate or (numerically)
/// null normals.
fn unit_normal_components(spec: &PencilSpec, s: f64) -> Result<Option<[f64; 3]>, PencilError> {
    let tg = surface_tangents(spec, s, spec.t0)?;
    let phi = phi_decompose(&tg);
    let euclid_sq: f64 = phi.iter().map(|p| p * p).sum();
    if euclid_sq.sqrt() < DEGENERATE_NORMAL {
        return Ok(None);
    }
    let (et, en, eb) = frame_signature(tg.frame.kind);
    let q = et * phi[0] * phi[0] + en * phi[1] * phi[1] + eb * phi[2] * phi[2];
    if q.abs() <= 1e-10 * euclid_sq.max(1.0) {
        return Ok(None);
    }
    let inv = 1.0 / q.abs().sqrt();
    Ok(Some([phi[0] * inv, phi[1] * inv, phi[2] * inv]))
}

fn rodrigues_check(
    spec: &PencilSpec,
    threshold: f64,
    s_grid: &[f64],
    warnings: &mut Vec<String>,
) -> CheckRecord {
    let name = "rodrigues";
    let h = RODRIGUES_H;
    let mut worst = 0.0f64;
    let mut max_omega = 0.0f64;
    let mut skipped = 0usize;
    for &s in s_grid {
        let step = || -> Result<Option<(f64, f64)>, PencilError> {
            // Work in frame components throughout: the ambient frame
            // vectors can grow exponentially in s, and differencing
            // them amplifies their rounding noise by 1/(2h). The
            // components ψ stay O(1), and the frame's own derivative
            // enters exactly through the structural equations.
            let (c, p, m) = match (
                unit_normal_components(spec, s)?,
                unit_normal_components(spec, s + h)?,
                unit_normal_components(spec, s - h)?,
            ) {
                (Some(c), Some(p), Some(m)) => (c, p, m),
                _ => return Ok(None),
            };
            // n̂ is only defined up to sign through λ(s); align neighbors
            // before differencing.
            let p = align(p, &c);
            let m = align(m, &c);
            let dpsi = [
                (p[0] - m[0]) / (2.0 * h),
                (p[1] - m[1]) / (2.0 * h),
                (p[2] - m[2]) / (2.0 * h),
            ];
            let frame = spec.frame_at(s)?;
            let (k, tau) = (frame.kappa, frame.tau);
            // dn̂/ds = ψ' frame + ψ1 T' + ψ2 N' + ψ3 B'; Rodrigues says
            // the N and B components vanish.
            let (omega, res_n, res_b) = if frame.kind.is_timelike_curve() {
                // T' = κN, N' = κT − τB, B' = τN
                (
                    dpsi[0] + k * c[1],
                    dpsi[1] + k * c[0] + tau * c[2],
                    dpsi[2] - tau * c[1],
                )
            } else {
                // T' = κN, N' = εκT + τB, B' = τN
                (
                    dpsi[0] + frame.epsilon * k * c[1],
                    dpsi[1] + k * c[0] + tau * c[2],
                    dpsi[2] + tau * c[1],
                )
            };
            let residual = res_n.hypot(res_b);
            Ok(Some((residual, omega.abs())))
        };
        match step() {
            Ok(Some((res, om))) => {
                worst = worst.max(res);
                max_omega = max_omega.max(om);
            }
            Ok(None) => skipped += 1,
            Err(e) => {
                warnings.push(format!("{name}: {e}"));
                return CheckRecord::failed(name, threshold);
            }
        }
    }
    if skipped > 0 {
        warnings.push(format!(
            "{name}: skipped {skipped} of {} nodes with degenerate normal",
            s_grid.len()
        ));
    }
    if max_omega < OMEGA_MIN && skipped < s_grid.len() {
        warnings.push(format!(
            "{name}: max |dn̂/ds · T| = {max_omega:.3e}; the normal is (nearly) constant \
             along the curve, so the check is weak here"
        ));
    }
    CheckRecord::new(name, worst, threshold)
}

fn align(v: [f64; 3], reference: &[f64; 3]) -> [f64; 3] {
    let dot: f64 = v.iter().zip(reference).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        [-v[0], -v[1], -v[2]]
    } else {
        v
    }
}

fn surface_type_check(
    spec: &PencilSpec,
    s_grid: &[f64],
    _t_grid: &[f64],
    warnings: &mut Vec<String>,
) -> CheckRecord {
    let name = "surface_type";
    let expected = expected_normal_class(spec.kind);
    let mut mismatches = 0usize;
    let mut skipped = 0usize;
    for &s in s_grid {
        match surface_tangents(spec, s, spec.t0) {
            Ok(tg) => {
                if tg.normal.euclid_norm() < DEGENERATE_NORMAL {
                    skipped += 1;
                } else if tg.normal.causal_class() != expected {
                    mismatches += 1;
                }
            }
            Err(e) => {
                warnings.push(format!("{name}: {e}"));
                return CheckRecord::failed(name, 0.0);
            }
        }
    }
    if skipped > 0 {
        warnings.push(format!(
            "{name}: skipped {skipped} of {} nodes with degenerate normal",
            s_grid.len()
        ));
    }
    CheckRecord::new(name, mismatches as f64, 0.0)
}
