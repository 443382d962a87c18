//! Adaptive Simpson quadrature.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge after {0} refinement levels")]
    NoConvergence(u32),
    #[error("integrand evaluation failed: {0}")]
    Integrand(String),
}

/// Integrate `f` over `[a, b]` (either orientation) to an absolute
/// tolerance, refining at most `max_depth` levels.
pub fn adaptive_simpson<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64, QuadError>
where
    F: Fn(f64) -> Result<f64, String>,
{
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| f(x).map_err(QuadError::Integrand);
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    recurse(
        &eval, a, b, fa, fm, fb, whole, abs_tol, max_depth, max_depth,
    )
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> Result<f64, QuadError>
where
    F: Fn(f64) -> Result<f64, QuadError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::NoConvergence(max_depth));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, max_depth)?;
    let r = recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, max_depth)?;
    Ok(l + r)
}
