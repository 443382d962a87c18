//! Property-based tests: randomized expression trees, vectors, curves
//! and pencils, checked against independently computed references
//! (finite differences, ambient cross products, algebraic identities).

use proptest::prelude::*;

use lorentz_pencil::expr::Expr;
use lorentz_pencil::frenet::{classify_curve, frame_at, CurveSpec};
use lorentz_pencil::minkowski::Vec3;
use lorentz_pencil::pencil::{MarchingScale, PencilSpec};
use lorentz_pencil::quad::adaptive_simpson;
use lorentz_pencil::verify::{phi_decompose, surface_tangents};

fn e(text: &str, vars: &[&str]) -> Expr {
    Expr::parse(text, vars).unwrap()
}

/// Random expression trees over (s, t) with bounded depth and bounded
/// literals. Division and square roots are included; cases where
/// evaluation fails at the probe point are discarded by the caller.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-2.0..2.0f64).prop_map(Expr::Const),
        Just(Expr::Var("s".to_string())),
        Just(Expr::Var("t".to_string())),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::sum(a, Expr::product(Expr::Const(-1.0), b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::product(a, b)),
            inner
                .clone()
                .prop_map(|a| Expr::Unary(lorentz_pencil::expr::UnaryOp::Sin, Box::new(a))),
            inner
                .clone()
                .prop_map(|a| Expr::Unary(lorentz_pencil::expr::UnaryOp::Cos, Box::new(a))),
            inner
                .clone()
                .prop_map(|a| Expr::Unary(lorentz_pencil::expr::UnaryOp::Tanh, Box::new(a))),
            inner
                .clone()
                .prop_map(|a| Expr::Unary(lorentz_pencil::expr::UnaryOp::Sinh, Box::new(a))),
            (inner.clone(), 2u32..4u32).prop_map(|(a, k)| Expr::power(a, k as f64)),
        ]
    })
}

fn arb_vec3() -> impl Strategy<Value = Vec3> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// 4th-order central difference.
fn diff5(f: impl Fn(f64) -> Option<f64>, x: f64, h: f64) -> Option<f64> {
    Some((-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h))
}

proptest! {
    #[test]
    fn derivative_matches_finite_difference(
        expr in arb_expr(),
        s in 0.3..1.7f64,
        t in 0.3..1.7f64,
    ) {
        let f = |x: f64| expr.eval(&[("s", x), ("t", t)]).ok();
        // Discard trees that fail to evaluate or blow up near the probe.
        let mut magnitudes = Vec::new();
        for dx in [-0.01, 0.0, 0.01] {
            match f(s + dx) {
                Some(v) if v.abs() <= 50.0 => magnitudes.push(v),
                _ => return Err(TestCaseError::reject("unevaluable or large")),
            }
        }
        let d = expr.derivative("s");
        let exact = match d.eval(&[("s", s), ("t", t)]) {
            Ok(v) if v.abs() <= 1e4 => v,
            _ => return Err(TestCaseError::reject("derivative unevaluable or large")),
        };
        let fd = match diff5(f, s, 1e-3) {
            Some(v) => v,
            None => return Err(TestCaseError::reject("stencil left the domain")),
        };
        let tol = 1e-5 * (1.0 + exact.abs());
        prop_assert!(
            (exact - fd).abs() <= tol,
            "exact {exact} vs fd {fd} for {expr}"
        );
    }

    #[test]
    fn print_parse_round_trip(expr in arb_expr()) {
        let printed = expr.to_string();
        let reparsed = Expr::parse(&printed, &["s", "t"])
            .unwrap_or_else(|err| panic!("cannot reparse `{printed}`: {err}"));
        prop_assert_eq!(&expr, &reparsed, "print/parse mismatch for `{}`", printed);
        // And the printer is idempotent through a second round.
        prop_assert_eq!(printed.clone(), reparsed.to_string());
    }

    #[test]
    fn cross_product_is_lorentz_orthogonal(x in arb_vec3(), y in arb_vec3()) {
        let c = x.lorentz_cross(&y);
        let scale = (x.euclid_norm() * y.euclid_norm()).max(1.0);
        prop_assert!(c.inner(&x).abs() <= 1e-12 * scale * x.euclid_norm().max(1.0));
        prop_assert!(c.inner(&y).abs() <= 1e-12 * scale * y.euclid_norm().max(1.0));
    }

    #[test]
    fn cross_product_bilinear_antisymmetric(
        x in arb_vec3(),
        y in arb_vec3(),
        z in arb_vec3(),
        k in -5.0..5.0f64,
    ) {
        let scale = (x.euclid_norm() + 1.0)
            * (y.euclid_norm() + z.euclid_norm() + k.abs() + 1.0);
        let lhs = x.lorentz_cross(&(y * k + z));
        let rhs = x.lorentz_cross(&y) * k + x.lorentz_cross(&z);
        prop_assert!((lhs - rhs).euclid_norm() <= 1e-12 * scale);
        prop_assert!(
            (x.lorentz_cross(&y) + y.lorentz_cross(&x)).euclid_norm() <= 1e-12 * scale
        );
    }

    #[test]
    fn quadrature_is_linear(c in -3.0..3.0f64, b in 0.5..3.0f64) {
        // ∫ (c·cos x + x) over [0, b], against the antiderivative.
        let f = move |x: f64| Ok(c * x.cos() + x);
        let v = adaptive_simpson(&f, 0.0, b, 1e-12, 20).unwrap();
        let exact = c * b.sin() + b * b / 2.0;
        prop_assert!((v - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
    }
}

/// Reference curves of all three kinds for frame/pencil properties.
fn curve_pool() -> Vec<(CurveSpec, std::ops::Range<f64>)> {
    let c = |x: &str, y: &str, z: &str, r: (f64, f64)| {
        CurveSpec::new(e(x, &["s"]), e(y, &["s"]), e(z, &["s"]), r).unwrap()
    };
    vec![
        (c("cos(s)", "sin(s)", "0", (0.0, 6.2)), 0.1..6.1),
        (
            c(
                "sinh(s/sqrt(2))",
                "s/sqrt(2)",
                "cosh(s/sqrt(2))",
                (-2.0, 2.0),
            ),
            -1.9..1.9,
        ),
        (c("cosh(s)", "0", "sinh(s)", (-2.0, 2.0)), -1.9..1.9),
        (
            c("sqrt(2)*cos(s)", "sqrt(2)*sin(s)", "s", (0.0, 2.0)),
            0.1..1.9,
        ),
        (c("cos(s)", "sin(s)", "sqrt(2)*s", (0.0, 1.5)), 0.1..1.4),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structural_equations_hold(idx in 0usize..5, frac in 0.0..1.0f64) {
        let pool = curve_pool();
        let (curve, range) = &pool[idx];
        let s = range.start + frac * (range.end - range.start);
        let kind = classify_curve(curve, 50).unwrap();
        let h = 1e-5;
        let f0 = frame_at(curve, kind, s).unwrap();
        let fp = frame_at(curve, kind, s + h).unwrap();
        let fm = frame_at(curve, kind, s - h).unwrap();
        let d = |p: Vec3, m: Vec3| (p - m) * (1.0 / (2.0 * h));

        let (k, tau, eps) = (f0.kappa, f0.tau, f0.epsilon);
        let (tp, np, bp) = (d(fp.t, fm.t), d(fp.n, fm.n), d(fp.b, fm.b));
        let scale = 1.0 + k + tau.abs()
            + f0.t.euclid_norm() + f0.n.euclid_norm() + f0.b.euclid_norm();

        let (nt_coeff, nb_coeff) = if kind.is_timelike_curve() {
            (k, -tau)
        } else {
            (eps * k, tau)
        };
        prop_assert!((tp - f0.n * k).euclid_norm() <= 1e-7 * scale);
        prop_assert!(
            (np - (f0.t * nt_coeff + f0.b * nb_coeff)).euclid_norm() <= 1e-7 * scale
        );
        prop_assert!((bp - f0.n * tau).euclid_norm() <= 1e-7 * scale);
    }

    #[test]
    fn phi_decomposition_matches_ambient_cross(
        idx in 0usize..5,
        frac in 0.05..0.95f64,
        t in -0.5..0.5f64,
        c1 in -1.0..1.0f64,
        c2 in -1.0..1.0f64,
    ) {
        let pool = curve_pool();
        let (curve, range) = &pool[idx];
        let (lo, hi) = curve.s_range();
        let s = range.start + frac * (range.end - range.start);
        let spec = PencilSpec::new(
            curve.clone(),
            MarchingScale::Direct {
                u: Expr::product(Expr::Const(c1), e("sin(t)", &["s", "t"])),
                v: Expr::product(Expr::Const(c2), e("t*cos(s)", &["s", "t"])),
                w: e("t", &["s", "t"]),
            },
            0.0,
            (-1.0, 1.0),
            0.0,
            e("1", &["s"]),
        )
        .unwrap();
        prop_assert!((lo..=hi).contains(&s));
        let tg = surface_tangents(&spec, s, t).unwrap();
        let phi = phi_decompose(&tg);
        let rebuilt = tg.frame.t * phi[0] + tg.frame.n * phi[1] + tg.frame.b * phi[2];
        let scale = tg.normal.euclid_norm().max(1.0)
            * (tg.frame.t.euclid_norm() + tg.frame.n.euclid_norm() + tg.frame.b.euclid_norm());
        prop_assert!((rebuilt - tg.normal).euclid_norm() <= 1e-8 * scale);
    }

    #[test]
    fn surface_contains_curve_at_t0(
        idx in 0usize..5,
        frac in 0.0..1.0f64,
        t0 in -0.2..0.2f64,
    ) {
        let pool = curve_pool();
        let (curve, range) = &pool[idx];
        let s = range.start + frac * (range.end - range.start);
        // Marching scales vanishing at t = t0 by construction.
        let shift = Expr::sum(e("t", &["s", "t"]), Expr::Const(-t0));
        let spec = PencilSpec::new(
            curve.clone(),
            MarchingScale::Direct {
                u: Expr::product(e("cos(s)", &["s", "t"]), shift.clone()),
                v: shift.clone(),
                w: Expr::power(shift, 2.0),
            },
            t0,
            (-1.0, 1.0),
            0.0,
            e("1", &["s"]),
        )
        .unwrap();
        let p = spec.evaluate_surface(s, t0).unwrap();
        let r = curve.position(s).unwrap();
        prop_assert!((p - r).euclid_norm() <= 1e-12 * (1.0 + r.euclid_norm()));
    }
}
