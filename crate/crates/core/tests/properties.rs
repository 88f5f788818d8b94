//! Property tests for jump operators, the derivative and the calculus rules.

use proptest::prelude::*;
use ts_fracderiv::{
    check_rule, cpow, deriv, power_rule, CValue, DerivConfig, Expr, RuleCheck, ScaleKind, TimeScale,
};

fn rel(a: CValue, b: CValue) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

fn scale_strategy() -> impl Strategy<Value = TimeScale> {
    prop_oneof![
        Just(TimeScale::integers()),
        (0.05f64..3.0, -1.0f64..1.0).prop_map(|(h, o)| TimeScale::h_step(h, o).unwrap()),
        (1.2f64..4.0).prop_map(|q| TimeScale::q_scale(q).unwrap()),
        prop::collection::btree_set(-200i32..200, 2..10)
            .prop_map(
                |s| TimeScale::finite_set(s.into_iter().map(|k| k as f64 / 8.0).collect()).unwrap()
            ),
        (-5.0f64..0.0, 0.5f64..2.0, 0.5f64..2.0).prop_map(|(a, w, gap)| {
            let b = a + w;
            format!(
                "[{a},{b}]u{{{}}}u[{},{}]",
                b + gap,
                b + 2.0 * gap,
                b + 2.0 * gap + w
            )
            .parse()
            .unwrap()
        }),
    ]
}

/// Some members of the scale, drawn from the range it covers.
fn members(scale: &TimeScale) -> Vec<f64> {
    match scale.kind() {
        ScaleKind::QScale { q } => (-4..=4).map(|k| q.powi(k)).chain([0.0]).collect(),
        ScaleKind::FiniteSet { points } => points.clone(),
        _ => scale.points_in(-6.0, 12.0, Some(0.37)).unwrap(),
    }
}

proptest! {
    #[test]
    fn jumps_bracket_the_point(scale in scale_strategy()) {
        for t in members(&scale) {
            let (s, r) = (scale.sigma(t).unwrap(), scale.rho(t).unwrap());
            prop_assert!(s >= t && r <= t);
            prop_assert!(scale.member(s, None) && scale.member(r, None));
            prop_assert_eq!(scale.graininess(t).unwrap(), s - t);
            let class = scale.classify(t).unwrap();
            prop_assert_eq!(class.right_scattered, s > t);
            prop_assert_eq!(class.left_scattered, r < t);
            prop_assert_eq!(class.right_dense, !class.right_scattered);
            prop_assert_eq!(class.left_dense, !class.left_scattered);
        }
    }

    #[test]
    fn no_member_strictly_between_t_and_sigma(scale in scale_strategy()) {
        let pts = members(&scale);
        for &t in &pts {
            let s = scale.sigma(t).unwrap();
            if s > t {
                let mid = t + (s - t) / 2.0;
                prop_assert!(!scale.member(mid, None) || matches!(scale.kind(), ScaleKind::Reals));
            }
        }
    }

    #[test]
    fn h_step_graininess_is_h(h in 0.01f64..5.0, o in -2.0f64..2.0, k in -50i32..50) {
        let scale = TimeScale::h_step(h, o).unwrap();
        let t = o + k as f64 * h;
        prop_assert!((scale.graininess(t).unwrap() - h).abs() <= 1e-9 * (1.0 + t.abs()));
    }

    #[test]
    fn finite_set_sigma_is_next_element(set in prop::collection::btree_set(-1000i32..1000, 1..12)) {
        let pts: Vec<f64> = set.iter().map(|&k| k as f64 / 4.0).collect();
        let scale = TimeScale::finite_set(pts.clone()).unwrap();
        for (i, &t) in pts.iter().enumerate() {
            let next = pts.get(i + 1).copied().unwrap_or(t);
            let prev = if i == 0 { t } else { pts[i - 1] };
            prop_assert_eq!(scale.sigma(t).unwrap(), next);
            prop_assert_eq!(scale.rho(t).unwrap(), prev);
            // only a left-scattered maximum leaves T^κ; a lone point is not left-scattered
            prop_assert_eq!(scale.in_kappa(t).unwrap(), i + 1 < pts.len() || pts.len() == 1);
        }
    }

    #[test]
    fn linear_function_has_unit_derivative(scale in scale_strategy(), alpha in 0.05f64..=1.0) {
        for t in members(&scale) {
            if scale.sigma(t).unwrap() > t && t >= 0.0 {
                let r = deriv(&Expr::t(), &scale, t, alpha, &DerivConfig::default()).unwrap();
                prop_assert!((r.value - CValue::new(1.0, 0.0)).norm() < 1e-9, "{} at {}", r.value, t);
            }
        }
    }

    #[test]
    fn scattered_quotient_matches_formula(
        k in -20i32..20,
        alpha in 0.05f64..=1.0,
        c0 in -5.0f64..5.0,
        c1 in -5.0f64..5.0,
    ) {
        let t = k as f64;
        let f = move |s: f64| c0 + c1 * s;
        let z = TimeScale::integers();
        let got = deriv(&f, &z, t, alpha, &DerivConfig::default()).unwrap().value;
        let lift = |s: f64| cpow(f(s), alpha).unwrap();
        let want = (lift(t + 1.0) - lift(t)) / (cpow(t + 1.0, alpha).unwrap() - cpow(t, alpha).unwrap());
        prop_assert!(rel(got, want) < 1e-12);
    }

    #[test]
    fn product_rule_on_positive_functions(k in 1i32..30, alpha in 0.05f64..=1.0, a in 0.1f64..4.0, b in 0.1f64..4.0) {
        let f = Expr::parse(&format!("{a} + t^2")).unwrap();
        let g = Expr::parse(&format!("{b}*t + 1")).unwrap();
        let r = check_rule(&RuleCheck::product(f, g), &TimeScale::integers(), &[k as f64], alpha, &DerivConfig::default()).unwrap();
        prop_assert_eq!(r.domain_skips, 0);
        prop_assert!(rel(r.points[0].lhs, r.points[0].rhs) <= 1e-10);
    }

    #[test]
    fn quotient_and_reciprocal_rules(k in 1i32..8, q in 1.2f64..3.0, alpha in 0.05f64..=1.0) {
        let scale = TimeScale::q_scale(q).unwrap();
        let t = q.powi(k - 4);
        let cfg = DerivConfig::default();
        for check in [
            RuleCheck::quotient(Expr::parse("t^2 - 3").unwrap(), Expr::parse("t + 2").unwrap()),
            RuleCheck::reciprocal(Expr::parse("t^3 + 1").unwrap()),
            RuleCheck::constant_multiple(Expr::parse("t - 1").unwrap(), 2.5),
        ] {
            let r = check_rule(&check, &scale, &[t], alpha, &cfg).unwrap();
            for p in &r.points {
                prop_assert!(rel(p.lhs, p.rhs) <= 1e-10, "{:?} at {}", check.rule, t);
            }
        }
    }

    #[test]
    fn power_rule_recurrence(k in -20i32..20, alpha in 0.05f64..=1.0, m in 1u32..8) {
        let t = k as f64;
        let z = TimeScale::integers();
        let (a, b) = (cpow(t, alpha).unwrap(), cpow(t + 1.0, alpha).unwrap());
        let next = power_rule(&z, t, alpha, m + 1).unwrap();
        let built = power_rule(&z, t, alpha, m).unwrap() * a + b.powu(m);
        prop_assert!(rel(next, built) <= 1e-12);
    }
}

/// On a fine lattice the scattered quotient approaches the dense limit.
#[test]
fn fine_lattice_approaches_the_continuum() {
    let fine = TimeScale::h_step(1e-3, 0.0).unwrap();
    let reals = TimeScale::reals();
    let cfg = DerivConfig::default();
    for f in ["t^2", "t^3 - 2*t", "1/t"] {
        let e = Expr::parse(f).unwrap();
        for t in [0.5, 1.0, 2.0, 3.0] {
            for alpha in [0.25, 0.5, 1.0] {
                let a = deriv(&e, &fine, t, alpha, &cfg).unwrap().value;
                let b = deriv(&e, &reals, t, alpha, &cfg).unwrap().value;
                assert!(
                    (a - b).norm() <= 1e-2 * (1.0 + b.norm()),
                    "{f} at {t}, α={alpha}: {a} vs {b}"
                );
            }
        }
    }
}
