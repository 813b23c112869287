//! Closed-form exponents against an independent double-exponential oracle and
//! against frozen high-precision reference values.

use proptest::prelude::*;
use shearchaos::analytic::{find_c0, lambda1_rescaled, lyapunov_pair, sigma0, sign_function};
use shearchaos::{classify, Parameters, QuadratureSpec, RegimeKind};

/// `lambda_1` by exp-sinh quadrature of `E_m[v]` directly in `v`, with no
/// substitution for the `v^{-1/2}` endpoint and no shared code.
fn oracle_lambda1(alpha: f64, b: f64, sigma: f64) -> f64 {
    let k = (b * sigma).abs();
    let log_w = |v: f64| -0.5 * v.ln() - k * v.powi(3) / 6.0 + alpha * alpha * v / (2.0 * k);
    // centre the map on the bulk of the density
    let scale = (alpha / k).max((6.0 / k).cbrt());
    let peak = {
        let vs = alpha / k;
        log_w(vs.max(1e-300)).max(log_w(scale))
    };
    let sums = |h: f64| {
        let (mut m0, mut m1) = (0.0, 0.0);
        let n = (6.5 / h) as i64;
        for j in -n..=n {
            let t = j as f64 * h;
            let u = std::f64::consts::FRAC_PI_2 * t.sinh();
            let v = scale * u.exp();
            if v == 0.0 || !v.is_finite() {
                continue;
            }
            let jac = v * std::f64::consts::FRAC_PI_2 * t.cosh();
            let w = (log_w(v) - peak).exp() * jac;
            m0 += w;
            m1 += w * v;
        }
        m1 / m0
    };
    let mean = sums(1.0 / 512.0);
    assert!(
        (mean - sums(1.0 / 256.0)).abs() < 1e-12 * mean,
        "oracle not converged"
    );
    -alpha / 2.0 + k / 2.0 * mean
}

fn params(a: f64, b: f64, s: f64) -> Parameters {
    Parameters::new(a, b, s).unwrap()
}

/// Reference values computed with 30-digit arithmetic.
const REFERENCE: [(f64, f64, f64, f64); 6] = [
    (1.0, 2.0, 0.5, -0.112149959368239),
    (1.0, 2.0, 1.0, 0.015583263683958),
    (1.0, 2.0, 2.0, 0.263115978995467),
    (1.0, 2.0, 0.01, -0.000200200481777),
    (1.0, 2.0, 0.05, -0.005133291347385),
    (1.0, 2.0, 0.1, -0.022866398310279),
];
const C0_REFERENCE: f64 = 0.282316586444;

#[test]
fn matches_reference_values() {
    for (a, b, s, want) in REFERENCE {
        let got = lyapunov_pair(&params(a, b, s)).unwrap().lambda1;
        assert!((got - want).abs() < 1e-11, "({a},{b},{s}): {got} vs {want}");
    }
}

#[test]
fn oracle_agrees_with_reference_values() {
    for (a, b, s, want) in REFERENCE {
        let got = oracle_lambda1(a, b, s);
        assert!(
            (got - want).abs() < 1e-11,
            "oracle ({a},{b},{s}): {got} vs {want}"
        );
    }
}

#[test]
fn matches_oracle_across_regimes() {
    for &(a, b, s) in &[
        (0.25, 2.0, 0.1),
        (0.5, -0.5, 3.0),
        (2.0, 5.0, 0.3),
        (5.0, 0.5, 4.0),
        (3.0, 2.0, 0.05),
        (0.1, 3.0, 2.5),
    ] {
        let got = lyapunov_pair(&params(a, b, s)).unwrap().lambda1;
        let want = oracle_lambda1(a, b, s);
        assert!(
            (got - want).abs() < 1e-9 * (1.0 + want.abs()),
            "({a},{b},{s}): {got} vs {want}"
        );
    }
}

#[test]
fn c0_and_critical_curve() {
    let c0 = find_c0(1e-12).unwrap();
    assert!((c0 - C0_REFERENCE).abs() < 1e-10, "{c0}");
    assert!((sigma0(1.0, 2.0).unwrap() - 1.0 / (2.0 * C0_REFERENCE.sqrt())).abs() < 1e-9);
    // the oracle changes sign across the curve
    let s0 = sigma0(1.5, -3.0).unwrap();
    assert!(oracle_lambda1(1.5, -3.0, 0.999 * s0) < 0.0);
    assert!(oracle_lambda1(1.5, -3.0, 1.001 * s0) > 0.0);
    let spec = QuadratureSpec::default();
    assert!(sign_function(0.9 * c0, &spec).unwrap() > 0.0);
    assert!(sign_function(1.1 * c0, &spec).unwrap() < 0.0);
}

#[test]
fn sigma0_increases_with_alpha() {
    let mut last = 0.0;
    for i in 1..=60 {
        let s = sigma0(0.05 * i as f64, 2.0).unwrap();
        assert!(s > last);
        last = s;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponents_sum_to_minus_alpha(a in 0.05f64..6.0, b in 0.1f64..6.0, s in 0.02f64..5.0, neg in any::<bool>()) {
        let b = if neg { -b } else { b };
        let pair = lyapunov_pair(&params(a, b, s)).unwrap();
        prop_assert!((pair.lambda1 + pair.lambda2 + a).abs() < 1e-12 * (1.0 + a));
        prop_assert!(pair.lambda1 >= pair.lambda2);
    }

    #[test]
    fn depends_on_b_sigma_only_through_product(a in 0.1f64..4.0, b in 0.2f64..4.0, s in 0.1f64..3.0, r in 0.25f64..4.0) {
        let l1 = lyapunov_pair(&params(a, b, s)).unwrap().lambda1;
        let l2 = lyapunov_pair(&params(a, b * r, s / r)).unwrap().lambda1;
        prop_assert!((l1 - l2).abs() < 1e-10 * (1.0 + l1.abs()));
    }

    #[test]
    fn scaling_law(a in 0.2f64..3.0, b in 0.2f64..3.0, s in 0.1f64..2.5, k in 0.2f64..8.0) {
        let base = lyapunov_pair(&params(a, b, s)).unwrap().lambda1;
        let scaled = lyapunov_pair(&params(k * a, k * b, k.sqrt() * s)).unwrap().lambda1;
        prop_assert!((scaled - k * base).abs() < 1e-9 * k);
    }

    #[test]
    fn two_routes_agree(a in 0.1f64..4.0, b in 0.2f64..4.0, s in 0.05f64..3.0) {
        let p = params(a, b, s);
        let direct = lyapunov_pair(&p).unwrap().lambda1;
        let rescaled = lambda1_rescaled(&p, &QuadratureSpec::default()).unwrap();
        prop_assert!((direct - rescaled).abs() < 1e-9);
    }

    #[test]
    fn regime_follows_critical_curve(a in 0.1f64..4.0, b in 0.2f64..4.0, f in 0.2f64..5.0) {
        prop_assume!((f - 1.0).abs() > 0.01);
        let s0 = sigma0(a, b).unwrap();
        let r = classify(&params(a, b, f * s0), 1e-12).unwrap();
        let want = if f < 1.0 { RegimeKind::RandomEquilibrium } else { RegimeKind::RandomStrangeAttractor };
        prop_assert_eq!(r.kind, want);
    }
}
