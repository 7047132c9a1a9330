use ortho_lift::analytic::*;
use ortho_lift::coeffs::{synthetic_family, NumericMaassData};
use ortho_lift::exactnum::{rat, HeckeScalar};
use ortho_lift::lattice::{e8_gram, enumerate_by_norm, simple_roots};
use ortho_lift::lift::{lift_coefficient, LiftContext};

use std::f64::consts::PI;

// Reference values computed with mpmath at 30 digits.
const MPMATH_K: &[(f64, f64, f64)] = &[
    (0.0, 1.0, 0.4210244382407083),
    (0.0, 2.0, 0.1138938727495334),
    (1.0, 30.0, 2.097_790_462_667_42e-14),
    (9.5337, 12.566, 3.185591477032948e-8),
    (13.7797513519, 12.566, 3.371475454559451e-10),
    (13.7797513519, 6.0, 1.931937632752042e-10),
    (13.7797513519, 0.001, 2.137061889832224e-10),
    (50.0, 1.0, -2.532095867878533e-35),
    (50.0, 0.001, -2.693064873378196e-35),
    (50.0, 500.0, 3.278465615039623e-220),
    (13.7797513519, 30.0, 8.980217459253749e-16),
    (2.5, 0.5, -0.02445093156937975),
    (6.9, 3.0, -1.970_090_429_586_31e-5),
];

#[test]
fn bessel_matches_high_precision_references() {
    for &(r, x, want) in MPMATH_K {
        let got = bessel_k_im(r, x).unwrap();
        let rel = (got - want).abs() / want.abs();
        assert!(rel < 1e-10, "K_i{r}({x}) = {got:e}, want {want:e}, rel {rel:e}");
    }
}

/// `∫₀^∞ e^{−x cosh t} dt` by the plain trapezoid rule, which is spectrally
/// accurate for this analytic, doubly-exponentially decaying integrand.
fn k0_trapezoid(x: f64) -> f64 {
    let h = 1e-3;
    let mut s = 0.5;
    let mut t: f64 = h;
    loop {
        let v = (-x * (t.cosh() - 1.0)).exp();
        s += v;
        if v < 1e-20 {
            break;
        }
        t += h;
    }
    s * h * (-x).exp()
}

fn k0_series(x: f64) -> f64 {
    let euler = 0.5772156649015329;
    let z = x * x / 4.0;
    let (mut term, mut harmonic, mut i0, mut rest) = (1.0, 0.0, 0.0, 0.0);
    for k in 0..60 {
        if k > 0 {
            term *= z / (k * k) as f64;
            harmonic += 1.0 / k as f64;
        }
        i0 += term;
        rest += term * harmonic;
    }
    -((x / 2.0).ln() + euler) * i0 + rest
}

#[test]
fn k0_against_independent_oracles() {
    let mut x = 1e-2;
    while x <= 30.0 {
        let got = bessel_k_im(0.0, x).unwrap();
        let trap = k0_trapezoid(x);
        assert!((got / trap - 1.0).abs() < 1e-10, "x={x}: {got:e} vs {trap:e}");
        if x <= 2.0 {
            let ser = k0_series(x);
            assert!((got / ser - 1.0).abs() < 1e-10, "x={x}: {got:e} vs series {ser:e}");
        }
        x *= 1.37;
    }
}

#[test]
fn large_argument_decay() {
    // K_ν(y) ~ √(π/2y)·e^{−y}·(1 + (4ν²−1)/(8y)) with ν² = −1
    let y = 30.0;
    let asym = (PI / (2.0 * y)).sqrt() * (-y).exp() * (1.0 - 5.0 / (8.0 * y));
    let ratio = bessel_k_im(1.0, y).unwrap() / asym;
    assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
}

#[test]
fn whittaker_is_scaled_bessel() {
    for &y in &[0.5, 1.0, 3.0, 12.0] {
        for &r in &[0.0, 2.0, 9.5] {
            let w = whittaker_w0(r, y).unwrap();
            let k = bessel_k_im(r, y).unwrap();
            assert!((w / k - (2.0 * y / PI).sqrt()).abs() < 1e-14);
        }
        assert!(whittaker_w0(0.0, y).unwrap() > 0.0);
    }
}

#[test]
fn emot_identity_on_grid() {
    for a in [4.0 * PI, 8.0 * PI, 16.0 * PI] {
        for p in [PI, 2.0 * PI, 4.0 * PI * PI] {
            for r in [0.0, 9.5337, 13.7797513519] {
                let rep = emot_check(a, p, r).unwrap();
                assert!(rep.rel_error <= 1e-8, "a={a} p={p} r={r}: {rep:?}");
            }
        }
    }
}

#[test]
fn emot_rhs_is_reevaluated_when_p_doubles() {
    let (a, p, r) = (4.0 * PI, PI, 9.5337);
    let one = emot_check(a, p, r).unwrap();
    let two = emot_check(a, 2.0 * p, r).unwrap();
    let want = 2.0 * (a / (2.0 * p)).sqrt() * bessel_k_im(r, 2.0 * (2.0 * a * p).sqrt()).unwrap();
    assert_eq!(two.rhs, want);
    assert!(two.rhs != one.rhs);
}

fn synthetic_numeric(bound: u64) -> NumericLift {
    let eig = [(2, 13, 10), (3, -7, 10), (5, 2, 5), (7, 11, 10), (11, -8, 5), (13, 1, 5)];
    let exact = eig.iter().map(|&(p, a, b)| (p, HeckeScalar::constant(rat(a, b)))).collect();
    let fam = synthetic_family(exact, 1, bound).unwrap();
    let data = NumericMaassData::from_family(&fam, 0.0, 9.5337, bound).unwrap();
    NumericLift::new(e8_gram(), data).unwrap()
}

fn sample_point() -> HyperbolicPoint {
    HyperbolicPoint::new(vec![0.11, -0.07, 0.03, 0.2, -0.13, 0.05, 0.01, -0.09], 0.8).unwrap()
}

#[test]
fn lift_is_real_and_translation_invariant() {
    let lift = synthetic_numeric(4);
    let series = LiftSeries::new(&lift, 4).unwrap();
    assert_eq!(series.pair_count(), (240 + 2160 + 6720 + 17520) / 2);
    let lat = e8_gram();
    let pt = sample_point();
    for g in gamma_s_elements(&lat).iter().filter(|g| g.label != "swap") {
        let rep = invariance_residual(&series, &g.matrix, &pt).unwrap();
        assert!(rep.residual <= 1e-9, "{}: {rep:?}", g.label);
    }
}

#[test]
fn truncation_error_within_reported_tail_bound() {
    let lift = synthetic_numeric(8);
    let pt = sample_point();
    let short = evaluate_lift(&lift, &pt, 4).unwrap();
    let long = evaluate_lift(&lift, &pt, 8).unwrap();
    assert!((long.value - short.value).abs() <= short.tail_bound.unwrap());
    assert!(long.tail_bound.unwrap() < short.tail_bound.unwrap());
}

#[test]
fn swap_control_is_not_invariant() {
    let lift = synthetic_numeric(4);
    let series = LiftSeries::new(&lift, 4).unwrap();
    let pt = HyperbolicPoint::new(vec![0.02; 8], 0.95).unwrap();
    let rep = invariance_residual(&series, &swap_element(8), &pt).unwrap();
    assert!(rep.residual > 1e-4, "{rep:?}");
}

#[test]
fn resummation_matches_direct_sum() {
    let lift = synthetic_numeric(4);
    for bound in [1, 4] {
        let rep = borcherds_resummation_check(&lift, &sample_point(), bound).unwrap();
        assert!(rep.rel_error <= 1e-9, "bound {bound}: {rep:?}");
    }
}

#[test]
fn coefficient_level_resummation_is_exact() {
    let lat = e8_gram();
    let fam = ortho_lift::coeffs::formal_family(2, &[(3, HeckeScalar::from_int(2))], 1, 100).unwrap();
    let ctx = LiftContext::maass(1, lat.clone(), fam.clone()).unwrap();
    for norm in [4u64, 9, 16] {
        for v in enumerate_by_norm(&lat, norm).into_iter().filter(|v| v.content() > 1).take(5) {
            // Σ_{m | content} m^{4n−1}·(|μ|/m)·c(−|μ|²/m²), with c(k) = b(k)/√k
            let mut sum = HeckeScalar::zero();
            for m in ortho_lift::arith::divisors(v.content()) {
                let b = fam.value(v.norm() / (m * m)).unwrap();
                sum += &b.scale(&ortho_lift::exactnum::int((m as i64).pow(3)));
            }
            assert_eq!(sum, lift_coefficient(&ctx, &v).unwrap());
        }
    }
}

#[test]
fn action_composes_and_round_trips() {
    let lat = e8_gram();
    let els = gamma_s_elements(&lat);
    let pt = sample_point();
    for a in &els {
        for b in els.iter().step_by(3) {
            let ab = mat_product(&a.matrix, &b.matrix);
            let lhs = gamma_action(&lat, &ab, &pt).unwrap();
            let rhs = gamma_action(&lat, &a.matrix, &gamma_action(&lat, &b.matrix, &pt).unwrap()).unwrap();
            assert!(lhs.distance_to(&rhs) < 1e-10, "{} * {}", a.label, b.label);
        }
    }
    let line = nu(&lat, &pt).unwrap();
    assert!((bq_norm(&lat, &line.w) - 1.0).abs() < 1e-12);
    assert!(point_from_line(&lat, &line.w).unwrap().distance_to(&pt) < 1e-10);
    let roots = simple_roots(&lat);
    assert!(preserves_q(&lat, &reflection_element(&lat, &roots[0])));
}

#[test]
fn translation_shifts_by_lattice_vector() {
    let lat = e8_gram();
    let pt = sample_point();
    let mut lambda = vec![0i64; 8];
    lambda[0] = 1;
    let moved = gamma_action(&lat, &translation_element(&lat, &lambda), &pt).unwrap();
    assert!((moved.x[0] - (pt.x[0] - 1.0)).abs() < 1e-12 && (moved.y - pt.y).abs() < 1e-12);
    let origin = HyperbolicPoint::new(vec![0.0; 8], 1.0).unwrap();
    let fixed = gamma_action(&lat, &swap_element(8), &origin).unwrap();
    assert!(fixed.distance_to(&origin) < 1e-14);
}
