use std::collections::BTreeSet;

use ortho_lift::arith::{gcd, primes_up_to, valuation};
use ortho_lift::coeffs::{delta_fixture, formal_family, verify_maass_relations, CoefficientFamily};
use ortho_lift::exactnum::{int, rat, HeckeScalar, RationalFunction, TPoly};
use ortho_lift::hecke::*;
use ortho_lift::lattice::*;
use ortho_lift::lfunction::satake;
use ortho_lift::lift::{lift_coefficient, LiftContext};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = num_rational::BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(a, b)| rat(a, b))
}

fn scalar() -> impl Strategy<Value = HeckeScalar> {
    prop::collection::vec(small_rat(), 0..4).prop_map(HeckeScalar::from_coeffs)
}

fn tpoly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(scalar(), 0..3).prop_map(TPoly::from_coeffs)
}

fn nonzero_tpoly() -> impl Strategy<Value = TPoly> {
    tpoly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (tpoly(), nonzero_tpoly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

/// Hecke eigenvalues at every prime below 100 except the formal one.
fn family(p: u64, parity: i64, bound: u64) -> CoefficientFamily {
    let others: Vec<_> = primes_up_to(100)
        .into_iter()
        .filter(|&q| q != p)
        .map(|q| (q, HeckeScalar::constant(rat(q as i64 % 7 - 3, 2))))
        .collect();
    formal_family(p, &others, parity, bound).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a - &b) + &b) == a);
    }

    #[test]
    fn tpoly_ring_axioms(a in tpoly(), b in tpoly(), c in tpoly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn ratfunc_field_operations(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(n in tpoly(), d in nonzero_tpoly(), k in nonzero_tpoly()) {
        let f = RationalFunction::new(&n * &k, &d * &k).unwrap();
        prop_assert_eq!(f.canonicalize(), f.clone());
        prop_assert_eq!(f.canonicalize().canonicalize(), f.canonicalize());
        prop_assert_eq!(f, RationalFunction::new(n, d).unwrap());
    }

    #[test]
    fn local_invariants_match_valuations(m in 1u64..=4, idx in 0usize..10_000, pi in 0usize..3) {
        let e8 = e8_gram();
        let vs = enumerate_by_norm(&e8, m);
        let v = &vs[idx % vs.len()];
        let p = [2u64, 3, 5][pi];
        let inv = local_invariants(v, p).unwrap();
        prop_assert_eq!(2 * (inv.k + inv.l) + inv.e, valuation(v.norm(), p));
        prop_assert_eq!(inv.l, valuation(v.content(), p));
        prop_assert_eq!(inv.beta, if inv.e == 1 { 0 } else { -1 });
    }

    #[test]
    fn shells_closed_under_reflections(m in 1u64..=3, root in 0usize..8) {
        let e8 = e8_gram();
        let vs: BTreeSet<Vec<i64>> = enumerate_by_norm(&e8, m).iter().map(|v| v.coords().to_vec()).collect();
        let r = &simple_roots(&e8)[root];
        for v in &vs {
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            prop_assert!(vs.contains(&neg));
            prop_assert!(vs.contains(&root_reflection(&e8, r, v)));
        }
    }

    #[test]
    fn formal_family_satisfies_relations(pi in 0usize..4, n in 1u64..=60) {
        let p = [2u64, 3, 5, 7][pi];
        let fam = family(p, 1, 60 * p * p);
        prop_assert!(verify_maass_relations(&fam, p, n).unwrap());
    }

    #[test]
    fn prime_power_degree(pi in 0usize..4, j in 0u32..12) {
        let p = [2u64, 3, 5, 7][pi];
        let fam = family(p, 1, u64::MAX);
        prop_assert_eq!(fam.prime_power(p, j).unwrap().degree(), Some(j as usize));
    }

    #[test]
    fn tau_is_multiplicative(m in 1u64..=200, n in 1u64..=200) {
        prop_assume!(gcd(m, n) == 1);
        let d = delta_fixture(40_000);
        let tm = d.value(m).unwrap();
        let tn = d.value(n).unwrap();
        prop_assert_eq!(d.value(m * n).unwrap(), &tm * &tn);
    }

    #[test]
    fn coefficient_depends_on_invariants_only(m in 1u64..=6, i in 0usize..100_000, j in 0usize..100_000, root in 0usize..8) {
        let e8 = e8_gram();
        let ctx = LiftContext::maass(1, e8.clone(), family(2, -1, 64)).unwrap();
        let vs = enumerate_by_norm(&e8, m);
        let (a, b) = (&vs[i % vs.len()], &vs[j % vs.len()]);
        if a.content() == b.content() {
            prop_assert_eq!(lift_coefficient(&ctx, a).unwrap(), lift_coefficient(&ctx, b).unwrap());
        }
        let moved = norm_and_content(&e8, &root_reflection(&e8, &simple_roots(&e8)[root], a.coords())).unwrap();
        prop_assert_eq!(lift_coefficient(&ctx, &moved).unwrap(), lift_coefficient(&ctx, a).unwrap());
    }

    #[test]
    fn coefficient_matches_grid(m in 1u64..=8, i in 0usize..100_000, pi in 0usize..2, parity in prop::sample::select(vec![1i64, -1])) {
        let e8 = e8_gram();
        let p = [2u64, 3][pi];
        let fam = family(p, parity, 1 << 20);
        let ctx = LiftContext::maass(1, e8.clone(), fam.clone()).unwrap();
        let vs = enumerate_by_norm(&e8, m);
        let v = &vs[i % vs.len()];
        let pl = p.pow(valuation(v.content(), p));
        prop_assume!(v.content() / pl == 1);
        let inv = local_invariants(v, p).unwrap();
        let mprime = v.norm() / p.pow(valuation(v.norm(), p));
        let (k, l) = (inv.k as usize, inv.l as usize);
        let w = whittaker_from_family(&fam, LocalMode::Maass { n: 1 }, p, inv.e, mprime, k, l).unwrap();
        let scale = ortho_lift::exactnum::ppow(p, -4 * (k + l) as i64);
        prop_assert_eq!(lift_coefficient(&ctx, v).unwrap().scale(&scale), w.get(k as i64, l as i64));
    }

    #[test]
    fn hecke_is_linear(a in small_rat(), b in small_rat(), r in 1u32..=5, e1 in 0u32..2) {
        let fam = family(2, 1, u64::MAX);
        let mode = LocalMode::Maass { n: 1 };
        let w1 = whittaker_from_family(&fam, mode, 2, e1, 1, 3, 4).unwrap();
        let w2 = whittaker_from_family(&fam, mode, 2, e1, 3, 3, 4).unwrap();
        let (a, b) = (HeckeScalar::constant(a), HeckeScalar::constant(b));
        let combo = &w1.scale(&a) + &w2.scale(&b);
        let lhs = apply_hecke(&combo, r).unwrap();
        let rhs = &apply_hecke(&w1, r).unwrap().scale(&a) + &apply_hecke(&w2, r).unwrap().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hecke_preserves_maass_space(r in 1u32..=5, pi in 0usize..2, e in 0u32..2) {
        let p = [2u64, 3][pi];
        let fam = family(p, 1, u64::MAX);
        let w = whittaker_from_family(&fam, LocalMode::Maass { n: 1 }, p, e, 1, 4, 5).unwrap();
        prop_assert!(check_maass_relation(&apply_hecke(&w, r).unwrap()));
    }

    #[test]
    fn r_card_recursion(m in 1i64..=10, r in 1i64..=10, pi in 0usize..3) {
        prop_assume!(r <= m);
        let q = [2u64, 3, 5][pi];
        prop_assert_eq!(r_card(m, r, q).unwrap(), r_card(m, r - 1, q).unwrap() * f_mj(m, r, q));
    }

    #[test]
    fn f_identities_at_rational_q(a in 2i64..=40, b in 1i64..=7, m in 3i64..=10) {
        let q = rat(a, b);
        prop_assume!(q != int(1));
        prop_assert!(f_identities_hold(m, &q));
    }

    #[test]
    fn satake_exponents_are_symmetric(n in 1u32..=3, pi in 0usize..3, ors in any::<bool>()) {
        let p = [2u64, 3, 5][pi];
        let mode = if ors { LocalMode::Ors { n, kappa: 4 * n + 12 } } else { LocalMode::Maass { n } };
        let sd = satake(mode, p, &HeckeScalar::lambda()).unwrap();
        let mut neg: Vec<i64> = sd.exponents.iter().map(|e| -e).collect();
        neg.sort_unstable();
        let mut pos = sd.exponents.clone();
        pos.sort_unstable();
        prop_assert_eq!(neg, pos);
    }
}

/// `E8` in the even coordinate system: vectors of `Z⁸ ∪ (Z + ½)⁸` with even
/// coordinate sum, doubled to stay integral. Norm is `|v|²/2`.
fn brute_force_e8(max_norm: u64) -> BTreeSet<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, parity: i64, budget: i64, out: &mut BTreeSet<Vec<i64>>) {
        if prefix.len() == 8 {
            let sum: i64 = prefix.iter().sum();
            if sum % 4 == 0 && prefix.iter().any(|&c| c != 0) {
                out.insert(prefix.clone());
            }
            return;
        }
        let lim = (budget as f64).sqrt() as i64 + 1;
        for c in -lim..=lim {
            if c.rem_euclid(2) != parity || c * c > budget {
                continue;
            }
            prefix.push(c);
            rec(prefix, parity, budget - c * c, out);
            prefix.pop();
        }
    }
    // doubled coordinates: |2v|² = 4|v|² = 8·norm
    let budget = 8 * max_norm as i64;
    let mut out = BTreeSet::new();
    rec(&mut Vec::new(), 0, budget, &mut out);
    rec(&mut Vec::new(), 1, budget, &mut out);
    out
}

/// Simple roots of `E8` in doubled even coordinates, ordered to match the
/// Gram matrix used by the crate.
fn doubled_simple_roots() -> [[i64; 8]; 8] {
    [
        [1, -1, -1, -1, -1, -1, -1, 1],
        [2, 2, 0, 0, 0, 0, 0, 0],
        [-2, 2, 0, 0, 0, 0, 0, 0],
        [0, -2, 2, 0, 0, 0, 0, 0],
        [0, 0, -2, 2, 0, 0, 0, 0],
        [0, 0, 0, -2, 2, 0, 0, 0],
        [0, 0, 0, 0, -2, 2, 0, 0],
        [0, 0, 0, 0, 0, -2, 2, 0],
    ]
}

#[test]
fn enumeration_agrees_with_brute_force_box() {
    let e8 = e8_gram();
    let roots = doubled_simple_roots();
    for i in 0..8 {
        for j in 0..8 {
            let ip: i64 = (0..8).map(|t| roots[i][t] * roots[j][t]).sum();
            assert_eq!(ip / 4, e8.gram()[i][j]);
        }
    }
    let brute = brute_force_e8(6);
    let mut mapped = BTreeSet::new();
    for v in enumerate_up_to_norm(&e8, 6) {
        let mut x = vec![0i64; 8];
        for (c, root) in v.coords().iter().zip(&roots) {
            for t in 0..8 {
                x[t] += c * root[t];
            }
        }
        let norm2: i64 = x.iter().map(|c| c * c).sum();
        assert_eq!(norm2, 8 * v.norm() as i64);
        mapped.insert(x);
    }
    assert_eq!(mapped.len(), brute.len());
    assert_eq!(mapped, brute);
}
