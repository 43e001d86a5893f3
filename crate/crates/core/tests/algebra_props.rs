mod common;

use std::collections::BTreeMap;

use polyreduct_core::algebra::{bivariate_gcd, inner_compose_solve, rank1_separate, reduce_fraction};
use polyreduct_core::{parse_poly, render, ExpVec, MPoly, Rat, UPoly, Var};
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn arb_mpoly() -> impl Strategy<Value = MPoly> {
    let term = (arb_rat(), 0u32..=3, 0u32..=3, 0u32..=2);
    proptest::collection::vec(term, 0..6).prop_map(|terms| {
        MPoly::from_terms(terms.into_iter().map(|(c, a, b, z)| {
            let e = ExpVec::from_pairs([(Var::new("x"), a), (Var::new("y"), b), (Var::new("z"), z)]);
            (e, c)
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in arb_mpoly(), b in arb_mpoly(), c in arb_mpoly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, MPoly::zero());
        prop_assert_eq!(&a * &MPoly::one(), a.clone());
        prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_mpoly(), b in arb_mpoly(), x in arb_rat(), y in arb_rat(), z in arb_rat()) {
        let point: BTreeMap<Var, Rat> =
            [(Var::new("x"), x), (Var::new("y"), y), (Var::new("z"), z)].into_iter().collect();
        let (ea, eb) = (a.eval(&point).unwrap(), b.eval(&point).unwrap());
        prop_assert_eq!((&a * &b).eval(&point).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&point).unwrap(), &ea + &eb);
    }

    #[test]
    fn product_rule(a in arb_mpoly(), b in arb_mpoly()) {
        let x = Var::new("x");
        let lhs = (&a * &b).derivative(&x);
        let rhs = &(&a.derivative(&x) * &b) + &(&a * &b.derivative(&x));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_recovers_factor(a in arb_mpoly(), b in arb_mpoly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }
}

#[test]
fn parser_round_trip_on_random_polynomials() {
    let mut rng = common::rng(11);
    for _ in 0..1000 {
        let p = common::mpoly(&mut rng, &["x", "y", "z", "w2"], 6, 5, 30);
        let text = render(&p);
        assert_eq!(parse_poly(&text).unwrap(), p, "{text}");
    }
}

#[test]
fn gcd_of_planted_common_factor() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let g = common::mpoly(&mut rng, &["x", "y"], 3, 2, 6);
        let a = common::mpoly(&mut rng, &["x", "y"], 3, 2, 6);
        let b = common::mpoly(&mut rng, &["x", "y"], 3, 2, 6);
        if g.is_zero() || a.is_zero() || b.is_zero() {
            continue;
        }
        let ga = &g * &a;
        let gb = &g * &b;
        let h = bivariate_gcd(&ga, &gb).unwrap();
        assert!(ga.div_exact(&h).is_some() && gb.div_exact(&h).is_some());
        // h is a multiple of g up to a scalar
        assert!(h.div_exact(&g).is_some(), "gcd {h} of {ga} and {gb} misses {g}");
        let (n, d) = reduce_fraction(&ga, &gb).unwrap();
        assert_eq!(&n * &gb, &d * &ga);
    }
}

#[test]
fn rank1_round_trip() {
    let (x, y) = (Var::new("x"), Var::new("y"));
    let mut rng = common::rng(13);
    for _ in 0..200 {
        let g = {
            let d = rand::Rng::gen_range(&mut rng, 0..=3);
            common::upoly(&mut rng, "x", d, 6)
        };
        let h = {
            let d = rand::Rng::gen_range(&mut rng, 0..=3);
            common::upoly(&mut rng, "y", d, 6)
        };
        let f = &g.to_mpoly() * &h.to_mpoly();
        let (g2, h2) = rank1_separate(&f, &x, &y).unwrap().unwrap();
        assert!(g2.leading_coeff().is_one());
        assert_eq!(&g2.to_mpoly() * &h2.to_mpoly(), f);
    }
    assert_eq!(rank1_separate(&parse_poly("x*y + 1").unwrap(), &x, &y).unwrap(), None);
}

#[test]
fn compose_solve_round_trip() {
    let mut rng = common::rng(14);
    for _ in 0..200 {
        let f = {
            let d = rand::Rng::gen_range(&mut rng, 0..=3);
            common::upoly(&mut rng, "t", d, 6)
        };
        let w = {
            let d = rand::Rng::gen_range(&mut rng, 1..=3);
            common::upoly(&mut rng, "x", d, 6)
        };
        let q = f.compose(&w);
        let got = inner_compose_solve(&q, &w).unwrap().unwrap();
        assert_eq!(got, f);
    }
}

#[test]
fn rational_roots_match_planted_roots() {
    let mut rng = common::rng(15);
    for _ in 0..200 {
        let roots: Vec<Rat> = (0..rand::Rng::gen_range(&mut rng, 1..=4)).map(|_| common::rat(&mut rng, 8, 5)).collect();
        let x = Var::new("x");
        // an irreducible quadratic factor adds no rational roots
        let mut p = UPoly::new(x.clone(), vec![Rat::from(2), Rat::zero(), Rat::one()]);
        for r in &roots {
            p = p.mul(&UPoly::new(x.clone(), vec![-r, Rat::one()]));
        }
        let mut want = roots.clone();
        want.sort();
        want.dedup();
        assert_eq!(p.rational_roots().unwrap(), want);
    }
}
