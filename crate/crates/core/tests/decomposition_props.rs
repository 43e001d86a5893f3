mod common;

use polyreduct_core::classifier::{classify, ReductCase};
use polyreduct_core::decomposition::{
    er_classify, root_line_restrictions, strengthen_additive, weak_additive, weak_multiplicative, ERVerdict,
};
use polyreduct_core::MPoly;
use rand::Rng;

fn additive_oracle(d: &polyreduct_core::decomposition::AdditiveDecomp) -> MPoly {
    common::compose_oracle(&d.f, &(&d.u.to_mpoly() + &d.v.to_mpoly()))
}

fn multiplicative_oracle(d: &polyreduct_core::decomposition::MultiplicativeDecomp) -> MPoly {
    common::compose_oracle(&d.f, &(&d.u.to_mpoly() * &d.v.to_mpoly()))
}

#[test]
fn planted_additive_recovered() {
    let mut rng = common::rng(31);
    for _ in 0..300 {
        let p = common::planted_additive(&mut rng);
        let d = weak_additive(&p).unwrap().unwrap_or_else(|| panic!("missed {p}"));
        assert_eq!(additive_oracle(&d), p);
    }
}

#[test]
fn planted_multiplicative_recovered() {
    let mut rng = common::rng(32);
    for _ in 0..300 {
        let p = common::planted_multiplicative(&mut rng);
        let d = weak_multiplicative(&p).unwrap().unwrap_or_else(|| panic!("missed {p}"));
        assert_eq!(multiplicative_oracle(&d), p);
    }
}

#[test]
fn detectors_never_both_fire() {
    let mut rng = common::rng(33);
    let mut checked = 0;
    while checked < 1000 {
        let p = match rng.gen_range(0..4) {
            0 => common::planted_additive(&mut rng),
            1 => common::planted_multiplicative(&mut rng),
            _ => common::mpoly(&mut rng, &["x", "y"], 5, 6, 6),
        };
        if !common::is_bivariate(&p) {
            continue;
        }
        checked += 1;
        let a = weak_additive(&p).unwrap();
        let m = weak_multiplicative(&p).unwrap();
        assert!(a.is_none() || m.is_none(), "both forms for {p}");
    }
}

#[test]
fn strong_additive_degree_law() {
    let mut rng = common::rng(34);
    let mut strong = 0;
    for i in 0..300 {
        let p = if i % 2 == 0 { common::planted_strong_additive(&mut rng) } else { common::planted_additive(&mut rng) };
        let d = weak_additive(&p).unwrap().unwrap();
        if let Some(s) = strengthen_additive(&d, &p) {
            strong += 1;
            assert_eq!(p.degree_in(&d.x), p.degree_in(&d.y), "{p}");
            let ux = s.u_common.with_var(d.x.clone()).to_mpoly().scale(&s.c1);
            let uy = s.u_common.with_var(d.y.clone()).to_mpoly().scale(&s.c2);
            assert_eq!(common::compose_oracle(&s.f_adjusted, &(&ux + &uy)), p);
            assert!(s.u_common.leading_coeff().is_one() && s.u_common.coeff(0).is_zero());
        }
    }
    assert!(strong >= 150);
}

#[test]
fn lines_through_roots_of_u_are_constant() {
    let mut rng = common::rng(35);
    let mut lines = 0;
    for _ in 0..200 {
        let p = common::planted_multiplicative(&mut rng);
        let d = weak_multiplicative(&p).unwrap().unwrap();
        for (a, q) in root_line_restrictions(&d, &p).unwrap() {
            lines += 1;
            assert!(q.is_constant(), "P({a}, y) = {q} for {p}");
        }
    }
    assert!(lines > 0);
}

#[test]
fn strong_additive_nonlinear_is_full_field() {
    let mut rng = common::rng(36);
    let mut n = 0;
    while n < 200 {
        let p = common::planted_strong_additive(&mut rng);
        if p.total_degree() <= 1 || !common::is_bivariate(&p) {
            continue;
        }
        n += 1;
        assert!(matches!(er_classify(&p).unwrap(), ERVerdict::Additive(ref d) if d.strong.is_some()));
        assert_eq!(classify(std::slice::from_ref(&p)).unwrap().case, ReductCase::FullField, "{p}");
    }
}

#[test]
fn strong_multiplicative_untwisted_is_full_field() {
    let mut rng = common::rng(37);
    let mut n = 0;
    while n < 200 {
        let p = common::planted_strong_multiplicative(&mut rng);
        if common::is_twisted_oracle(&p) {
            continue;
        }
        n += 1;
        assert!(matches!(er_classify(&p).unwrap(), ERVerdict::Multiplicative(ref d) if d.strong.is_some()), "{p}");
        assert_eq!(classify(std::slice::from_ref(&p)).unwrap().case, ReductCase::FullField, "{p}");
    }
}
