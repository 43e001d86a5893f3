//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use polyreduct_core::{ExpVec, MPoly, Rat, UPoly, Var};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rat {
    Rat::new(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn nonzero_rat<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rat {
    loop {
        let r = rat(rng, num, den);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random univariate polynomial of exact degree `deg`.
pub fn upoly<R: Rng>(rng: &mut R, var: &str, deg: usize, num: i64) -> UPoly {
    let mut coeffs: Vec<Rat> = (0..deg).map(|_| rat(rng, num, 3)).collect();
    coeffs.push(nonzero_rat(rng, num, 3));
    UPoly::new(Var::new(var), coeffs)
}

pub fn monic_upoly<R: Rng>(rng: &mut R, var: &str, deg: usize, num: i64) -> UPoly {
    let mut coeffs: Vec<Rat> = (0..deg).map(|_| rat(rng, num, 2)).collect();
    coeffs.push(Rat::one());
    UPoly::new(Var::new(var), coeffs)
}

/// Random sparse polynomial over `vars` with up to `terms` terms and
/// per-variable degree at most `deg`.
pub fn mpoly<R: Rng>(rng: &mut R, vars: &[&str], terms: usize, deg: u32, num: i64) -> MPoly {
    let mut p = MPoly::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let e = ExpVec::from_pairs(vars.iter().map(|v| (Var::new(v), rng.gen_range(0..=deg))));
        p.add_term(e, rat(rng, num, 4));
    }
    p
}

/// Plain Horner expansion of `f(inner)`, written without library helpers.
pub fn compose_oracle(f: &UPoly, inner: &MPoly) -> MPoly {
    let mut acc = MPoly::zero();
    for (k, c) in f.coeffs().iter().enumerate() {
        let mut term = MPoly::constant(c.clone());
        for _ in 0..k {
            term = &term * inner;
        }
        acc = &acc + &term;
    }
    acc
}

/// `c * prod (x_i - r)^{e_i} + r` with the exponents as given.
pub fn twisted<R: Rng>(rng: &mut R) -> (MPoly, Rat) {
    let names = ["x", "y", "z"];
    loop {
        let n = rng.gen_range(1..=3);
        let mut exps: Vec<u32> = (0..n).map(|_| 1).collect();
        let budget = rng.gen_range(n as u32..=6);
        for _ in n as u32..budget {
            let i = rng.gen_range(0..n);
            exps[i] += 1;
        }
        let c = nonzero_rat(rng, 9, 5);
        let r = rat(rng, 9, 5);
        // x itself is twisted by every r
        if budget == 1 && c.is_one() {
            continue;
        }
        let rc = MPoly::constant(r.clone());
        let mut p = MPoly::constant(c);
        for (name, e) in names.iter().zip(&exps) {
            p = &p * &(&MPoly::var(name) - &rc).pow(*e);
        }
        return (&p + &rc, r);
    }
}

/// `f(u(x) + v(y))` with nonconstant parts.
pub fn planted_additive<R: Rng>(rng: &mut R) -> MPoly {
    let f = {
        let d = rng.gen_range(1..=3);
        upoly(rng, "t", d, 5)
    };
    let u = {
        let d = rng.gen_range(1..=4);
        upoly(rng, "x", d, 5)
    };
    let v = {
        let d = rng.gen_range(1..=4);
        upoly(rng, "y", d, 5)
    };
    compose_oracle(&f, &(&u.to_mpoly() + &v.to_mpoly()))
}

/// `f(u(x) v(y))` with nonconstant parts.
pub fn planted_multiplicative<R: Rng>(rng: &mut R) -> MPoly {
    let f = {
        let d = rng.gen_range(1..=3);
        upoly(rng, "t", d, 5)
    };
    let u = {
        let d = rng.gen_range(1..=4);
        upoly(rng, "x", d, 5)
    };
    let v = {
        let d = rng.gen_range(1..=4);
        upoly(rng, "y", d, 5)
    };
    compose_oracle(&f, &(&u.to_mpoly() * &v.to_mpoly()))
}

/// `f(c1 u(x) + c2 u(y))`.
pub fn planted_strong_additive<R: Rng>(rng: &mut R) -> MPoly {
    let f = {
        let d = rng.gen_range(1..=3);
        upoly(rng, "t", d, 5)
    };
    let u = {
        let d = rng.gen_range(1..=3);
        upoly(rng, "t", d, 5)
    };
    let c1 = nonzero_rat(rng, 5, 3);
    let c2 = nonzero_rat(rng, 5, 3);
    let ux = u.with_var(Var::new("x")).to_mpoly().scale(&c1);
    let uy = u.with_var(Var::new("y")).to_mpoly().scale(&c2);
    compose_oracle(&f, &(&ux + &uy))
}

/// `f(u0(x)^m u0(y)^n)`.
pub fn planted_strong_multiplicative<R: Rng>(rng: &mut R) -> MPoly {
    let f = {
        let d = rng.gen_range(1..=3);
        upoly(rng, "t", d, 5)
    };
    let u0 = {
        let d = rng.gen_range(1..=2);
        monic_upoly(rng, "t", d, 4)
    };
    let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let ux = u0.with_var(Var::new("x")).pow(m).to_mpoly();
    let uy = u0.with_var(Var::new("y")).pow(n).to_mpoly();
    compose_oracle(&f, &(&ux * &uy))
}

pub fn is_bivariate(p: &MPoly) -> bool {
    p.support_vars().len() == 2
}

/// Twisted-monomial test by direct search: any center `r` satisfies
/// `P(r, ..., r) = r`, and `P(x + r, ...) - r` is then a single term.
pub fn is_twisted_oracle(p: &MPoly) -> bool {
    let vars: Vec<Var> = p.support_vars().into_iter().collect();
    let t = Var::new("t");
    let diag: BTreeMap<Var, MPoly> = vars.iter().map(|v| (v.clone(), MPoly::from_var(&t))).collect();
    let on_diag = &p.substitute_all(&diag) - &MPoly::from_var(&t);
    if on_diag.is_zero() {
        // P(r, ..., r) = r for all r: only a single variable to the first power works
        return p.num_terms() == 1 && p.total_degree() == 1;
    }
    let Ok(d) = UPoly::from_mpoly(&on_diag, &t) else { return false };
    let Ok(roots) = d.rational_roots() else { return false };
    roots.iter().any(|r| {
        let rc = MPoly::constant(r.clone());
        let shift: BTreeMap<Var, MPoly> = vars.iter().map(|v| (v.clone(), &MPoly::from_var(v) + &rc)).collect();
        let q = &p.substitute_all(&shift) - &rc;
        q.num_terms() == 1 && !q.is_constant()
    })
}
