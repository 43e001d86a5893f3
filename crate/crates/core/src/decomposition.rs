//! Additive and multiplicative decompositions of bivariate polynomials.
//!
//! `P(x, y) = f(u(x) + v(y))` forces `P_x / P_y = u'(x) / v'(y)`, and
//! `P = f(u(x) v(y))` forces `P_x / P_y = (u'/u)(x) / (v'/v)(y)`. Both
//! detectors read `u` and `v` off the reduced derivative ratio, recover `f`
//! from one specialization and accept only after re-expanding the
//! certificate.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{inner_compose_solve, rank1_separate, reduce_fraction, AlgebraError, MPoly, Rat, UPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompError {
    #[error("not genuinely bivariate: {0}")]
    NotBivariate(String),
    #[error("both weak detectors accepted {0}")]
    BothForms(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongAdditive {
    /// Monic with zero constant term, in the variable `t`.
    pub u_common: UPoly,
    pub c1: Rat,
    pub c2: Rat,
    pub f_adjusted: UPoly,
}

/// `P = f(u(x) + v(y))` with `u` monic and `u(0) = v(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditiveDecomp {
    pub x: Var,
    pub y: Var,
    pub f: UPoly,
    pub u: UPoly,
    pub v: UPoly,
    pub strong: Option<StrongAdditive>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongMultiplicative {
    /// Monic, in the variable `t`.
    pub u0: UPoly,
    pub m: u32,
    pub n: u32,
    pub f_adjusted: UPoly,
}

/// `P = f(u(x) v(y))` with `u` and `v` monic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativeDecomp {
    pub x: Var,
    pub y: Var,
    pub f: UPoly,
    pub u: UPoly,
    pub v: UPoly,
    pub strong: Option<StrongMultiplicative>,
}

fn t_var() -> Var {
    Var::new("t")
}

/// `outer(inner)` where `inner` is multivariate.
fn compose_into(outer: &UPoly, inner: &MPoly) -> MPoly {
    let mut acc = MPoly::zero();
    for c in outer.coeffs().iter().rev() {
        acc = &(&acc * inner) + &MPoly::constant(c.clone());
    }
    acc
}

impl AdditiveDecomp {
    pub fn expand(&self) -> MPoly {
        compose_into(&self.f, &(&self.u.to_mpoly() + &self.v.to_mpoly()))
    }

    /// Expansion of the strong form, when present.
    pub fn expand_strong(&self) -> Option<MPoly> {
        let s = self.strong.as_ref()?;
        let ux = s.u_common.with_var(self.x.clone()).to_mpoly().scale(&s.c1);
        let uy = s.u_common.with_var(self.y.clone()).to_mpoly().scale(&s.c2);
        Some(compose_into(&s.f_adjusted, &(&ux + &uy)))
    }
}

impl MultiplicativeDecomp {
    pub fn expand(&self) -> MPoly {
        compose_into(&self.f, &(&self.u.to_mpoly() * &self.v.to_mpoly()))
    }

    pub fn expand_strong(&self) -> Option<MPoly> {
        let s = self.strong.as_ref()?;
        let ux = s.u0.with_var(self.x.clone()).pow(s.m).to_mpoly();
        let uy = s.u0.with_var(self.y.clone()).pow(s.n).to_mpoly();
        Some(compose_into(&s.f_adjusted, &(&ux * &uy)))
    }
}

/// The two variables of `p`, alphabetically; the first plays the role of `x`.
pub fn bivariate_vars(p: &MPoly) -> Result<(Var, Var), DecompError> {
    let vars: Vec<Var> = p.support_vars().into_iter().collect();
    match vars.as_slice() {
        [x, y] => Ok((x.clone(), y.clone())),
        _ => Err(DecompError::NotBivariate(format!("{p} has {} variables", vars.len()))),
    }
}

fn specialize(p: &MPoly, y: &Var, y0: &Rat, x: &Var) -> UPoly {
    let q = p.substitute(y, &MPoly::constant(y0.clone()));
    UPoly::from_mpoly(&q, x).expect("only x remains")
}

/// Smallest `y0 = 0, 1, 2, ...` with `P(x, y0)` of full degree in `x` that
/// also satisfies `ok`.
fn choose_y0(p: &MPoly, x: &Var, y: &Var, ok: impl Fn(&Rat) -> bool) -> Rat {
    let dx = p.degree_in(x) as usize;
    let mut k: i64 = 0;
    loop {
        let y0 = Rat::from(k);
        if ok(&y0) && specialize(p, y, &y0, x).degree() == dx {
            return y0;
        }
        k += 1;
    }
}

/// `f` with `f(lc * t)` in place of `f(t)`.
fn rescale(f: &UPoly, lc: &Rat) -> UPoly {
    f.compose(&UPoly::new(t_var(), vec![Rat::zero(), lc.clone()]))
}

/// Weakly additive form `P = f(u(x) + v(y))`, or `None`.
pub fn weak_additive(p: &MPoly) -> Result<Option<AdditiveDecomp>, DecompError> {
    let (x, y) = bivariate_vars(p)?;
    let (n, d) = reduce_fraction(&p.derivative(&x), &p.derivative(&y))?;
    let (n, d) = match (n.as_constant(), d.as_constant()) {
        (Some(a), Some(b)) => (MPoly::constant(&a / &b), MPoly::one()),
        _ => (n, d),
    };
    let (Ok(n), Ok(d)) = (UPoly::from_mpoly(&n, &x), UPoly::from_mpoly(&d, &y)) else {
        return Ok(None);
    };
    let u = n.antiderivative();
    let v = d.antiderivative();
    let lc = u.leading_coeff();
    let inv = lc.recip().expect("u is nonconstant");
    let (u, v) = (u.scale(&inv), v.scale(&inv));

    let y0 = choose_y0(p, &x, &y, |_| true);
    let w = u.add(&UPoly::constant(x.clone(), v.eval(&y0)));
    let Some(f) = inner_compose_solve(&specialize(p, &y, &y0, &x), &w)? else {
        return Ok(None);
    };
    let dec = AdditiveDecomp { x, y, f, u, v, strong: None };
    Ok((dec.expand() == *p).then_some(dec))
}

/// Strong form `f_adjusted(c1 U(x) + c2 U(y))` of a verified additive decomposition.
pub fn strengthen_additive(dec: &AdditiveDecomp, p: &MPoly) -> Option<StrongAdditive> {
    let (u, v) = (&dec.u, &dec.v);
    if u.degree() != v.degree() {
        return None;
    }
    let t = t_var();
    let ut = u.with_var(t.clone());
    let vt = v.with_var(t.clone());
    let lambda = &vt.leading_coeff() / &ut.leading_coeff();
    let mu = &vt.coeff(0) - &(&lambda * &ut.coeff(0));
    if vt.sub(&ut.scale(&lambda)) != UPoly::constant(t.clone(), mu.clone()) {
        return None;
    }
    // u = a U + b with U monic and U(0) = 0
    let a = ut.leading_coeff();
    let b = ut.coeff(0);
    let u_common = ut.sub(&UPoly::constant(t.clone(), b.clone())).scale(&a.recip().expect("nonzero"));
    let shift = &(&b * &(&Rat::one() + &lambda)) + &mu;
    let f_adjusted = dec.f.compose(&UPoly::new(t.clone(), vec![shift, a]));
    let strong = StrongAdditive { u_common, c1: Rat::one(), c2: lambda, f_adjusted };
    let check = AdditiveDecomp { strong: Some(strong.clone()), ..dec.clone() };
    if check.expand_strong().as_ref() != Some(p) {
        return None;
    }
    debug_assert_eq!(p.degree_in(&dec.x), p.degree_in(&dec.y));
    Some(strong)
}

/// Solves `a z = b` over the rationals; `None` if inconsistent. Free
/// unknowns are set to zero.
fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>, unknowns: usize) -> Option<Vec<Rat>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        b.swap(r, pr);
        let inv = a[r][c].recip().expect("nonzero pivot");
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot_row) {
                    *v -= &(p * &factor);
                }
                let t = &b[r] * &factor;
                b[i] -= &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !b[i].is_zero()) {
        return None;
    }
    let mut z = vec![Rat::zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        z[c] = b[i].clone();
    }
    Some(z)
}

/// Monic `u` of degree `k` with `u' * a = kappa * u * b`.
fn monic_log_derivative(var: &Var, k: usize, kappa: &Rat, a: &UPoly, b: &UPoly) -> Option<UPoly> {
    let a = a.with_var(var.clone());
    let b = b.with_var(var.clone());
    let op = |e: usize| {
        let m = UPoly::monomial(var.clone(), Rat::one(), e);
        m.derivative().mul(&a).sub(&m.mul(&b).scale(kappa))
    };
    let cols: Vec<UPoly> = (0..k).map(op).collect();
    let rhs = op(k);
    let rows = cols.iter().chain(std::iter::once(&rhs)).map(|c| c.degree() + 1).max().unwrap_or(1);
    let matrix: Vec<Vec<Rat>> = (0..rows).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    let target: Vec<Rat> = (0..rows).map(|i| -rhs.coeff(i)).collect();
    let z = solve_linear(matrix, target, k)?;
    let mut coeffs = z;
    coeffs.push(Rat::one());
    let u = UPoly::new(var.clone(), coeffs);
    let check = u.derivative().mul(&a).sub(&u.mul(&b).scale(kappa));
    check.is_zero().then_some(u)
}

/// Weakly multiplicative form `P = f(u(x) v(y))`, or `None`.
pub fn weak_multiplicative(p: &MPoly) -> Result<Option<MultiplicativeDecomp>, DecompError> {
    let (x, y) = bivariate_vars(p)?;
    let (n, d) = reduce_fraction(&p.derivative(&x), &p.derivative(&y))?;
    let Some((n1, n2)) = rank1_separate(&n, &x, &y)? else {
        return Ok(None);
    };
    let Some((d1, d2)) = rank1_separate(&d, &x, &y)? else {
        return Ok(None);
    };
    // u'/u = k n1/d1 and v'/v = k d2/n2 once u and v are monic of degrees k, l
    let ratio = &d2.leading_coeff() / &n2.leading_coeff();
    for k in 1..=p.degree_in(&x) as usize {
        let kr = Rat::from_int(k as u64);
        let Some(u) = monic_log_derivative(&x, k, &kr, &d1, &n1) else {
            continue;
        };
        let l = &kr * &ratio;
        let Some(l) = l.to_i64().filter(|&l| l >= 1) else {
            continue;
        };
        let Some(v) = monic_log_derivative(&y, l as usize, &kr, &n2, &d2) else {
            continue;
        };
        let y0 = choose_y0(p, &x, &y, |y0| !v.eval(y0).is_zero());
        let w = u.scale(&v.eval(&y0));
        let Some(f) = inner_compose_solve(&specialize(p, &y, &y0, &x), &w)? else {
            continue;
        };
        let dec = MultiplicativeDecomp { x: x.clone(), y: y.clone(), f, u, v, strong: None };
        if dec.expand() == *p {
            return Ok(Some(dec));
        }
    }
    Ok(None)
}

/// Strong form `f_adjusted(u0(x)^m u0(y)^n)` of a verified multiplicative decomposition.
pub fn strengthen_multiplicative(dec: &MultiplicativeDecomp, p: &MPoly) -> Option<StrongMultiplicative> {
    let t = t_var();
    let ut = dec.u.with_var(t.clone());
    let vt = dec.v.with_var(t.clone());
    let (du, dv) = (ut.degree(), vt.degree());
    for e in (1..=du.min(dv)).filter(|e| du % e == 0 && dv % e == 0) {
        let (m, n) = ((du / e) as u32, (dv / e) as u32);
        let Ok(Some((alpha, u0))) = ut.kth_root(m) else {
            continue;
        };
        let Ok(Some((beta, v0))) = vt.kth_root(n) else {
            continue;
        };
        if u0 != v0 {
            continue;
        }
        let f_adjusted = rescale(&dec.f, &(&alpha * &beta));
        let strong = StrongMultiplicative { u0, m, n, f_adjusted };
        let check = MultiplicativeDecomp { strong: Some(strong.clone()), ..dec.clone() };
        if check.expand_strong().as_ref() == Some(p) {
            return Some(strong);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "certificate", rename_all = "snake_case")]
pub enum ERVerdict {
    Additive(AdditiveDecomp),
    Multiplicative(MultiplicativeDecomp),
    Neither,
}

impl ERVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            ERVerdict::Additive(_) => "additive",
            ERVerdict::Multiplicative(_) => "multiplicative",
            ERVerdict::Neither => "neither",
        }
    }

    pub fn is_strong(&self) -> bool {
        match self {
            ERVerdict::Additive(d) => d.strong.is_some(),
            ERVerdict::Multiplicative(d) => d.strong.is_some(),
            ERVerdict::Neither => false,
        }
    }
}

/// Runs both detectors and strengthens whichever succeeds.
pub fn er_classify(p: &MPoly) -> Result<ERVerdict, DecompError> {
    let add = weak_additive(p)?;
    let mul = weak_multiplicative(p)?;
    match (add, mul) {
        (Some(_), Some(_)) => Err(DecompError::BothForms(p.to_string())),
        (Some(mut d), None) => {
            d.strong = strengthen_additive(&d, p);
            Ok(ERVerdict::Additive(d))
        }
        (None, Some(mut d)) => {
            d.strong = strengthen_multiplicative(&d, p);
            Ok(ERVerdict::Multiplicative(d))
        }
        (None, None) => Ok(ERVerdict::Neither),
    }
}

/// `P(a, y)` for every rational root `a` of `u`.
pub fn root_line_restrictions(dec: &MultiplicativeDecomp, p: &MPoly) -> Result<Vec<(Rat, MPoly)>, AlgebraError> {
    Ok(dec
        .u
        .rational_roots()?
        .into_iter()
        .map(|a| {
            let mut point = BTreeMap::new();
            point.insert(dec.x.clone(), MPoly::constant(a.clone()));
            (a, p.substitute_all(&point))
        })
        .collect())
}
