//! Dense univariate polynomials and the one-variable algorithms built on them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::mpoly::{ExpVec, MPoly, Var};
use super::rat::{denominator_lcm, numerator_gcd, Rat};
use super::AlgebraError;

/// Polynomial in one designated variable; coefficients stored low to high with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    var: Var,
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(var: Var, coeffs: Vec<Rat>) -> UPoly {
        let mut p = UPoly { var, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(var: &str, coeffs: &[i64]) -> UPoly {
        UPoly::new(Var::new(var), coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn zero(var: Var) -> UPoly {
        UPoly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: Rat) -> UPoly {
        UPoly::new(var, vec![c])
    }

    pub fn identity(var: Var) -> UPoly {
        UPoly::new(var, vec![Rat::zero(), Rat::one()])
    }

    /// `c * var^k`.
    pub fn monomial(var: Var, c: Rat, k: usize) -> UPoly {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UPoly::new(var, coeffs)
    }

    /// Views `p` as a polynomial in `var`; fails if any other variable occurs.
    pub fn from_mpoly(p: &MPoly, var: &Var) -> Result<UPoly, AlgebraError> {
        let mut coeffs = vec![Rat::zero(); p.degree_in(var) as usize + 1];
        for (e, c) in p.terms() {
            let (rest, k) = e.split_off(var);
            if !rest.is_one() {
                return Err(AlgebraError::NotUnivariate { var: var.to_string(), poly: p.to_string() });
            }
            coeffs[k as usize] = c.clone();
        }
        Ok(UPoly::new(var.clone(), coeffs))
    }

    /// Views a polynomial with at most one variable as univariate, using
    /// `fallback` as the designated variable for constants.
    pub fn from_unary_mpoly(p: &MPoly, fallback: &Var) -> Result<UPoly, AlgebraError> {
        let vars = p.support_vars();
        match vars.len() {
            0 => UPoly::from_mpoly(p, fallback),
            1 => UPoly::from_mpoly(p, vars.iter().next().expect("one variable")),
            _ => Err(AlgebraError::NotUnivariate { var: fallback.to_string(), poly: p.to_string() }),
        }
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(
            self.coeffs.iter().enumerate().map(|(k, c)| (ExpVec::var(self.var.clone(), k as u32), c.clone())),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn with_var(&self, var: Var) -> UPoly {
        UPoly { var, coeffs: self.coeffs.clone() }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Same function with the coefficient vectors compared, ignoring the variable name.
    pub fn same_coeffs(&self, other: &UPoly) -> bool {
        self.coeffs == other.coeffs
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.var.clone(), self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        UPoly::new(self.var.clone(), coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect();
        UPoly::new(self.var.clone(), coeffs)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.var.clone());
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        UPoly::new(self.var.clone(), coeffs)
    }

    pub fn pow(&self, exp: u32) -> UPoly {
        let mut result = UPoly::constant(self.var.clone(), Rat::one());
        for _ in 0..exp {
            result = result.mul(self);
        }
        result
    }

    /// `self(inner(t))`, expressed in the variable of `inner`.
    pub fn compose(&self, inner: &UPoly) -> UPoly {
        let mut acc = UPoly::zero(inner.var.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UPoly::constant(inner.var.clone(), c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Rat::from_int(k as u64)).collect();
        UPoly::new(self.var.clone(), coeffs)
    }

    /// Formal antiderivative with zero constant term.
    pub fn antiderivative(&self) -> UPoly {
        let mut coeffs = vec![Rat::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / &Rat::from_int(k as u64 + 1)));
        UPoly::new(self.var.clone(), coeffs)
    }

    pub fn monic(&self) -> UPoly {
        match self.leading_coeff().recip() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = Rat::from_int(denominator_lcm(&self.coeffs));
        let g = Rat::from_int(numerator_gcd(self.coeffs.iter().map(|c| c * &l).collect::<Vec<_>>().iter()));
        let mut factor = &l / &g;
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &UPoly) -> Option<(UPoly, UPoly)> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let inv = d.leading_coeff().recip()?;
        if rem.len() <= dd {
            return Some((UPoly::zero(self.var.clone()), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k - dd + j] -= &t;
            }
            quot[k - dd] = c;
        }
        Some((UPoly::new(self.var.clone(), quot), UPoly::new(self.var.clone(), rem)))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).is_some_and(|(_, r)| r.is_zero())
    }

    pub fn rem(&self, d: &UPoly) -> Option<UPoly> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Result<UPoly, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial("squarefree part"));
        }
        if self.is_constant() {
            return Ok(UPoly::constant(self.var.clone(), Rat::one()));
        }
        let g = upoly_gcd(self, &self.derivative())?;
        Ok(self.div_exact(&g).expect("gcd divides its argument").monic())
    }

    /// All rational roots, ascending, each listed once.
    pub fn rational_roots(&self) -> Result<Vec<Rat>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial("rational roots"));
        }
        let mut p = self.squarefree_part()?.primitive();
        let mut roots = BTreeSet::new();
        if p.coeff(0).is_zero() && !p.is_constant() {
            roots.insert(Rat::zero());
            p = UPoly::new(p.var.clone(), p.coeffs[1..].to_vec());
        }
        if p.is_constant() {
            return Ok(roots.into_iter().collect());
        }
        let a0 = p.coeff(0).numer().abs();
        let an = p.leading_coeff().numer().abs();
        let numers = divisors(&a0);
        let denoms = divisors(&an);
        for q in &denoms {
            for n in &numers {
                if !n.gcd(q).is_one() {
                    continue;
                }
                for cand in [Rat::new(n.clone(), q.clone()), Rat::new(-n.clone(), q.clone())] {
                    if p.eval(&cand).is_zero() {
                        roots.insert(cand);
                    }
                }
            }
        }
        Ok(roots.into_iter().collect())
    }

    /// Finds `(c, u0)` with `self = c * u0^k` and `u0` monic.
    pub fn kth_root(&self, k: u32) -> Result<Option<(Rat, UPoly)>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial("k-th root"));
        }
        if k == 0 {
            return Err(AlgebraError::InvalidArgument("root index must be positive"));
        }
        let k_us = k as usize;
        let deg = self.degree();
        if !deg.is_multiple_of(k_us) {
            return Ok(None);
        }
        let c = self.leading_coeff();
        let target = self.monic();
        let m = deg / k_us;
        let mut root = vec![Rat::zero(); m + 1];
        root[m] = Rat::one();
        let kr = Rat::from_int(k as u64);
        // coefficient of t^(mk-i) in u^k is k*u_{m-i} plus terms in higher coefficients
        for i in 1..=m {
            let partial = UPoly::new(self.var.clone(), root.clone()).pow(k);
            let have = partial.coeff(m * k_us - i);
            root[m - i] = &(&target.coeff(m * k_us - i) - &have) / &kr;
        }
        let u0 = UPoly::new(self.var.clone(), root);
        if u0.pow(k) == target {
            Ok(Some((c, u0)))
        } else {
            Ok(None)
        }
    }
}

/// Monic gcd of two univariate polynomials.
pub fn upoly_gcd(a: &UPoly, b: &UPoly) -> Result<UPoly, AlgebraError> {
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::GcdUndefined);
    }
    let mut x = a.with_var(a.var.clone());
    let mut y = b.with_var(a.var.clone());
    while !y.is_zero() {
        let r = x.rem(&y).expect("nonzero divisor");
        x = y;
        y = r.monic();
    }
    Ok(x.monic())
}

/// Recovers `f` with `q = f(w)` by greedy top-term elimination.
///
/// The result is expressed in the variable `t`.
pub fn inner_compose_solve(q: &UPoly, w: &UPoly) -> Result<Option<UPoly>, AlgebraError> {
    if w.is_constant() {
        return Err(AlgebraError::InvalidArgument("inner polynomial must be nonconstant"));
    }
    let t = Var::new("t");
    let dw = w.degree();
    let lw = w.leading_coeff();
    let mut rem = q.with_var(w.var.clone());
    let mut f = UPoly::zero(t.clone());
    while !rem.is_constant() {
        let dq = rem.degree();
        if !dq.is_multiple_of(dw) {
            return Ok(None);
        }
        let e = dq / dw;
        let c = &rem.leading_coeff() / &lw.pow(e as u32);
        rem = rem.sub(&w.pow(e as u32).scale(&c));
        f = f.add(&UPoly::monomial(t.clone(), c, e));
    }
    Ok(Some(f.add(&UPoly::constant(t, rem.coeff(0)))))
}

/// Positive divisors of `n` (of 1 when `n` is zero).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_mpoly(), f)
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
