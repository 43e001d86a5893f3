//! Sparse multivariate polynomials over `Rat`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::rat::Rat;

/// A variable name. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

/// Exponent vector of a monomial: variables sorted by name, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExpVec(Vec<(Var, u32)>);

impl ExpVec {
    pub fn one() -> ExpVec {
        ExpVec(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> ExpVec {
        if exp == 0 {
            ExpVec::one()
        } else {
            ExpVec(vec![(v, exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> ExpVec {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        ExpVec(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ExpVec(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &ExpVec) -> Option<ExpVec> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(ExpVec(out))
    }

    /// Removes `v` from the vector, returning the remaining monomial and the exponent of `v`.
    pub fn split_off(&self, v: &Var) -> (ExpVec, u32) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, e)| {
                if w == v {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (ExpVec(rest), exp)
    }
}

// Graded lexicographic order; ties in degree are broken by the exponent of
// the alphabetically first variable, so `x^2 > x*y > y^2 > x > y > 1`.
impl Ord for ExpVec {
    fn cmp(&self, other: &ExpVec) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match e.cmp(f) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &ExpVec) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact sparse polynomial in named variables.
///
/// Terms are kept in a map keyed by graded-lex exponent vectors; zero
/// coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MPoly {
    terms: BTreeMap<ExpVec, Rat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term(ExpVec::one(), c);
        p
    }

    pub fn var(name: &str) -> MPoly {
        MPoly::monomial(Rat::one(), ExpVec::var(Var::new(name), 1))
    }

    pub fn from_var(v: &Var) -> MPoly {
        MPoly::monomial(Rat::one(), ExpVec::var(v.clone(), 1))
    }

    pub fn monomial(c: Rat, e: ExpVec) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ExpVec, Rat)>) -> MPoly {
        let mut p = MPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c * e` in place.
    pub fn add_term(&mut self, e: ExpVec, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExpVec::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&ExpVec::one())
    }

    pub fn coeff(&self, e: &ExpVec) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &Rat)> {
        self.terms.iter()
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&ExpVec, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|e| e.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(ExpVec::degree).max().unwrap_or(0)
    }

    /// Variables of positive degree.
    pub fn support_vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|e| e.vars().cloned()).collect()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rat, m: &ExpVec) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, k)| (e.mul(m), k * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut n = exp;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: &Var) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let (rest, k) = e.split_off(v);
            if k == 0 {
                continue;
            }
            let e2 = rest.mul(&ExpVec::var(v.clone(), k - 1));
            out.add_term(e2, c * &Rat::from_int(k));
        }
        out
    }

    /// Replaces `v` by `replacement` everywhere.
    pub fn substitute(&self, v: &Var, replacement: &MPoly) -> MPoly {
        // group by exponent of v so each power of the replacement is built once
        let mut by_power: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (rest, k) = e.split_off(v);
            by_power.entry(k).or_default().add_term(rest, c.clone());
        }
        let mut out = MPoly::zero();
        let mut power = MPoly::one();
        let mut current = 0;
        for (k, coeff) in by_power {
            while current < k {
                power = &power * replacement;
                current += 1;
            }
            out = &out + &(&coeff * &power);
        }
        out
    }

    /// Substitutes several variables simultaneously.
    pub fn substitute_all(&self, map: &BTreeMap<Var, MPoly>) -> MPoly {
        let mut out = MPoly::zero();
        let mut cache: BTreeMap<(Var, u32), MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            let mut keep = Vec::new();
            for (v, k) in e.iter() {
                match map.get(v) {
                    Some(rep) => {
                        let pw = cache.entry((v.clone(), k)).or_insert_with(|| rep.pow(k)).clone();
                        term = &term * &pw;
                    }
                    None => keep.push((v.clone(), k)),
                }
            }
            let rest = ExpVec::from_pairs(keep);
            out = &out + &term.mul_monomial(&Rat::one(), &rest);
        }
        out
    }

    /// Evaluates at a full assignment; variables missing from `point` are
    /// treated as an error by returning `None`.
    pub fn eval(&self, point: &BTreeMap<Var, Rat>) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, k) in e.iter() {
                t *= &point.get(v)?.pow(k);
            }
            acc += &t;
        }
        Some(acc)
    }

    /// Coefficients as polynomials in the remaining variables, keyed by the exponent of `v`.
    pub fn collect_in(&self, v: &Var) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (rest, k) = e.split_off(v);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((e, c)) = rem.leading_term() {
            let m = e.div(&lm)?;
            let k = c / &lc;
            rem = &rem - &d.mul_monomial(&k, &m);
            quot.add_term(m, k);
        }
        Some(quot)
    }

    /// Renames variables according to `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let e2 = ExpVec::from_pairs(e.iter().map(|(v, k)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), k)));
            (e2, c.clone())
        }))
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        let (mut out, other) =
            if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<Rat> for MPoly {
    fn from(c: Rat) -> MPoly {
        MPoly::constant(c)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render(self))
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
